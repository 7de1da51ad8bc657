#include "qbplan/plan_io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace qbplan {

using nlohmann::json;
using nlohmann::ordered_json;

std::string format_double(double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

ordered_json plan_to_json(const Plan& plan) {
  ordered_json j;
  j["schema"] = 1;
  j["config"] = ordered_json{{"r", plan.config.r},
                             {"c", plan.config.c},
                             {"tau0", plan.config.tau0},
                             {"mu_lo", plan.config.mu_lo},
                             {"mu_hi", plan.config.mu_hi},
                             {"lump", plan.config.lump}};
  j["solver"] = ordered_json{{"mu_points", plan.config.solver.mu_points},
                             {"mu_pad", plan.config.solver.mu_pad},
                             {"quad_order", plan.config.solver.quad_order},
                             {"k_max", plan.config.solver.k_max},
                             {"max_sweeps", plan.config.solver.max_sweeps},
                             {"eps_eq", plan.config.solver.eps_eq},
                             {"tau_tol", plan.config.solver.tau_tol}};
  j["ladder_step"] = plan.ladder_step();
  j["sweeps"] = plan.sweep_count;
  ordered_json levels = ordered_json::array();
  for (const RegionBounds& b : plan.levels) {
    if (!std::isfinite(b.b_continue) || !std::isfinite(b.b_stop)) {
      throw std::invalid_argument(
          "plan_to_json: non-finite threshold (plan not converged?)");
    }
    levels.push_back(ordered_json{{"tau", b.tau_level},
                                  {"b_continue", b.b_continue},
                                  {"b_stop", b.b_stop},
                                  {"provenance", to_string(b.provenance)}});
  }
  j["levels"] = std::move(levels);
  return j;
}

Plan plan_from_json(const json& j) {
  if (!j.contains("schema") || j.at("schema").get<int>() != 1) {
    throw std::invalid_argument("plan_from_json: unsupported schema");
  }
  Plan plan;
  const json& cfg = j.at("config");
  plan.config.r = cfg.at("r").get<double>();
  plan.config.c = cfg.at("c").get<double>();
  plan.config.tau0 = cfg.at("tau0").get<double>();
  plan.config.mu_lo = cfg.at("mu_lo").get<double>();
  plan.config.mu_hi = cfg.at("mu_hi").get<double>();
  plan.config.lump = cfg.at("lump").get<int>();
  if (j.contains("solver")) {
    const json& s = j.at("solver");
    plan.config.solver.mu_points = s.at("mu_points").get<int>();
    plan.config.solver.mu_pad = s.at("mu_pad").get<double>();
    plan.config.solver.quad_order = s.at("quad_order").get<int>();
    plan.config.solver.k_max = s.at("k_max").get<int>();
    plan.config.solver.max_sweeps = s.at("max_sweeps").get<int>();
    plan.config.solver.eps_eq = s.at("eps_eq").get<double>();
    plan.config.solver.tau_tol = s.at("tau_tol").get<double>();
  }
  plan.config.validate();
  plan.sweep_count = j.at("sweeps").get<int>();
  for (const json& lv : j.at("levels")) {
    RegionBounds b;
    b.tau_level = lv.at("tau").get<double>();
    b.b_continue = lv.at("b_continue").get<double>();
    b.b_stop = lv.at("b_stop").get<double>();
    b.provenance = provenance_from_string(lv.at("provenance").get<std::string>());
    plan.levels.push_back(b);
  }
  if (plan.levels.empty()) {
    throw std::invalid_argument("plan_from_json: plan has no levels");
  }
  return plan;
}

void save_plan(const Plan& plan, const std::string& path) {
  std::ofstream os(path);
  if (!os) {
    throw std::runtime_error("save_plan: cannot open " + path);
  }
  os << plan_to_json(plan).dump(2) << '\n';
}

Plan load_plan(const std::string& path) {
  std::ifstream is(path);
  if (!is) {
    throw std::runtime_error("load_plan: cannot open " + path);
  }
  json j;
  is >> j;
  return plan_from_json(j);
}

void write_regions_csv(const Plan& plan, std::ostream& os) {
  os << "tau,b_continue,b_stop,provenance\n";
  for (const RegionBounds& b : plan.levels) {
    os << format_double(b.tau_level) << ',' << format_double(b.b_continue)
       << ',' << format_double(b.b_stop) << ',' << to_string(b.provenance)
       << '\n';
  }
}

std::vector<RegionBounds> read_regions_csv(std::istream& is) {
  std::vector<RegionBounds> out;
  std::string line;
  if (!std::getline(is, line) || line != "tau,b_continue,b_stop,provenance") {
    throw std::invalid_argument("read_regions_csv: bad header");
  }
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    std::istringstream ls(line);
    std::string tau_s, bc_s, bs_s, prov_s;
    if (!std::getline(ls, tau_s, ',') || !std::getline(ls, bc_s, ',') ||
        !std::getline(ls, bs_s, ',') || !std::getline(ls, prov_s)) {
      throw std::invalid_argument("read_regions_csv: bad row: " + line);
    }
    RegionBounds b;
    b.tau_level = std::stod(tau_s);
    b.b_continue = std::stod(bc_s);
    b.b_stop = std::stod(bs_s);
    b.provenance = provenance_from_string(prov_s);
    out.push_back(b);
  }
  return out;
}

void write_trace_csv(const std::vector<TraceRow>& trace, std::ostream& os) {
  os << "step,tau,mu_lo,mu_hi,action,robust,admissible-set,x\n";
  for (const TraceRow& row : trace) {
    os << row.step << ',' << format_double(row.tau) << ','
       << format_double(row.mu_lo) << ',' << format_double(row.mu_hi) << ','
       << to_string(row.action) << ',' << (row.robust ? "yes" : "no") << ','
       << row.admissible << ',' << (row.has_x ? format_double(row.x) : "")
       << '\n';
  }
}

ordered_json summary_to_json(const SimulationSummary& s) {
  return ordered_json{{"episodes", s.episodes},
                      {"failed_episodes", s.failed_episodes},
                      {"mean_total_loss", s.mean_total_loss},
                      {"mean_n_obs", s.mean_n_obs},
                      {"freq_stop0", s.freq_stop0},
                      {"freq_stop1", s.freq_stop1},
                      {"frac_epochs_nonrobust", s.frac_epochs_nonrobust},
                      {"master_seed", s.master_seed}};
}

ordered_json bank_manifest_json(const BankResult& bank,
                                const std::vector<std::string>& files) {
  ordered_json entries = ordered_json::array();
  for (std::size_t i = 0; i < bank.entries.size(); ++i) {
    const BankEntry& e = bank.entries[i];
    ordered_json je{{"cost", e.cost},
                    {"status", to_string(e.status)},
                    {"sweeps", e.sweeps}};
    if (i < files.size() && !files[i].empty()) je["file"] = files[i];
    if (!e.error.empty()) je["error"] = e.error;
    entries.push_back(std::move(je));
  }
  ordered_json j;
  j["c_dagger"] = std::isfinite(bank.c_dagger)
                      ? ordered_json(bank.c_dagger)
                      : ordered_json("inf");
  j["any_failed"] = bank.any_failed;
  j["plans"] = std::move(entries);
  return j;
}

} // namespace qbplan
