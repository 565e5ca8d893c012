#include "isac/experiment.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>
#include <set>

#include <json.hpp>

#include "isac/downlink.hpp"
#include "isac/region.hpp"
#include "isac/sensing.hpp"
#include "isac/uplink.hpp"

namespace isac {

namespace {

using nlohmann::json;

constexpr struct {
  ExperimentName name;
  const char* text;
} kNames[] = {
    {ExperimentName::kOpVsSnr, "op_vs_snr"},       {ExperimentName::kEcrVsSnr, "ecr_vs_snr"},
    {ExperimentName::kSrVsSnr, "sr_vs_snr"},       {ExperimentName::kRegionDl, "region_dl"},
    {ExperimentName::kRegionUl, "region_ul"},      {ExperimentName::kAcceptance, "acceptance"},
};

template <typename T>
void read_field(const json& doc, const char* key, T& out) {
  if (!doc.contains(key)) return;
  try {
    out = doc.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ModelError(std::string("config: bad value for '") + key + "': " + e.what());
  }
}

void write_row(std::ostream& out, std::initializer_list<std::string> cells) {
  bool first = true;
  for (const auto& c : cells) {
    if (!first) out << ',';
    out << c;
    first = false;
  }
  out << '\n';
}

std::string fmt(double v) { return format_number(v); }
std::string fmt(std::int64_t v) { return std::to_string(v); }

void run_op_vs_snr(const ExperimentSpec& spec, std::ostream& csv, std::ostream& log) {
  const SimConfig& cfg = spec.config;
  const SlotNoiseProfile profile = optimal_uplink_profile(cfg);
  write_row(csv, {"p_c_db", "system", "op", "std_err", "trials"});
  for (double db : spec.sweep.values_db()) {
    const double p_c = db_to_linear(db);
    const std::pair<const char*, MonteCarloEstimate> rows[] = {
        {"disac", dl_outage_prob(cfg, spec.rate_target, p_c)},
        {"dfdsac", dl_outage_prob_fdsac(cfg, spec.rate_target, spec.alpha, p_c)},
        {"uisac", ul_outage_prob(cfg, spec.rate_target, p_c, profile)},
        {"ufdsac", ul_outage_prob_fdsac(cfg, spec.rate_target, spec.alpha, p_c)},
    };
    for (const auto& [system, est] : rows) {
      write_row(csv, {fmt(db), system, fmt(est.mean), fmt(est.std_error), fmt(est.trials)});
    }
    log << "op_vs_snr: p_c = " << db << " dB done\n";
  }
}

void run_ecr_vs_snr(const ExperimentSpec& spec, std::ostream& csv, std::ostream& log) {
  const SimConfig& cfg = spec.config;
  const SlotNoiseProfile profile = optimal_uplink_profile(cfg);
  write_row(csv, {"p_c_db", "system", "ecr", "std_err", "trials"});
  for (double db : spec.sweep.values_db()) {
    const double p_c = db_to_linear(db);
    const std::pair<const char*, MonteCarloEstimate> rows[] = {
        {"disac", dl_ecr(cfg, p_c)},
        {"dfdsac", dl_ecr_fdsac(cfg, spec.alpha, p_c)},
        {"uisac", ul_ecr(cfg, p_c, profile)},
        {"ufdsac", ul_ecr_fdsac(cfg, spec.alpha, p_c)},
    };
    for (const auto& [system, est] : rows) {
      write_row(csv, {fmt(db), system, fmt(est.mean), fmt(est.std_error), fmt(est.trials)});
    }
    log << "ecr_vs_snr: p_c = " << db << " dB done\n";
  }
}

void run_sr_vs_snr(const ExperimentSpec& spec, std::ostream& csv, std::ostream& log) {
  const SimConfig& cfg = spec.config;
  const CorrelationMatrix r_target = cfg.target_correlation();
  const double sigma2 = sigma2_effective(r_target, cached_mean_covariance(cfg));
  log << "sr_vs_snr: downlink sigma2 = " << sigma2 << " at p_c = " << spec.p_c_db << " dB\n";
  const double share = 1.0 - spec.alpha;
  write_row(csv, {"p_s_db", "system", "sr", "sr_highsnr", "highsnr_valid"});
  for (double db : spec.sweep.values_db()) {
    const double p_s = db_to_linear(db);
    const HighSnrRate dl_hi = sr_highsnr(r_target, cfg.N, cfg.L, p_s, sigma2);
    const HighSnrRate ul_hi = sr_highsnr(r_target, cfg.N, cfg.L, p_s, 1.0);
    HighSnrRate fd_hi;
    if (share > 0.0) {
      fd_hi = sr_highsnr(r_target, cfg.N, cfg.L, p_s, share);
      fd_hi.rate *= share;
    }
    const double fd = fdsac_sr(r_target, cfg.N, cfg.L, p_s, spec.alpha);
    const struct {
      const char* system;
      double sr;
      HighSnrRate approx;
    } rows[] = {
        {"disac", dl_sr(SensingScenario{r_target, cfg.N, cfg.L, sigma2, p_s}).rate, dl_hi},
        {"dfdsac", fd, fd_hi},
        {"uisac", ul_sr(r_target, cfg.N, cfg.L, p_s).rate, ul_hi},
        {"ufdsac", fd, fd_hi},
    };
    for (const auto& r : rows) {
      write_row(csv, {fmt(db), r.system, fmt(r.sr), fmt(r.approx.rate),
                      r.approx.valid ? "1" : "0"});
    }
  }
}

void write_region(std::ostream& csv, const char* system, const RateRegion& region) {
  for (std::size_t i = 0; i < region.corners.size(); ++i) {
    write_row(csv, {system, to_string(region.sweep_param), fmt(region.grid[i]),
                    fmt(region.corners[i].cr), fmt(region.cr_std_error[i]),
                    fmt(region.corners[i].sr)});
  }
}

void run_region(const ExperimentSpec& spec, bool downlink, std::ostream& csv, std::ostream& log) {
  const SimConfig& cfg = spec.config;
  const double p_c = cfg.p_c;
  const double p_s = cfg.p_s;
  const RateRegion isac = downlink ? dl_isac_region(cfg, p_c, p_s, spec.grid_size)
                                   : ul_isac_region(cfg, p_c, p_s, spec.grid_size);
  const RateRegion fdsac = downlink ? dl_fdsac_region(cfg, p_c, p_s, spec.grid_size)
                                    : ul_fdsac_region(cfg, p_c, p_s, spec.grid_size);
  write_row(csv, {"system", "sweep_param", "sweep_value", "cr", "cr_std_err", "sr"});
  write_region(csv, downlink ? "disac" : "uisac", isac);
  write_region(csv, downlink ? "dfdsac" : "ufdsac", fdsac);
  const Containment c = region_contains(isac, fdsac, ContainmentTolerance{1e-6, 3.0});
  log << (downlink ? "region_dl" : "region_ul") << ": ISAC contains FDSAC = "
      << (c.contained ? "yes" : "no") << " (worst gap " << c.worst_gap << ")\n";
}

}  // namespace

std::string to_string(ExperimentName name) {
  for (const auto& n : kNames) {
    if (n.name == name) return n.text;
  }
  return "unknown";
}

std::optional<ExperimentName> parse_experiment_name(std::string_view text) {
  for (const auto& n : kNames) {
    if (text == n.text) return n.name;
  }
  return std::nullopt;
}

std::vector<double> SweepGrid::values_db() const {
  if (!(step_db > 0.0) || !(stop_db >= start_db)) {
    throw ModelError("sweep: requires step_db > 0 and stop_db >= start_db");
  }
  std::vector<double> out;
  const auto count = static_cast<std::int64_t>(std::floor((stop_db - start_db) / step_db + 1e-9));
  for (std::int64_t i = 0; i <= count; ++i) out.push_back(start_db + step_db * i);
  return out;
}

void ExperimentSpec::validate() const {
  config.validate();
  if (!(rate_target >= 0.0)) throw ModelError("config: rate_target must be >= 0");
  if (!(alpha >= 0.0 && alpha <= 1.0)) throw ModelError("config: alpha must lie in [0, 1]");
  if (grid_size < 2) throw ModelError("config: grid_size must be >= 2");
  if (sweep.values_db().empty()) throw ModelError("config: empty sweep");
}

bool operator==(const SimConfig& a, const SimConfig& b) {
  return a.M == b.M && a.N == b.N && a.K == b.K && a.L == b.L && a.rho_target == b.rho_target &&
         a.rho_cu == b.rho_cu && a.p_c == b.p_c && a.p_s == b.p_s && a.trials == b.trials &&
         a.sigma_trials == b.sigma_trials && a.outage_min_events == b.outage_min_events &&
         a.outage_max_trials == b.outage_max_trials && a.seed == b.seed && a.threads == b.threads;
}

bool operator==(const ExperimentSpec& a, const ExperimentSpec& b) {
  return a.name == b.name && a.config == b.config && a.p_c_db == b.p_c_db &&
         a.p_s_db == b.p_s_db && a.rate_target == b.rate_target && a.alpha == b.alpha &&
         a.sweep == b.sweep && a.grid_size == b.grid_size && a.output_path == b.output_path;
}

double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }

ExperimentSpec parse_spec_json(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ModelError(std::string("config: invalid JSON: ") + e.what());
  }
  if (!doc.is_object()) throw ModelError("config: top level must be a JSON object");

  static const std::set<std::string> known = {
      "experiment", "M", "N", "K", "L", "rho_target", "rho_cu", "p_c_db", "p_s_db", "trials",
      "sigma_trials", "outage_min_events", "outage_max_trials", "seed", "threads",
      "rate_target", "alpha", "sweep", "grid_size", "output_path"};
  for (const auto& [key, _] : doc.items()) {
    if (!known.count(key)) throw ModelError("config: unknown key '" + key + "'");
  }

  ExperimentSpec spec;
  if (doc.contains("experiment")) {
    std::string name;
    read_field(doc, "experiment", name);
    const auto parsed = parse_experiment_name(name);
    if (!parsed) throw ModelError("config: unknown experiment '" + name + "'");
    spec.name = *parsed;
  }
  SimConfig& c = spec.config;
  read_field(doc, "M", c.M);
  read_field(doc, "N", c.N);
  read_field(doc, "K", c.K);
  read_field(doc, "L", c.L);
  read_field(doc, "rho_target", c.rho_target);
  read_field(doc, "rho_cu", c.rho_cu);
  read_field(doc, "trials", c.trials);
  read_field(doc, "sigma_trials", c.sigma_trials);
  read_field(doc, "outage_min_events", c.outage_min_events);
  read_field(doc, "outage_max_trials", c.outage_max_trials);
  read_field(doc, "seed", c.seed);
  read_field(doc, "threads", c.threads);
  read_field(doc, "p_c_db", spec.p_c_db);
  read_field(doc, "p_s_db", spec.p_s_db);
  read_field(doc, "rate_target", spec.rate_target);
  read_field(doc, "alpha", spec.alpha);
  read_field(doc, "grid_size", spec.grid_size);
  read_field(doc, "output_path", spec.output_path);
  if (doc.contains("sweep")) {
    const json& s = doc.at("sweep");
    if (!s.is_object()) throw ModelError("config: 'sweep' must be an object");
    for (const auto& [key, _] : s.items()) {
      if (key != "start_db" && key != "stop_db" && key != "step_db") {
        throw ModelError("config: unknown sweep key '" + key + "'");
      }
    }
    read_field(s, "start_db", spec.sweep.start_db);
    read_field(s, "stop_db", spec.sweep.stop_db);
    read_field(s, "step_db", spec.sweep.step_db);
  }
  c.p_c = db_to_linear(spec.p_c_db);
  c.p_s = db_to_linear(spec.p_s_db);
  spec.validate();
  return spec;
}

std::string spec_to_json(const ExperimentSpec& spec) {
  const SimConfig& c = spec.config;
  json doc = {
      {"experiment", to_string(spec.name)},
      {"M", c.M},
      {"N", c.N},
      {"K", c.K},
      {"L", c.L},
      {"rho_target", c.rho_target},
      {"rho_cu", c.rho_cu},
      {"p_c_db", spec.p_c_db},
      {"p_s_db", spec.p_s_db},
      {"trials", c.trials},
      {"sigma_trials", c.sigma_trials},
      {"outage_min_events", c.outage_min_events},
      {"outage_max_trials", c.outage_max_trials},
      {"seed", c.seed},
      {"threads", c.threads},
      {"rate_target", spec.rate_target},
      {"alpha", spec.alpha},
      {"sweep",
       {{"start_db", spec.sweep.start_db},
        {"stop_db", spec.sweep.stop_db},
        {"step_db", spec.sweep.step_db}}},
      {"grid_size", spec.grid_size},
      {"output_path", spec.output_path},
  };
  return doc.dump(2);
}

std::string format_number(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

void run_experiment(const ExperimentSpec& authored, std::ostream& csv, std::ostream& log) {
  ExperimentSpec spec = authored;
  spec.config.p_c = db_to_linear(spec.p_c_db);
  spec.config.p_s = db_to_linear(spec.p_s_db);
  spec.validate();
  switch (spec.name) {
    case ExperimentName::kOpVsSnr: return run_op_vs_snr(spec, csv, log);
    case ExperimentName::kEcrVsSnr: return run_ecr_vs_snr(spec, csv, log);
    case ExperimentName::kSrVsSnr: return run_sr_vs_snr(spec, csv, log);
    case ExperimentName::kRegionDl: return run_region(spec, true, csv, log);
    case ExperimentName::kRegionUl: return run_region(spec, false, csv, log);
    case ExperimentName::kAcceptance:
      throw ModelError("run_experiment: the acceptance experiment is run by the acceptance suite");
  }
}

}  // namespace isac
