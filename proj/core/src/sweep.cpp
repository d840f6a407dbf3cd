#include "eec/sweep.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include <Eigen/Dense>

#include "eec/collab.hpp"
#include "eec/errors.hpp"
#include "eec/montecarlo.hpp"
#include "eec/version.hpp"

namespace eec {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kMinSlotSuccess = 1e-12;
constexpr double kCoverageAllowance = 0.02;

double parse_number(const std::string& text) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(text, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  while (used < text.size() && std::isspace(static_cast<unsigned char>(text[used]))) ++used;
  if (used == 0 || used != text.size() || !std::isfinite(v)) {
    throw ConfigError("not a number: '" + text + "'");
  }
  return v;
}

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> parts;
  std::string item;
  std::istringstream in(text);
  while (std::getline(in, item, sep)) parts.push_back(item);
  if (!text.empty() && text.back() == sep) parts.emplace_back();
  return parts;
}

std::string fmt(double v) { return format_number(v); }

std::vector<std::pair<std::string, std::string>> provenance(const ScenarioConfig& cfg,
                                                           const std::string& command,
                                                           bool simulated) {
  std::vector<std::pair<std::string, std::string>> meta{
      {"command", command},
      {"version", kVersion},
      {"preset", cfg.preset},
      {"config_hash", config_hash(cfg)},
      {"seed", std::to_string(cfg.sim.seed)},
  };
  if (simulated) meta.emplace_back("replications", std::to_string(cfg.sim.replications));
  return meta;
}

CoverageQuery coverage_query(const ScenarioConfig& cfg, Selection sel) {
  return CoverageQuery{cfg.radio, cfg.deploy, sel};
}

double mass_for(const CoverageQuery& q) {
  return q.selection.is_random()
             ? 1.0
             : worker_availability_mass(q.selection.rank, q.deploy, q.radio.los_radius_m);
}

bool usable(const std::vector<double>& rates, int n, double slot) {
  for (int i = 0; i < n; ++i) {
    if (!(rates[static_cast<std::size_t>(i)] * slot > kMinSlotSuccess)) return false;
  }
  return true;
}

// Accumulates validation rows and their verdicts.
class CheckTable {
 public:
  explicit CheckTable(ValidationReport& report) : report_(report) {}

  void check(const std::string& group, const std::string& label, const std::string& metric,
             double analytic, std::optional<double> simulated, std::optional<double> std_error,
             double gap, double bound) {
    const bool ok = std::isfinite(gap) && gap <= bound;
    ++report_.checks;
    if (!ok) ++report_.failures;
    report_.result.rows.push_back({{group, label},
                                   metric,
                                   analytic,
                                   simulated,
                                   std_error,
                                   std::string(ok ? "pass" : "FAIL") + " gap=" + fmt(gap) +
                                       " bound=" + fmt(bound)});
  }

  void info(const std::string& group, const std::string& label, const std::string& metric,
            double analytic, std::optional<double> simulated, std::optional<double> std_error,
            const std::string& note) {
    report_.result.rows.push_back({{group, label}, metric, analytic, simulated, std_error,
                                   "info " + note});
  }

 private:
  ValidationReport& report_;
};

void validate_coverage(const ScenarioConfig& cfg, CheckTable& table) {
  struct Group {
    Selection selection;
    double los_radius_m;
    std::vector<double> xi_db;
  };
  const std::vector<Group> groups{
      {Selection::random(), 100.0, {-10.0, 0.0, 5.0, 10.0}},
      {Selection::random(), 300.0, {-10.0, 0.0}},
      {Selection::ranked(1), 100.0, {0.0, 5.0, 10.0}},
      {Selection::ranked(1), 300.0, {10.0}},
  };
  const auto n = static_cast<double>(cfg.sim.replications);
  for (const Group& g : groups) {
    CoverageQuery q = coverage_query(cfg, g.selection);
    q.radio.los_radius_m = g.los_radius_m;
    const double mass = mass_for(q);
    const auto sims = empirical_success_curve(cfg.sim, q, g.xi_db);
    for (std::size_t i = 0; i < g.xi_db.size(); ++i) {
      q.radio.sinr_threshold_db = g.xi_db[i];
      const double analytic = success_probability(q, cfg.quadrature);
      const double conditional = std::min(1.0, analytic / mass);
      const double sigma = std::sqrt(conditional * (1.0 - conditional) / n);
      std::ostringstream label;
      label << g.selection.to_string() << " R_L=" << fmt(g.los_radius_m) << " xi_db="
            << fmt(g.xi_db[i]);
      table.check("coverage", label.str(), "success_probability", conditional, sims[i].estimate,
                  sims[i].std_error, std::abs(sims[i].estimate - conditional),
                  3.0 * sigma + kCoverageAllowance);
    }
  }

  // Same anchor with interferers classified by their distance to the requester.
  SimConfig alt = cfg.sim;
  alt.los_reference = alt.los_reference == LosReference::Receiver ? LosReference::Requester
                                                                  : LosReference::Receiver;
  const CoverageQuery q = coverage_query(cfg, Selection::random());
  const auto base = empirical_success_probability(cfg.sim, q);
  const auto other = empirical_success_probability(alt, q);
  table.info("coverage", "random LoS reference swapped xi_db=" + fmt(cfg.radio.sinr_threshold_db),
             "success_probability", success_probability(q, cfg.quadrature), other.estimate,
             other.std_error, "shift=" + fmt(other.estimate - base.estimate));
}

void validate_delay(const ScenarioConfig& cfg, CheckTable& table) {
  constexpr int kMaxSegments = 8;
  const auto n = static_cast<double>(cfg.sim.replications);
  for (DelayVariant v : {DelayVariant::Random, DelayVariant::Ordered, DelayVariant::OrderedFailure}) {
    const std::vector<double> rates = offload_rates(cfg, v, kMaxSegments);
    for (int segs = 1; segs <= kMaxSegments; ++segs) {
      if (!usable(rates, segs, cfg.task.d2d_slot_s)) continue;
      const ChainModel model = delay_model(cfg, v, segs, rates);
      const double analytic = mean_absorption_time(model).mean_delay_s;
      const double sigma = std::sqrt(absorption_time_variance(model) / n);
      const DelayEstimate sim = empirical_delay(cfg.sim, model);
      table.check("delay", to_string(v) + " n=" + std::to_string(segs), "mean_delay_s", analytic,
                  sim.mean_s, sim.std_error, std::abs(sim.mean_s - analytic), 3.0 * sigma);
    }
  }
}

void validate_completion(const ScenarioConfig& cfg, CheckTable& table) {
  const auto reps = static_cast<double>(cfg.sim.replications);
  const std::vector<double> rates = offload_rates(cfg, DelayVariant::Random, 3);
  for (double l : {1.0, 2.0, 5.0}) {
    for (int n = 1; n <= 3; ++n) {
      const std::vector<double> slot_rates(rates.begin(), rates.begin() + n);
      const ChainModel model = build_failure_chain(n, slot_rates, cfg.task.task_exec_rate_per_s, l, 0);
      const double analytic = completion_probability(model);
      const double closed = std::pow(n * n * l / (n * n * l + 1.0), n);
      const std::string label = "l=" + fmt(l) + " n=" + std::to_string(n);
      table.check("completion", label, "completion_closed_form", analytic, closed, std::nullopt,
                  std::abs(analytic - closed), 1e-12);
      const DelayEstimate sim = empirical_delay(cfg.sim, model);
      const double sigma = std::sqrt(analytic * (1.0 - analytic) / reps);
      table.check("completion", label, "completion_probability", analytic, sim.completion_fraction,
                  std::sqrt(sim.completion_fraction * (1.0 - sim.completion_fraction) / reps),
                  std::abs(sim.completion_fraction - analytic), 3.0 * sigma);
    }
  }
}

void validate_worker_idle(const ScenarioConfig& cfg, CheckTable& table) {
  const double mu = cfg.task.task_exec_rate_per_s;
  const double nu_r = cfg.deploy.requester_intensity_per_m2;
  const double nu_w = cfg.deploy.worker_intensity_per_m2;
  if (!(nu_w > 0.0)) return;
  const double analytic = worker_idle_probability(mu, nu_r, nu_w);
  for (int n : {1, 5}) {
    // pi Q = 0 with pi summing to one, solved as a 2x2 system.
    Eigen::Matrix2d a;
    a << -(n * nu_r / nu_w), n * mu, 1.0, 1.0;
    const Eigen::Vector2d pi = a.fullPivLu().solve(Eigen::Vector2d(0.0, 1.0));
    table.check("worker", "n=" + std::to_string(n), "idle_probability", analytic, pi[0],
                std::nullopt, std::abs(pi[0] - analytic), 1e-12);
  }
}

}  // namespace

std::vector<double> parse_grid(const std::string& text) {
  if (text.empty()) return {};
  if (text.find(':') != std::string::npos) {
    const auto parts = split(text, ':');
    if (parts.size() != 3) throw ConfigError("range grid must be start:stop:step, got '" + text + "'");
    const double start = parse_number(parts[0]);
    const double stop = parse_number(parts[1]);
    const double step = parse_number(parts[2]);
    if (step == 0.0 || (stop - start) * step < 0.0) {
      throw ConfigError("range grid '" + text + "' never reaches its end");
    }
    const auto count = static_cast<long>(std::floor((stop - start) / step + 1e-9)) + 1;
    if (count > 1000000) throw ConfigError("range grid '" + text + "' is too large");
    std::vector<double> grid;
    grid.reserve(static_cast<std::size_t>(count));
    for (long i = 0; i < count; ++i) grid.push_back(start + static_cast<double>(i) * step);
    return grid;
  }
  std::vector<double> grid;
  for (const auto& item : split(text, ',')) grid.push_back(parse_number(item));
  return grid;
}

std::vector<int> parse_int_grid(const std::string& text) {
  std::vector<int> out;
  for (double v : parse_grid(text)) {
    const double r = std::round(v);
    if (std::abs(v - r) > 1e-9 || std::abs(r) > 1e9) {
      throw ConfigError("integer grid contains non-integer " + fmt(v));
    }
    out.push_back(static_cast<int>(r));
  }
  return out;
}

DelayVariant parse_delay_variant(const std::string& text) {
  if (text == "random") return DelayVariant::Random;
  if (text == "ordered") return DelayVariant::Ordered;
  if (text == "failure") return DelayVariant::OrderedFailure;
  throw ConfigError("variant must be random, ordered or failure, got '" + text + "'");
}

std::string to_string(DelayVariant v) {
  switch (v) {
    case DelayVariant::Random: return "random";
    case DelayVariant::Ordered: return "ordered";
    case DelayVariant::OrderedFailure: return "failure";
  }
  return "?";
}

std::vector<double> offload_rates(const ScenarioConfig& cfg, DelayVariant variant, int n_max) {
  if (n_max < 1) throw DomainError("offload_rates: n_max must be >= 1");
  const double slot = cfg.task.d2d_slot_s;
  if (variant == DelayVariant::Random) {
    const double p = success_probability_random(coverage_query(cfg, Selection::random()),
                                                cfg.quadrature);
    return std::vector<double>(static_cast<std::size_t>(n_max), p / slot);
  }
  std::vector<double> rates =
      ranked_success_table(n_max, coverage_query(cfg, Selection::ranked(1)), cfg.quadrature);
  for (double& r : rates) r /= slot;
  return rates;
}

ChainModel delay_model(const ScenarioConfig& cfg, DelayVariant variant, int n,
                       const std::vector<double>& rates) {
  if (n < 1 || rates.size() < static_cast<std::size_t>(n)) {
    throw DomainError("delay_model: need at least n slot rates");
  }
  const std::vector<double> slot(rates.begin(), rates.begin() + n);
  const double mu = cfg.task.task_exec_rate_per_s;
  switch (variant) {
    case DelayVariant::Random: return build_baseline(n, slot.front(), mu);
    case DelayVariant::Ordered: return build_level_dependent(n, slot, mu);
    case DelayVariant::OrderedFailure:
      return build_failure_chain(n, slot, mu, cfg.reliability.reliability_l,
                                 cfg.reliability.spare_budget);
  }
  throw DomainError("delay_model: unknown variant");
}

DelayCurve delay_curve(const ScenarioConfig& cfg, DelayVariant variant,
                       const std::vector<int>& segments) {
  DelayCurve curve;
  if (segments.empty()) return curve;
  const int top = *std::max_element(segments.begin(), segments.end());
  if (*std::min_element(segments.begin(), segments.end()) < 1) {
    throw ConfigError("segment counts must be >= 1");
  }
  const std::vector<double> rates = offload_rates(cfg, variant, top);
  double best = kInf;
  for (int n : segments) {
    double d = kInf;
    if (usable(rates, n, cfg.task.d2d_slot_s)) {
      d = mean_delay(delay_model(cfg, variant, n, rates), cfg.sojourn);
    }
    curve.segments.push_back(n);
    curve.delay_s.push_back(d);
    if (d < best || (d == best && d < kInf && n < curve.optimal_n)) {
      best = d;
      curve.optimal_n = n;
    }
  }
  return curve;
}

int optimal_segments(const ScenarioConfig& cfg, DelayVariant variant) {
  std::vector<int> all(static_cast<std::size_t>(cfg.n_max));
  for (int i = 0; i < cfg.n_max; ++i) all[static_cast<std::size_t>(i)] = i + 1;
  return delay_curve(cfg, variant, all).optimal_n;
}

SweepResult cmd_coverage(const ScenarioConfig& cfg, const std::vector<double>& xi_db,
                         const std::vector<Selection>& selections,
                         const std::vector<double>& los_radii_m, bool simulate) {
  cfg.validate();
  SweepResult out;
  out.metadata = provenance(cfg, "coverage", simulate);
  out.param_columns = {"xi_db", "selection", "los_radius_m"};
  for (const Selection& sel : selections) {
    for (double rl : los_radii_m) {
      CoverageQuery q = coverage_query(cfg, sel);
      q.radio.los_radius_m = rl;
      std::vector<SuccessEstimate> sims;
      if (simulate && !xi_db.empty()) sims = empirical_success_curve(cfg.sim, q, xi_db);
      const double mass = mass_for(q);
      for (std::size_t i = 0; i < xi_db.size(); ++i) {
        q.radio.sinr_threshold_db = xi_db[i];
        SweepRow row{{fmt(xi_db[i]), sel.to_string(), fmt(rl)},
                     "success_probability",
                     success_probability(q, cfg.quadrature),
                     std::nullopt,
                     std::nullopt,
                     ""};
        if (simulate) {
          row.simulated = sims[i].estimate;
          row.std_error = sims[i].std_error;
          if (!sel.is_random()) row.note = "simulated is conditional; availability=" + fmt(mass);
        }
        out.rows.push_back(std::move(row));
      }
    }
  }
  return out;
}

SweepResult cmd_delay(const ScenarioConfig& cfg, const std::vector<int>& segments,
                      DelayVariant variant, bool simulate) {
  cfg.validate();
  SweepResult out;
  out.metadata = provenance(cfg, "delay", simulate);
  out.metadata.emplace_back("variant", to_string(variant));
  if (cfg.sojourn == SojournConvention::PerTransition) {
    out.metadata.emplace_back("sojourn", "per_transition");
  }
  out.param_columns = {"n", "variant"};
  const DelayCurve curve = delay_curve(cfg, variant, segments);
  std::vector<double> rates;
  if (simulate && !segments.empty()) {
    rates = offload_rates(cfg, variant, *std::max_element(segments.begin(), segments.end()));
  }
  for (std::size_t i = 0; i < curve.segments.size(); ++i) {
    const int n = curve.segments[i];
    SweepRow row{{std::to_string(n), to_string(variant)}, "mean_delay_s", curve.delay_s[i],
                 std::nullopt, std::nullopt, ""};
    if (n == curve.optimal_n) row.note = "optimal";
    if (!std::isfinite(curve.delay_s[i])) row.note = "unservable";
    if (simulate && std::isfinite(curve.delay_s[i])) {
      const DelayEstimate sim = empirical_delay(cfg.sim, delay_model(cfg, variant, n, rates));
      row.simulated = sim.mean_s;
      row.std_error = sim.std_error;
      if (sim.completion_fraction < 1.0) {
        row.note += std::string(row.note.empty() ? "" : " ") +
                    "completion_fraction=" + fmt(sim.completion_fraction);
      }
    }
    out.rows.push_back(std::move(row));
  }
  return out;
}

SweepResult cmd_completion(const ScenarioConfig& cfg, const std::vector<int>& segments,
                           const std::vector<double>& reliability_l, bool simulate) {
  cfg.validate();
  SweepResult out;
  out.metadata = provenance(cfg, "completion", simulate);
  const auto& budget = cfg.reliability.spare_budget;
  out.metadata.emplace_back("spare_budget", budget ? std::to_string(*budget) : "unbounded");
  out.param_columns = {"n", "l"};
  if (segments.empty() || reliability_l.empty()) return out;
  if (*std::min_element(segments.begin(), segments.end()) < 1) {
    throw ConfigError("segment counts must be >= 1");
  }
  const std::vector<double> rates = offload_rates(
      cfg, DelayVariant::Random, *std::max_element(segments.begin(), segments.end()));
  const auto reps = static_cast<double>(cfg.sim.replications);
  for (double l : reliability_l) {
    if (!(l > 0.0)) throw ConfigError("reliability l must be > 0");
    for (int n : segments) {
      const ChainModel model = build_failure_chain(
          n, std::vector<double>(rates.begin(), rates.begin() + n), cfg.task.task_exec_rate_per_s,
          l, budget);
      SweepRow row{{std::to_string(n), fmt(l)}, "completion_probability",
                   budget ? completion_probability(model) : 1.0, std::nullopt, std::nullopt, ""};
      if (!budget) row.note = "unbounded spares";
      if (simulate) {
        const DelayEstimate sim = empirical_delay(cfg.sim, model);
        row.simulated = sim.completion_fraction;
        row.std_error = std::sqrt(sim.completion_fraction * (1.0 - sim.completion_fraction) / reps);
      }
      out.rows.push_back(std::move(row));
    }
  }
  return out;
}

SweepResult cmd_contour(const ScenarioConfig& cfg, const std::vector<double>& worker_intensity,
                        const std::vector<double>& task_exec_rate) {
  cfg.validate();
  SweepResult out;
  out.metadata = provenance(cfg, "contour", false);
  out.metadata.emplace_back("variant", "ordered");
  out.metadata.emplace_back("n_max", std::to_string(cfg.n_max));
  out.param_columns = {"worker_intensity_per_m2", "task_exec_rate_per_s"};
  std::vector<int> all(static_cast<std::size_t>(cfg.n_max));
  for (int i = 0; i < cfg.n_max; ++i) all[static_cast<std::size_t>(i)] = i + 1;
  for (double nu_w : worker_intensity) {
    for (double mu : task_exec_rate) {
      ScenarioConfig cell = cfg;
      cell.deploy.worker_intensity_per_m2 = nu_w;
      cell.task.task_exec_rate_per_s = mu;
      cell.validate();
      const DelayCurve curve = delay_curve(cell, DelayVariant::Ordered, all);
      const double best = curve.optimal_n > 0
                              ? curve.delay_s[static_cast<std::size_t>(curve.optimal_n - 1)]
                              : kInf;
      out.rows.push_back({{fmt(nu_w), fmt(mu)}, "optimal_n", static_cast<double>(curve.optimal_n),
                          std::nullopt, std::nullopt, "delay_s=" + fmt(best)});
    }
  }
  return out;
}

SweepResult cmd_bias(const ScenarioConfig& cfg, const std::string& scenario,
                     const std::vector<double>& alphas) {
  cfg.validate();
  SweepResult out;
  out.metadata = provenance(cfg, "bias", false);
  out.metadata.emplace_back("scenario", scenario);
  out.metadata.emplace_back("eec_segmentation", "optimal n per alpha");
  out.param_columns = {"alpha"};
  BiasScenario s;
  try {
    s = bias_scenario(scenario, Preset{cfg.radio, cfg.deploy, cfg.task, cfg.reliability});
  } catch (const DomainError& e) {
    throw ConfigError(e.what());
  }
  s.mec.power_ratio = cfg.mec.power_ratio;
  s.mec.offload_success_prob = cfg.mec.offload_success_prob;
  s.n_max = cfg.n_max;
  s.quadrature = cfg.quadrature;
  s.sojourn = cfg.sojourn;
  if (alphas.empty()) return out;
  for (double a : alphas) {
    if (!(a >= 0.0 && a <= 1.0)) throw ConfigError("alpha values must lie in [0, 1]");
  }
  const BiasSweep sweep = optimal_bias(std::span<const double>(alphas), s);
  for (const BiasPoint& p : sweep.points) {
    const std::string a = fmt(p.alpha);
    out.rows.push_back({{a}, "tau_eec_s", p.tau_eec_s, std::nullopt, std::nullopt,
                        p.eec_servable ? "optimal_n=" + std::to_string(p.optimal_n)
                                       : std::string("unservable")});
    out.rows.push_back({{a}, "tau_mec_s", p.tau_mec_s, std::nullopt, std::nullopt, ""});
    out.rows.push_back({{a}, "tau_alpha_s", p.tau_alpha_s, std::nullopt, std::nullopt, ""});
  }
  out.rows.push_back({{fmt(sweep.best.alpha)}, "alpha_star", sweep.best.alpha, std::nullopt,
                      std::nullopt, "tau_alpha_s=" + fmt(sweep.best.tau_alpha_s)});
  return out;
}

ValidationReport cmd_validate(const ScenarioConfig& cfg) {
  cfg.validate();
  ValidationReport report;
  report.result.metadata = provenance(cfg, "validate", true);
  report.result.param_columns = {"group", "case"};
  CheckTable table(report);
  validate_coverage(cfg, table);
  validate_delay(cfg, table);
  validate_completion(cfg, table);
  validate_worker_idle(cfg, table);
  report.result.metadata.emplace_back(
      "checks", std::to_string(report.checks) + " run, " + std::to_string(report.failures) + " failed");
  return report;
}

}  // namespace eec
