#include "eec/montecarlo.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>

#include "eec/errors.hpp"

namespace eec {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kTailTolerance = 1e-4;
constexpr std::size_t kMaxResamples = 10000;

void require(bool condition, const char* message) {
  if (!condition) throw DomainError(message);
}

void sample_disk(Engine& rng, double intensity, double radius, std::vector<Point>& out) {
  out.clear();
  const double mean = intensity * kPi * radius * radius;
  if (!(mean > 0.0)) return;
  std::poisson_distribution<long> count(mean);
  const long n = count(rng);
  out.reserve(static_cast<std::size_t>(n));
  // Rejection from the bounding square keeps the placement exactly uniform.
  while (out.size() < static_cast<std::size_t>(n)) {
    const double x = 2.0 * unit_uniform(rng) - 1.0;
    const double y = 2.0 * unit_uniform(rng) - 1.0;
    if (x * x + y * y < 1.0) out.push_back({radius * x, radius * y});
  }
}

// Gamma(m, 1/m) for integer m: the mean of m unit exponentials.
double unit_mean_erlang(Engine& rng, int m) {
  double log_sum = 0.0;
  double product = 1.0;
  for (int i = 0; i < m; ++i) {
    product *= 1.0 - unit_uniform(rng);
    if (product < 1e-280) {  // flush before underflow
      log_sum += std::log(product);
      product = 1.0;
    }
  }
  return -(log_sum + std::log(product)) / m;
}

// d2^(-alpha/2) with the common integer exponents done by multiplication.
double inverse_power(double d2, double alpha) {
  if (alpha == 2.0) return 1.0 / d2;
  if (alpha == 4.0) return 1.0 / (d2 * d2);
  if (alpha == 3.0) return 1.0 / (d2 * std::sqrt(d2));
  return std::pow(d2, -0.5 * alpha);
}

std::uint64_t position_key(Point p) {
  const auto x = std::bit_cast<std::uint64_t>(p.x);
  const auto y = std::bit_cast<std::uint64_t>(p.y);
  return x ^ std::rotl(y * 0x9e3779b97f4a7c15ULL, 29);
}

double arena_radius(const SimConfig& cfg, const RadioParams& radio, const DeploymentParams& deploy) {
  if (cfg.arena_radius_m) {
    require(*cfg.arena_radius_m >= radio.los_radius_m, "arena radius must be >= los_radius_m");
    return *cfg.arena_radius_m;
  }
  return default_arena_radius(radio, deploy);
}

// Picks the worker that serves the typical requester, or nothing when the
// realization does not contain it.
std::optional<Point> select_worker(const NetworkRealization& net, const Selection& sel,
                                   Engine& rng) {
  const auto& w = net.workers;
  if (sel.is_random()) {
    if (w.empty()) return std::nullopt;
    std::uniform_int_distribution<std::size_t> pick(0, w.size() - 1);
    return w[pick(rng)];
  }
  const auto k = static_cast<std::size_t>(sel.rank);
  if (w.size() < k) return std::nullopt;
  std::vector<Point> sorted = w;
  std::nth_element(sorted.begin(), sorted.begin() + static_cast<std::ptrdiff_t>(k - 1), sorted.end(),
                   [](Point a, Point b) { return a.x * a.x + a.y * a.y < b.x * b.x + b.y * b.y; });
  return sorted[k - 1];
}

struct SinrSample {
  double sinr = 0.0;
  std::size_t resampled = 0;
};

SinrSample draw_sinr(const SimConfig& cfg, const CoverageQuery& q, const LinearRadio& radio,
                     double arena, std::size_t replication) {
  Engine rng = make_stream(cfg.seed, replication);
  for (std::size_t attempt = 0; attempt < kMaxResamples; ++attempt) {
    const NetworkRealization net = sample_network(rng, q.deploy, q.radio, arena);
    if (auto worker = select_worker(net, q.selection, rng)) {
      return {link_sinr(net, *worker, radio, cfg.los_reference), attempt};
    }
  }
  throw DomainError("empirical success: selected worker missing in every resampled realization");
}

double mean_of(const std::vector<double>& v) {
  return compensated_sum(v) / static_cast<double>(v.size());
}

}  // namespace

void SimConfig::validate() const {
  require(replications >= 1, "replications must be >= 1");
  require(!arena_radius_m || (std::isfinite(*arena_radius_m) && *arena_radius_m > 0.0),
          "arena radius must be > 0");
}

double default_arena_radius(const RadioParams& radio, const DeploymentParams& deploy) {
  const LinearRadio lin = linearize(radio);
  deploy.validate();
  const double floor = 10.0 * lin.los_radius_m;
  const double nu = deploy.requester_intensity_per_m2;
  if (nu == 0.0) return floor;
  require(lin.pathloss_exp_nlos > 2.0, "NLoS interference diverges unless pathloss_exp_nlos > 2");
  // 1 - (1 + u)^-N <= N u bounds the NLoS integrand by a power law; take the
  // worst link (r0 = R_L, largest binomial index) and solve for the radius
  // where the dropped tail falls below the tolerance.
  double mean_gain = 0.0;
  for (const auto& level : lin.directivity) mean_gain += level.probability * level.gain;
  mean_gain /= lin.boresight_gain();
  const double scale = lin.eta_los * lin.nakagami_los * lin.sinr_threshold *
                       (lin.intercept_nlos / lin.intercept_los) *
                       std::pow(lin.los_radius_m, lin.pathloss_exp_los) * mean_gain;
  const double excess = lin.pathloss_exp_nlos - 2.0;
  const double tail = std::pow(2.0 * kPi * nu * scale / (excess * kTailTolerance), 1.0 / excess);
  return std::max(floor, tail);
}

NetworkRealization sample_network(Engine& rng, const DeploymentParams& deploy,
                                  const RadioParams& radio, double arena_radius_m) {
  require(arena_radius_m >= radio.los_radius_m, "arena radius must be >= los_radius_m");
  NetworkRealization net;
  net.arena_radius_m = arena_radius_m;
  sample_disk(rng, deploy.worker_intensity_per_m2, radio.los_radius_m, net.workers);
  sample_disk(rng, deploy.requester_intensity_per_m2, arena_radius_m, net.requesters);
  net.link_seed = rng();
  return net;
}

NetworkRealization sample_network(std::uint64_t seed, const DeploymentParams& deploy,
                                  const RadioParams& radio, double arena_radius_m) {
  Engine rng = make_stream(seed, 0);
  return sample_network(rng, deploy, radio, arena_radius_m);
}

double link_sinr(const NetworkRealization& net, Point worker, const LinearRadio& radio,
                 LosReference reference) {
  Engine rng = make_stream(net.link_seed, position_key(worker));
  std::array<double, 4> cumulative{};
  double acc = 0.0;
  for (std::size_t i = 0; i < cumulative.size(); ++i) {
    acc += radio.directivity[i].probability;
    cumulative[i] = acc;
  }
  auto draw_gain = [&] {
    const double u = unit_uniform(rng) * acc;
    std::size_t i = 0;
    while (i + 1 < cumulative.size() && u >= cumulative[i]) ++i;
    return radio.directivity[i].gain;
  };

  const double r0_2 = worker.x * worker.x + worker.y * worker.y;
  const double signal = unit_mean_erlang(rng, radio.nakagami_los) * radio.boresight_gain() *
                        radio.intercept_los * inverse_power(r0_2, radio.pathloss_exp_los);

  const double los_radius2 = radio.los_radius_m * radio.los_radius_m;
  double interference = 0.0;
  for (const Point& p : net.requesters) {
    const double dx = p.x - worker.x;
    const double dy = p.y - worker.y;
    const double d2 = dx * dx + dy * dy;
    const double ref2 = reference == LosReference::Receiver ? d2 : p.x * p.x + p.y * p.y;
    const double gain = draw_gain();
    if (ref2 <= los_radius2) {
      interference += unit_mean_erlang(rng, radio.nakagami_los) * gain * radio.intercept_los *
                      inverse_power(d2, radio.pathloss_exp_los);
    } else {
      interference += unit_mean_erlang(rng, radio.nakagami_nlos) * gain * radio.intercept_nlos *
                      inverse_power(d2, radio.pathloss_exp_nlos);
    }
  }
  return signal / (radio.noise + interference);
}

SuccessEstimate empirical_success_probability(const SimConfig& cfg, const CoverageQuery& q) {
  return empirical_success_curve(cfg, q, {q.radio.sinr_threshold_db}).front();
}

std::vector<SuccessEstimate> empirical_success_curve(const SimConfig& cfg, const CoverageQuery& q,
                                                     const std::vector<double>& thresholds_db) {
  cfg.validate();
  q.deploy.validate();
  const LinearRadio radio = linearize(q.radio);
  if (thresholds_db.empty()) return {};

  // Size the default arena for the strictest threshold on the curve.
  RadioParams strictest = q.radio;
  strictest.sinr_threshold_db = *std::max_element(thresholds_db.begin(), thresholds_db.end());
  const double arena = arena_radius(cfg, strictest, q.deploy);

  std::vector<SinrSample> samples(cfg.replications);
  parallel_for(cfg.replications, cfg.threads,
               [&](std::size_t r) { samples[r] = draw_sinr(cfg, q, radio, arena, r); });

  std::size_t resampled = 0;
  for (const auto& s : samples) resampled += s.resampled;
  const auto n = static_cast<double>(cfg.replications);

  std::vector<SuccessEstimate> out;
  out.reserve(thresholds_db.size());
  for (double xi_db : thresholds_db) {
    const double xi = db_to_linear(xi_db);
    const auto hits = std::count_if(samples.begin(), samples.end(),
                                    [xi](const SinrSample& s) { return s.sinr > xi; });
    SuccessEstimate e;
    e.estimate = static_cast<double>(hits) / n;
    e.std_error = std::sqrt(e.estimate * (1.0 - e.estimate) / n);
    e.replications = cfg.replications;
    e.resampled = resampled;
    out.push_back(e);
  }
  return out;
}

Trajectory simulate_task_trajectory(Engine& rng, const ChainModel& model) {
  const int n = model.segments;
  require(n >= 1 && model.offload_rates.size() == static_cast<std::size_t>(n),
          "simulate_task_trajectory: model has no valid offload rates");
  require(model.segment_exec_rate > 0.0, "simulate_task_trajectory: segment rate must be > 0");
  constexpr double kNever = std::numeric_limits<double>::infinity();
  auto clock = [&rng](double rate) {
    return rate > 0.0 ? -std::log(1.0 - unit_uniform(rng)) / rate : kNever;
  };

  struct Worker {
    double finish;
    double fail;
  };
  std::vector<Worker> busy;
  busy.reserve(static_cast<std::size_t>(n));
  double now = 0.0;
  int finished = 0;
  int failures = 0;
  for (;;) {
    const auto allocated = static_cast<std::size_t>(finished) + busy.size();
    const double next_alloc =
        allocated < static_cast<std::size_t>(n) ? now + clock(model.offload_rates[allocated]) : kNever;
    auto first = busy.end();
    double next_worker = kNever;
    for (auto it = busy.begin(); it != busy.end(); ++it) {
      const double t = std::min(it->finish, it->fail);
      if (t < next_worker) {
        next_worker = t;
        first = it;
      }
    }
    if (next_alloc < next_worker) {
      now = next_alloc;
      busy.push_back({now + clock(model.segment_exec_rate), now + clock(model.failure_rate_per_worker)});
      continue;
    }
    now = next_worker;
    const bool done = first->finish <= first->fail;
    busy.erase(first);
    if (done) {
      if (++finished == n) return {now, true};
    } else if (model.spare_budget) {
      if (failures == *model.spare_budget) return {now, false};
      ++failures;
    }
  }
}

Trajectory simulate_task_trajectory(std::uint64_t seed, const ChainModel& model) {
  Engine rng = make_stream(seed, 0);
  return simulate_task_trajectory(rng, model);
}

DelayEstimate empirical_delay(const SimConfig& cfg, const ChainModel& model) {
  cfg.validate();
  std::vector<Trajectory> runs(cfg.replications);
  parallel_for(cfg.replications, cfg.threads, [&](std::size_t r) {
    Engine rng = make_stream(cfg.seed, r);
    runs[r] = simulate_task_trajectory(rng, model);
  });

  std::vector<double> delays(runs.size());
  std::size_t completed = 0;
  for (std::size_t i = 0; i < runs.size(); ++i) {
    delays[i] = runs[i].delay_s;
    completed += runs[i].completed ? 1 : 0;
  }
  const double mean = mean_of(delays);
  std::vector<double> squares(delays.size());
  for (std::size_t i = 0; i < delays.size(); ++i) squares[i] = (delays[i] - mean) * (delays[i] - mean);
  const auto n = static_cast<double>(delays.size());
  const double variance = delays.size() > 1 ? compensated_sum(squares) / (n - 1.0) : 0.0;

  DelayEstimate e;
  e.mean_s = mean;
  e.std_error = std::sqrt(variance / n);
  e.completion_fraction = static_cast<double>(completed) / n;
  e.replications = cfg.replications;
  return e;
}

}  // namespace eec
