#include "eec/chain.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <sstream>

#include <Eigen/SparseLU>

#include "eec/errors.hpp"

namespace eec {

namespace {

enum class Move { Allocate, Complete, Fail };

struct Transition {
  Move move;
  std::size_t target;
  double rate;
};

void require(bool condition, const std::string& message) {
  if (!condition) throw DomainError(message);
}

// Outgoing transitions of transient state `i`. Allocation uses the rank of
// the slot being filled, finished + computing, so a replacement after a
// failure reuses the rank of the worker it replaces.
template <class Emit>
void for_each_transition(const ChainModel& m, std::size_t i, Emit&& emit) {
  const StateIndex& idx = m.index;
  const ChainState& s = idx.state_at(i);
  const int n = m.segments;
  const int allocated = s.finished + s.computing;
  if (allocated < n) {
    emit(Transition{Move::Allocate, idx.index_of({s.finished, s.computing + 1, s.failures}),
                    m.offload_rates[static_cast<std::size_t>(allocated)]});
  }
  if (s.computing > 0) {
    emit(Transition{Move::Complete, idx.index_of({s.finished + 1, s.computing - 1, s.failures}),
                    s.computing * m.segment_exec_rate});
    if (m.failure_rate_per_worker > 0.0) {
      std::size_t target;
      if (!m.spare_budget) {
        target = idx.index_of({s.finished, s.computing - 1, 0});
      } else if (s.failures < *m.spare_budget) {
        target = idx.index_of({s.finished, s.computing - 1, s.failures + 1});
      } else {
        target = idx.fail_index();
      }
      emit(Transition{Move::Fail, target, s.computing * m.failure_rate_per_worker});
    }
  }
}

SparseMatrix assemble_generator(const ChainModel& m) {
  const StateIndex& idx = m.index;
  std::vector<Eigen::Triplet<double>> triplets;
  triplets.reserve(idx.transient_count() * 4);
  for (std::size_t i = 0; i < idx.transient_count(); ++i) {
    double exit = 0.0;
    for_each_transition(m, i, [&](const Transition& t) {
      triplets.emplace_back(static_cast<int>(i), static_cast<int>(t.target), t.rate);
      exit += t.rate;
    });
    triplets.emplace_back(static_cast<int>(i), static_cast<int>(i), -exit);
  }
  const auto size = static_cast<Eigen::Index>(idx.size());
  SparseMatrix q(size, size);
  q.setFromTriplets(triplets.begin(), triplets.end());
  q.makeCompressed();
  return q;
}

ChainModel assemble(int segments, std::vector<double> rates, double task_exec_rate,
                    double failure_rate, std::optional<int> spare_budget) {
  ChainModel m;
  m.segments = segments;
  m.offload_rates = std::move(rates);
  m.segment_exec_rate = segments * task_exec_rate;
  m.failure_rate_per_worker = failure_rate;
  m.spare_budget = spare_budget;
  m.index = StateIndex(segments, spare_budget);
  m.generator = assemble_generator(m);
  m.embedded = embedded_dtmc(m);
  m.sojourn = sojourn_vector(m);
  return m;
}

void check_rates(int segments, const std::vector<double>& rates, double task_exec_rate) {
  require(segments >= 1, "chain: segments must be >= 1");
  require(rates.size() == static_cast<std::size_t>(segments),
          "chain: expected " + std::to_string(segments) + " offload rates, got " +
              std::to_string(rates.size()));
  for (double r : rates) {
    require(std::isfinite(r) && r > 0.0, "chain: offload rates must be finite and > 0");
  }
  require(std::isfinite(task_exec_rate) && task_exec_rate > 0.0,
          "chain: task_exec_rate must be finite and > 0");
}

double exit_rate(const SparseMatrix& q, std::size_t i) {
  return -q.coeff(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i));
}

// Transient states from which no absorbing state is reachable.
std::vector<std::size_t> trapped_states(const ChainModel& m) {
  const StateIndex& idx = m.index;
  const std::size_t size = idx.size();
  std::vector<std::vector<std::size_t>> reverse(size);
  for (std::size_t i = 0; i < idx.transient_count(); ++i) {
    for (SparseMatrix::InnerIterator it(m.generator, static_cast<Eigen::Index>(i)); it; ++it) {
      const auto j = static_cast<std::size_t>(it.col());
      if (j != i && it.value() > 0.0) reverse[j].push_back(i);
    }
  }
  std::vector<bool> reaches(size, false);
  std::deque<std::size_t> queue;
  for (std::size_t a = idx.transient_count(); a < size; ++a) {
    reaches[a] = true;
    queue.push_back(a);
  }
  while (!queue.empty()) {
    const std::size_t j = queue.front();
    queue.pop_front();
    for (std::size_t i : reverse[j]) {
      if (!reaches[i]) {
        reaches[i] = true;
        queue.push_back(i);
      }
    }
  }
  std::vector<std::size_t> trapped;
  for (std::size_t i = 0; i < idx.transient_count(); ++i) {
    if (!reaches[i]) trapped.push_back(i);
  }
  return trapped;
}

void ensure_absorbing_reachable(const ChainModel& m) {
  const auto trapped = trapped_states(m);
  if (trapped.empty()) return;
  std::vector<std::string> labels;
  for (std::size_t i : trapped) labels.push_back(m.index.label(i));
  std::ostringstream os;
  os << "chain: " << trapped.size() << " transient state(s) cannot reach absorption, first "
     << labels.front();
  throw StructuralError(os.str(), std::move(labels));
}

Eigen::SparseMatrix<double> transient_system(const ChainModel& m) {
  const auto t = static_cast<Eigen::Index>(m.index.transient_count());
  std::vector<Eigen::Triplet<double>> triplets;
  triplets.reserve(static_cast<std::size_t>(t) * 4);
  for (Eigen::Index i = 0; i < t; ++i) {
    triplets.emplace_back(i, i, 1.0);
    for (SparseMatrix::InnerIterator it(m.embedded, i); it; ++it) {
      if (it.col() < t) triplets.emplace_back(i, it.col(), -it.value());
    }
  }
  Eigen::SparseMatrix<double> a(t, t);
  a.setFromTriplets(triplets.begin(), triplets.end());
  a.makeCompressed();
  return a;
}

using TransientLU = Eigen::SparseLU<Eigen::SparseMatrix<double>>;

void factorize(const ChainModel& m, TransientLU& lu) {
  ensure_absorbing_reachable(m);
  lu.compute(transient_system(m));
  if (lu.info() != Eigen::Success) {
    throw StructuralError("chain: (I - P_T) is singular: " + lu.lastErrorMessage(), {});
  }
}

Eigen::VectorXd solve_with(TransientLU& lu, const Eigen::VectorXd& rhs) {
  Eigen::VectorXd x = lu.solve(rhs);
  if (lu.info() != Eigen::Success || !x.allFinite()) {
    throw StructuralError("chain: absorption system could not be solved", {});
  }
  return x;
}

Eigen::VectorXd solve_transient(const ChainModel& m, const Eigen::VectorXd& rhs) {
  TransientLU lu;
  factorize(m, lu);
  return solve_with(lu, rhs);
}

std::size_t initial_index(const ChainModel& m, const ChainState& s) {
  const int n = m.segments;
  require(s.finished >= 0 && s.computing >= 0 && s.finished + s.computing <= n,
          "chain: initial state " + s.to_string() + " is outside the state space");
  require(s.failures >= 0 && (m.spare_budget ? s.failures <= *m.spare_budget : s.failures == 0),
          "chain: initial failure count " + std::to_string(s.failures) + " is out of range");
  return m.index.index_of(s);
}

}  // namespace

std::string ChainState::to_string() const {
  std::ostringstream os;
  os << '(' << finished << ',' << computing;
  if (failures != 0) os << ",k=" << failures;
  os << ')';
  return os.str();
}

StateIndex::StateIndex(int segments, std::optional<int> spare_budget)
    : segments_(segments), spare_budget_(spare_budget) {
  require(segments >= 1, "StateIndex: segments must be >= 1");
  require(!spare_budget || *spare_budget >= 0, "StateIndex: spare_budget must be >= 0");
  const int layers = spare_budget ? *spare_budget + 1 : 1;
  for (int f = 0; f <= segments; ++f) {
    for (int c = 0; c <= segments - f; ++c) {
      offsets_.push_back(states_.size());
      if (f == segments) continue;  // (n, 0) is the success state
      for (int k = 0; k < layers; ++k) states_.push_back({f, c, k});
    }
  }
}

std::size_t StateIndex::fail_index() const {
  if (!has_fail_state()) throw DomainError("StateIndex: no FAIL state with unbounded spares");
  return states_.size() + 1;
}

std::size_t StateIndex::index_of(const ChainState& s) const {
  if (s.finished == segments_ && s.computing == 0) return success_index();
  const int layers = spare_budget_ ? *spare_budget_ + 1 : 1;
  if (s.finished < 0 || s.computing < 0 || s.finished + s.computing > segments_ ||
      s.failures < 0 || s.failures >= layers) {
    throw DomainError("StateIndex: no state " + s.to_string());
  }
  // Blocks for finished = f start after sum_{f' < f} (n - f' + 1) entries.
  const int f = s.finished;
  const auto block = static_cast<std::size_t>(f * (segments_ + 1) - f * (f - 1) / 2 + s.computing);
  return offsets_[block] + static_cast<std::size_t>(s.failures);
}

const ChainState& StateIndex::state_at(std::size_t index) const {
  if (index >= states_.size()) {
    throw DomainError("StateIndex: index " + std::to_string(index) + " is not transient");
  }
  return states_[index];
}

std::string StateIndex::label(std::size_t index) const {
  if (index < states_.size()) return states_[index].to_string();
  if (index == success_index()) return "(" + std::to_string(segments_) + ",0)";
  if (has_fail_state() && index == fail_index()) return "FAIL";
  return "<invalid " + std::to_string(index) + ">";
}

ChainModel build_baseline(int segments, double offload_rate, double task_exec_rate) {
  require(segments >= 1, "build_baseline: segments must be >= 1");
  std::vector<double> rates(static_cast<std::size_t>(segments), offload_rate);
  check_rates(segments, rates, task_exec_rate);
  return assemble(segments, std::move(rates), task_exec_rate, 0.0, std::nullopt);
}

ChainModel build_level_dependent(int segments, const std::vector<double>& offload_rates,
                                 double task_exec_rate) {
  check_rates(segments, offload_rates, task_exec_rate);
  return assemble(segments, offload_rates, task_exec_rate, 0.0, std::nullopt);
}

ChainModel build_failure_chain(int segments, const std::vector<double>& offload_rates,
                               double task_exec_rate, double reliability_l,
                               std::optional<int> spare_budget) {
  check_rates(segments, offload_rates, task_exec_rate);
  require(reliability_l > 0.0, "build_failure_chain: reliability_l must be > 0");
  require(!spare_budget || *spare_budget >= 0, "build_failure_chain: spare_budget must be >= 0");
  // l = inf switches failures off.
  const double gamma_n = task_exec_rate / reliability_l / segments;
  return assemble(segments, offload_rates, task_exec_rate, gamma_n, spare_budget);
}

SparseMatrix embedded_dtmc(const ChainModel& model) {
  const StateIndex& idx = model.index;
  std::vector<Eigen::Triplet<double>> triplets;
  std::vector<std::string> stuck;
  for (std::size_t i = 0; i < idx.transient_count(); ++i) {
    const double exit = exit_rate(model.generator, i);
    if (!(exit > 0.0) || !std::isfinite(exit)) {
      stuck.push_back(idx.label(i));
      continue;
    }
    for (SparseMatrix::InnerIterator it(model.generator, static_cast<Eigen::Index>(i)); it; ++it) {
      if (static_cast<std::size_t>(it.col()) != i && it.value() != 0.0) {
        triplets.emplace_back(static_cast<int>(i), static_cast<int>(it.col()), it.value() / exit);
      }
    }
  }
  if (!stuck.empty()) {
    const std::string what = "embedded_dtmc: transient state " + stuck.front() + " has no exit";
    throw StructuralError(what, std::move(stuck));
  }
  for (std::size_t a = idx.transient_count(); a < idx.size(); ++a) {
    triplets.emplace_back(static_cast<int>(a), static_cast<int>(a), 1.0);
  }
  const auto size = static_cast<Eigen::Index>(idx.size());
  SparseMatrix p(size, size);
  p.setFromTriplets(triplets.begin(), triplets.end());
  p.makeCompressed();
  return p;
}

Eigen::VectorXd sojourn_vector(const ChainModel& model) {
  const StateIndex& idx = model.index;
  Eigen::VectorXd w = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(idx.size()));
  for (std::size_t i = 0; i < idx.transient_count(); ++i) {
    const double exit = exit_rate(model.generator, i);
    w[static_cast<Eigen::Index>(i)] = exit > 0.0 ? 1.0 / exit : 0.0;
  }
  return w;
}

Eigen::VectorXd per_transition_sojourn_vector(const ChainModel& model) {
  const StateIndex& idx = model.index;
  Eigen::VectorXd w = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(idx.size()));
  for (std::size_t i = 0; i < idx.transient_count(); ++i) {
    const double exit = exit_rate(model.generator, i);
    if (!(exit > 0.0)) continue;
    double acc = 0.0;
    // Each clock's mean is the reciprocal of its rate, so P * t = 1 / exit per
    // transition; w is the exit-rate reciprocal times the number of exits.
    for_each_transition(model, i, [&](const Transition& t) { acc += (t.rate / exit) / t.rate; });
    w[static_cast<Eigen::Index>(i)] = acc;
  }
  return w;
}

DelayResult mean_absorption_time(const ChainModel& model, const ChainState& initial) {
  return mean_absorption_time(model, model.sojourn, initial);
}

DelayResult mean_absorption_time(const ChainModel& model, const Eigen::VectorXd& sojourn,
                                 const ChainState& initial) {
  const StateIndex& idx = model.index;
  require(sojourn.size() == static_cast<Eigen::Index>(idx.size()),
          "mean_absorption_time: sojourn vector has the wrong length");
  const std::size_t start = initial_index(model, initial);
  const auto t = static_cast<Eigen::Index>(idx.transient_count());
  const Eigen::VectorXd m = solve_transient(model, sojourn.head(t));

  DelayResult out;
  out.per_state_expected_remaining = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(idx.size()));
  out.per_state_expected_remaining.head(t) = m;
  out.mean_delay_s = out.per_state_expected_remaining[static_cast<Eigen::Index>(start)];
  return out;
}

double mean_delay(const ChainModel& model, SojournConvention convention) {
  if (convention == SojournConvention::HoldingTime) return mean_absorption_time(model).mean_delay_s;
  return mean_absorption_time(model, per_transition_sojourn_vector(model)).mean_delay_s;
}

double absorption_time_variance(const ChainModel& model, const ChainState& initial) {
  const StateIndex& idx = model.index;
  const std::size_t start = initial_index(model, initial);
  if (idx.is_absorbing(start)) return 0.0;
  const auto t = static_cast<Eigen::Index>(idx.transient_count());
  TransientLU lu;
  factorize(model, lu);
  const Eigen::VectorXd w = model.sojourn.head(t);
  const Eigen::VectorXd m = solve_with(lu, w);
  // T_i = S_i + T_J with S_i ~ Exp(1 / w_i) independent of the jump J, so
  // E[T_i^2] = 2 w_i^2 + 2 w_i (P_T m)_i + (P_T s)_i.
  const Eigen::VectorXd next = m - w;  // (P_T m) from m = w + P_T m
  const Eigen::VectorXd rhs = 2.0 * w.cwiseProduct(w) + 2.0 * w.cwiseProduct(next);
  const Eigen::VectorXd second = solve_with(lu, rhs);
  const auto s = static_cast<Eigen::Index>(start);
  return std::max(0.0, second[s] - m[s] * m[s]);
}

double completion_probability(const ChainModel& model, const ChainState& initial) {
  const StateIndex& idx = model.index;
  require(idx.has_fail_state(), "completion_probability: needs a finite spare budget");
  const std::size_t start = initial_index(model, initial);
  if (start == idx.success_index()) return 1.0;
  const auto t = static_cast<Eigen::Index>(idx.transient_count());
  const auto success = static_cast<Eigen::Index>(idx.success_index());
  Eigen::VectorXd b(t);
  for (Eigen::Index i = 0; i < t; ++i) b[i] = model.embedded.coeff(i, success);
  const Eigen::VectorXd rho = solve_transient(model, b);
  return std::clamp(rho[static_cast<Eigen::Index>(start)], 0.0, 1.0);
}

double worker_idle_probability(double task_exec_rate, double requester_intensity,
                               double worker_intensity) {
  require(std::isfinite(worker_intensity) && worker_intensity > 0.0,
          "worker_idle_probability: worker intensity must be > 0");
  require(std::isfinite(task_exec_rate) && task_exec_rate > 0.0,
          "worker_idle_probability: task_exec_rate must be > 0");
  require(std::isfinite(requester_intensity) && requester_intensity >= 0.0,
          "worker_idle_probability: requester intensity must be >= 0");
  return task_exec_rate / (task_exec_rate + requester_intensity / worker_intensity);
}

}  // namespace eec
