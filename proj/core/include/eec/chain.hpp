#pragma once

#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/SparseCore>

namespace eec {

/// Worker-allocation progress of one task. `failures` counts replacements
/// already consumed and is only tracked when the spare budget is finite.
struct ChainState {
  int finished = 0;
  int computing = 0;
  int failures = 0;

  friend bool operator==(const ChainState&, const ChainState&) = default;
  std::string to_string() const;
};

/// Bijection between chain states and contiguous indices.
///
/// Transient states are ordered lexicographically by (finished, computing,
/// failures); index 0 is (0, 0, 0). The successful absorbing state (n, 0)
/// follows the transient states, and when the spare budget is finite a FAIL
/// state takes the last index.
class StateIndex {
 public:
  StateIndex(int segments, std::optional<int> spare_budget);

  int segments() const { return segments_; }
  const std::optional<int>& spare_budget() const { return spare_budget_; }

  std::size_t size() const { return states_.size() + 1 + (has_fail_state() ? 1 : 0); }
  std::size_t transient_count() const { return states_.size(); }

  bool has_fail_state() const { return spare_budget_.has_value(); }
  std::size_t success_index() const { return states_.size(); }
  /// Throws DomainError when the budget is unbounded.
  std::size_t fail_index() const;

  bool is_absorbing(std::size_t index) const { return index >= states_.size(); }

  /// Index of a state. (n, 0, *) maps to the success state.
  std::size_t index_of(const ChainState& s) const;
  /// Transient state at `index`; throws for absorbing indices.
  const ChainState& state_at(std::size_t index) const;
  std::string label(std::size_t index) const;

 private:
  int segments_;
  std::optional<int> spare_budget_;
  std::vector<ChainState> states_;
  std::vector<std::size_t> offsets_;  // first transient index of each (finished, computing) block
};

using SparseMatrix = Eigen::SparseMatrix<double, Eigen::RowMajor>;

/// Absorbing CTMC over (finished, computing[, failures]) with its embedded
/// jump chain and mean sojourn times. Immutable after construction.
struct ChainModel {
  int segments = 0;
  std::vector<double> offload_rates;  // rate for allocating the i-th worker, i = 1..n
  double segment_exec_rate = 0.0;     // n * mu_f
  double failure_rate_per_worker = 0.0;
  std::optional<int> spare_budget;    // nullopt: replacements never run out
  StateIndex index{1, std::nullopt};
  SparseMatrix generator;
  SparseMatrix embedded;
  Eigen::VectorXd sojourn;
};

/// Same offloading rate for every worker (random selection).
ChainModel build_baseline(int segments, double offload_rate, double task_exec_rate);

/// The (i+1)-th worker is allocated at offload_rates[i], where i counts the
/// workers allocated so far (finished + computing).
ChainModel build_level_dependent(int segments, const std::vector<double>& offload_rates,
                                 double task_exec_rate);

/// Level-dependent chain with worker failures at rate (mu_f / l) / n each. A
/// failed worker's segment returns to the unallocated pool. With a finite
/// spare budget, a failure that finds no spare left ends the task in FAIL.
ChainModel build_failure_chain(int segments, const std::vector<double>& offload_rates,
                               double task_exec_rate, double reliability_l,
                               std::optional<int> spare_budget);

/// Jump-chain transition matrix; absorbing rows carry a self-loop of 1.
/// Throws StructuralError when a transient state has no exit.
SparseMatrix embedded_dtmc(const ChainModel& model);

/// Mean holding time in each state: 1 / total exit rate for transient states,
/// 0 for absorbing states.
Eigen::VectorXd sojourn_vector(const ChainModel& model);

/// Per-transition convention w_i = sum_j P(i,j) * t(i,j), where t is the mean
/// of the clock that fired (1/lambda for an allocation, 1/(c mu) for a
/// completion, 1/(c gamma) for a failure). This is not the mean holding time
/// of the CTMC; it is kept as an alternative reading of the sojourn vector.
Eigen::VectorXd per_transition_sojourn_vector(const ChainModel& model);

/// Which sojourn vector enters the delay solve. HoldingTime is the CTMC mean
/// and matches trajectory simulation; PerTransition is the
/// alternative above.
enum class SojournConvention { HoldingTime, PerTransition };

struct DelayResult {
  double mean_delay_s = 0.0;
  Eigen::VectorXd per_state_expected_remaining;  // length L, zero at absorbing states
};

/// Mean time to absorption from `initial`, solving (I - P_T) m = w with a
/// sparse LU factorization. Throws StructuralError naming the states that
/// cannot reach absorption.
DelayResult mean_absorption_time(const ChainModel& model, const ChainState& initial = {});

/// Same linear system with a caller-supplied sojourn vector.
DelayResult mean_absorption_time(const ChainModel& model, const Eigen::VectorXd& sojourn,
                                 const ChainState& initial = {});

/// mean_absorption_time with the chosen sojourn convention, from (0, 0).
double mean_delay(const ChainModel& model, SojournConvention convention);

/// Variance of the absorption time from `initial`, using the CTMC holding
/// times (the default sojourn vector).
double absorption_time_variance(const ChainModel& model, const ChainState& initial = {});

/// Probability of reaching (n, 0) before FAIL. Requires a finite spare budget.
double completion_probability(const ChainModel& model, const ChainState& initial = {});

/// Stationary idle probability of the two-state worker chain
/// (idle -> busy at n nu_r / nu_w, busy -> idle at n mu_f); n cancels.
double worker_idle_probability(double task_exec_rate, double requester_intensity,
                               double worker_intensity);

}  // namespace eec
