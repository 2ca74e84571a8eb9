#pragma once

#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <vector>

#include "domination/model.hpp"
#include "domination/rng.hpp"

namespace domination {

/// Solution of the static complementarity problem
///   y1 = x1 + l1 + r2 l2,  y2 = x2 + r1 l1 + l2,  y, l >= 0,  l_i y_i = 0.
struct LcpSolution {
  double y1 = 0.0;
  double y2 = 0.0;
  double l1 = 0.0;
  double l2 = 0.0;
};

/// Region dispatch of the reflection map. Inside the ambiguous wedge
/// {x < 0, x1 >= r2 x2, x2 >= r1 x1} both components are reset to zero.
LcpSolution lcp_solve(double x1, double x2, const ReflectionPair& r);

enum class Winner { First, Second };

struct PathOutcome {
  Winner winner = Winner::First;
  double t_stop = 0.0;
  std::uint64_t n_events = 0;
  /// Y1 dropped below StopRule::floor1; (y1, y2) is the state at that time.
  bool crossed = false;
  double y1 = 0.0;
  double y2 = 0.0;
};

/// A run stops with winner First once Y1 > level and Y2/Y1 < ratio, and
/// symmetrically for Second; checked at jump epochs or grid points.
/// It also ends, undecided and with crossed set, once Y1 < floor1.
struct StopRule {
  double level = 100.0;
  double ratio = 0.1;
  std::uint64_t max_events = 50'000'000;
  double floor1 = -std::numeric_limits<double>::infinity();
};

enum class EventType { Start, Common, Individual1, Individual2, Step };

/// One row of a diagnostic path dump.
struct PathEvent {
  double t;
  double y1;
  double y2;
  double l1;
  double l2;
  EventType type;
};

using PathObserver = std::function<void(const PathEvent&)>;

/// Exact event-driven simulation of the reflected compound Poisson process.
/// Throws InconclusiveError when max_events is exhausted.
PathOutcome simulate_poisson_path(const ValidatedModel& vm, double u, double v, const StopRule& stop,
                                  CounterRng& rng, const PathObserver& observer = nullptr);

/// Euler scheme for the reflected Brownian motion: Gaussian increments with
/// mean mu dt and covariance dt Sigma, followed by lcp_solve.
PathOutcome simulate_brownian_path(const ValidatedModel& vm, double u, double v, double dt,
                                   const StopRule& stop, CounterRng& rng,
                                   const PathObserver& observer = nullptr);

struct McOptions {
  std::uint64_t n = 10'000;
  std::uint64_t seed = 1;
  unsigned parallelism = 1;
  double dt = 0.01;
  StopRule stop{};
  int max_retries = 3;
  double max_inconclusive_fraction = 0.01;
};

struct McEstimate {
  double p_hat = 0.0;
  std::uint64_t n = 0;
  double std_error = 0.0;
  double ci_low = 0.0;
  double ci_high = 0.0;
  /// Replications that needed at least one fresh sub-stream.
  std::uint64_t retried = 0;
  std::uint64_t total_events = 0;
};

/// Builds an estimate from a success count: stderr = sqrt(p(1-p)/n),
/// ci = p -/+ 1.96 stderr clipped to [0,1].
McEstimate make_estimate(std::uint64_t successes, std::uint64_t n);

/// Monte-Carlo estimate of p1(u,v). Replication k draws from the stream
/// (seed, k, attempt); the result does not depend on parallelism.
McEstimate mc_estimate(const ValidatedModel& vm, double u, double v, const McOptions& opts);

struct SplittingEstimate {
  double miss = 0.0;
  double std_error = 0.0;
  std::uint64_t roots = 0;
  std::uint64_t paths = 0;
  std::uint64_t total_events = 0;
};

/// Estimate of 1 - p1(u,v) by fixed splitting on the first component. A
/// run whose Y1 first drops below levels[j] is continued by `split`
/// independent copies from that state, each with 1/split of its weight.
/// Unbiased for any decreasing levels; the stderr comes from the spread of
/// the opts.n root totals. Runs on one thread; replication k and its copies
/// draw from streams (seed, k, node).
SplittingEstimate miss_probability_splitting(const ValidatedModel& vm, double u, double v,
                                             const std::vector<double>& levels, int split,
                                             const McOptions& opts);

/// Number of hardware threads to use when the caller passes 0.
unsigned default_parallelism();

}  // namespace domination
