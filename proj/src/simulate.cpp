#include "domination/simulate.hpp"

#include <algorithm>
#include <atomic>
#include <cassert>
#include <cmath>
#include <exception>
#include <mutex>
#include <random>
#include <sstream>
#include <thread>
#include <vector>

#include "domination/errors.hpp"

namespace domination {

LcpSolution lcp_solve(double x1, double x2, const ReflectionPair& r) {
  if (x1 >= 0.0 && x2 >= 0.0) {
    return {x1, x2, 0.0, 0.0};
  }
  if (x1 < std::min(r.r2 * x2, 0.0)) {
    return {0.0, x2 - r.r1 * x1, -x1, 0.0};
  }
  if (x2 < std::min(r.r1 * x1, 0.0)) {
    return {x1 - r.r2 * x2, 0.0, 0.0, -x2};
  }
  // Wedge: both injections active.
  const double det = r.r1 * r.r2 - 1.0;
  return {0.0, 0.0, (x1 - r.r2 * x2) / det, (x2 - r.r1 * x1) / det};
}

namespace {

inline bool decided(double y1, double y2, const StopRule& stop, Winner& winner) {
  if (y1 > stop.level && y2 < stop.ratio * y1) {
    winner = Winner::First;
    return true;
  }
  if (y2 > stop.level && y1 < stop.ratio * y2) {
    winner = Winner::Second;
    return true;
  }
  return false;
}

PathOutcome crossed(PathOutcome out, double t, std::uint64_t k, double y1, double y2) {
  out.crossed = true;
  out.t_stop = t;
  out.n_events = k;
  out.y1 = y1;
  out.y2 = y2;
  return out;
}

[[noreturn]] void throw_inconclusive(const StopRule& stop) {
  std::ostringstream msg;
  msg << "path undecided after " << stop.max_events << " events (stop rule: level " << stop.level
      << ", ratio " << stop.ratio << ")";
  throw InconclusiveError(msg.str());
}

}  // namespace

PathOutcome simulate_poisson_path(const ValidatedModel& vm, double u, double v, const StopRule& stop,
                                  CounterRng& rng, const PathObserver& observer) {
  const PoissonModel& pm = vm.poisson();
  const double lam_common = pm.has_shock() ? pm.shock->lambda : 0.0;
  const double total_rate = lam_common + pm.lambda[0] + pm.lambda[1];
  const double p_common = lam_common / total_rate;
  const double p_first = (lam_common + pm.lambda[0]) / total_rate;
  const double inv_q1 = 1.0 / pm.q[0];
  const double inv_q2 = 1.0 / pm.q[1];
  const double inv_qb1 = pm.shock ? 1.0 / pm.shock->qbar1 : 0.0;
  const double inv_qb2 = pm.shock ? 1.0 / pm.shock->qbar2 : 0.0;

  double y1 = u;
  double y2 = v;
  double l1 = 0.0;
  double l2 = 0.0;
  double t = 0.0;
  if (observer) observer({t, y1, y2, l1, l2, EventType::Start});

  PathOutcome out;
  for (std::uint64_t k = 1; k <= stop.max_events; ++k) {
    const double tau = -std::log(rng.uniform_open()) / total_rate;
    t += tau;
    // Positive drifts: no injection is needed between jump epochs.
    double x1 = y1 + pm.c[0] * tau;
    double x2 = y2 + pm.c[1] * tau;
    const double pick = rng.uniform_open();
    EventType type;
    if (pick < p_common) {
      const double j = -std::log(rng.uniform_open());
      x1 -= j * inv_qb1;
      x2 -= j * inv_qb2;
      type = EventType::Common;
    } else if (pick < p_first) {
      x1 += std::log(rng.uniform_open()) * inv_q1;
      type = EventType::Individual1;
    } else {
      x2 += std::log(rng.uniform_open()) * inv_q2;
      type = EventType::Individual2;
    }
    const LcpSolution s = lcp_solve(x1, x2, vm.r);
    y1 = s.y1;
    y2 = s.y2;
    l1 += s.l1;
    l2 += s.l2;
    assert(y1 >= 0.0 && y2 >= 0.0);
    if (observer) observer({t, y1, y2, l1, l2, type});
    if (decided(y1, y2, stop, out.winner)) {
      out.t_stop = t;
      out.n_events = k;
      return out;
    }
    if (y1 < stop.floor1) return crossed(out, t, k, y1, y2);
  }
  throw_inconclusive(stop);
}

PathOutcome simulate_brownian_path(const ValidatedModel& vm, double u, double v, double dt,
                                   const StopRule& stop, CounterRng& rng,
                                   const PathObserver& observer) {
  if (!(dt > 0.0)) throw ValidationError("time step dt must be positive");
  const BrownianModel& bm = vm.brownian();
  const double sq = std::sqrt(dt);
  const double m1 = bm.mu[0] * dt;
  const double m2 = bm.mu[1] * dt;
  // Cholesky factor of dt * Sigma.
  const double a11 = bm.sigma[0] * sq;
  const double a21 = bm.rho * bm.sigma[1] * sq;
  const double a22 = std::sqrt(1.0 - bm.rho * bm.rho) * bm.sigma[1] * sq;
  const bool independent = bm.rho == 0.0;

  std::normal_distribution<double> normal;
  double y1 = u;
  double y2 = v;
  double l1 = 0.0;
  double l2 = 0.0;
  if (observer) observer({0.0, y1, y2, l1, l2, EventType::Start});

  PathOutcome out;
  for (std::uint64_t k = 1; k <= stop.max_events; ++k) {
    const double z1 = normal(rng);
    const double z2 = normal(rng);
    const double x1 = y1 + m1 + a11 * z1;
    const double x2 = y2 + m2 + (independent ? a22 * z2 : a21 * z1 + a22 * z2);
    const LcpSolution s = lcp_solve(x1, x2, vm.r);
    y1 = s.y1;
    y2 = s.y2;
    l1 += s.l1;
    l2 += s.l2;
    assert(y1 >= 0.0 && y2 >= 0.0);
    if (observer) observer({static_cast<double>(k) * dt, y1, y2, l1, l2, EventType::Step});
    if (decided(y1, y2, stop, out.winner)) {
      out.t_stop = static_cast<double>(k) * dt;
      out.n_events = k;
      return out;
    }
    if (y1 < stop.floor1) return crossed(out, static_cast<double>(k) * dt, k, y1, y2);
  }
  throw_inconclusive(stop);
}

McEstimate make_estimate(std::uint64_t successes, std::uint64_t n) {
  McEstimate e;
  e.n = n;
  e.p_hat = n ? static_cast<double>(successes) / static_cast<double>(n) : 0.0;
  e.std_error = n ? std::sqrt(e.p_hat * (1.0 - e.p_hat) / static_cast<double>(n)) : 0.0;
  e.ci_low = std::clamp(e.p_hat - 1.96 * e.std_error, 0.0, 1.0);
  e.ci_high = std::clamp(e.p_hat + 1.96 * e.std_error, 0.0, 1.0);
  return e;
}

unsigned default_parallelism() {
  const unsigned hw = std::thread::hardware_concurrency();
  return hw ? hw : 1;
}

McEstimate mc_estimate(const ValidatedModel& vm, double u, double v, const McOptions& opts) {
  if (opts.n < 1) throw ValidationError("mc_estimate: n must be at least 1");
  if (u < 0.0 || v < 0.0) throw ValidationError("starting point must lie in the quadrant");
  if (!(opts.stop.level > 0.0)) throw ValidationError("stop level must be positive");
  if (!(opts.stop.ratio > 0.0 && opts.stop.ratio < 1.0))
    throw ValidationError("stop ratio must lie in (0, 1)");
  if (opts.stop.max_events < 1) throw ValidationError("max_events must be at least 1");
  const unsigned workers =
      static_cast<unsigned>(std::min<std::uint64_t>(opts.parallelism ? opts.parallelism : default_parallelism(), opts.n));

  struct Tally {
    std::uint64_t wins = 0;
    std::uint64_t retried = 0;
    std::uint64_t unresolved = 0;
    std::uint64_t events = 0;
  };
  std::vector<Tally> tallies(workers);
  std::exception_ptr failure;
  std::mutex failure_mutex;

  auto run = [&](unsigned w) {
    try {
      Tally& tally = tallies[w];
      for (std::uint64_t k = w; k < opts.n; k += workers) {
        bool done = false;
        for (int attempt = 0; attempt <= opts.max_retries && !done; ++attempt) {
          CounterRng rng(opts.seed, k, static_cast<std::uint64_t>(attempt));
          try {
            const PathOutcome out = vm.is_poisson()
                                        ? simulate_poisson_path(vm, u, v, opts.stop, rng)
                                        : simulate_brownian_path(vm, u, v, opts.dt, opts.stop, rng);
            tally.wins += out.winner == Winner::First ? 1 : 0;
            tally.events += out.n_events;
            if (attempt > 0) ++tally.retried;
            done = true;
          } catch (const InconclusiveError&) {
            tally.events += opts.stop.max_events;
          }
        }
        if (!done) ++tally.unresolved;
      }
    } catch (...) {
      std::lock_guard lock(failure_mutex);
      if (!failure) failure = std::current_exception();
    }
  };

  if (workers == 1) {
    run(0);
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(run, w);
  }
  if (failure) std::rethrow_exception(failure);

  Tally total;
  for (const Tally& t : tallies) {
    total.wins += t.wins;
    total.retried += t.retried;
    total.unresolved += t.unresolved;
    total.events += t.events;
  }
  const double frac =
      static_cast<double>(total.retried + total.unresolved) / static_cast<double>(opts.n);
  if (total.unresolved > 0 || frac > opts.max_inconclusive_fraction) {
    std::ostringstream msg;
    msg << "Monte-Carlo run inconclusive: " << total.unresolved << " unresolved and "
        << total.retried << " retried replications out of " << opts.n
        << " (stop rule: level " << opts.stop.level << ", ratio " << opts.stop.ratio
        << ", max_events " << opts.stop.max_events << ")";
    throw InconclusiveError(msg.str());
  }
  McEstimate e = make_estimate(total.wins, opts.n);
  e.retried = total.retried;
  e.total_events = total.events;
  return e;
}

SplittingEstimate miss_probability_splitting(const ValidatedModel& vm, double u, double v,
                                             const std::vector<double>& levels, int split,
                                             const McOptions& opts) {
  if (opts.n < 2) throw ValidationError("splitting: n must be at least 2");
  if (split < 1) throw ValidationError("splitting: split factor must be at least 1");
  if (u < 0.0 || v < 0.0) throw ValidationError("starting point must lie in the quadrant");
  for (std::size_t i = 0; i < levels.size(); ++i) {
    if (!(levels[i] < (i == 0 ? u : levels[i - 1])) || !(levels[i] > 0.0))
      throw ValidationError("splitting: levels must decrease strictly from u and stay positive");
  }

  SplittingEstimate est;
  est.roots = opts.n;
  double sum = 0.0;
  double sum_sq = 0.0;
  // Sub-path ids start above any retry index of mc_estimate.
  constexpr std::uint64_t kFirstNode = std::uint64_t{1} << 32;
  for (std::uint64_t k = 0; k < opts.n; ++k) {
    std::uint64_t node = kFirstNode;
    double root_miss = 0.0;
    struct Task {
      double y1;
      double y2;
      std::size_t level;
      double weight;
    };
    std::vector<Task> stack{{u, v, 0, 1.0}};
    while (!stack.empty()) {
      const Task task = stack.back();
      stack.pop_back();
      StopRule stop = opts.stop;
      if (task.level < levels.size()) stop.floor1 = levels[task.level];
      CounterRng rng(opts.seed, k, node++);
      const PathOutcome out =
          vm.is_poisson() ? simulate_poisson_path(vm, task.y1, task.y2, stop, rng)
                          : simulate_brownian_path(vm, task.y1, task.y2, opts.dt, stop, rng);
      ++est.paths;
      est.total_events += out.n_events;
      if (out.crossed) {
        for (int c = 0; c < split; ++c)
          stack.push_back({out.y1, out.y2, task.level + 1, task.weight / split});
      } else if (out.winner == Winner::Second) {
        root_miss += task.weight;
      }
    }
    sum += root_miss;
    sum_sq += root_miss * root_miss;
  }
  const double n = static_cast<double>(opts.n);
  est.miss = sum / n;
  est.std_error = std::sqrt(std::max(0.0, sum_sq / n - est.miss * est.miss) / (n - 1.0));
  return est;
}

}  // namespace domination
