#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "domination/model.hpp"
#include "domination/profile.hpp"
#include "domination/quadrature.hpp"
#include "domination/simulate.hpp"

namespace domination {

using json = nlohmann::json;

struct AnalyticResult {
  double p1_00 = 0.0;
  AsymptoticProfile asymptotics;
};

/// p1(0,0) and the asymptotic profile from the matching contour solver.
/// Common-shock models are rejected with ValidationError.
AnalyticResult analytic(const ValidatedModel& vm, const quad::QuadOptions& opts = {});

/// Full solver output: constants, indices, asymptotics and diagnostics.
json solve_report(const ValidatedModel& vm, const quad::QuadOptions& opts = {});

json asymptotics_json(const AsymptoticProfile& profile);

json mc_json(const McEstimate& est, const McOptions& opts);

struct SweepSpec {
  double r1 = 2.5;
  double start = 0.6;
  double stop = 3.0;
  double step = 0.2;
  bool run_mc = true;
  McOptions mc;
  quad::QuadOptions quad;

  /// start + k step for k = 0, 1, ... up to stop (inclusive within 1e-9 step).
  [[nodiscard]] std::vector<double> grid() const;
};

struct SweepRow {
  double r2 = 0.0;
  double p1_analytic = 0.0;
  std::optional<McEstimate> mc;
  AsymptoticProfile asymptotics;
};

struct SweepResult {
  std::vector<SweepRow> rows;
  /// max |p1_analytic - p1_mc| / stderr over rows with MC.
  double max_z = 0.0;
  /// For Poisson sweeps: the uncorrelated Brownian model with the same means
  /// and variances, evaluated on the same grid.
  std::vector<double> companion;
  double max_companion_gap = 0.0;
};

/// Rejects the whole spec, naming the offending r2, if any grid point
/// violates the reflection condition.
SweepResult run_sweep(const Model& model, const SweepSpec& spec);

std::string sweep_csv(const SweepResult& result);
json sweep_summary(const Model& model, const SweepSpec& spec, const SweepResult& result);

/// Uncorrelated Brownian model with the means and variances of a
/// shock-free Poisson model.
BrownianModel moment_matched_brownian(const PoissonModel& pm);

}  // namespace domination
