#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "domination/model.hpp"
#include "domination/quadrature.hpp"

namespace domination {

struct CheckResult {
  std::string name;
  bool passed = false;
  bool skipped = false;
  /// Worst measured residual; for exact comparisons 0 or 1.
  double measured = 0.0;
  double tolerance = 0.0;
  std::string detail;
};

struct CheckReport {
  std::vector<CheckResult> results;

  [[nodiscard]] bool all_passed() const;
  [[nodiscard]] bool validation_failed() const;
  [[nodiscard]] const CheckResult* find(const std::string& name) const;
  [[nodiscard]] nlohmann::json to_json() const;
};

struct CheckOptions {
  int points = 20;
  std::uint64_t seed = 12345;
  double residual_tol = 1e-6;
  double complementarity_tol = 1e-6;
  double rescale_tol = 1e-8;
  quad::QuadOptions quad;
};

/// Runs the analytic invariants for one model: validation, zeros of the
/// Laplace exponent, kernel-equation residuals on the zero set, boundary
/// condition on the contour, index consistency, complementarity with the
/// mirrored model and invariance under rescaling. A validation failure skips
/// the numeric checks.
CheckReport run_checks(const Model& model, const ReflectionPair& r, const CheckOptions& opts = {});

}  // namespace domination
