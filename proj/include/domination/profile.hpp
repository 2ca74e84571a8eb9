#pragma once

#include <string>

namespace domination {

/// Which singularity of F1 governs the decay of 1 - p1(u, 0).
enum class AsymptoticCase { Pole, BranchPoint, Tangent };

/// 1 - p1(u,0) ~ C u^order e^{rate u}; the prefactor is not computed.
struct AsymptoticProfile {
  double rate = 0.0;
  double order = 0.0;
  AsymptoticCase kind = AsymptoticCase::Pole;
  /// psi1 evaluated at the left branch point, whose sign selects the case.
  double criterion = 0.0;
};

std::string to_string(AsymptoticCase kind);

/// Negative criterion: pole. Positive: branch point with u^{-3/2}.
/// |criterion| <= zero_tol: branch point with u^{-1/2}.
AsymptoticProfile classify_asymptotics(double criterion, double zero_tol, double pole,
                                       double branch_point);

}  // namespace domination
