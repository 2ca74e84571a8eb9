#include "domination/profile.hpp"

#include <cmath>

namespace domination {

std::string to_string(AsymptoticCase kind) {
  switch (kind) {
    case AsymptoticCase::Pole:
      return "pole";
    case AsymptoticCase::BranchPoint:
      return "branch_point";
    case AsymptoticCase::Tangent:
      return "tangent";
  }
  return "unknown";
}

AsymptoticProfile classify_asymptotics(double criterion, double zero_tol, double pole,
                                       double branch_point) {
  AsymptoticProfile out;
  out.criterion = criterion;
  if (std::abs(criterion) <= zero_tol) {
    out.kind = AsymptoticCase::Tangent;
    out.rate = branch_point;
    out.order = -0.5;
  } else if (criterion < 0.0) {
    out.kind = AsymptoticCase::Pole;
    out.rate = pole;
    out.order = 0.0;
  } else {
    out.kind = AsymptoticCase::BranchPoint;
    out.rate = branch_point;
    out.order = -1.5;
  }
  return out;
}

}  // namespace domination
