#pragma once

#include "domination/model.hpp"

namespace fixtures {

inline domination::PoissonModel example_poisson() {
  domination::PoissonModel pm;
  pm.c = {1.0, 1.0};
  pm.lambda = {8.0, 18.0};
  pm.q = {4.0, 6.0};
  return pm;
}

inline domination::BrownianModel example_bm(double rho = 0.0) {
  domination::BrownianModel bm;
  bm.mu = {-1.0, -2.0};
  bm.sigma = {1.0, 1.0};
  bm.rho = rho;
  return bm;
}

inline const domination::ReflectionPair kR{2.5, 1.0};

}  // namespace fixtures
