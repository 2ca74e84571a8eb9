#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "domination/brownian_bvp.hpp"
#include "domination/errors.hpp"
#include "fixtures.hpp"

using namespace domination;
using fixtures::example_bm;
using fixtures::kR;

namespace {

const double kSqrt5 = std::sqrt(5.0);

BrownianBvp make(double rho, ReflectionPair r = kR) { return BrownianBvp(validate(example_bm(rho), r)); }

}  // namespace

TEST_CASE("branch points and pole candidates of the example") {
  const BrownianCurveData cd = curve_data_bm(validate(example_bm(), kR));
  CHECK(cd.x_plus == doctest::Approx(1.0 + kSqrt5).epsilon(1e-14));
  CHECK(cd.x_minus == doctest::Approx(1.0 - kSqrt5).epsilon(1e-14));
  CHECK(cd.y_plus == doctest::Approx(2.0 + kSqrt5).epsilon(1e-14));
  CHECK(cd.y_minus == doctest::Approx(2.0 - kSqrt5).epsilon(1e-14));
  CHECK(cd.x0 == doctest::Approx(2.0));
  CHECK(cd.y0 == doctest::Approx(4.0));
  CHECK(cd.s1p == doctest::Approx(-1.0).epsilon(1e-14));
  CHECK(cd.s2p == doctest::Approx(-4.0 / 29.0).epsilon(1e-14));
  CHECK(cd.beta == doctest::Approx(std::acos(0.0)));
  CHECK(cd.vertex == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(cd.kappa1 == 0);
  CHECK(cd.kappa2 == 0);
  CHECK(cd.c_const == doctest::Approx(1.75));
  CHECK(cd.rho_threshold == doctest::Approx(0.25));
  CHECK(cd.psi1_at_xminus == doctest::Approx(-2.0 + 0.5 * (1.0 + kSqrt5)).epsilon(1e-13));
}

TEST_CASE("curve invariants over correlations") {
  for (double rho : {0.0, 0.1, 0.2, 0.25, 0.5, 0.9}) {
    CAPTURE(rho);
    const ValidatedModel vm = validate(example_bm(rho), kR);
    const BrownianCurveData cd = curve_data_bm(vm);
    CHECK(cd.x_minus < 0.0);
    CHECK(cd.x_plus > 0.0);
    CHECK(cd.y_minus < 0.0);
    CHECK(cd.y_plus > 0.0);
    CHECK(std::abs(psi(vm.model, cd.x0, 0.0)) < 1e-12);
    CHECK(std::abs(psi(vm.model, 0.0, cd.y0)) < 1e-12);
    if (rho == 0.0) CHECK(std::abs(psi(vm.model, cd.x0, cd.y0)) < 1e-12);
    CHECK(cd.s1p < 0.0);
    CHECK(cd.s2p < 0.0);

    std::mt19937_64 gen(4);
    std::uniform_real_distribution<double> u(-6.0, 6.0);
    for (int k = 0; k < 30; ++k) {
      const cplx s(u(gen), u(gen));
      for (int axis : {1, 2}) {
        for (Branch b : {Branch::Plus, Branch::Minus}) {
          const cplx S = branch_S_bm(vm, cd, axis, b, s);
          const cplx v = axis == 2 ? psi(vm.model, s, S) : psi(vm.model, S, s);
          CHECK(std::abs(v) < 1e-10 * (1.0 + std::norm(s)));
        }
      }
    }
  }
}

TEST_CASE("contour and gluing function") {
  for (double rho : {0.0, 0.2, 0.5}) {
    CAPTURE(rho);
    const BrownianBvp b = make(rho);
    const quad::Contour& c = b.contour();
    CHECK(std::abs(b.W(b.curve().x_plus) - 1.0) < 1e-12);
    for (int k = 0; k < 50; ++k) {
      const double v = 0.98 * (k + 0.5) / 50.0;
      const cplx t = c.point(v);
      CHECK(t.imag() <= 0.0);
      if (rho == 0.0) CHECK(t.real() == doctest::Approx(1.0).epsilon(1e-12));
      const cplx S = branch_S_bm(b.model(), b.curve(), 2, Branch::Plus, t);
      CHECK(std::abs(psi(b.model().model, t, S)) < 1e-9 * (1.0 + std::norm(t)));
      CHECK(std::abs(b.W(t) - b.W(std::conj(t))) <= 1e-10 * (1.0 + std::abs(b.W(t))));
      CHECK(std::abs(b.W(t).imag()) <= 1e-9 * (1.0 + std::abs(b.W(t))));
    }
  }
}

TEST_CASE("rho = 0 closed form") {
  const BrownianBvp b = make(0.0);
  CHECK(b.solution().regime == BrownianRegime::Independent);
  CHECK(std::abs(b.solution().p1_00 - 5.0 / 7.0) < 1e-9);
  CHECK(std::abs(p1_independent(b.model()) - 5.0 / 7.0) < 1e-15);
  CHECK(b.solution().C == doctest::Approx(1.0 / 12.0).epsilon(1e-9));
  CHECK(std::abs(b.solution().p1_interior_formula - 5.0 / 7.0) < 1e-9);
}

TEST_CASE("general formula near rho = 0") {
  const BrownianSolution s = solve_bm(validate(example_bm(1e-4), kR));
  CHECK(s.regime == BrownianRegime::Interior);
  CHECK(std::abs(s.p1_00 - 5.0 / 7.0) < 1e-3);
  CHECK(std::abs(s.p1_00 - 0.714284200343) < 1e-9);
}

TEST_CASE("regimes and frozen values") {
  const BrownianSolution s2 = solve_bm(validate(example_bm(0.2), kR));
  CHECK(s2.regime == BrownianRegime::Interior);
  CHECK(to_string(s2.regime) == "interior");
  CHECK(s2.p1_00 == doctest::Approx(0.710844332427).epsilon(1e-10));
  CHECK(s2.C == doctest::Approx(5.0 / 52.0).epsilon(1e-9));
  CHECK(s2.S1_plus_y0 == doctest::Approx(0.4).epsilon(1e-10));

  const BrownianSolution s5 = solve_bm(validate(example_bm(0.5), kR));
  CHECK(s5.regime == BrownianRegime::Origin);
  CHECK(s5.kappa1 == 1);
  CHECK(s5.p1_00 == doctest::Approx(0.703329123394).epsilon(1e-10));
  CHECK(std::isnan(s5.p1_interior_formula));

  // Tie at the threshold goes to the origin branch.
  CHECK(solve_bm(validate(example_bm(0.25), kR)).regime == BrownianRegime::Origin);
}

TEST_CASE("continuity across the regime threshold") {
  const auto p = [](double rho) { return solve_bm(validate(example_bm(rho), kR)); };
  const BrownianSolution tie = p(0.25);
  CHECK(tie.threshold_bridge);
  CHECK(tie.p1_00 == doctest::Approx(0.709828577052).epsilon(1e-10));
  for (double d : {1e-8, 1e-6, 5e-5}) {
    const BrownianSolution below = p(0.25 - d);
    const BrownianSolution above = p(0.25 + d);
    CHECK(below.regime == BrownianRegime::Interior);
    CHECK(above.regime == BrownianRegime::Origin);
    // Slope of p1 in rho at the threshold is about -0.021.
    CHECK(std::abs(below.p1_00 - above.p1_00) < 0.03 * 2 * d + 1e-12);
  }
  // Direct solves just outside the window agree with the interpolant.
  for (double d : {-1.5e-4, 1.5e-4}) {
    CHECK_FALSE(p(0.25 + d).threshold_bridge);
    const BrownianModel inside = example_bm(0.25 + 0.99e-4 * (d > 0 ? 1 : -1));
    const double bridged = solve_bm(validate(inside, kR)).p1_00;
    const double direct = BrownianBvp(validate(inside, kR)).solution().p1_00;
    CHECK(std::abs(bridged - direct) < 1e-9);
  }
}

TEST_CASE("S1+(y0) lies in the domain and on the nonnegative axis") {
  for (double rho : {0.05, 0.2, 0.5, 0.9}) {
    const BrownianBvp b = make(rho);
    CHECK(b.solution().S1_plus_y0 >= -1e-12);
    CHECK(b.in_domain(b.solution().S1_plus_y0 + 1e-9));
  }
}

TEST_CASE("complementarity and rescaling") {
  for (double rho : {0.0, 1e-4, 0.2, 0.5, 0.9}) {
    CAPTURE(rho);
    const ValidatedModel vm = validate(example_bm(rho), kR);
    const double p = solve_bm(vm).p1_00;
    CHECK(p > 0.0);
    CHECK(p < 1.0);
    CHECK(std::abs(p + solve_bm(mirror(vm)).p1_00 - 1.0) < 1e-6);
    CHECK(std::abs(solve_bm(rescale(vm, 0.5, 2.0)).p1_00 - p) < 1e-8);
  }
}

TEST_CASE("boundary condition on the hyperbola") {
  for (double rho : {0.0, 0.2, 0.5}) {
    CAPTURE(rho);
    const BrownianBvp b = make(rho);
    for (int k = 1; k <= 20; ++k) {
      const BrownianBoundaryValues v = b.boundary_values(0.95 * k / 21.0);
      CHECK(std::abs(v.upper - v.G * v.lower) <= 1e-6 * (1.0 + std::abs(v.lower)));
    }
  }
}

TEST_CASE("f1 vanishes at infinity") {
  for (double rho : {0.0, 0.2, 0.5}) CHECK(std::abs(make(rho).f1(1e6)) <= 1e-5);
}

TEST_CASE("homogeneous kernel equation through the mirrored solution") {
  for (double rho : {0.0, 0.2, 0.5}) {
    CAPTURE(rho);
    const BrownianBvp b = make(rho);
    const BrownianBvp m(mirror(b.model()));
    int tested = 0;
    for (double re : {0.5, 1.5, 2.5, 3.0, 4.0, 6.0, 10.0}) {
      for (double im : {0.0, 0.7, -1.3, 3.0}) {
        const cplx s1(re, im);
        if (!b.in_domain(s1)) continue;
        cplx cont;
        try {
          cont = f1_by_continuation(b, m, s1);
        } catch (const DomainError&) {
          continue;
        }
        const cplx direct = b.f1(s1);
        CHECK(std::abs(direct - cont) <= 1e-6 * (1.0 + std::abs(direct)));
        ++tested;
      }
    }
    CHECK(tested >= 20);
  }
}

TEST_CASE("asymptotic profile of the example") {
  const AsymptoticProfile a = make(0.0).asymptotics();
  CHECK(a.kind == AsymptoticCase::Pole);
  CHECK(a.rate == doctest::Approx(-1.0));
  CHECK(a.order == 0.0);
  CHECK(a.criterion == doctest::Approx(-0.381966011).epsilon(1e-8));
  for (double rho : {0.2, 0.5, 0.9}) {
    const AsymptoticProfile p = make(rho).asymptotics();
    CHECK(p.rate < 0.0);
    CHECK((p.order == 0.0 || p.order == -1.5 || p.order == -0.5));
  }
}

TEST_CASE("monotone in r2") {
  double last = 0.0;
  for (double r2 = 0.6; r2 <= 3.0 + 1e-9; r2 += 0.2) {
    const double p = solve_bm(validate(example_bm(0.2), {2.5, r2})).p1_00;
    CHECK(p > last);
    last = p;
  }
}
