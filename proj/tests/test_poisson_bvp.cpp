#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "domination/errors.hpp"
#include "domination/poisson_bvp.hpp"
#include "domination/rng.hpp"
#include "domination/simulate.hpp"
#include "fixtures.hpp"

using namespace domination;
using fixtures::example_poisson;
using fixtures::kR;

namespace {

constexpr double kPi = std::numbers::pi;
const cplx kI(0.0, 1.0);

// Contour value, confirmed by Monte-Carlo (0.7608 +- 0.0043, n = 1e4).
constexpr double kP1Example = 0.760096611753;
constexpr double kP1R2Is4 = 0.904981951912;

const PoissonBvp& example_bvp() {
  static const PoissonBvp bvp(validate(example_poisson(), kR));
  return bvp;
}

const PoissonBvp& example_mirror() {
  static const PoissonBvp bvp(mirror(validate(example_poisson(), kR)));
  return bvp;
}

cplx F1_anywhere(const PoissonBvp& b, const PoissonBvp& m, double s) {
  const auto& cd = b.curve();
  const double K = cd.F0 / cd.F0_tilde;
  const double r2q2 = b.model().r.r2 / b.model().poisson().q[1];
  return f1_by_continuation(b, m, s) + b.solution().F1_at_q2r2 + K * (1.0 / s - r2q2);
}

PoissonModel random_poisson(std::mt19937_64& gen, ReflectionPair& r) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (;;) {
    PoissonModel pm;
    for (int i = 0; i < 2; ++i) {
      pm.c[i] = 0.5 + 1.5 * u(gen);
      pm.q[i] = 1.0 + 7.0 * u(gen);
      // mean between -0.2 c and -2 c
      const double mean = -(0.2 + 1.8 * u(gen)) * pm.c[i];
      pm.lambda[i] = (pm.c[i] - mean) * pm.q[i];
    }
    r = {0.3 + 4.0 * u(gen), 0.3 + 4.0 * u(gen)};
    try {
      (void)validate(pm, r);
      return pm;
    } catch (const ValidationError&) {
    }
  }
}

}  // namespace

TEST_CASE("curve data of the example model") {
  const PoissonCurveData& cd = example_bvp().curve();
  const auto& x = cd.x();
  const double R = std::sqrt(32.0);
  CHECK(-4.0 < x[0]);
  CHECK(x[0] < x[1]);
  CHECK(x[1] < 0.0);
  CHECK(-4.0 + R < x[2]);
  CHECK(x[2] < x[3]);
  CHECK(cd.center == -4.0);
  CHECK(cd.radius == doctest::Approx(R).epsilon(1e-15));
  CHECK(cd.x0 == doctest::Approx(4.0).epsilon(1e-15));
  CHECK(cd.y0 == doctest::Approx(12.0).epsilon(1e-15));
  CHECK(cd.F0 == doctest::Approx(5.0 / 9.0).epsilon(1e-14));
  CHECK(cd.F0_tilde == doctest::Approx(19.0 / 24.0).epsilon(1e-14));
  CHECK(cd.s1p == doctest::Approx(-12.0 / 13.0).epsilon(1e-14));
  CHECK(26.0 * cd.s1p + 24.0 == doctest::Approx(0.0));
  CHECK(cd.s1p > -4.0);

  const Model& m = example_bvp().model().model;
  CHECK(std::abs(psi(m, cd.x0, 0.0)) < 1e-10);
  CHECK(std::abs(psi(m, 0.0, cd.y0)) < 1e-10);
  CHECK(std::abs(psi(m, cd.x0, cd.y0)) < 1e-10);

  const CurveSide& s = cd.side1;
  for (double t : {x[0] - 0.1, 0.5 * (x[1] + x[2]), x[3] + 1.0}) {
    CHECK(poly::evaluate(s.d, t) > 0.0);
  }
  for (double t : {0.5 * (x[0] + x[1]), 0.5 * (x[2] + x[3])}) {
    CHECK(poly::evaluate(s.d, t) < 0.0);
  }
}

TEST_CASE("branches of the zero set") {
  const PoissonCurveData& cd = example_bvp().curve();
  const Model& m = example_bvp().model().model;
  CHECK(branch_S(cd, 2, Branch::Plus, 1e-9).real() == doctest::Approx(12.0).epsilon(1e-8));
  CHECK(std::abs(psi(m, 2.0, branch_S(cd, 2, Branch::Plus, 2.0))) < 1e-10);
  const cplx far = branch_S(cd, 2, Branch::Plus, -1e6);
  CHECK(std::abs(far / 1e6 - 1.0) < 0.01);  // S2+ ~ -(c1/c2) s1
  std::mt19937_64 gen(1);
  std::uniform_real_distribution<double> u(-10.0, 10.0);
  for (int k = 0; k < 100; ++k) {
    const cplx s(u(gen), u(gen));
    for (int axis : {1, 2}) {
      for (Branch b : {Branch::Plus, Branch::Minus}) {
        const cplx S = branch_S(cd, axis, b, s);
        const cplx v = axis == 2 ? psi(m, s, S) : psi(m, S, s);
        CHECK(std::abs(v) < 1e-9 * (1.0 + std::norm(s)));
      }
    }
  }
}

TEST_CASE("gluing function") {
  const PoissonBvp& b = example_bvp();
  const double R = std::sqrt(32.0);
  CHECK(std::abs(b.w(-4.0 + R) - 1.0) < 1e-12);
  CHECK(std::abs(b.w(-4.0 - R) + 1.0) < 1e-12);
  std::mt19937_64 gen(2);
  std::uniform_real_distribution<double> th(-kPi, kPi);
  for (int k = 0; k < 50; ++k) {
    const cplx w = b.w(-4.0 + R * std::exp(kI * th(gen)));
    CHECK(std::abs(w.imag()) <= 1e-12);
    CHECK(w.real() >= -1.0 - 1e-12);
    CHECK(w.real() <= 1.0 + 1e-12);
  }
}

TEST_CASE("index from the criterion and from the winding") {
  CHECK(example_bvp().chi() == 1);
  CHECK(example_bvp().chi_winding() == 1);
  const PoissonBvp b4(validate(example_poisson(), {2.5, 4.0}));
  CHECK(b4.chi() == 0);
  CHECK(b4.chi_winding() == 0);

  std::mt19937_64 gen(77);
  int seen[2] = {0, 0};
  for (int k = 0; k < 12; ++k) {
    ReflectionPair r;
    const PoissonModel pm = random_poisson(gen, r);
    const PoissonBvp bvp(validate(pm, r));
    CAPTURE(k);
    CHECK(bvp.chi() == bvp.chi_winding());
    ++seen[bvp.chi()];
  }
  CHECK(seen[0] > 0);
  CHECK(seen[1] > 0);
}

TEST_CASE("solution of the example model") {
  const PoissonSolution& s = example_bvp().solution();
  CHECK(s.p1_00 == doctest::Approx(kP1Example).epsilon(1e-10));
  CHECK(s.p1_00 > 0.0);
  CHECK(s.p1_00 < 1.0);
  const PoissonSolution s4 = solve(validate(example_poisson(), {2.5, 4.0}));
  CHECK(s4.p1_00 == doctest::Approx(kP1R2Is4).epsilon(1e-10));
}

TEST_CASE("solution is reproducible across tolerances") {
  quad::QuadOptions loose;
  loose.tol = 1e-8;
  const PoissonBvp b(validate(example_poisson(), kR), loose);
  CHECK(std::abs(b.solution().p1_00 - kP1Example) < 1e-8);
  CHECK(std::abs(b.X(4.0) - example_bvp().X(4.0)) < 1e-8);
  CHECK(std::abs(example_bvp().X(4.0)) > 1e-3);
}

TEST_CASE("X at infinity and on the real axis") {
  const PoissonBvp& b = example_bvp();
  CHECK(std::abs(b.X(1e6) - 1.0) < 1e-5);
  for (double s : {2.0, 3.0, 4.0, 10.0, 100.0}) CHECK(std::abs(b.X(s).imag()) <= 1e-9);
  CHECK_THROWS_AS((void)b.X(0.0), DomainError);
}

TEST_CASE("boundary condition on the circle") {
  for (double r2 : {1.0, 4.0}) {
    const PoissonBvp b(validate(example_poisson(), {2.5, r2}));
    for (int k = 1; k <= 20; ++k) {
      const double th = -kPi + kPi * k / 21.0;
      const BoundaryValues v = b.boundary_values(th);
      CHECK(std::abs(v.upper - v.G * v.lower) <= 1e-7 * (1.0 + std::abs(v.lower)));
      CHECK(std::abs(v.G - b.G(v.t)) <= 1e-10 * std::abs(v.G));
    }
  }
}

TEST_CASE("limits of f1") {
  const PoissonBvp& b = example_bvp();
  CHECK(std::abs(b.f1(6.0)) < 1e-8);
  CHECK(std::abs(b.f1(1e6) - b.f1_infinity()) < 1e-7);
  const auto& cd = b.curve();
  CHECK(b.f1_infinity() ==
        doctest::Approx(cd.F0 / cd.F0_tilde / 6.0 - b.solution().F1_at_q2r2).epsilon(1e-14));
}

TEST_CASE("half-circle integral equals the full-circle integral of log(psi1/psi2)") {
  const PoissonBvp b(validate(example_poisson(), {2.5, 4.0}));
  REQUIRE(b.chi() == 0);
  const auto& cd = b.curve();
  const ValidatedModel& vm = b.model();
  auto Z = [&](double th) {
    const cplx t = b.circle_point(th);
    const auto k = kernel_psi12(vm, t, branch_S(cd, 2, Branch::Plus, t));
    return k[0] / k[1];
  };
  const quad::BranchTrackedLog logZ(Z, -kPi, kPi);
  REQUIRE(std::abs(logZ.total_variation()) < 1e-8);
  for (double s : {2.5, 4.0, 9.0}) {
    const cplx ws = b.w(s);
    const auto r = quad::integrate(
        [&](double th) {
          const cplx t = b.circle_point(th);
          const cplx dt = kI * (t - cd.center);
          return logZ(th) * b.w_prime(t) / (b.w(t) - ws) * dt;
        },
        -kPi, kPi);
    const cplx full = std::exp(r.value / (2.0 * kPi * kI));
    CHECK(std::abs(full - b.X(s)) < 1e-8);
  }
}

TEST_CASE("contour integral against a trapezoid reference") {
  const PoissonBvp& b = example_bvp();
  const cplx ws = b.w(4.0);
  auto integrand = [&](double th) {
    const cplx t = b.circle_point(th);
    return b.log_G(th) * b.w_prime(t) / (b.w(t) - ws) * (kI * (t - b.curve().center));
  };
  const int n = 1 << 16;
  const double h = kPi / n;
  cplx trap = 0.5 * (integrand(-kPi) + integrand(0.0));
  for (int k = 1; k < n; ++k) trap += integrand(-kPi + k * h);
  trap *= h / (2.0 * kPi * kI);
  const quad::Contour c = quad::Contour::half_circle_lower(b.curve().center, b.curve().radius);
  const auto r = quad::cauchy_integral(
      c, [&](double th) { return b.log_G(th); },
      [&](cplx t) { return b.w_prime(t) / (b.w(t) - ws); });
  CHECK(std::abs(r.value - trap) < 1e-8);
}

TEST_CASE("complementarity and rescaling") {
  const double p = example_bvp().solution().p1_00;
  CHECK(std::abs(p + example_mirror().solution().p1_00 - 1.0) < 1e-6);
  const ValidatedModel vm = validate(example_poisson(), kR);
  CHECK(std::abs(solve(rescale(vm, 0.5, 2.0)).p1_00 - p) < 1e-8);
  CHECK(std::abs(solve(rescale(vm, 3.0, 0.7)).p1_00 - p) < 1e-8);
  const ValidatedModel m = mirror(vm);
  CHECK(m.mu[0] == doctest::Approx(-2.0));
  CHECK(m.mu[1] == doctest::Approx(-1.0));
}

TEST_CASE("full transform at large arguments") {
  const cplx F = F_full(example_bvp(), example_mirror(), 1e4, 1e4);
  CHECK(std::abs(F * 1e8 - kP1Example) < 1e-4);
  // q1/r1 = 1.6 lies inside the mirrored circle, so the second argument
  // stays in the mirrored domain.
  const cplx Fs = F_full(example_bvp(), example_mirror(), 6.0 + 1e-3, 5.0);
  CHECK(std::isfinite(Fs.real()));
  CHECK(Fs.real() > 0.0);
}

TEST_CASE("asymptotic profile") {
  const AsymptoticProfile a = example_bvp().asymptotics();
  CHECK(a.kind == AsymptoticCase::Pole);
  CHECK(a.rate == doctest::Approx(-12.0 / 13.0));
  CHECK(a.order == 0.0);
  for (double r2 : {0.6, 1.4, 2.2, 3.0, 4.0}) {
    const AsymptoticProfile p = PoissonBvp(validate(example_poisson(), {2.5, r2})).asymptotics();
    CHECK(p.rate < 0.0);
    CHECK((p.order == 0.0 || p.order == -1.5 || p.order == -0.5));
  }
}

TEST_CASE("monotone in r2") {
  double last = 0.0;
  for (double r2 = 0.6; r2 <= 3.0 + 1e-9; r2 += 0.2) {
    const double p = solve(validate(example_poisson(), {2.5, r2})).p1_00;
    CHECK(p > last);
    last = p;
  }
}

TEST_CASE("shock models are outside the contour solver") {
  PoissonModel pm = example_poisson();
  pm.shock = CommonShock{0.5, 2.0, 3.0};
  CHECK_THROWS(PoissonBvp(validate(pm, kR)));
}

TEST_CASE("Laplace transform of p1(u, 0) against Monte-Carlo") {
  // s F1(s) = P(first component wins from (U, 0)) with U ~ Exp(s).
  const PoissonBvp& b = example_bvp();
  const ValidatedModel& vm = b.model();
  const int n = 20'000;
  for (double s : {0.5, 1.0}) {
    int wins = 0;
    for (int k = 0; k < n; ++k) {
      CounterRng rng(31, static_cast<std::uint64_t>(k));
      const double u = -std::log(rng.uniform_open()) / s;
      wins += simulate_poisson_path(vm, u, 0.0, StopRule{}, rng).winner == Winner::First;
    }
    const McEstimate e = make_estimate(static_cast<std::uint64_t>(wins), n);
    const double analytic = s * F1_anywhere(b, example_mirror(), s).real();
    CAPTURE(s);
    CAPTURE(e.p_hat);
    CAPTURE(analytic);
    CHECK(std::abs(e.p_hat - analytic) / s <= 0.02);
    CHECK(std::abs(e.p_hat - analytic) <= 3.0 * e.std_error);
  }
}
