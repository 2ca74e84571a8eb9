#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "domination/errors.hpp"
#include "domination/poly.hpp"
#include "domination/profile.hpp"
#include "domination/quadrature.hpp"

using namespace domination;
using quad::cplx;

constexpr double kPi = std::numbers::pi;
const cplx kI(0.0, 1.0);

TEST_CASE("Gauss-Legendre rules integrate polynomials exactly") {
  for (int n : {2, 5, 16, 32}) {
    const auto& gl = quad::GaussLegendre::get(n);
    REQUIRE(gl.nodes.size() == static_cast<std::size_t>(n));
    double wsum = 0.0;
    for (double w : gl.weights) wsum += w;
    CHECK(wsum == doctest::Approx(2.0).epsilon(1e-14));
    for (int deg = 0; deg < 2 * n; ++deg) {
      double s = 0.0;
      for (int k = 0; k < n; ++k) s += gl.weights[k] * std::pow(gl.nodes[k], deg);
      const double exact = deg % 2 ? 0.0 : 2.0 / (deg + 1);
      CHECK(std::abs(s - exact) < 1e-13);
    }
  }
}

TEST_CASE("adaptive integration") {
  auto r = quad::integrate([](double x) { return cplx(std::exp(x), std::sin(x)); }, 0.0, 2.0);
  CHECK(std::abs(r.value - cplx(std::exp(2.0) - 1.0, 1.0 - std::cos(2.0))) < 1e-12);

  r = quad::integrate([](double x) { return cplx(std::sqrt(x)); }, 0.0, 1.0);
  CHECK(std::abs(r.value.real() - 2.0 / 3.0) < 1e-10);
  CHECK(r.panels > 4);

  r = quad::integrate([](double x) { return cplx(1.0 / (1e-4 + x * x)); }, -1.0, 1.0);
  CHECK(std::abs(r.value.real() - 2.0 * std::atan(100.0) * 100.0) < 1e-8);

  quad::QuadOptions shallow;
  shallow.max_depth = 2;
  CHECK_THROWS_AS(quad::integrate([](double x) { return cplx(1.0 / std::sqrt(std::abs(x))); },
                                  -1.0, 1.0, shallow),
                  NumericError);
}

TEST_CASE("half circle contour") {
  const auto c = quad::Contour::half_circle_lower(cplx(-4.0, 0.0), std::sqrt(32.0));
  CHECK(std::abs(c.point(c.param_begin()) - cplx(-4.0 - std::sqrt(32.0), 0.0)) < 1e-14);
  CHECK(std::abs(c.point(c.param_end()) - cplx(-4.0 + std::sqrt(32.0), 0.0)) < 1e-14);
  for (int k = 0; k <= 100; ++k) {
    const double th = c.param_begin() + (c.param_end() - c.param_begin()) * k / 100.0;
    CHECK(c.point(th).imag() <= 1e-15);
    CHECK(std::abs(std::abs(c.point(th) + 4.0) - std::sqrt(32.0)) < 1e-13);
    const double h = 1e-6;
    const cplx fd = (c.point(th + h) - c.point(th - h)) / (2.0 * h);
    CHECK(std::abs(fd - c.tangent(th)) < 1e-7);
  }
}

TEST_CASE("hyperbola contour points satisfy the curve equation") {
  // (2 Im)^2 = 0.2 (y + 1)(y - 6), vertex at y = 6.
  const double dA = -0.2, dB = 1.0, dC = 1.2;
  const auto c = quad::Contour::hyperbola_branch_lower(1.0, 0.5, dA, dB, dC, 2.0, 6.0);
  CHECK(c.orientation() == -1.0);
  for (int k = 0; k < 100; ++k) {
    const double v = 0.99 * k / 100.0;
    const double y = c.hyperbola_y(v);
    const cplx p = c.point(v);
    CHECK(y >= 6.0);
    CHECK(p.imag() <= 0.0);
    CHECK(std::abs(p.real() - (1.0 + 0.5 * y)) < 1e-10 * (1.0 + y));
    const double lhs = (2.0 * p.imag()) * (2.0 * p.imag());
    CHECK(std::abs(lhs + (dA * y * y + dB * y + dC)) < 1e-10 * (1.0 + y * y));
  }
}

TEST_CASE("arg_variation") {
  CHECK(quad::arg_variation([](double th) { return std::exp(kI * th); }, -kPi, kPi) == 1);
  CHECK(quad::arg_variation([](double th) { return std::exp(-2.0 * kI * th); }, -kPi, kPi) ==
        -2);
  CHECK(quad::arg_variation([](double) { return cplx(3.0, -1.0); }, -kPi, kPi) == 0);
  CHECK(quad::arg_variation([](double th) { return 2.0 + std::exp(kI * th); }, -kPi, kPi) == 0);
  CHECK(quad::arg_variation([](double th) { return std::exp(kI * th) * (3.0 + std::exp(kI * th)); },
                            -kPi, kPi) == 1);
}

TEST_CASE("branch-tracked logarithm") {
  // arg of exp(3i t) climbs through several sheets.
  const quad::BranchTrackedLog L([](double t) { return 2.0 * std::exp(3.0 * kI * t); }, 0.0,
                                 2.0 * kPi);
  CHECK(L.total_variation() == doctest::Approx(6.0 * kPi).epsilon(1e-12));
  CHECK(L.max_increment() < 0.5);
  for (double t : {0.1, 1.7, 3.3, 5.9}) {
    CHECK(std::abs(L(t) - cplx(std::log(2.0), 3.0 * t)) < 1e-12);
  }
  const auto& a = L.unwrapped_args();
  for (std::size_t k = 1; k < a.size(); ++k) CHECK(std::abs(a[k] - a[k - 1]) < kPi);
}

TEST_CASE("Cauchy integral elementary cases") {
  const auto c = quad::Contour::half_circle_lower(cplx(0.0, 0.0), 1.0);
  const auto zero = quad::cauchy_integral(c, [](double) { return cplx(0.0); },
                                          [](cplx t) { return 1.0 / (t - 5.0); });
  CHECK(std::abs(zero.value) == 0.0);

  // log g constant: (1/2 pi i) log g * integral dt/(t - s) over the lower half circle
  // from -1 to 1 equals log g * (log(1 - s) - log(-1 - s)) / (2 pi i).
  const cplx lg(0.3, -0.2);
  const cplx s(3.0, 0.5);
  const auto r = quad::cauchy_integral(c, [&](double) { return lg; },
                                       [&](cplx t) { return 1.0 / (t - s); });
  const cplx expected = lg * (std::log(1.0 - s) - std::log(-1.0 - s)) / (2.0 * kPi * kI);
  CHECK(std::abs(r.value - expected) < 1e-12);

  // Invariance under doubling the starting panels.
  quad::QuadOptions o;
  o.initial_panels = 8;
  const auto r2 = quad::cauchy_integral(c, [&](double) { return lg; },
                                        [&](cplx t) { return 1.0 / (t - s); }, o);
  CHECK(std::abs(r2.value - r.value) < 1e-12);
}

TEST_CASE("polynomial helpers") {
  const poly::Coeffs p = poly::multiply({-1.0, 1.0}, {-2.0, 1.0});  // (x-1)(x-2)
  CHECK(p == poly::Coeffs{2.0, -3.0, 1.0});
  CHECK(poly::add({1.0, 2.0}, {0.0, 1.0, 4.0}, 2.0) == poly::Coeffs{1.0, 4.0, 8.0});
  CHECK(poly::evaluate(p, 3.0) == 2.0);
  CHECK(std::abs(poly::evaluate(p, cplx(1.0, 1.0)) - cplx(-1.0, -1.0)) < 1e-15);

  // Roots 1..4.
  poly::Coeffs q{1.0};
  for (double r : {1.0, 2.0, 3.0, 4.0}) q = poly::multiply(q, {-r, 1.0});
  auto roots = poly::companion_roots(q);
  REQUIRE(roots.size() == 4);
  std::sort(roots.begin(), roots.end(), [](cplx a, cplx b) { return a.real() < b.real(); });
  for (int k = 0; k < 4; ++k) CHECK(std::abs(roots[k] - cplx(k + 1.0, 0.0)) < 1e-10);

  const double b = poly::bisect([&](double x) { return poly::evaluate(q, x); }, 2.5, 3.5);
  CHECK(b == doctest::Approx(3.0).epsilon(1e-15));
  CHECK_THROWS_AS(poly::bisect([](double x) { return x * x + 1.0; }, -1.0, 1.0), NumericError);
}

TEST_CASE("asymptotic case dispatch") {
  auto a = classify_asymptotics(-0.382, 1e-9, -1.0, -1.2);
  CHECK(a.kind == AsymptoticCase::Pole);
  CHECK(a.rate == -1.0);
  CHECK(a.order == 0.0);
  a = classify_asymptotics(0.1, 1e-9, -1.0, -1.2);
  CHECK(a.kind == AsymptoticCase::BranchPoint);
  CHECK(a.rate == -1.2);
  CHECK(a.order == -1.5);
  a = classify_asymptotics(1e-12, 1e-9, -1.0, -1.2);
  CHECK(a.kind == AsymptoticCase::Tangent);
  CHECK(a.order == -0.5);
  CHECK(to_string(AsymptoticCase::Pole) == "pole");
}
