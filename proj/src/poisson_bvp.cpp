#include "domination/poisson_bvp.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "domination/errors.hpp"

namespace domination {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr cplx kI{0.0, 1.0};

// Quadratic in the variable of component B with coefficients in the variable
// of component A.
CurveSide make_side(double cA, double cB, double lA, double lB, double qA, double qB) {
  CurveSide side;
  side.a = {cB * qA, cB};
  side.b = {-lB * qA + cB * qB * qA, cA * qA + cB * qB - lA - lB, cA};
  side.c = {0.0, cA * qA * qB - lA * qB, cA * qB};
  side.d = poly::add(poly::multiply(side.b, side.b), poly::multiply(side.a, side.c), -4.0);
  side.lead = cA;

  const auto d = [&](double s) { return poly::evaluate(side.d, s); };
  // Roots of b straddle 0 and x0 and separate the two pairs of roots of d.
  const double A = side.b[2];
  const double B = side.b[1];
  const double C = side.b[0];
  const double disc = std::sqrt(B * B - 4.0 * A * C);
  const double b_lo = B > 0.0 ? (-B - disc) / (2.0 * A) : 2.0 * C / (-B + disc);
  const double b_hi = C / (A * b_lo);
  const double x0 = lA / cA - qA;
  double far = std::max(2.0 * b_hi, 1.0);
  while (d(far) <= 0.0) far *= 2.0;
  side.roots = {poly::bisect(d, -qA, b_lo), poly::bisect(d, b_lo, 0.0),
                poly::bisect(d, x0, b_hi), poly::bisect(d, b_hi, far)};

  const auto eig = poly::companion_roots(side.d);
  for (double root : side.roots) {
    double best = INFINITY;
    for (const cplx& e : eig) best = std::min(best, std::abs(e - root));
    if (best > 1e-6 * std::max(1.0, std::abs(root))) {
      std::ostringstream msg;
      msg << "branch point " << root << " disagrees with companion eigenvalues (gap " << best
          << ")";
      throw NumericError(msg.str());
    }
  }
  return side;
}

}  // namespace

cplx CurveSide::sqrt_d(cplx s) const {
  return -lead * std::sqrt(s - roots[0]) * std::sqrt(s - roots[1]) * std::sqrt(s - roots[2]) *
         std::sqrt(s - roots[3]);
}

bool CurveSide::on_cut(cplx s, double tol) const {
  if (std::abs(s.imag()) > tol * std::max(1.0, std::abs(s))) return false;
  const double x = s.real();
  return (x >= roots[0] && x <= roots[1]) || (x >= roots[2] && x <= roots[3]);
}

cplx CurveSide::branch(Branch sign, cplx s) const {
  if (on_cut(s, 0.0)) {
    std::ostringstream msg;
    msg << "branch evaluation on a cut at s = " << s;
    throw DomainError(msg.str());
  }
  const cplx av = poly::evaluate(a, s);
  if (av == cplx{0.0, 0.0}) throw DomainError("branch evaluation at the pole of a(s)");
  const cplx root = sqrt_d(s);
  const cplx bv = poly::evaluate(b, s);
  return (sign == Branch::Plus ? -bv + root : -bv - root) / (2.0 * av);
}

PoissonCurveData curve_data(const ValidatedModel& vm) {
  if (!vm.is_poisson() || vm.poisson().has_shock()) {
    throw ValidationError("curve_data requires a Poisson model without common shocks");
  }
  const PoissonModel& pm = vm.poisson();
  const double c1 = pm.c[0], c2 = pm.c[1];
  const double l1 = pm.lambda[0], l2 = pm.lambda[1];
  const double q1 = pm.q[0], q2 = pm.q[1];
  const double r2 = vm.r.r2;

  PoissonCurveData cd;
  cd.side1 = make_side(c1, c2, l1, l2, q1, q2);
  cd.side2 = make_side(c2, c1, l2, l1, q2, q1);
  cd.x0 = l1 / c1 - q1;
  cd.y0 = l2 / c2 - q2;
  cd.center = -q1;
  cd.radius = std::sqrt(l1 * q1 / c1);
  const PoissonConstants k = poisson_constants(vm);
  cd.F0 = k.F0;
  cd.F0_tilde = k.F0_tilde;

  const double A = r2 * c2 - c1;
  const auto P = [&](double s) {
    return (s - q2 / r2) * (s + q1) * A + l2 * (s + q1) + l1 * (s - q2 / r2);
  };
  cd.s1p = poly::bisect(P, -q1, 0.0);
  if (A != 0.0) {
    const double B = A * (q1 - q2 / r2) + l2 + l1;
    cd.s1p_tilde = -B / A - cd.s1p;
  }

  const double x2 = cd.side1.roots[1];
  const double S2 = -poly::evaluate(cd.side1.b, x2) / (2.0 * poly::evaluate(cd.side1.a, x2));
  cd.psi1_at_x2 = kernel_psi12(vm, x2, S2)[0].real();
  cd.pole_flag = cd.psi1_at_x2 < 0.0;
  return cd;
}

cplx branch_S(const PoissonCurveData& cd, int axis, Branch sign, cplx s) {
  if (axis == 1) return cd.side2.branch(sign, s);
  if (axis == 2) return cd.side1.branch(sign, s);
  throw ValidationError("axis must be 1 or 2");
}

PoissonBvp::PoissonBvp(const ValidatedModel& vm, const quad::QuadOptions& opts)
    : vm_(vm), opts_(opts), cd_(curve_data(vm)) {
  const PoissonModel& pm = vm_.poisson();
  const double q1 = pm.q[0], q2 = pm.q[1];
  const double r2 = vm_.r.r2;
  const double edge = -q1 + cd_.radius;
  const double special = q2 / r2;
  if (std::abs(special - edge) <= 1e-12 * std::max(1.0, std::abs(edge))) {
    std::ostringstream msg;
    msg << "unsupported parameters: q2/r2 = " << special
        << " coincides with the right end of the circle; the index needs q2/r2 strictly "
           "above or below -q1 + sqrt(lambda1 q1 / c1)";
    throw ValidationError(msg.str());
  }
  sol_.chi = special > edge ? 1 : 0;
  sol_.F0 = cd_.F0;
  sol_.F0_tilde = cd_.F0_tilde;

  // G rather than psi1/psi2 is tracked: psi2 has a pole on C1 when S2+ passes
  // through q1/r1, which leaves G continuous.
  const auto G_on_circle = [this](double theta) { return G(circle_point(theta)); };
  tracked_ = std::make_shared<quad::BranchTrackedLog>(G_on_circle, -kPi, 0.0);
  chi_winding_ = quad::arg_variation(G_on_circle, -kPi, 0.0);
  if (chi_winding_ != sol_.chi) {
    std::ostringstream msg;
    msg << "index mismatch: inequality gives " << sol_.chi << ", winding number is "
        << chi_winding_;
    throw NumericError(msg.str());
  }
  const double end_turns = (tracked_->end_arg() - tracked_->begin_arg()) / (2.0 * kPi);
  if (std::abs(end_turns - sol_.chi) > 1e-6) {
    std::ostringstream msg;
    msg << "log G does not close at the right end of C1: arg G / 2 pi = " << end_turns;
    throw NumericError(msg.str());
  }

  const double ratio = cd_.F0 / cd_.F0_tilde;
  const double x0 = cd_.x0;
  const cplx Xx0 = X(x0);
  sol_.X_at_x0 = Xx0.real();
  const double psi1_x0 = kernel_psi12(vm_, x0, 0.0)[0].real();
  sol_.F1_at_q2r2 =
      ratio * r2 / q2 + cd_.F0 / sol_.X_at_x0 * ((1.0 / cd_.F0_tilde) * (1.0 / x0 - r2 / q2) +
                                                 1.0 / psi1_x0);

  // X(s) = 1 + lim/s + o(1/s): the prefactor contributes 2 R chi (1 - w(q2/r2)),
  // the exponential contributes -(R / i pi) * integral of log G w'.
  const double R = cd_.radius;
  const quad::QuadResult J = integral([this](cplx t) { return w_prime(t); });
  sol_.quad_panels += J.panels;
  sol_.quad_error += J.error_estimate;
  const double prefactor_term = 2.0 * R * sol_.chi * (1.0 - w(special).real());
  sol_.limit_sXm1 = prefactor_term - 2.0 * R * J.value.real();
  sol_.p1_00 = ratio + f1_infinity() * sol_.limit_sXm1;
  if (!(sol_.p1_00 >= -1e-6 && sol_.p1_00 <= 1.0 + 1e-6)) {
    std::ostringstream msg;
    msg << "consistency failure: p1(0,0) = " << sol_.p1_00 << " lies outside [0, 1]";
    throw NumericError(msg.str());
  }
}

cplx PoissonBvp::circle_point(double theta) const {
  return cd_.center + cd_.radius * std::polar(1.0, theta);
}

cplx PoissonBvp::w(cplx s) const {
  const cplx z = s - cd_.center;
  if (z == cplx{0.0, 0.0}) throw DomainError("w has a pole at s = -q1");
  return 0.5 * (z / cd_.radius + cd_.radius / z);
}

cplx PoissonBvp::w_prime(cplx s) const {
  const cplx z = s - cd_.center;
  return 0.5 * (1.0 / cd_.radius - cd_.radius / (z * z));
}

bool PoissonBvp::in_domain(cplx s) const {
  return std::norm(s - cd_.center) > cd_.radius * cd_.radius * (1.0 + 1e-12);
}

cplx PoissonBvp::log_G(double theta) const {
  const double arg = (*tracked_)(theta).imag();
  return kI * (arg - tracked_->begin_arg());
}

cplx PoissonBvp::G(cplx t) const {
  const cplx S = cd_.side1.branch(Branch::Plus, t);
  const auto k = kernel_psi12(vm_, t, S);
  const auto kc = kernel_psi12(vm_, std::conj(t), S);
  return k[0] / k[1] * (kc[1] / kc[0]);
}

quad::QuadResult PoissonBvp::integral(const std::function<cplx(cplx)>& kernel) const {
  const quad::Contour contour = quad::Contour::half_circle_lower(cd_.center, cd_.radius);
  return quad::cauchy_integral(contour, [this](double theta) { return log_G(theta); }, kernel,
                               opts_);
}

cplx PoissonBvp::X(cplx s) const {
  if (!in_domain(s)) {
    std::ostringstream msg;
    msg << "X is evaluated outside D1 at s = " << s;
    throw DomainError(msg.str());
  }
  const cplx ws = w(s);
  const quad::QuadResult r =
      integral([this, ws](cplx t) { return w_prime(t) / (w(t) - ws); });
  cplx pref = 1.0;
  if (sol_.chi == 1) {
    const double special = vm_.poisson().q[1] / vm_.r.r2;
    pref = (ws - w(special)) / (ws - 1.0);
  }
  return pref * std::exp(r.value);
}

double PoissonBvp::f1_infinity() const {
  return cd_.F0 / cd_.F0_tilde * vm_.r.r2 / vm_.poisson().q[1] - sol_.F1_at_q2r2;
}

cplx PoissonBvp::F1(cplx s) const {
  return cd_.F0 / cd_.F0_tilde / s + f1_infinity() * (X(s) - 1.0);
}

cplx PoissonBvp::f1(cplx s) const { return f1_infinity() * X(s); }

BoundaryValues PoissonBvp::boundary_values(double theta) const {
  if (!(theta > -kPi && theta < 0.0)) {
    throw DomainError("boundary values need theta strictly inside (-pi, 0)");
  }
  const cplx L0 = log_G(theta);
  const double u0 = std::cos(theta);
  const auto smooth = [&](double th) -> cplx {
    return (log_G(th) - L0) * (-std::sin(th)) / (std::cos(th) - u0);
  };
  quad::QuadOptions o = opts_;
  o.tol = opts_.tol * 1e-2;
  const cplx pv = quad::integrate(smooth, -kPi, theta, o).value +
                  quad::integrate(smooth, theta, 0.0, o).value +
                  L0 * std::log((1.0 - u0) / (1.0 + u0));
  const cplx core = pv / (2.0 * kPi * kI);
  cplx pref = 1.0;
  if (sol_.chi == 1) {
    const double special = vm_.poisson().q[1] / vm_.r.r2;
    pref = (u0 - w(special)) / (u0 - 1.0);
  }
  BoundaryValues bv;
  bv.t = circle_point(theta);
  bv.lower = f1_infinity() * pref * std::exp(core - 0.5 * L0);
  bv.upper = f1_infinity() * pref * std::exp(core + 0.5 * L0);
  bv.G = G(bv.t);
  return bv;
}

AsymptoticProfile PoissonBvp::asymptotics() const {
  return classify_asymptotics(cd_.psi1_at_x2, 1e-9 * vm_.poisson().c[1], cd_.s1p, cd_.x()[1]);
}

PoissonSolution solve(const ValidatedModel& vm, const quad::QuadOptions& opts) {
  return PoissonBvp(vm, opts).solution();
}

cplx f2_from_mirror(const PoissonBvp& bvp, const PoissonBvp& mirrored, cplx s2) {
  const PoissonModel& pm = bvp.model().poisson();
  const double r1 = bvp.model().r.r1;
  const double q1 = pm.q[0];
  const double ratio = bvp.curve().F0 / bvp.curve().F0_tilde;
  const cplx F2 = 1.0 / s2 - mirrored.F1(s2);
  const double F2_special = r1 / q1 - mirrored.solution().F1_at_q2r2;
  return F2 - F2_special - ratio * (1.0 / s2 - r1 / q1);
}

cplx f1_by_continuation(const PoissonBvp& bvp, const PoissonBvp& mirrored, cplx s1) {
  const cplx S = bvp.curve().side1.branch(Branch::Plus, s1);
  const auto k = kernel_psi12(bvp.model(), s1, S);
  return -k[1] * f2_from_mirror(bvp, mirrored, S) / k[0];
}

cplx F_full(const PoissonBvp& bvp, const PoissonBvp& mirrored, cplx s1, cplx s2) {
  const cplx p = psi(bvp.model().model, s1, s2);
  if (std::abs(p) < 1e-12) {
    throw DomainError("F_full is undefined on the zero set of psi; use the kernel residual instead");
  }
  const PoissonModel& pm = bvp.model().poisson();
  const double r1 = bvp.model().r.r1;
  const auto k = kernel_psi12(bvp.model(), s1, s2);
  const cplx F1 = bvp.F1(s1) - bvp.solution().F1_at_q2r2;
  const cplx F2 = (1.0 / s2 - mirrored.F1(s2)) - (r1 / pm.q[0] - mirrored.solution().F1_at_q2r2);
  return (k[0] * F1 + k[1] * F2 + bvp.curve().F0) / p;
}

}  // namespace domination
