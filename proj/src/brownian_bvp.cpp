#include "domination/brownian_bvp.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>
#include <tuple>

#include "domination/errors.hpp"

namespace domination {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr cplx kI{0.0, 1.0};
// Branch tracking stops just short of the point at infinity (v = 1).
constexpr double kTrackEnd = 1.0 - 1e-9;

// Branch points of the discriminant of psi in the variable of component B,
// as a function of the variable of component A.
std::pair<double, double> branch_points(double muA, double muB, double sA, double sB, double rho) {
  const double m = muB * rho * sA * sB - muA * sB * sB;
  const double disc = std::sqrt(m * m + muB * muB * sA * sA * sB * sB * (1.0 - rho * rho));
  const double den = sA * sA * sB * sB * (1.0 - rho * rho);
  return {(m - disc) / den, (m + disc) / den};
}

double pole_s1p(double muA, double muB, double sA, double sB, double rho, double rB) {
  return -2.0 * (rB * std::abs(muB) - std::abs(muA)) /
         (sA * sA + sB * sB * rB * rB - 2.0 * rho * sA * sB * rB);
}

}  // namespace

std::string to_string(BrownianRegime regime) {
  switch (regime) {
    case BrownianRegime::Independent:
      return "independent";
    case BrownianRegime::Interior:
      return "interior";
    case BrownianRegime::Origin:
      return "origin";
  }
  return "unknown";
}

BrownianCurveData curve_data_bm(const ValidatedModel& vm) {
  if (!vm.is_brownian()) throw ValidationError("curve_data_bm requires a Brownian model");
  const BrownianModel& bm = vm.brownian();
  const double mu1 = bm.mu[0], mu2 = bm.mu[1];
  const double s1 = bm.sigma[0], s2 = bm.sigma[1];
  const double rho = bm.rho;

  BrownianCurveData cd;
  std::tie(cd.x_minus, cd.x_plus) = branch_points(mu1, mu2, s1, s2, rho);
  std::tie(cd.y_minus, cd.y_plus) = branch_points(mu2, mu1, s2, s1, rho);
  cd.x0 = -2.0 * mu1 / (s1 * s1);
  cd.y0 = -2.0 * mu2 / (s2 * s2);
  cd.s1p = pole_s1p(mu1, mu2, s1, s2, rho, vm.r.r2);
  cd.s2p = pole_s1p(mu2, mu1, s2, s1, rho, vm.r.r1);
  cd.beta = std::acos(-rho);

  cd.re0 = -mu1 / (s1 * s1);
  cd.re1 = -rho * s2 / s1;
  cd.dA = s1 * s1 * s2 * s2 * (rho * rho - 1.0);
  cd.dB = 2.0 * s1 * (mu1 * rho * s2 - mu2 * s1);
  cd.dC = mu1 * mu1;
  cd.scale = s1 * s1;
  cd.vertex = cd.re0 + cd.re1 * cd.y_plus;

  const double S2_xm = -(rho * s1 * s2 * cd.x_minus + mu2) / (s2 * s2);
  cd.psi1_at_xminus = kernel_psi12(vm, cd.x_minus, S2_xm)[0].real();
  cd.kappa1 = cd.vertex < 0.0 ? 1 : 0;
  cd.kappa2 = cd.psi1_at_xminus < 0.0 && cd.s1p > cd.vertex ? 1 : 0;
  cd.c_const = brownian_c(vm);
  cd.rho_threshold = 0.5 * s2 * mu1 / (s1 * mu2);
  return cd;
}

cplx branch_S_bm(const ValidatedModel& vm, const BrownianCurveData& cd, int axis, Branch sign,
                 cplx s) {
  const BrownianModel& bm = vm.brownian();
  const double rho = bm.rho;
  const double k = bm.sigma[0] * bm.sigma[1] * std::sqrt(1.0 - rho * rho);
  const double pm = sign == Branch::Plus ? 1.0 : -1.0;
  if (axis == 2) {
    const cplx root = k * std::sqrt(s - cd.x_minus) * std::sqrt(cd.x_plus - s);
    const double s2 = bm.sigma[1];
    return (-(rho * bm.sigma[0] * s2 * s + bm.mu[1]) + pm * root) / (s2 * s2);
  }
  if (axis == 1) {
    const cplx root = k * std::sqrt(s - cd.y_minus) * std::sqrt(cd.y_plus - s);
    const double s1 = bm.sigma[0];
    return (-(rho * s1 * bm.sigma[1] * s + bm.mu[0]) + pm * root) / (s1 * s1);
  }
  throw ValidationError("axis must be 1 or 2");
}

double p1_independent(const ValidatedModel& vm) {
  const BrownianModel& bm = vm.brownian();
  const double a1 = std::abs(bm.mu[0]), a2 = std::abs(bm.mu[1]);
  const double v1 = bm.sigma[0] * bm.sigma[0], v2 = bm.sigma[1] * bm.sigma[1];
  const double r1 = vm.r.r1, r2 = vm.r.r2;
  return r1 * (r2 * a2 - a1) * (v1 * a2 + r2 * v2 * a1) / (a1 * a2 * (r1 * r2 - 1.0) * (r1 * v1 + r2 * v2));
}

BrownianBvp::BrownianBvp(const ValidatedModel& vm, const quad::QuadOptions& opts)
    : vm_(vm), opts_(opts), cd_(curve_data_bm(vm)) {
  contour_ = quad::Contour::hyperbola_branch_lower(cd_.re0, cd_.re1, cd_.dA, cd_.dB, cd_.dC,
                                                   cd_.scale, cd_.y_plus);
  for (double v : {0.25, 0.5, 0.75, 0.95}) {
    const cplx t = contour_.point(v);
    const double y = contour_.hyperbola_y(v);
    const cplx S = branch_S_bm(vm_, cd_, 2, Branch::Plus, t);
    if (std::abs(S - y) > 1e-7 * std::max(1.0, y)) {
      std::ostringstream msg;
      msg << "H1 parametrization is off the S2+ branch at v = " << v << ": S2+(t) = " << S
          << ", y = " << y;
      throw NumericError(msg.str());
    }
  }
  // On H1 the S2+ branch equals the real parameter y exactly. The vertex is
  // real, so G = 1 there even when psi1 or psi2 vanishes at it.
  const auto G_on_branch = [this](double v) {
    if (v <= 0.0) return cplx(1.0);
    const cplx t = contour_.point(v);
    const double y = contour_.hyperbola_y(v);
    const auto k = kernel_psi12(vm_, t, y);
    const auto kc = kernel_psi12(vm_, std::conj(t), y);
    return k[0] / k[1] * (kc[1] / kc[0]);
  };
  tracked_ = std::make_shared<quad::BranchTrackedLog>(G_on_branch, 0.0, kTrackEnd);
  W_x0_ = W(cd_.x0);

  sol_.kappa1 = cd_.kappa1;
  sol_.kappa2 = cd_.kappa2;
  const double psi1_x0 = kernel_psi12(vm_, cd_.x0, 0.0)[0].real();
  sol_.C = -(1.0 / cd_.x0 + cd_.c_const / psi1_x0) / prefactor(W_x0_).real();

  const double y0 = cd_.y0;
  const double S = branch_S_bm(vm_, cd_, 1, Branch::Plus, y0).real();
  sol_.S1_plus_y0 = S;
  // In the origin regime S1+(y0) is zero up to rounding.
  const double zero_tol = 1e-10 * std::max(1.0, std::abs(cd_.x_plus));
  if (S < -zero_tol) {
    std::ostringstream msg;
    msg << "S1+(y0) = " << S << " is negative";
    throw NumericError(msg.str());
  }
  sol_.p1_interior_formula = std::numeric_limits<double>::quiet_NaN();
  if (S > zero_tol) {
    if (!in_domain(S)) {
      std::ostringstream msg;
      msg << "S1+(y0) = " << S << " lies outside G1";
      throw NumericError(msg.str());
    }
    const auto kS = kernel_psi12(vm_, S, y0);
    const double ps = kS[1].real();
    const double p0 = kernel_psi12(vm_, 0.0, y0)[1].real();
    const double s2 = vm_.brownian().sigma[1];
    const double ratio_mu = vm_.brownian().mu[0] / vm_.brownian().mu[1];
    const double CX = (sol_.C * X(S)).real();
    sol_.p1_interior_formula =
        0.5 * s2 * s2 * (vm_.r.r2 - ratio_mu) * ps /
        (cd_.c_const * (ps - p0) - p0 * kS[0].real() * (1.0 / S + CX));
  }

  const double rho = vm_.brownian().rho;
  if (rho == 0.0) {
    sol_.regime = BrownianRegime::Independent;
    sol_.p1_00 = p1_independent(vm_);
  } else if (rho < cd_.rho_threshold) {
    sol_.regime = BrownianRegime::Interior;
    sol_.p1_00 = sol_.p1_interior_formula;
  } else {
    sol_.regime = BrownianRegime::Origin;
    if (cd_.kappa1 != 1) {
      throw NumericError("origin regime requires the origin inside G1 (kappa1 = 1)");
    }
    const cplx W0 = W(0.0);
    cplx lim = std::exp(log_X_core(0.0)) / W_prime(0.0);
    if (cd_.kappa2 == 1) lim *= 1.0 / (W0 - W(cd_.s1p));
    sol_.p1_00 = 1.0 / (1.0 + sol_.C * lim.real());
  }
  sol_.quad_panels = panels_;
  sol_.quad_error = error_;
  if (!(sol_.p1_00 >= -1e-6 && sol_.p1_00 <= 1.0 + 1e-6)) {
    std::ostringstream msg;
    msg << "consistency failure: p1(0,0) = " << sol_.p1_00 << " lies outside [0, 1]";
    throw NumericError(msg.str());
  }
}

cplx BrownianBvp::W(cplx s) const {
  const double a = kPi / cd_.beta;
  const cplx z = (2.0 * s - (cd_.x_plus + cd_.x_minus)) / (cd_.x_plus - cd_.x_minus);
  const cplx zeta = z + std::sqrt(z - 1.0) * std::sqrt(z + 1.0);
  if (zeta.imag() == 0.0 && zeta.real() <= 0.0) {
    std::ostringstream msg;
    msg << "W is evaluated on its cut at s = " << s;
    throw DomainError(msg.str());
  }
  return 0.5 * (std::pow(zeta, a) + std::pow(zeta, -a));
}

cplx BrownianBvp::W_prime(cplx s) const {
  const double a = kPi / cd_.beta;
  const double dz = 2.0 / (cd_.x_plus - cd_.x_minus);
  const cplx z = (2.0 * s - (cd_.x_plus + cd_.x_minus)) / (cd_.x_plus - cd_.x_minus);
  if (std::abs(z - 1.0) < 1e-10) return dz * a * a;
  const cplx root = std::sqrt(z - 1.0) * std::sqrt(z + 1.0);
  const cplx zeta = z + root;
  if (std::abs(zeta) < 1e-300 || (zeta.imag() == 0.0 && zeta.real() <= 0.0)) {
    std::ostringstream msg;
    msg << "W' is evaluated on its cut at s = " << s;
    throw DomainError(msg.str());
  }
  return dz * a * (std::pow(zeta, a) - std::pow(zeta, -a)) / (2.0 * root);
}

bool BrownianBvp::in_domain(cplx s) const {
  const double im = cd_.scale * s.imag();
  const double C = cd_.dC + im * im;
  const double y = (cd_.dB + std::sqrt(cd_.dB * cd_.dB - 4.0 * cd_.dA * C)) / (-2.0 * cd_.dA);
  const double boundary = cd_.re0 + cd_.re1 * y;
  return s.real() > boundary + 1e-12 * std::max(1.0, std::abs(boundary));
}

cplx BrownianBvp::log_G(double v) const {
  const double arg = (*tracked_)(v).imag();
  return kI * (arg - tracked_->begin_arg());
}

cplx BrownianBvp::G(cplx t) const {
  const cplx S = branch_S_bm(vm_, cd_, 2, Branch::Plus, t);
  const auto k = kernel_psi12(vm_, t, S);
  const auto kc = kernel_psi12(vm_, std::conj(t), S);
  return k[0] / k[1] * (kc[1] / kc[0]);
}

cplx BrownianBvp::prefactor(cplx Ws) const {
  cplx pref = 1.0;
  if (cd_.kappa1 == 1) pref /= Ws - W(0.0);
  if (cd_.kappa2 == 1) pref /= Ws - W(cd_.s1p);
  return pref;
}

cplx BrownianBvp::log_X_core(cplx s) const {
  const cplx Ws = W(s);
  const cplx Wx0 = W_x0_;
  const quad::QuadResult r = quad::cauchy_integral(
      contour_, [this](double v) { return log_G(v); },
      [this, Ws, Wx0](cplx t) {
        const cplx Wt = W(t);
        return W_prime(t) * (Ws - Wx0) / ((Wt - Ws) * (Wt - Wx0));
      },
      opts_);
  panels_ += r.panels;
  error_ += r.error_estimate;
  return r.value;
}

cplx BrownianBvp::X(cplx s) const {
  if (!in_domain(s)) {
    std::ostringstream msg;
    msg << "X is evaluated outside G1 at s = " << s;
    throw DomainError(msg.str());
  }
  return prefactor(W(s)) * std::exp(log_X_core(s));
}

cplx BrownianBvp::F1(cplx s) const { return sol_.p1_00 * (1.0 / s + sol_.C * X(s)); }

cplx BrownianBvp::f1(cplx s) const { return sol_.p1_00 * sol_.C * X(s); }

BrownianBoundaryValues BrownianBvp::boundary_values(double v) const {
  if (!(v > 0.0 && v < 1.0)) {
    throw DomainError("boundary values need v strictly inside (0, 1)");
  }
  const cplx L0 = log_G(v);
  const cplx t0 = contour_.point(v);
  const double u0 = W(t0).real();
  const double ux = W_x0_.real();
  const auto smooth = [&](double tau) -> cplx {
    const cplx t = contour_.point(tau);
    const cplx Wt = W(t);
    return -(log_G(tau) - L0) * (u0 - ux) * W_prime(t) * contour_.tangent(tau) /
           ((Wt - u0) * (Wt - ux));
  };
  quad::QuadOptions o = opts_;
  o.tol = opts_.tol * 1e-2;
  const cplx pv = quad::integrate(smooth, 0.0, v, o).value +
                  quad::integrate(smooth, v, 1.0, o).value +
                  L0 * std::log((-1.0 - u0) / (ux + 1.0));
  const cplx core = pv / (2.0 * kPi * kI);
  const cplx scale = sol_.p1_00 * sol_.C * prefactor(u0);
  BrownianBoundaryValues bv;
  bv.t = t0;
  bv.lower = scale * std::exp(core - 0.5 * L0);
  bv.upper = scale * std::exp(core + 0.5 * L0);
  bv.G = G(t0);
  return bv;
}

AsymptoticProfile asymptotics_bm(const ValidatedModel& vm, const BrownianCurveData& cd) {
  return classify_asymptotics(cd.psi1_at_xminus, 1e-9 * std::abs(vm.brownian().mu[1]), cd.s1p,
                              cd.x_minus);
}

AsymptoticProfile BrownianBvp::asymptotics() const { return asymptotics_bm(vm_, cd_); }

BrownianSolution solve_bm(const ValidatedModel& vm, const quad::QuadOptions& opts) {
  const BrownianModel& bm = vm.brownian();
  const double rt = 0.5 * bm.sigma[1] * bm.mu[0] / (bm.sigma[0] * bm.mu[1]);
  constexpr double window = 1e-4;
  constexpr double h = 2.0 * window;
  if (bm.rho == 0.0 || std::abs(bm.rho - rt) >= window) return BrownianBvp(vm, opts).solution();

  // Next to the regime threshold the vertex of H1 sits on the origin and the
  // contour integrand has a boundary layer of width |rho - rt|; p1 is smooth
  // in rho there, so it is interpolated from solves at rt +- h, rt +- 2h.
  std::array<double, 4> nodes{rt - 2 * h, rt - h, rt + h, rt + 2 * h};
  if (nodes[3] >= 1.0) nodes = {rt - 4 * h, rt - 3 * h, rt - 2 * h, rt - h};
  if (nodes[0] <= 0.0) nodes = {rt + h, rt + 2 * h, rt + 3 * h, rt + 4 * h};
  std::array<BrownianSolution, 4> sols;
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    BrownianModel shifted = bm;
    shifted.rho = nodes[i];
    sols[i] = BrownianBvp(validate(shifted, vm.r), opts).solution();
  }
  double p = 0.0;
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    double w = 1.0;
    for (std::size_t j = 0; j < nodes.size(); ++j)
      if (j != i) w *= (bm.rho - nodes[j]) / (nodes[i] - nodes[j]);
    p += w * sols[i].p1_00;
  }
  BrownianSolution sol = bm.rho < rt ? sols[1] : sols[2];
  sol.regime = bm.rho < rt ? BrownianRegime::Interior : BrownianRegime::Origin;
  sol.p1_00 = p;
  sol.threshold_bridge = true;
  for (const auto& s : sols) {
    sol.quad_panels += s.quad_panels;
    sol.quad_error = std::max(sol.quad_error, s.quad_error);
  }
  return sol;
}

cplx f2_from_mirror(const BrownianBvp& bvp, const BrownianBvp& mirrored, cplx s2) {
  return 1.0 / s2 - mirrored.F1(s2) - bvp.solution().p1_00 / s2;
}

cplx f1_by_continuation(const BrownianBvp& bvp, const BrownianBvp& mirrored, cplx s1) {
  const cplx S = branch_S_bm(bvp.model(), bvp.curve(), 2, Branch::Plus, s1);
  const auto k = kernel_psi12(bvp.model(), s1, S);
  return -k[1] * f2_from_mirror(bvp, mirrored, S) / k[0];
}

}  // namespace domination
