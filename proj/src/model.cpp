#include "domination/model.hpp"

#include <cassert>
#include <cmath>
#include <sstream>
#include <string>

#include "domination/errors.hpp"

namespace domination {

namespace {

void require_positive(double value, const char* name) {
  if (!(value > 0.0) || !std::isfinite(value)) {
    std::ostringstream msg;
    msg << "parameter " << name << " must be a finite positive number, got " << value;
    throw ValidationError(msg.str());
  }
}

void require_finite(double value, const char* name) {
  if (!std::isfinite(value)) {
    throw ValidationError(std::string("parameter ") + name + " must be finite");
  }
}

bool nearly_equal(double a, double b) {
  return std::abs(a - b) <= 1e-12 * std::max(std::abs(a), std::abs(b));
}

cplx checked_div(cplx num, cplx den, const char* what) {
  if (den == cplx{0.0, 0.0}) {
    throw DomainError(std::string("zero denominator in ") + what);
  }
  return num / den;
}

// Case "alpha1 > 0, alpha2 <= 0" of the common-shock kernel, written for
// the given parameter set. The other single-sign case is obtained by label
// swap in shock_kernel().
ShockKernel shock_kernel_first_positive(const PoissonModel& m, const ReflectionPair& r, cplx s1,
                                        cplx s2) {
  const CommonShock& sh = *m.shock;
  const double lam = sh.lambda;
  const double qb1 = sh.qbar1;
  const double qb2 = sh.qbar2;
  const double a1 = r.r1 / qb1 - 1.0 / qb2;
  const double a2 = r.r2 / qb2 - 1.0 / qb1;
  const double det = r.r1 * r.r2 - 1.0;
  const cplx D = 1.0 + s1 / qb1 + s2 / qb2;

  ShockKernel k;
  k.kernel_case = ShockCase::FirstPositive;
  const cplx shock1 = checked_div(lam / qb2, D * (1.0 - a2 * s1), "psi1/psi3");
  const cplx shock2 = checked_div(lam / qb1, D * (1.0 - a1 * s2), "psi2");
  const cplx ind1 =
      checked_div(m.lambda[1] / m.q[1], (1.0 + s2 / m.q[1]) * (1.0 - r.r2 * s1 / m.q[1]), "psi5");
  const cplx ind2 =
      checked_div(m.lambda[0] / m.q[0], (1.0 + s1 / m.q[0]) * (1.0 - r.r1 * s2 / m.q[0]), "psi6");
  k.coef[0] = -checked_div(lam * det / (qb2 * qb2), D * (r.r1 + a1 * s1) * (1.0 - a2 * s1), "psi0");
  k.coef[1] = m.c[1] - shock1 - ind1;
  k.coef[2] = m.c[0] - shock2 - ind2;
  k.coef[3] = shock1;
  k.coef[4] = checked_div(lam / qb2, D * (r.r1 + a1 * s1), "psi4");
  k.coef[5] = ind1;
  k.coef[6] = ind2;
  k.coef[7] = checked_div(lam * a1, (r.r1 + a1 * s1) * (1.0 - a1 * s2), "psi7");
  k.arg3 = (r.r1 + s1 * a1) / (det / qb2);
  k.arg4 = (1.0 - a2 * s1) / (det / qb2);
  k.transform4 = 2;
  k.arg7 = 1.0 / a1;
  k.transform7 = 2;
  return k;
}

ShockKernel shock_kernel(const PoissonModel& m, const ReflectionPair& r, cplx s1, cplx s2) {
  const CommonShock& sh = *m.shock;
  const double lam = sh.lambda;
  const double qb1 = sh.qbar1;
  const double qb2 = sh.qbar2;
  const double a1 = r.r1 / qb1 - 1.0 / qb2;
  const double a2 = r.r2 / qb2 - 1.0 / qb1;
  const double det = r.r1 * r.r2 - 1.0;

  if (a1 > 0.0 && a2 > 0.0) {
    const cplx D = 1.0 + s1 / qb1 + s2 / qb2;
    ShockKernel k;
    k.kernel_case = ShockCase::BothPositive;
    const cplx shock1 = checked_div(lam / qb2, D * (1.0 - a2 * s1), "psi1/psi3");
    const cplx shock2 = checked_div(lam / qb1, D * (1.0 - a1 * s2), "psi2/psi4");
    const cplx ind1 = checked_div(m.lambda[1] / m.q[1],
                                  (1.0 + s2 / m.q[1]) * (1.0 - r.r2 * s1 / m.q[1]), "psi5");
    const cplx ind2 = checked_div(m.lambda[0] / m.q[0],
                                  (1.0 + s1 / m.q[0]) * (1.0 - r.r1 * s2 / m.q[0]), "psi6");
    const double bracket_const =
        r.r1 / (qb1 * qb1) + r.r2 / (qb2 * qb2) - 2.0 / (qb1 * qb2);
    k.coef[0] = -checked_div(lam * (a1 * a2 * D + bracket_const),
                             D * (r.r1 + a1 * s1) * (r.r2 + a2 * s2), "psi0");
    k.coef[1] = m.c[1] - shock1 - ind1;
    k.coef[2] = m.c[0] - shock2 - ind2;
    k.coef[3] = shock1;
    k.coef[4] = shock2;
    k.coef[5] = ind1;
    k.coef[6] = ind2;
    k.coef[7] = 0.0;
    k.arg3 = (r.r1 + s1 * a1) / (det / qb2);
    k.arg4 = (r.r2 + s2 * a2) / (det / qb1);
    k.transform4 = 2;
    return k;
  }
  if (a1 > 0.0) {
    return shock_kernel_first_positive(m, r, s1, s2);
  }
  if (a2 > 0.0) {
    // Label swap of the previous case: evaluate it on the mirrored model at
    // (s2, s1) and map the coefficient slots back.
    const PoissonModel mm = std::get<PoissonModel>(mirror(Model{m}));
    const ShockKernel km = shock_kernel_first_positive(mm, mirror(r), s2, s1);
    ShockKernel k;
    k.kernel_case = ShockCase::SecondPositive;
    k.coef[0] = km.coef[0];
    k.coef[1] = km.coef[2];
    k.coef[2] = km.coef[1];
    k.coef[3] = km.coef[4];
    k.coef[4] = km.coef[3];
    k.coef[5] = km.coef[6];
    k.coef[6] = km.coef[5];
    k.coef[7] = km.coef[7];
    // Mirrored slot 3 (F1 of the mirror = F2 here) becomes slot 4; mirrored
    // slot 4 (F2 of the mirror = F1 here) becomes slot 3.
    k.arg3 = km.arg4;
    k.arg4 = km.arg3;
    k.transform4 = 2;
    k.arg7 = km.arg7;
    k.transform7 = 1;
    return k;
  }
  throw DomainError(
      "common-shock kernel undefined: r1/qbar1 <= 1/qbar2 and r2/qbar2 <= 1/qbar1 "
      "cannot both hold when r1 r2 > 1");
}

}  // namespace

double PoissonModel::mean(int i) const {
  double m = c[i] - lambda[i] / q[i];
  if (shock) {
    m -= shock->lambda / (i == 0 ? shock->qbar1 : shock->qbar2);
  }
  return m;
}

double PoissonModel::variance(int i) const {
  double v = 2.0 * lambda[i] / (q[i] * q[i]);
  if (shock) {
    const double qb = i == 0 ? shock->qbar1 : shock->qbar2;
    v += 2.0 * shock->lambda / (qb * qb);
  }
  return v;
}

double PoissonModel::covariance() const {
  if (!shock) return 0.0;
  return 2.0 * shock->lambda / (shock->qbar1 * shock->qbar2);
}

ValidatedModel validate(const Model& model, const ReflectionPair& r) {
  require_positive(r.r1, "r1");
  require_positive(r.r2, "r2");

  ValidatedModel vm;
  vm.model = model;
  vm.r = r;

  if (const auto* pm = std::get_if<PoissonModel>(&model)) {
    const char* names[3][2] = {{"c1", "c2"}, {"lambda1", "lambda2"}, {"q1", "q2"}};
    for (int i = 0; i < 2; ++i) {
      require_positive(pm->c[i], names[0][i]);
      require_positive(pm->lambda[i], names[1][i]);
      require_positive(pm->q[i], names[2][i]);
    }
    if (pm->shock) {
      require_finite(pm->shock->lambda, "shock.lambda");
      if (pm->shock->lambda < 0.0) {
        throw ValidationError("parameter shock.lambda must be nonnegative");
      }
      require_positive(pm->shock->qbar1, "shock.qbar1");
      require_positive(pm->shock->qbar2, "shock.qbar2");
    }
    vm.mu = {pm->mean(0), pm->mean(1)};
    if (pm->shock && pm->shock->lambda > 0.0) {
      const auto& sh = *pm->shock;
      const bool d12 = nearly_equal(pm->c[0], r.r2 * pm->c[1]) && nearly_equal(sh.qbar1, sh.qbar2 / r.r2);
      const bool d21 = nearly_equal(pm->c[1], r.r1 * pm->c[0]) && nearly_equal(sh.qbar2, sh.qbar1 / r.r1);
      vm.degenerate = d12 || d21;
    }
  } else {
    const auto& bm = std::get<BrownianModel>(model);
    require_finite(bm.mu[0], "mu1");
    require_finite(bm.mu[1], "mu2");
    require_positive(bm.sigma[0], "sigma1");
    require_positive(bm.sigma[1], "sigma2");
    if (!(bm.rho >= 0.0 && bm.rho < 1.0)) {
      std::ostringstream msg;
      msg << "parameter rho must lie in [0,1), got " << bm.rho;
      throw ValidationError(msg.str());
    }
    vm.mu = bm.mu;
  }

  for (int i = 0; i < 2; ++i) {
    if (!(vm.mu[i] < 0.0)) {
      std::ostringstream msg;
      msg << "mean mu" << (i + 1) << " = " << vm.mu[i] << " must be strictly negative";
      throw ValidationError(msg.str());
    }
  }
  const double m1 = std::abs(vm.mu[0]);
  const double m2 = std::abs(vm.mu[1]);
  if (!(r.r1 * m1 > m2)) {
    std::ostringstream msg;
    msg << "reflection condition fails: r1*|mu1| = " << r.r1 * m1 << " <= |mu2| = " << m2;
    throw ValidationError(msg.str());
  }
  if (!(r.r2 * m2 > m1)) {
    std::ostringstream msg;
    msg << "reflection condition fails: r2*|mu2| = " << r.r2 * m2 << " <= |mu1| = " << m1;
    throw ValidationError(msg.str());
  }
  return vm;
}

cplx psi(const Model& model, cplx s1, cplx s2) {
  if (const auto* pm = std::get_if<PoissonModel>(&model)) {
    const cplx d1 = 1.0 + s1 / pm->q[0];
    const cplx d2 = 1.0 + s2 / pm->q[1];
    if (d1 == 0.0 || d2 == 0.0) {
      throw DomainError("psi evaluated at a pole s_i = -q_i");
    }
    cplx val = s1 * pm->c[0] + s2 * pm->c[1] - pm->lambda[0] - pm->lambda[1] + pm->lambda[0] / d1 +
               pm->lambda[1] / d2;
    if (pm->shock && pm->shock->lambda > 0.0) {
      const cplx d = 1.0 + s1 / pm->shock->qbar1 + s2 / pm->shock->qbar2;
      if (d == 0.0) {
        throw DomainError("psi evaluated on the common-shock pole 1 + s1/qbar1 + s2/qbar2 = 0");
      }
      val += pm->shock->lambda / d - pm->shock->lambda;
    }
    return val;
  }
  const auto& bm = std::get<BrownianModel>(model);
  const double v1 = bm.sigma[0] * bm.sigma[0];
  const double v2 = bm.sigma[1] * bm.sigma[1];
  const double cov = bm.rho * bm.sigma[0] * bm.sigma[1];
  return 0.5 * (v1 * s1 * s1 + 2.0 * cov * s1 * s2 + v2 * s2 * s2) + bm.mu[0] * s1 + bm.mu[1] * s2;
}

std::array<cplx, 2> kernel_psi12(const ValidatedModel& vm, cplx s1, cplx s2) {
  const double r1 = vm.r.r1;
  const double r2 = vm.r.r2;
  if (vm.is_brownian()) {
    const auto& bm = vm.brownian();
    const double v1 = bm.sigma[0] * bm.sigma[0];
    const double v2 = bm.sigma[1] * bm.sigma[1];
    const double cov = bm.rho * bm.sigma[0] * bm.sigma[1];
    return {bm.mu[1] + 0.5 * v2 * (s2 - r2 * s1) + cov * s1,
            bm.mu[0] + 0.5 * v1 * (s1 - r1 * s2) + cov * s2};
  }
  const auto& pm = vm.poisson();
  if (pm.has_shock()) {
    const ShockKernel k = shock_kernel(pm, vm.r, s1, s2);
    return {k.coef[1], k.coef[2]};
  }
  const double q1 = pm.q[0];
  const double q2 = pm.q[1];
  return {pm.c[1] - checked_div(pm.lambda[1] * q2, (q2 + s2) * (q2 - r2 * s1), "psi1"),
          pm.c[0] - checked_div(pm.lambda[0] * q1, (q1 + s1) * (q1 - r1 * s2), "psi2")};
}

PoissonConstants poisson_constants(const ValidatedModel& vm) {
  const auto& pm = vm.poisson();
  const double r1 = vm.r.r1;
  const double r2 = vm.r.r2;
  const double m1 = std::abs(vm.mu[0]);
  const double m2 = std::abs(vm.mu[1]);
  PoissonConstants k;
  k.F0 = r1 * (r2 * m2 - m1) / (r1 * r2 - 1.0) *
         (pm.c[0] / (pm.q[0] * m1) + r2 * pm.c[1] / (pm.q[1] * m2));
  k.F0_tilde = pm.c[0] * r1 / pm.q[0] + pm.c[1] * r2 / pm.q[1];
  return k;
}

double brownian_c(const ValidatedModel& vm) {
  const auto& bm = vm.brownian();
  return 0.5 * (vm.r.r1 * bm.sigma[0] * bm.sigma[0] + vm.r.r2 * bm.sigma[1] * bm.sigma[1]) -
         bm.rho * bm.sigma[0] * bm.sigma[1];
}

KernelCoefficients kernel_coefficients(const ValidatedModel& vm, cplx s1, cplx s2) {
  KernelCoefficients out;
  if (vm.is_brownian()) {
    const auto p = kernel_psi12(vm, s1, s2);
    out.psi1 = p[0];
    out.psi2 = p[1];
    out.extra = brownian_c(vm);
    return out;
  }
  const auto& pm = vm.poisson();
  if (pm.has_shock()) {
    if (vm.degenerate) {
      throw DomainError("common-shock kernel excluded for the degenerate parameter set");
    }
    ShockKernel k = shock_kernel(pm, vm.r, s1, s2);
    out.psi1 = k.coef[1];
    out.psi2 = k.coef[2];
    out.extra = k;
    return out;
  }
  const auto p = kernel_psi12(vm, s1, s2);
  out.psi1 = p[0];
  out.psi2 = p[1];
  out.extra = poisson_constants(vm);
  return out;
}

PoissonModel poissonize_brownian(const BrownianModel& bm, int n, const PoissonizeBase& base) {
  if (n < 1) throw ValidationError("poissonize_brownian: n must be a positive integer");
  if (!(bm.rho >= 0.0 && bm.rho < 1.0)) {
    throw ValidationError("poissonize_brownian: rho must lie in [0,1)");
  }
  for (int i = 0; i < 2; ++i) {
    require_positive(bm.sigma[i], i == 0 ? "sigma1" : "sigma2");
    require_finite(bm.mu[i], i == 0 ? "mu1" : "mu2");
  }

  // Smallest rates that keep each drift at least |mu_i| above zero at n = 1.
  std::array<double, 2> floor_q{};
  for (int i = 0; i < 2; ++i) {
    const double v = bm.sigma[i] * bm.sigma[i];
    floor_q[i] = std::max(4.0, 4.0 * std::abs(bm.mu[i]) / v);
  }

  const double rho = bm.rho;
  std::array<double, 2> q = base.q.value_or(floor_q);
  PoissonModel pm;
  for (int i = 0; i < 2; ++i) {
    require_positive(q[i], i == 0 ? "base q1" : "base q2");
    pm.q[i] = q[i];
    pm.lambda[i] = 0.5 * (1.0 - rho) * bm.sigma[i] * bm.sigma[i] * q[i] * q[i];
  }

  double lam = 0.0;
  std::array<double, 2> qbar{1.0, 1.0};
  if (rho > 0.0) {
    // lambda / qbar_i^2 = rho sigma_i^2 / 2 for both i forces
    // qbar2 = qbar1 sigma1 / sigma2.
    const double ratio = bm.sigma[0] / bm.sigma[1];
    double qb1 = base.qbar1.value_or(std::max(floor_q[0], floor_q[1] / ratio));
    require_positive(qb1, "base qbar1");
    qbar = {qb1, qb1 * ratio};
    lam = 0.5 * rho * bm.sigma[0] * bm.sigma[0] * qb1 * qb1;
  }

  const double sn = std::sqrt(static_cast<double>(n));
  for (int i = 0; i < 2; ++i) {
    const double jump_mean = (rho > 0.0 ? lam / qbar[i] : 0.0) + pm.lambda[i] / pm.q[i];
    pm.c[i] = bm.mu[i] + jump_mean * sn;
    if (!(pm.c[i] > 0.0)) {
      std::ostringstream msg;
      msg << "poissonize_brownian: base parameters give non-positive drift c" << (i + 1) << " = "
          << pm.c[i] << "; increase the base jump rates";
      throw ValidationError(msg.str());
    }
    pm.lambda[i] *= n;
    pm.q[i] *= sn;
  }
  if (rho > 0.0) {
    pm.shock = CommonShock{lam * n, qbar[0] * sn, qbar[1] * sn};
  }
  return pm;
}

ValidatedModel rescale(const ValidatedModel& vm, double a1, double a2) {
  require_positive(a1, "a1");
  require_positive(a2, "a2");
  const std::array<double, 2> a{a1, a2};
  ReflectionPair r{a2 * vm.r.r1 / a1, a1 * vm.r.r2 / a2};
  Model scaled;
  if (vm.is_poisson()) {
    PoissonModel pm = vm.poisson();
    for (int i = 0; i < 2; ++i) {
      pm.c[i] *= a[i];
      pm.q[i] /= a[i];
    }
    if (pm.shock) {
      pm.shock->qbar1 /= a1;
      pm.shock->qbar2 /= a2;
    }
    scaled = pm;
  } else {
    BrownianModel bm = vm.brownian();
    for (int i = 0; i < 2; ++i) {
      bm.mu[i] *= a[i];
      bm.sigma[i] *= a[i];
    }
    scaled = bm;
  }
  ValidatedModel out = validate(scaled, r);
  assert(out.degenerate == vm.degenerate);
  return out;
}

Model mirror(const Model& model) {
  if (const auto* pm = std::get_if<PoissonModel>(&model)) {
    PoissonModel m = *pm;
    std::swap(m.c[0], m.c[1]);
    std::swap(m.lambda[0], m.lambda[1]);
    std::swap(m.q[0], m.q[1]);
    if (m.shock) std::swap(m.shock->qbar1, m.shock->qbar2);
    return m;
  }
  BrownianModel m = std::get<BrownianModel>(model);
  std::swap(m.mu[0], m.mu[1]);
  std::swap(m.sigma[0], m.sigma[1]);
  return m;
}

ReflectionPair mirror(const ReflectionPair& r) { return {r.r2, r.r1}; }

ValidatedModel mirror(const ValidatedModel& vm) {
  ValidatedModel m;
  m.model = mirror(vm.model);
  m.r = mirror(vm.r);
  m.mu = {vm.mu[1], vm.mu[0]};
  m.degenerate = vm.degenerate;
  return m;
}

}  // namespace domination
