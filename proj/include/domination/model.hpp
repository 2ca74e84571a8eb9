#pragma once

#include <array>
#include <complex>
#include <optional>
#include <variant>

namespace domination {

using cplx = std::complex<double>;

/// Reflection directions (1, r1) off the vertical axis and (r2, 1) off the
/// horizontal axis: an injection dL1 into component 1 adds r1*dL1 to
/// component 2 and vice versa.
struct ReflectionPair {
  double r1 = 0.0;
  double r2 = 0.0;

  bool operator==(const ReflectionPair&) const = default;
};

/// Simultaneous negative jumps J/qbar1, J/qbar2 with J ~ Exp(1), rate lambda.
struct CommonShock {
  double lambda = 0.0;
  double qbar1 = 1.0;
  double qbar2 = 1.0;

  bool operator==(const CommonShock&) const = default;
};

/// Drifted compound Poisson driver with exponential negative jumps:
/// X_i(t) = c_i t - (individual jumps, rate lambda_i, size Exp(q_i))
///                - (optional common shocks).
struct PoissonModel {
  std::array<double, 2> c{};
  std::array<double, 2> lambda{};
  std::array<double, 2> q{};
  std::optional<CommonShock> shock;

  [[nodiscard]] double mean(int i) const;
  [[nodiscard]] double variance(int i) const;
  [[nodiscard]] double covariance() const;
  [[nodiscard]] bool has_shock() const { return shock && shock->lambda > 0.0; }

  bool operator==(const PoissonModel&) const = default;
};

/// Correlated Brownian driver with drifts mu, volatilities sigma, correlation rho.
struct BrownianModel {
  std::array<double, 2> mu{};
  std::array<double, 2> sigma{};
  double rho = 0.0;

  bool operator==(const BrownianModel&) const = default;
};

using Model = std::variant<PoissonModel, BrownianModel>;

/// A model whose parameters passed validate(); carries the derived means.
struct ValidatedModel {
  Model model;
  ReflectionPair r;
  std::array<double, 2> mu{};
  bool degenerate = false;

  [[nodiscard]] bool is_poisson() const { return std::holds_alternative<PoissonModel>(model); }
  [[nodiscard]] bool is_brownian() const { return std::holds_alternative<BrownianModel>(model); }
  [[nodiscard]] const PoissonModel& poisson() const { return std::get<PoissonModel>(model); }
  [[nodiscard]] const BrownianModel& brownian() const { return std::get<BrownianModel>(model); }
};

/// Checks positivity, negative means, the reflection condition
///   r1 |mu1| > |mu2|,  r2 |mu2| > |mu1|
/// and rho in [0,1). Throws ValidationError; never alters parameters.
ValidatedModel validate(const Model& model, const ReflectionPair& r);

/// Bivariate Laplace exponent log E exp(s1 X1(1) + s2 X2(1)).
cplx psi(const Model& model, cplx s1, cplx s2);

/// Shock-model kernel case, selected by the signs of
/// alpha1 = r1/qbar1 - 1/qbar2 and alpha2 = r2/qbar2 - 1/qbar1.
enum class ShockCase { BothPositive, FirstPositive, SecondPositive };

/// Coefficients of the common-shock kernel equation
///   psi F = psi1 F1(s1) + psi2 F2(s2) + psi3 F1(arg3) + psi4 F{4}(arg4)
///         + psi5 F1(q2/r2) + psi6 F2(q1/r1) + psi7 F{7}(arg7) + psi0 p1(0,0),
/// where F{k} names the boundary transform (1 or 2) multiplying psi_k.
struct ShockKernel {
  ShockCase kernel_case = ShockCase::BothPositive;
  std::array<cplx, 8> coef{};
  cplx arg3{};
  cplx arg4{};
  int transform4 = 2;
  cplx arg7{};
  int transform7 = 2;
};

/// Plain Poisson constants: F0 = c2 F1(q2/r2) + c1 F2(q1/r1) in closed form and
/// F0_tilde = c1 r1/q1 + c2 r2/q2.
struct PoissonConstants {
  double F0 = 0.0;
  double F0_tilde = 0.0;
};

struct KernelCoefficients {
  cplx psi1{};
  cplx psi2{};
  /// Brownian: the constant c multiplying p1(0,0). Poisson: F0 and F0_tilde.
  /// Shock models: the full coefficient tuple.
  std::variant<double, PoissonConstants, ShockKernel> extra;
};

KernelCoefficients kernel_coefficients(const ValidatedModel& vm, cplx s1, cplx s2);

/// psi1, psi2 only (no constants); cheaper for inner loops.
std::array<cplx, 2> kernel_psi12(const ValidatedModel& vm, cplx s1, cplx s2);

/// Closed-form F0 and F0_tilde of the shock-free Poisson model.
PoissonConstants poisson_constants(const ValidatedModel& vm);

/// Brownian constant c = (r1 s1^2 + r2 s2^2)/2 - rho s1 s2.
double brownian_c(const ValidatedModel& vm);

/// Base parameters of the moment-matched compound Poisson approximation.
/// Unset fields are chosen automatically.
struct PoissonizeBase {
  std::optional<std::array<double, 2>> q;
  std::optional<double> qbar1;
};

/// Compound Poisson model with the same mean, variances and covariance as
/// bm, scaled by n (rates x n, jump rates x sqrt(n)).
PoissonModel poissonize_brownian(const BrownianModel& bm, int n, const PoissonizeBase& base = {});

/// Space rescaling X_i -> a_i X_i with the matching change of reflection.
ValidatedModel rescale(const ValidatedModel& vm, double a1, double a2);

/// Swaps the component labels.
Model mirror(const Model& model);
ReflectionPair mirror(const ReflectionPair& r);
ValidatedModel mirror(const ValidatedModel& vm);

}  // namespace domination
