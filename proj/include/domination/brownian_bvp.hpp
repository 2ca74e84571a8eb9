#pragma once

#include <memory>
#include <string>

#include "domination/model.hpp"
#include "domination/poisson_bvp.hpp"
#include "domination/profile.hpp"
#include "domination/quadrature.hpp"

namespace domination {

struct BrownianCurveData {
  double x_minus = 0.0;
  double x_plus = 0.0;
  double y_minus = 0.0;
  double y_plus = 0.0;
  double x0 = 0.0;
  double y0 = 0.0;
  double s1p = 0.0;
  double s2p = 0.0;
  double beta = 0.0;
  /// The lower half of H1 is {re0 + re1 y - i sqrt(-(dA y^2 + dB y + dC)) / scale : y >= y_plus}.
  double re0 = 0.0;
  double re1 = 0.0;
  double dA = 0.0;
  double dB = 0.0;
  double dC = 0.0;
  double scale = 1.0;
  /// Vertex S1(y_plus) of H1.
  double vertex = 0.0;
  /// psi1(x_minus, S2(x_minus)).
  double psi1_at_xminus = 0.0;
  int kappa1 = 0;
  int kappa2 = 0;
  double c_const = 0.0;
  /// Correlation above which the starting-point formula uses lim s X(s).
  double rho_threshold = 0.0;
};

BrownianCurveData curve_data_bm(const ValidatedModel& vm);

/// S1 (axis 1, argument s2) or S2 (axis 2, argument s1), analytic off the
/// two real half-lines beyond the branch points.
cplx branch_S_bm(const ValidatedModel& vm, const BrownianCurveData& cd, int axis, Branch sign,
                 cplx s);

enum class BrownianRegime { Independent, Interior, Origin };

std::string to_string(BrownianRegime regime);

struct BrownianSolution {
  double p1_00 = 0.0;
  BrownianRegime regime = BrownianRegime::Independent;
  /// C of F1 = p (1/s + C X(s)) with X normalized so its integral part
  /// vanishes at x0.
  double C = 0.0;
  int kappa1 = 0;
  int kappa2 = 0;
  double S1_plus_y0 = 0.0;
  /// The interior-regime formula evaluated even when another regime applies
  /// (NaN when S1+(y0) = 0).
  double p1_interior_formula = 0.0;
  long quad_panels = 0;
  double quad_error = 0.0;
  /// True when rho lies within 1e-4 of the regime threshold and p1_00 was
  /// interpolated from solves on both sides of it.
  bool threshold_bridge = false;
};

struct BrownianBoundaryValues {
  cplx t;
  cplx lower;
  cplx upper;
  cplx G;
};

class BrownianBvp {
 public:
  explicit BrownianBvp(const ValidatedModel& vm, const quad::QuadOptions& opts = {});

  [[nodiscard]] const ValidatedModel& model() const { return vm_; }
  [[nodiscard]] const BrownianCurveData& curve() const { return cd_; }
  [[nodiscard]] const BrownianSolution& solution() const { return sol_; }

  [[nodiscard]] cplx W(cplx s) const;
  [[nodiscard]] cplx W_prime(cplx s) const;
  /// Membership in G1, the side of H1 containing x_plus.
  [[nodiscard]] bool in_domain(cplx s) const;
  [[nodiscard]] const quad::Contour& contour() const { return contour_; }

  /// log G along H1^- in the contour parameter v, zero at the vertex v = 0.
  [[nodiscard]] cplx log_G(double v) const;
  [[nodiscard]] cplx G(cplx t) const;

  /// X(s) with the integral normalized to vanish at x0; pole factors included.
  [[nodiscard]] cplx X(cplx s) const;
  [[nodiscard]] cplx F1(cplx s) const;
  [[nodiscard]] cplx f1(cplx s) const;

  /// Plemelj limits of f1 at the contour point with parameter v in (0, 1).
  [[nodiscard]] BrownianBoundaryValues boundary_values(double v) const;

  [[nodiscard]] AsymptoticProfile asymptotics() const;

 private:
  cplx prefactor(cplx Ws) const;
  cplx log_X_core(cplx s) const;

  ValidatedModel vm_;
  quad::QuadOptions opts_;
  BrownianCurveData cd_;
  quad::Contour contour_;
  std::shared_ptr<quad::BranchTrackedLog> tracked_;
  cplx W_x0_{};
  mutable long panels_ = 0;
  mutable double error_ = 0.0;
  BrownianSolution sol_;
};

/// Solves the BVP; within 1e-4 of the regime threshold the value is a cubic
/// interpolant of solves at threshold +- 2e-4, +- 4e-4.
BrownianSolution solve_bm(const ValidatedModel& vm, const quad::QuadOptions& opts = {});

/// Decay profile of 1 - p1(u,0); needs only the curve data.
AsymptoticProfile asymptotics_bm(const ValidatedModel& vm, const BrownianCurveData& cd);

/// Closed form of p1(0,0) for rho = 0.
double p1_independent(const ValidatedModel& vm);

/// f2 = F2 - p1(0,0)/s2 with F2(s2) = 1/s2 - F1_mirror(s2).
cplx f2_from_mirror(const BrownianBvp& bvp, const BrownianBvp& mirrored, cplx s2);

/// f1 through the continuation f1 = -psi2 f2(S2+)/psi1.
cplx f1_by_continuation(const BrownianBvp& bvp, const BrownianBvp& mirrored, cplx s1);

}  // namespace domination
