#pragma once

#include <array>
#include <memory>
#include <optional>
#include <utility>

#include "domination/model.hpp"
#include "domination/poly.hpp"
#include "domination/profile.hpp"
#include "domination/quadrature.hpp"

namespace domination {

enum class Branch { Plus, Minus };

/// One side of the algebraic curve psi(s1, s2) = 0 written as a quadratic
/// a(s) S^2 + b(s) S + c(s) = 0 in the other variable.
struct CurveSide {
  poly::Coeffs a;
  poly::Coeffs b;
  poly::Coeffs c;
  poly::Coeffs d;
  /// Real roots of d in increasing order.
  std::array<double, 4> roots{};
  /// Leading coefficient of d is lead^2.
  double lead = 1.0;

  /// Square root of d, analytic off [roots0, roots1] and [roots2, roots3] and
  /// positive on [roots1, roots2].
  [[nodiscard]] cplx sqrt_d(cplx s) const;
  [[nodiscard]] cplx branch(Branch sign, cplx s) const;
  /// True when s lies on one of the two cuts.
  [[nodiscard]] bool on_cut(cplx s, double tol = 1e-13) const;
};

struct PoissonCurveData {
  /// S2 as a function of s1 (roots x1..x4).
  CurveSide side1;
  /// S1 as a function of s2 (roots y1..y4).
  CurveSide side2;
  double x0 = 0.0;
  double y0 = 0.0;
  double center = 0.0;
  double radius = 0.0;
  double F0 = 0.0;
  double F0_tilde = 0.0;
  double s1p = 0.0;
  std::optional<double> s1p_tilde;
  /// psi1(x2, S2(x2)); negative iff s1p is a pole of F1.
  double psi1_at_x2 = 0.0;
  bool pole_flag = false;

  [[nodiscard]] const std::array<double, 4>& x() const { return side1.roots; }
  [[nodiscard]] const std::array<double, 4>& y() const { return side2.roots; }
};

/// Algebraic data of the shock-free Poisson model. Roots of d are bracketed
/// by the sign pattern of d at -q1, 0, x0 and the roots of b, bisected, and
/// checked against the companion-matrix eigenvalues.
PoissonCurveData curve_data(const ValidatedModel& vm);

/// S1 (axis 1, argument s2) or S2 (axis 2, argument s1).
cplx branch_S(const PoissonCurveData& cd, int axis, Branch sign, cplx s);

struct PoissonSolution {
  double p1_00 = 0.0;
  int chi = 0;
  double F0 = 0.0;
  double F0_tilde = 0.0;
  double F1_at_q2r2 = 0.0;
  double X_at_x0 = 0.0;
  /// lim s (X(s) - 1) as s -> infinity.
  double limit_sXm1 = 0.0;
  long quad_panels = 0;
  double quad_error = 0.0;
};

/// Boundary values of f1 on C1 at t = -q1 + R e^{i theta}, theta in (-pi, 0):
/// lower is f1(t), upper is f1(conj t), both as limits from D1.
struct BoundaryValues {
  cplx t;
  cplx lower;
  cplx upper;
  cplx G;
};

/// Solver for the boundary value problem of the shock-free Poisson model.
class PoissonBvp {
 public:
  explicit PoissonBvp(const ValidatedModel& vm, const quad::QuadOptions& opts = {});

  [[nodiscard]] const ValidatedModel& model() const { return vm_; }
  [[nodiscard]] const PoissonCurveData& curve() const { return cd_; }
  [[nodiscard]] const PoissonSolution& solution() const { return sol_; }
  [[nodiscard]] int chi() const { return sol_.chi; }
  /// Winding number of G along C1^-, equal to that of psi1/psi2(t, S2+(t))
  /// around C1.
  [[nodiscard]] int chi_winding() const { return chi_winding_; }

  [[nodiscard]] cplx w(cplx s) const;
  [[nodiscard]] cplx w_prime(cplx s) const;
  [[nodiscard]] bool in_domain(cplx s) const;
  [[nodiscard]] cplx circle_point(double theta) const;

  /// log G along C1^- in the angle parameter, zero at theta = -pi.
  [[nodiscard]] cplx log_G(double theta) const;
  /// G at a point of C1.
  [[nodiscard]] cplx G(cplx t) const;

  [[nodiscard]] cplx X(cplx s) const;
  [[nodiscard]] cplx F1(cplx s) const;
  [[nodiscard]] cplx f1(cplx s) const;
  /// Constant f1(infinity) = (F0/F0_tilde)(r2/q2) - F1(q2/r2).
  [[nodiscard]] double f1_infinity() const;

  /// Plemelj limits of f1 on both sides of C1.
  [[nodiscard]] BoundaryValues boundary_values(double theta) const;

  [[nodiscard]] AsymptoticProfile asymptotics() const;

 private:
  quad::QuadResult integral(const std::function<cplx(cplx)>& kernel) const;

  ValidatedModel vm_;
  quad::QuadOptions opts_;
  PoissonCurveData cd_;
  std::shared_ptr<quad::BranchTrackedLog> tracked_;
  int chi_winding_ = 0;
  PoissonSolution sol_;
};

/// p1(0,0) and the constants of the shock-free Poisson model.
PoissonSolution solve(const ValidatedModel& vm, const quad::QuadOptions& opts = {});

/// f2 of the homogeneous kernel equation built from the mirrored solver:
/// F2(s2) = 1/s2 - F1_mirror(s2).
cplx f2_from_mirror(const PoissonBvp& bvp, const PoissonBvp& mirrored, cplx s2);

/// f1 on the closure of D1 through the continuation f1 = -psi2 f2(S2+)/psi1.
cplx f1_by_continuation(const PoissonBvp& bvp, const PoissonBvp& mirrored, cplx s1);

/// F(s1, s2) from the kernel equation; s1 in D1, s2 in the mirrored domain.
cplx F_full(const PoissonBvp& bvp, const PoissonBvp& mirrored, cplx s1, cplx s2);

}  // namespace domination
