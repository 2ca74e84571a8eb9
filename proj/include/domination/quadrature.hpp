#pragma once

#include <complex>
#include <functional>
#include <vector>

namespace domination::quad {

using cplx = std::complex<double>;
using RealToComplex = std::function<cplx(double)>;

/// Gauss-Legendre rule on [-1, 1].
struct GaussLegendre {
  std::vector<double> nodes;
  std::vector<double> weights;

  /// Cached rule with n points (Newton iteration on P_n).
  static const GaussLegendre& get(int n);
};

struct QuadOptions {
  double tol = 1e-10;
  int initial_panels = 4;
  int nodes_per_panel = 16;
  int max_depth = 40;
};

struct QuadResult {
  cplx value{};
  double error_estimate = 0.0;
  int panels = 0;
  long evaluations = 0;
};

/// Adaptive composite Gauss-Legendre: each panel is bisected until its
/// value and the sum of its two halves differ by at most its share of tol.
/// Throws NumericError when max_depth is reached.
QuadResult integrate(const RealToComplex& f, double a, double b, const QuadOptions& opts = {});

enum class ContourKind { HalfCircleLower, HyperbolaBranchLower };

/// Parametrized oriented curve.
///
/// HalfCircleLower: t(theta) = center + radius e^{i theta}, theta in [-pi, 0],
/// counterclockwise (left endpoint to right endpoint through the bottom).
///
/// HyperbolaBranchLower: points (re0 + re1 y) - i sqrt(-(dA y^2 + dB y + dC)) / scale
/// for y = y_start + (v/(1-v))^2, v in [0, 1). The substitution removes the
/// square-root behaviour at the vertex and maps the infinite branch to a
/// finite parameter range. Integration runs from infinity to the vertex
/// (decreasing v) when counterclockwise is true.
struct Contour {
  ContourKind kind = ContourKind::HalfCircleLower;
  cplx center{};
  double radius = 1.0;
  double re0 = 0.0;
  double re1 = 0.0;
  double dA = 0.0;
  double dB = 0.0;
  double dC = 0.0;
  double scale = 1.0;
  double y_start = 0.0;
  bool counterclockwise = true;

  static Contour half_circle_lower(cplx center, double radius);
  static Contour hyperbola_branch_lower(double re0, double re1, double dA, double dB, double dC,
                                        double scale, double y_start);

  [[nodiscard]] double param_begin() const;
  [[nodiscard]] double param_end() const;
  [[nodiscard]] cplx point(double tau) const;
  [[nodiscard]] cplx tangent(double tau) const;
  /// +1 when integration follows increasing parameter, -1 otherwise.
  [[nodiscard]] double orientation() const;
  /// Curve coordinate y of the hyperbola parametrization.
  [[nodiscard]] double hyperbola_y(double v) const;
};

/// Continuous-argument logarithm of a nonvanishing function along a
/// parameter interval. Argument increments between stored samples are
/// below max_step, so any query is lifted to the sheet nearest the
/// interpolated sample argument.
class BranchTrackedLog {
 public:
  BranchTrackedLog(RealToComplex f, double a, double b, int initial_nodes = 1024,
                   double max_step = 0.5, int max_nodes = 1 << 20);

  /// log f(tau) with the argument continued from tau = a, where it equals
  /// the principal argument of f(a).
  [[nodiscard]] cplx operator()(double tau) const;
  /// Continued argument at tau = b minus that at tau = a.
  [[nodiscard]] double total_variation() const { return args_.back() - args_.front(); }
  [[nodiscard]] double begin_arg() const { return args_.front(); }
  [[nodiscard]] double end_arg() const { return args_.back(); }
  [[nodiscard]] const std::vector<double>& nodes() const { return taus_; }
  [[nodiscard]] const std::vector<double>& unwrapped_args() const { return args_; }
  [[nodiscard]] double max_increment() const { return max_increment_; }

 private:
  RealToComplex f_;
  std::vector<double> taus_;
  std::vector<double> args_;
  double max_increment_ = 0.0;
};

/// Winding number of f around 0 along a closed parameter loop [a, b].
/// The unwrapped variation divided by 2 pi must lie within 0.01 of an
/// integer; the sampling is refined once before failing.
int arg_variation(const RealToComplex& f, double a, double b, int initial_nodes = 2048);

/// (1 / 2 pi i) * integral over the contour of log_g(tau) * kernel(t) dt,
/// with log_g given in the contour parameter and kernel in the point t.
QuadResult cauchy_integral(const Contour& contour, const RealToComplex& log_g,
                           const std::function<cplx(cplx)>& kernel, const QuadOptions& opts = {});

}  // namespace domination::quad
