#include "domination/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <map>
#include <mutex>
#include <numbers>
#include <queue>
#include <sstream>

#include "domination/errors.hpp"

namespace domination::quad {

namespace {

constexpr double kPi = std::numbers::pi;

GaussLegendre build_rule(int n) {
  GaussLegendre rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  const int m = (n + 1) / 2;
  for (int i = 0; i < m; ++i) {
    double z = std::cos(kPi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p1 = 1.0;
      double p2 = 0.0;
      for (int j = 1; j <= n; ++j) {
        const double p3 = p2;
        p2 = p1;
        p1 = ((2.0 * j - 1.0) * z * p2 - (j - 1.0) * p3) / j;
      }
      dp = n * (z * p1 - p2) / (z * z - 1.0);
      const double dz = p1 / dp;
      z -= dz;
      if (std::abs(dz) < 1e-16) break;
    }
    rule.nodes[i] = -z;
    rule.nodes[n - 1 - i] = z;
    rule.weights[i] = 2.0 / ((1.0 - z * z) * dp * dp);
    rule.weights[n - 1 - i] = rule.weights[i];
  }
  return rule;
}

struct Panel {
  cplx value{};
  /// Integral of |f|, the scale of the rounding error in value.
  double abs_value = 0.0;
};

Panel panel(const RealToComplex& f, double a, double b, const GaussLegendre& rule) {
  const double half = 0.5 * (b - a);
  const double mid = 0.5 * (a + b);
  cplx sum{};
  double abs_sum = 0.0;
  for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
    const cplx fx = f(mid + half * rule.nodes[i]);
    sum += rule.weights[i] * fx;
    abs_sum += rule.weights[i] * std::abs(fx);
  }
  return {half * sum, std::abs(half) * abs_sum};
}

constexpr double kRoundoff = 50.0 * std::numeric_limits<double>::epsilon();

// A panel with its two-half refinement; err = |split - coarse|.
struct Piece {
  double a = 0.0;
  double b = 0.0;
  cplx coarse{};
  cplx value{};
  double abs_value = 0.0;
  double err = 0.0;
  int depth = 0;
  bool operator<(const Piece& o) const { return err < o.err; }
};

Piece make_piece(const RealToComplex& f, const GaussLegendre& rule, double a, double b,
                 cplx coarse, int depth, long& evaluations) {
  const double mid = 0.5 * (a + b);
  const Panel left = panel(f, a, mid, rule);
  const Panel right = panel(f, mid, b, rule);
  evaluations += 2 * static_cast<long>(rule.nodes.size());
  Piece p{a, b, coarse, left.value + right.value, left.abs_value + right.abs_value, 0.0, depth};
  p.err = std::abs(p.value - p.coarse);
  // Below the rounding level of the panel there is nothing left to gain.
  if (p.err <= kRoundoff * p.abs_value) p.err = 0.0;
  return p;
}

}  // namespace

const GaussLegendre& GaussLegendre::get(int n) {
  static std::mutex mutex;
  static std::map<int, GaussLegendre> cache;
  std::lock_guard lock(mutex);
  auto it = cache.find(n);
  if (it == cache.end()) it = cache.emplace(n, build_rule(n)).first;
  return it->second;
}

QuadResult integrate(const RealToComplex& f, double a, double b, const QuadOptions& opts) {
  const GaussLegendre& rule = GaussLegendre::get(opts.nodes_per_panel);
  QuadResult result;
  const int n0 = std::max(1, opts.initial_panels);
  const double h = (b - a) / n0;
  std::priority_queue<Piece> queue;
  std::vector<Piece> done;
  cplx total{};
  double err = 0.0;
  for (int i = 0; i < n0; ++i) {
    const double lo = a + i * h;
    const double hi = i + 1 == n0 ? b : lo + h;
    const cplx coarse = panel(f, lo, hi, rule).value;
    result.evaluations += static_cast<long>(rule.nodes.size());
    const Piece p = make_piece(f, rule, lo, hi, coarse, 0, result.evaluations);
    total += p.value;
    err += p.err;
    queue.push(p);
  }
  // Global strategy: always split the panel with the largest error estimate.
  while (err > opts.tol && !queue.empty()) {
    const Piece p = queue.top();
    queue.pop();
    if (p.err == 0.0) {
      done.push_back(p);
      break;
    }
    if (p.depth >= opts.max_depth) {
      std::ostringstream msg;
      msg << std::setprecision(17) << "adaptive quadrature did not converge on [" << p.a << ", "
          << p.b << "] (panel error " << p.err << ", total " << err << ", target " << opts.tol
          << ")";
      throw NumericError(msg.str());
    }
    const double mid = 0.5 * (p.a + p.b);
    const Panel left = panel(f, p.a, mid, rule);
    const Panel right = panel(f, mid, p.b, rule);
    result.evaluations += 2 * static_cast<long>(rule.nodes.size());
    const Piece l = make_piece(f, rule, p.a, mid, left.value, p.depth + 1, result.evaluations);
    const Piece r = make_piece(f, rule, mid, p.b, right.value, p.depth + 1, result.evaluations);
    total += l.value + r.value - p.value;
    err += l.err + r.err - p.err;
    queue.push(l);
    queue.push(r);
  }
  result.value = total;
  result.error_estimate = std::max(err, 0.0);
  result.panels = static_cast<int>(queue.size() + done.size());
  return result;
}

Contour Contour::half_circle_lower(cplx center, double radius) {
  Contour c;
  c.kind = ContourKind::HalfCircleLower;
  c.center = center;
  c.radius = radius;
  return c;
}

Contour Contour::hyperbola_branch_lower(double re0, double re1, double dA, double dB, double dC,
                                        double scale, double y_start) {
  Contour c;
  c.kind = ContourKind::HyperbolaBranchLower;
  c.re0 = re0;
  c.re1 = re1;
  c.dA = dA;
  c.dB = dB;
  c.dC = dC;
  c.scale = scale;
  c.y_start = y_start;
  return c;
}

double Contour::param_begin() const { return kind == ContourKind::HalfCircleLower ? -kPi : 0.0; }

double Contour::param_end() const { return kind == ContourKind::HalfCircleLower ? 0.0 : 1.0; }

double Contour::orientation() const {
  if (kind == ContourKind::HalfCircleLower) return counterclockwise ? 1.0 : -1.0;
  return counterclockwise ? -1.0 : 1.0;
}

double Contour::hyperbola_y(double v) const {
  const double w = v / (1.0 - v);
  return y_start + w * w;
}

cplx Contour::point(double tau) const {
  if (kind == ContourKind::HalfCircleLower) {
    return center + radius * std::polar(1.0, tau);
  }
  const double w = tau / (1.0 - tau);
  const double y = y_start + w * w;
  // -D(y) = -dA (y - y_start)(y - y_other) factors out w^2.
  const double y_other = dC / (dA * y_start);
  const double h = std::sqrt(-dA * (y - y_other));
  return {re0 + re1 * y, -w * h / scale};
}

cplx Contour::tangent(double tau) const {
  if (kind == ContourKind::HalfCircleLower) {
    return cplx{0.0, radius} * std::polar(1.0, tau);
  }
  const double one_minus = 1.0 - tau;
  const double w = tau / one_minus;
  const double y = y_start + w * w;
  const double y_other = dC / (dA * y_start);
  const double h = std::sqrt(-dA * (y - y_other));
  const double dh = -dA * w / h;
  const cplx dt_dw{2.0 * re1 * w, -(h + w * dh) / scale};
  return dt_dw / (one_minus * one_minus);
}

BranchTrackedLog::BranchTrackedLog(RealToComplex f, double a, double b, int initial_nodes,
                                   double max_step, int max_nodes)
    : f_(std::move(f)) {
  const auto sample = [&](double tau) {
    const cplx value = f_(tau);
    if (value == cplx{0.0, 0.0} || !std::isfinite(value.real()) || !std::isfinite(value.imag())) {
      std::ostringstream msg;
      msg << "branch tracking: function vanishes or is not finite at parameter " << tau;
      throw NumericError(msg.str());
    }
    return value;
  };
  const int n = std::max(2, initial_nodes);
  const double min_width = 1e-15 * std::max(1.0, std::abs(b - a));
  taus_.push_back(a);
  args_.push_back(std::arg(sample(a)));
  cplx prev_value = sample(a);
  // Each coarse interval is bisected only where the argument moves too fast.
  struct Pending {
    double tau;
    cplx value;
  };
  std::vector<Pending> stack;
  for (int i = 1; i <= n; ++i) {
    const double tau = i == n ? b : a + (b - a) * static_cast<double>(i) / n;
    stack.push_back({tau, sample(tau)});
    while (!stack.empty()) {
      const Pending next = stack.back();
      const double step = std::arg(next.value / prev_value);
      const double t0 = taus_.back();
      if (std::abs(step) >= max_step) {
        const double mid = 0.5 * (t0 + next.tau);
        if (next.tau - t0 < min_width || static_cast<int>(taus_.size() + stack.size()) > max_nodes) {
          std::ostringstream msg;
          msg << std::setprecision(17) << "branch tracking: argument step " << std::abs(step)
              << " exceeds " << max_step << " on [" << t0 << ", " << next.tau << "] with "
              << taus_.size() + stack.size() << " samples";
          throw NumericError(msg.str());
        }
        stack.push_back({mid, sample(mid)});
        continue;
      }
      stack.pop_back();
      max_increment_ = std::max(max_increment_, std::abs(step));
      taus_.push_back(next.tau);
      args_.push_back(args_.back() + step);
      prev_value = next.value;
    }
  }
}

cplx BranchTrackedLog::operator()(double tau) const {
  const cplx value = f_(tau);
  const double principal = std::arg(value);
  double guess;
  if (tau <= taus_.front()) {
    guess = args_.front();
  } else if (tau >= taus_.back()) {
    guess = args_.back();
  } else {
    const auto it = std::upper_bound(taus_.begin(), taus_.end(), tau);
    const std::size_t hi = static_cast<std::size_t>(it - taus_.begin());
    const std::size_t lo = hi - 1;
    const double frac = (tau - taus_[lo]) / (taus_[hi] - taus_[lo]);
    guess = args_[lo] + frac * (args_[hi] - args_[lo]);
  }
  const double arg = principal + 2.0 * kPi * std::round((guess - principal) / (2.0 * kPi));
  return {std::log(std::abs(value)), arg};
}

int arg_variation(const RealToComplex& f, double a, double b, int initial_nodes) {
  for (int attempt = 0; attempt < 2; ++attempt) {
    const BranchTrackedLog tracked(f, a, b, initial_nodes << attempt, 0.25);
    const double turns = tracked.total_variation() / (2.0 * kPi);
    const double rounded = std::round(turns);
    if (std::abs(turns - rounded) < 0.01) return static_cast<int>(rounded);
    if (attempt == 1) {
      std::ostringstream msg;
      msg << "arg_variation: winding " << turns << " is not within 0.01 of an integer";
      throw NumericError(msg.str());
    }
  }
  return 0;
}

QuadResult cauchy_integral(const Contour& contour, const RealToComplex& log_g,
                           const std::function<cplx(cplx)>& kernel, const QuadOptions& opts) {
  const double sign = contour.orientation();
  const cplx factor = sign / cplx{0.0, 2.0 * kPi};
  // Scale the tolerance so that it applies to the returned value.
  QuadOptions inner = opts;
  inner.tol = opts.tol / std::abs(factor);
  QuadResult r = integrate(
      [&](double tau) {
        const cplx t = contour.point(tau);
        return log_g(tau) * kernel(t) * contour.tangent(tau);
      },
      contour.param_begin(), contour.param_end(), inner);
  r.value *= factor;
  r.error_estimate *= std::abs(factor);
  return r;
}

}  // namespace domination::quad
