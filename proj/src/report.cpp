#include "domination/report.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "domination/brownian_bvp.hpp"
#include "domination/errors.hpp"
#include "domination/model_io.hpp"
#include "domination/poisson_bvp.hpp"

namespace domination {

namespace {

void require_solvable(const ValidatedModel& vm) {
  if (vm.is_poisson() && vm.poisson().has_shock()) {
    throw ValidationError(
        "the contour solver covers the Poisson model without common shocks and the Brownian "
        "model; this model has common shocks");
  }
}

json diagnostics(long panels, double error, const quad::QuadOptions& opts) {
  return {{"quad_panels", panels}, {"quad_error_estimate", error}, {"tolerance", opts.tol}};
}

}  // namespace

AnalyticResult analytic(const ValidatedModel& vm, const quad::QuadOptions& opts) {
  require_solvable(vm);
  if (vm.is_poisson()) {
    const PoissonBvp bvp(vm, opts);
    return {bvp.solution().p1_00, bvp.asymptotics()};
  }
  return {solve_bm(vm, opts).p1_00, asymptotics_bm(vm, curve_data_bm(vm))};
}

json asymptotics_json(const AsymptoticProfile& profile) {
  return {{"rate", profile.rate},
          {"order", profile.order},
          {"case", to_string(profile.kind)},
          {"criterion", profile.criterion}};
}

json solve_report(const ValidatedModel& vm, const quad::QuadOptions& opts) {
  require_solvable(vm);
  json j;
  j["model"] = vm.is_poisson() ? "poisson" : "brownian";
  j["r1"] = vm.r.r1;
  j["r2"] = vm.r.r2;
  if (vm.is_poisson()) {
    const PoissonBvp bvp(vm, opts);
    const PoissonSolution& s = bvp.solution();
    const PoissonCurveData& cd = bvp.curve();
    j["p1_00"] = s.p1_00;
    j["F0"] = s.F0;
    j["F0_tilde"] = s.F0_tilde;
    j["chi"] = s.chi;
    j["chi_winding"] = bvp.chi_winding();
    j["F1_at_q2_over_r2"] = s.F1_at_q2r2;
    j["branch_points"] = {cd.x()[0], cd.x()[1], cd.x()[2], cd.x()[3]};
    j["x0"] = cd.x0;
    j["s1p"] = cd.s1p;
    j["asymptotic"] = asymptotics_json(bvp.asymptotics());
    j["diagnostics"] = diagnostics(s.quad_panels, s.quad_error, opts);
  } else {
    const BrownianSolution s = solve_bm(vm, opts);
    const BrownianCurveData cd = curve_data_bm(vm);
    j["p1_00"] = s.p1_00;
    j["C"] = s.C;
    j["kappa1"] = s.kappa1;
    j["kappa2"] = s.kappa2;
    j["regime"] = to_string(s.regime);
    j["S1_plus_y0"] = s.S1_plus_y0;
    j["p1_interior_formula"] =
        std::isfinite(s.p1_interior_formula) ? json(s.p1_interior_formula) : json(nullptr);
    j["branch_points"] = {cd.x_minus, cd.x_plus};
    j["x0"] = cd.x0;
    j["s1p"] = cd.s1p;
    j["rho_threshold"] = cd.rho_threshold;
    j["threshold_bridge"] = s.threshold_bridge;
    j["asymptotic"] = asymptotics_json(asymptotics_bm(vm, cd));
    j["diagnostics"] = diagnostics(s.quad_panels, s.quad_error, opts);
  }
  return j;
}

json mc_json(const McEstimate& est, const McOptions& opts) {
  return {{"p1_hat", est.p_hat},
          {"std_error", est.std_error},
          {"ci95", {est.ci_low, est.ci_high}},
          {"n_paths", est.n},
          {"seed", opts.seed},
          {"dt", opts.dt},
          {"retried_paths", est.retried},
          {"total_events", est.total_events},
          {"stop_rule", {{"level", opts.stop.level}, {"ratio", opts.stop.ratio}}}};
}

std::vector<double> SweepSpec::grid() const {
  if (!(step > 0.0) || !(stop >= start)) {
    std::ostringstream msg;
    msg << "r2 grid needs step > 0 and stop >= start, got " << start << ":" << stop << ":" << step;
    throw ValidationError(msg.str());
  }
  std::vector<double> g;
  for (long k = 0;; ++k) {
    const double r2 = start + static_cast<double>(k) * step;
    if (r2 > stop + 1e-9 * step) break;
    g.push_back(r2);
  }
  return g;
}

BrownianModel moment_matched_brownian(const PoissonModel& pm) {
  BrownianModel bm;
  for (int i = 0; i < 2; ++i) {
    bm.mu[i] = pm.mean(i);
    bm.sigma[i] = std::sqrt(pm.variance(i));
  }
  bm.rho = 0.0;
  return bm;
}

SweepResult run_sweep(const Model& model, const SweepSpec& spec) {
  const std::vector<double> grid = spec.grid();
  std::vector<ValidatedModel> models;
  for (double r2 : grid) {
    try {
      models.push_back(validate(model, {spec.r1, r2}));
    } catch (const ValidationError& e) {
      std::ostringstream msg;
      msg << "sweep grid point r2 = " << r2 << " is not admissible: " << e.what();
      throw ValidationError(msg.str());
    }
  }

  SweepResult result;
  for (const ValidatedModel& vm : models) {
    SweepRow row;
    row.r2 = vm.r.r2;
    const AnalyticResult a = analytic(vm, spec.quad);
    row.p1_analytic = a.p1_00;
    row.asymptotics = a.asymptotics;
    if (spec.run_mc) {
      row.mc = mc_estimate(vm, 0.0, 0.0, spec.mc);
      const double se = row.mc->std_error;
      const double gap = std::abs(row.p1_analytic - row.mc->p_hat);
      const double z = se > 0.0 ? gap / se : (gap == 0.0 ? 0.0 : INFINITY);
      result.max_z = std::max(result.max_z, z);
    }
    result.rows.push_back(row);
  }

  if (const auto* pm = std::get_if<PoissonModel>(&model); pm && !pm->has_shock()) {
    const BrownianModel bm = moment_matched_brownian(*pm);
    for (const SweepRow& row : result.rows) {
      const double p = solve_bm(validate(bm, {spec.r1, row.r2}), spec.quad).p1_00;
      result.companion.push_back(p);
      result.max_companion_gap = std::max(result.max_companion_gap, std::abs(p - row.p1_analytic));
    }
  }
  return result;
}

std::string sweep_csv(const SweepResult& result) {
  std::ostringstream out;
  out << "r2,p1_analytic,p1_mc,mc_stderr,n_paths,asympt_rate,asympt_case\n";
  for (const SweepRow& row : result.rows) {
    out << io::format_number(row.r2, 9) << ',' << io::format_number(row.p1_analytic, 9) << ',';
    if (row.mc) {
      out << io::format_number(row.mc->p_hat, 9) << ',' << io::format_number(row.mc->std_error, 9)
          << ',' << row.mc->n;
    } else {
      out << ",,0";
    }
    out << ',' << io::format_number(row.asymptotics.rate, 9) << ','
        << to_string(row.asymptotics.kind) << '\n';
  }
  return out.str();
}

json sweep_summary(const Model& model, const SweepSpec& spec, const SweepResult& result) {
  json j;
  j["model"] = io::to_json(model, {spec.r1, spec.start});
  j["model"].erase("r2");
  j["r1"] = spec.r1;
  j["r2_grid"] = {{"start", spec.start}, {"stop", spec.stop}, {"step", spec.step}};
  json rows = json::array();
  for (const SweepRow& row : result.rows) {
    json r = {{"r2", row.r2},
              {"p1_analytic", row.p1_analytic},
              {"asymptotic", asymptotics_json(row.asymptotics)}};
    if (row.mc) r["mc"] = mc_json(*row.mc, spec.mc);
    rows.push_back(r);
  }
  j["rows"] = rows;
  if (spec.run_mc) {
    j["mc"] = {{"n_paths", spec.mc.n}, {"seed", spec.mc.seed}, {"dt", spec.mc.dt}};
    j["max_abs_diff_over_stderr"] = result.max_z;
  }
  if (!result.companion.empty()) {
    j["companion_brownian_rho0"] = {{"p1_analytic", result.companion},
                                    {"max_abs_diff_to_poisson", result.max_companion_gap}};
  }
  return j;
}

}  // namespace domination
