#include <cstdlib>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "domination/checks.hpp"
#include "domination/errors.hpp"
#include "domination/model_io.hpp"
#include "domination/report.hpp"
#include "domination/simulate.hpp"

using namespace domination;

namespace {

enum Exit { kOk = 0, kValidation = 2, kNumeric = 3, kIo = 4 };

struct Common {
  std::string model_path;
  std::optional<double> r1;
  std::optional<double> r2;
  double tol = 1e-10;
  std::string out_json;
};

struct McFlags {
  std::uint64_t n = 10'000;
  std::uint64_t seed = 1;
  double dt = 0.01;
  std::optional<unsigned> threads;
  double u = 0.0;
  double v = 0.0;
  double level = 100.0;
  double ratio = 0.1;
  std::uint64_t max_events = StopRule{}.max_events;
};

void add_common(CLI::App* cmd, Common& c, bool with_r2 = true) {
  cmd->add_option("--model", c.model_path, "model JSON file")->required();
  cmd->add_option("--r1", c.r1, "override r1 from the model file");
  if (with_r2) cmd->add_option("--r2", c.r2, "override r2 from the model file");
  cmd->add_option("--tol", c.tol, "absolute quadrature tolerance");
  cmd->add_option("--out-json", c.out_json, "also write the JSON result to this path");
}

void add_mc(CLI::App* cmd, McFlags& m) {
  cmd->add_option("--n", m.n, "number of simulated paths");
  cmd->add_option("--seed", m.seed, "random seed");
  cmd->add_option("--dt", m.dt, "time step of the Brownian scheme");
  cmd->add_option("--threads", m.threads, "worker threads (fallback: QD_THREADS)");
  cmd->add_option("--level", m.level, "escape level of the stopping rule");
  cmd->add_option("--ratio", m.ratio, "smallness ratio of the stopping rule");
  cmd->add_option("--max-events", m.max_events, "events per path before it counts as undecided");
}

unsigned resolve_threads(const std::optional<unsigned>& flag) {
  if (flag) return *flag;
  if (const char* env = std::getenv("QD_THREADS")) {
    char* end = nullptr;
    const unsigned long t = std::strtoul(env, &end, 10);
    if (end != env && *end == '\0') return static_cast<unsigned>(t);
    throw ValidationError(std::string("QD_THREADS must be a non-negative integer, got \"") + env +
                          "\"");
  }
  return 0;
}

McOptions mc_options(const McFlags& m) {
  McOptions o;
  o.n = m.n;
  o.seed = m.seed;
  o.dt = m.dt;
  o.parallelism = resolve_threads(m.threads);
  o.stop.level = m.level;
  o.stop.ratio = m.ratio;
  o.stop.max_events = m.max_events;
  return o;
}

io::ModelFile load(const Common& c) {
  io::ModelFile mf = io::read_model_file(c.model_path);
  if (c.r1) mf.r.r1 = *c.r1;
  if (c.r2) mf.r.r2 = *c.r2;
  return mf;
}

quad::QuadOptions quad_options(const Common& c) {
  if (!(c.tol > 0.0)) throw ValidationError("--tol must be positive");
  quad::QuadOptions q;
  q.tol = c.tol;
  return q;
}

void emit(const json& j, const std::string& path) {
  const std::string text = io::rounded(j, 12).dump(2) + "\n";
  std::cout << text;
  if (!path.empty()) io::write_text_file(path, text);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Total domination probabilities of reflected two-dimensional processes"};
  app.require_subcommand(1);

  Common common;
  McFlags mcf;

  auto* validate_cmd = app.add_subcommand("validate", "check model admissibility");
  add_common(validate_cmd, common);

  auto* solve_cmd = app.add_subcommand("solve", "p1(0,0) and constants from the contour formulas");
  add_common(solve_cmd, common);

  auto* asym_cmd = app.add_subcommand("asymptotics", "decay profile of 1 - p1(u,0)");
  add_common(asym_cmd, common);

  auto* mc_cmd = app.add_subcommand("mc", "Monte-Carlo estimate of p1(u,v)");
  add_common(mc_cmd, common);
  add_mc(mc_cmd, mcf);
  mc_cmd->add_option("--u", mcf.u, "initial first component");
  mc_cmd->add_option("--v", mcf.v, "initial second component");

  auto* check_cmd = app.add_subcommand("check", "run the invariant suite on a model");
  add_common(check_cmd, common);

  std::string grid;
  std::string out_csv;
  bool no_mc = false;
  auto* sweep_cmd = app.add_subcommand("sweep", "analytic and Monte-Carlo p1(0,0) over an r2 grid");
  add_common(sweep_cmd, common, false);
  add_mc(sweep_cmd, mcf);
  sweep_cmd->add_option("--r2", grid, "grid start:stop:step")->required();
  sweep_cmd->add_option("--out-csv", out_csv, "CSV output path");
  sweep_cmd->add_flag("--no-mc", no_mc, "skip the Monte-Carlo column");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kValidation;
  }

  try {
    const io::ModelFile mf = load(common);
    const quad::QuadOptions qo = quad_options(common);

    if (*validate_cmd) {
      const ValidatedModel vm = validate(mf.model, mf.r);
      emit({{"valid", true},
            {"mu1", vm.mu[0]},
            {"mu2", vm.mu[1]},
            {"degenerate", vm.degenerate},
            {"model", io::to_json(mf.model, mf.r)}},
           common.out_json);
      return kOk;
    }
    if (*solve_cmd) {
      emit(solve_report(validate(mf.model, mf.r), qo), common.out_json);
      return kOk;
    }
    if (*asym_cmd) {
      emit(asymptotics_json(analytic(validate(mf.model, mf.r), qo).asymptotics), common.out_json);
      return kOk;
    }
    if (*mc_cmd) {
      const ValidatedModel vm = validate(mf.model, mf.r);
      const McOptions o = mc_options(mcf);
      json j = mc_json(mc_estimate(vm, mcf.u, mcf.v, o), o);
      j["u"] = mcf.u;
      j["v"] = mcf.v;
      emit(j, common.out_json);
      return kOk;
    }
    if (*check_cmd) {
      CheckOptions co;
      co.quad = qo;
      const CheckReport report = run_checks(mf.model, mf.r, co);
      emit(report.to_json(), common.out_json);
      if (report.validation_failed()) return kValidation;
      return report.all_passed() ? kOk : kNumeric;
    }
    if (*sweep_cmd) {
      SweepSpec spec;
      spec.r1 = mf.r.r1;
      const auto first = grid.find(':');
      const auto second = grid.find(':', first == std::string::npos ? first : first + 1);
      if (first == std::string::npos || second == std::string::npos) {
        throw ValidationError("--r2 for sweep must be start:stop:step, got \"" + grid + "\"");
      }
      try {
        spec.start = std::stod(grid.substr(0, first));
        spec.stop = std::stod(grid.substr(first + 1, second - first - 1));
        spec.step = std::stod(grid.substr(second + 1));
      } catch (const std::exception&) {
        throw ValidationError("--r2 for sweep must be start:stop:step, got \"" + grid + "\"");
      }
      spec.run_mc = !no_mc;
      spec.mc = mc_options(mcf);
      spec.quad = qo;
      const SweepResult result = run_sweep(mf.model, spec);
      const std::string csv = sweep_csv(result);
      if (!out_csv.empty()) io::write_text_file(out_csv, csv);
      emit(sweep_summary(mf.model, spec, result), common.out_json);
      return kOk;
    }
  } catch (const ValidationError& e) {
    std::cerr << "validation error: " << e.what() << "\n";
    return kValidation;
  } catch (const IoError& e) {
    std::cerr << "I/O error: " << e.what() << "\n";
    return kIo;
  } catch (const std::exception& e) {
    std::cerr << "numeric error: " << e.what() << "\n";
    return kNumeric;
  }
  return kOk;
}
