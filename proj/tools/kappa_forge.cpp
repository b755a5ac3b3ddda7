#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "kappa/dsl.hpp"
#include "kappa/errors.hpp"
#include "kappa/grid.hpp"
#include "kappa/hopf.hpp"
#include "kappa/version.hpp"
#include "suites.hpp"

namespace {

constexpr int kExitPass = 0;
constexpr int kExitSuiteFailure = 1;
constexpr int kExitUsage = 2;
constexpr int kExitNumeric = 3;

struct Options {
  double kappa = 1.0;
  int nv = 256;
  int nbeta = 256;
  double vmax = 8.0;
  double bmax = 8.0;
  double tol_symbolic = 1e-10;
  double tol_grid = 1e-4;
  bool strict = false;
  int threads = 1;
  unsigned seed = 2026;
  std::string out = "json";
};

kappa::GridSpec grid_spec(const Options& opt) {
  kappa::GridSpec sp;
  sp.v_min = -opt.vmax;
  sp.v_max = opt.vmax;
  sp.beta_min = -opt.bmax;
  sp.beta_max = opt.bmax;
  sp.v_cells = opt.nv;
  sp.beta_cells = opt.nbeta;
  sp.validate();
  return sp;
}

kappa::dsl::Session make_session(const Options& opt) {
  kappa::dsl::Session::Config cfg;
  cfg.kappa = opt.kappa;
  cfg.spec = grid_spec(opt);
  cfg.strict = opt.strict;
  return kappa::dsl::Session(cfg);
}

int run_suites(const Options& opt, std::vector<std::string> names) {
  kappa::suites::SuiteConfig cfg;
  cfg.kappa = opt.kappa;
  cfg.spec = grid_spec(opt);
  cfg.strict = opt.strict;
  cfg.tol_symbolic = opt.tol_symbolic;
  cfg.tol_grid = opt.tol_grid;
  cfg.seed = opt.seed;

  if (names.empty()) names = {"all"};
  std::vector<std::string> expanded;
  for (const std::string& n : names) {
    if (n == "all") {
      const auto& all = kappa::suites::suite_names();
      expanded.insert(expanded.end(), all.begin(), all.end());
    } else {
      expanded.push_back(n);
    }
  }

  std::vector<kappa::suites::SuiteReport> reports;
  bool pass = true;
  for (const std::string& n : expanded) {
    reports.push_back(kappa::suites::run_suite(n, cfg));
    pass = pass && reports.back().pass();
  }
  if (opt.out == "csv")
    std::cout << kappa::suites::to_csv(reports);
  else
    std::cout << kappa::suites::to_json(reports, cfg);
  return pass ? kExitPass : kExitSuiteFailure;
}

int run_eval(const Options& opt, const std::vector<std::string>& stmts) {
  kappa::dsl::Session session = make_session(opt);
  auto emit = [&](const std::string& line) {
    if (line.empty() || line[0] == '#') return;
    const kappa::dsl::Session::Outcome out = session.run(line);
    if (!out.name.empty()) std::cout << out.name << " = ";
    std::cout << kappa::dsl::describe(out.value) << "\n";
  };
  if (stmts.empty()) {
    std::string line;
    while (std::getline(std::cin, line)) emit(line);
  } else {
    for (const std::string& s : stmts) emit(s);
  }
  return kExitPass;
}

int run_save_grid(const Options& opt, const std::string& expr,
                  const std::string& path) {
  kappa::dsl::Session session = make_session(opt);
  const kappa::dsl::Value value = session.run(expr).value;
  const auto* grid = std::get_if<kappa::SpectralGrid>(&value);
  if (!grid)
    throw kappa::TypeError("save-grid needs a grid-valued expression, got " +
                               kappa::dsl::describe(value),
                           {1, 1});
  kappa::save_grid(*grid, path, opt.kappa);
  std::cout << "saved " << kappa::dsl::describe(value) << " to " << path
            << "\n";
  return kExitPass;
}

int run_load_grid(const std::string& path) {
  const auto [grid, kappa_value] = kappa::load_grid(path);
  std::cout << kappa::dsl::describe(kappa::dsl::Value(grid))
            << ", kappa = " << kappa_value << "\n";
  return kExitPass;
}

int run_apply(const Options& opt, bool kappa_set, const std::string& op_text,
              const std::string& in_path, const std::string& out_path) {
  const auto [grid, stored_kappa] = kappa::load_grid(in_path);
  const double kv = kappa_set ? opt.kappa : stored_kappa;
  const kappa::OperatorExpr op = kappa::parse_operator(op_text);
  const kappa::SpectralGrid out = kappa::grid_apply_op(op, grid, kv);
  kappa::save_grid(out, out_path, kv);
  std::cout << "applied " << kappa::to_string(op) << " at kappa = " << kv
            << ", wrote " << out_path << "\n";
  return kExitPass;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"kappa-Minkowski star-product workbench: an exact symbolic "
               "engine and a spectral grid engine with cross-checked "
               "deformed products, symmetries, calculus and traces"};
  app.set_version_flag("--version", kappa::kVersionString);
  app.require_subcommand(1);
  app.fallthrough();

  Options opt;
  auto* kappa_flag =
      app.add_option("--kappa", opt.kappa, "deformation parameter (> 0)")
          ->capture_default_str();
  app.add_option("--nv", opt.nv, "v cells (even)")->capture_default_str();
  app.add_option("--nbeta", opt.nbeta, "beta cells (even)")
      ->capture_default_str();
  app.add_option("--vmax", opt.vmax, "v box half-width")
      ->capture_default_str();
  app.add_option("--bmax", opt.bmax, "beta box half-width")
      ->capture_default_str();
  app.add_option("--tol-symbolic", opt.tol_symbolic,
                 "exact-engine identity tolerance")
      ->capture_default_str();
  app.add_option("--tol-grid", opt.tol_grid, "grid-engine relative tolerance")
      ->capture_default_str();
  app.add_flag("--strict", opt.strict,
               "fail on support or interpolation leakage instead of "
               "accounting for it");
  app.add_option("--threads", opt.threads,
                 "worker threads (current kernels are single-threaded; the "
                 "flag is accepted for interface stability)")
      ->capture_default_str();
  app.add_option("--seed", opt.seed, "seed for randomized property checks")
      ->capture_default_str();
  app.add_option("--out", opt.out, "report format for `suite`")
      ->check(CLI::IsMember({"json", "csv"}))
      ->capture_default_str();

  std::vector<std::string> suite_args;
  CLI::App* suite = app.add_subcommand(
      "suite", "run property suites and print a machine-readable report");
  suite->add_option("names", suite_args,
                    "suites: symbolic hopf calculus grid trace rieffel all");

  std::vector<std::string> eval_args;
  CLI::App* eval = app.add_subcommand(
      "eval", "evaluate statements (arguments, else one per stdin line)");
  eval->add_option("statements", eval_args, "statements, e.g. 'comm(t, x)'");

  std::string expr_text, out_file, in_file, op_text;
  CLI::App* save = app.add_subcommand("save-grid",
                                      "evaluate a grid expression and save it");
  save->add_option("--expr", expr_text, "grid-valued expression")->required();
  save->add_option("--out-file", out_file, "destination path")->required();

  CLI::App* load =
      app.add_subcommand("load-grid", "print a summary of a saved grid");
  load->add_option("--in", in_file, "grid file path")->required();

  CLI::App* apply = app.add_subcommand(
      "apply", "apply a symmetry operator to a saved grid");
  apply->add_option("--op", op_text,
                    "operator text, e.g. 'compose(epsinv,P)'")
      ->required();
  apply->add_option("--in", in_file, "input grid file")->required();
  apply->add_option("--out-file", out_file, "output grid file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kExitPass : kExitUsage;
  }

  try {
    if (*suite) return run_suites(opt, suite_args);
    if (*eval) return run_eval(opt, eval_args);
    if (*save) return run_save_grid(opt, expr_text, out_file);
    if (*load) return run_load_grid(in_file);
    if (*apply)
      return run_apply(opt, kappa_flag->count() > 0, op_text, in_file,
                       out_file);
  } catch (const kappa::SupportOverflow& e) {
    std::cerr << "numeric error: " << e.what() << "\n";
    return kExitNumeric;
  } catch (const kappa::InterpolationOutOfRange& e) {
    std::cerr << "numeric error: " << e.what() << "\n";
    return kExitNumeric;
  } catch (const kappa::EvalOutOfRange& e) {
    std::cerr << "numeric error: " << e.what() << "\n";
    return kExitNumeric;
  } catch (const kappa::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}
