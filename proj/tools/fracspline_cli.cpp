// fracspline: batch front end for the spline collocation solver.
//
//   fracspline solve    --config run.ini [--out DIR] [--grid-level K] [--threads N] [--dump-config]
//   fracspline converge --config run.ini --j-min 4 --j-max 7
//   fracspline basis    --n 3 --gamma 0.5 --level 0 --step 0.01
//   fracspline ml       --gamma 0.5 --beta 1 --z-min -2 --z-max 0 --step 0.25
//
// Exit codes: 0 success, 2 usage/config error, 3 numerical failure.

#include <CLI11.hpp>
#include <omp.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "fracspline/analysis.hpp"
#include "fracspline/config.hpp"
#include "fracspline/errors.hpp"

namespace fs = std::filesystem;
using namespace fracspline;

namespace {

constexpr int kExitUsage = 2;
constexpr int kExitNumerical = 3;

struct CommonOptions {
  std::string config_path;
  std::optional<std::string> out_dir;
  std::optional<int> grid_level;
  int threads = 0;
  bool dump_config = false;
};

class CsvWriter {
 public:
  explicit CsvWriter(const fs::path& path) : out_(path, std::ios::binary) {
    if (!out_) throw std::invalid_argument("cannot open " + path.string() + " for writing");
  }
  void header(const std::vector<std::string>& names) {
    for (std::size_t k = 0; k < names.size(); ++k) out_ << (k ? "," : "") << names[k];
    out_ << '\n';
  }
  CsvWriter& cell(double v) {
    sep();
    out_ << format_double(v);
    return *this;
  }
  CsvWriter& cell(int v) {
    sep();
    out_ << v;
    return *this;
  }
  CsvWriter& empty() {
    sep();
    return *this;
  }
  void end_row() {
    out_ << '\n';
    first_ = true;
  }

 private:
  void sep() {
    if (!first_) out_ << ',';
    first_ = false;
  }
  std::ofstream out_;
  bool first_ = true;
};

fs::path prepare_dir(const std::string& dir) {
  fs::path path(dir);
  std::error_code ec;
  fs::create_directories(path, ec);
  if (ec) throw std::invalid_argument("cannot create output directory " + dir);
  return path;
}

void apply_threads(int threads) {
  if (threads > 0) omp_set_num_threads(threads);
}

// Exact solution from the config when given, Mittag-Leffler closed form for
// unforced problems, nothing otherwise.
std::optional<ReferenceFn> make_reference(const RunConfig& config,
                                          const FractionalProblem& problem) {
  if (config.has_exact()) {
    const auto exact = config.problem.exact;
    const FractionalOrder gamma = problem.gamma;
    return ReferenceFn([exact, gamma](double t) {
      Eigen::VectorXd x(static_cast<Eigen::Index>(exact.size()));
      for (std::size_t i = 0; i < exact.size(); ++i) x[i] = evaluate_terms(exact[i], gamma, t);
      return x;
    });
  }
  if (problem.homogeneous()) {
    auto a = std::make_shared<const SystemMatrix>(problem.a);
    return ReferenceFn([problem, a](double t) { return reference_solution(problem, *a, t); });
  }
  return std::nullopt;
}

void warn_if_unstable(const FractionalProblem& problem) {
  if (!stability_check(SystemMatrix(problem.a))) {
    std::cerr << "warning: A has an eigenvalue with non-negative real part; "
                 "the system is not asymptotically stable\n";
  }
}

RunConfig load_with_overrides(const CommonOptions& opts) {
  RunConfig config = load_config(opts.config_path);
  if (opts.out_dir) config.output.dir = *opts.out_dir;
  if (opts.grid_level) {
    if (*opts.grid_level < 0 || *opts.grid_level > 20) {
      throw std::invalid_argument("--grid-level must lie in 0..20");
    }
    config.output.grid_level = *opts.grid_level;
  }
  return config;
}

int cmd_solve(const CommonOptions& opts) {
  const RunConfig config = load_with_overrides(opts);
  if (opts.dump_config) {
    std::cout << dump_config(config);
    return 0;
  }
  apply_threads(opts.threads);
  const FractionalProblem problem = config.to_problem();
  const CollocationConfig colloc = config.to_collocation();
  warn_if_unstable(problem);

  const SplineSolution sol = solve(problem, colloc);
  const auto reference = make_reference(config, problem);
  const int grid_level = config.sample_grid_level();
  const int m = problem.dim();

  CsvWriter csv(prepare_dir(config.output.dir) / "solution.csv");
  std::vector<std::string> names{"t"};
  for (int i = 1; i <= m; ++i) names.push_back("x_" + std::to_string(i));
  if (reference) {
    for (int i = 1; i <= m; ++i) names.push_back("ref_" + std::to_string(i));
    for (int i = 1; i <= m; ++i) names.push_back("err_" + std::to_string(i));
  }
  csv.header(names);

  std::vector<double> linf(static_cast<std::size_t>(m), 0.0);
  const int count = (1 << grid_level) * problem.horizon;
  for (int p = 0; p <= count; ++p) {
    const double t = std::ldexp(static_cast<double>(p), -grid_level);
    const Eigen::VectorXd x = sol(t);
    csv.cell(t);
    for (int i = 0; i < m; ++i) csv.cell(x[i]);
    if (reference) {
      const Eigen::VectorXd ref = (*reference)(t);
      for (int i = 0; i < m; ++i) csv.cell(ref[i]);
      for (int i = 0; i < m; ++i) {
        const double err = std::abs(ref[i] - x[i]);
        linf[i] = std::max(linf[i], err);
        csv.cell(err);
      }
    }
    csv.end_row();
  }

  std::cout << "residual_norm = " << format_double(sol.residual_norm()) << "\n";
  if (reference) {
    for (int i = 0; i < m; ++i) {
      std::cout << "linf_error_" << i + 1 << " = " << format_double(linf[i]) << "\n";
    }
  } else {
    std::cout << "no reference solution available; errors not computed\n";
  }
  return 0;
}

int cmd_converge(const CommonOptions& opts, int j_min, int j_max) {
  if (j_min < 0 || j_min > j_max) {
    throw std::invalid_argument("need 0 <= --j-min <= --j-max");
  }
  const RunConfig config = load_with_overrides(opts);
  if (opts.dump_config) {
    std::cout << dump_config(config);
    return 0;
  }
  apply_threads(opts.threads);
  const FractionalProblem problem = config.to_problem();
  const auto reference = make_reference(config, problem);
  if (!reference) {
    throw std::invalid_argument(
        "converge needs a reference: give exact.<i> terms or an unforced problem");
  }
  warn_if_unstable(problem);

  std::vector<int> levels;
  for (int j = j_min; j <= j_max; ++j) levels.push_back(j);
  const CollocationConfig base = config.to_collocation();
  SweepOptions sweep;
  sweep.colloc_offset = base.colloc_level - base.level;
  sweep.grid_level = config.output.grid_level;
  sweep.ic_weight = base.ic_weight;
  for (int j : levels) {
    CollocationConfig c = base;
    c.level = j;
    c.colloc_level = j + sweep.colloc_offset;
    c.validate();
  }
  const ConvergenceReport report =
      convergence_sweep(problem, *reference, config.discretization.degree, levels, sweep);

  const int m = problem.dim();
  CsvWriter csv(prepare_dir(config.output.dir) / "convergence.csv");
  std::vector<std::string> names{"j"};
  for (int i = 1; i <= m; ++i) names.push_back("err_" + std::to_string(i));
  for (int i = 1; i <= m; ++i) names.push_back("rho_" + std::to_string(i));
  csv.header(names);

  std::cout << "gamma = " << format_double(report.gamma) << ", n = " << report.degree << "\n";
  std::cout << "j";
  for (int i = 1; i <= m; ++i) std::cout << "\terr_" << i;
  for (int i = 1; i <= m; ++i) std::cout << "\trho_" << i;
  std::cout << "\n";
  for (std::size_t k = 0; k < levels.size(); ++k) {
    csv.cell(levels[k]);
    std::cout << levels[k];
    for (int i = 0; i < m; ++i) {
      const double e = report.errors[k].per_component_linf[i];
      csv.cell(e);
      std::cout << '\t' << e;
    }
    for (int i = 0; i < m; ++i) {
      const double r = k == 0 ? std::nan("") : report.rho[k - 1][i];
      if (std::isnan(r)) {
        csv.empty();
        std::cout << "\t-";
      } else {
        csv.cell(r);
        std::cout << '\t' << r;
      }
    }
    csv.end_row();
    std::cout << "\n";
  }
  return 0;
}

int cmd_basis(int degree, const std::vector<double>& gammas, int level, double step,
              std::optional<double> t_max, const std::string& out_dir) {
  if (degree < 1 || degree > 12) throw std::invalid_argument("--n must lie in 1..12");
  if (level < 0 || level > 16) throw std::invalid_argument("--level must lie in 0..16");
  if (!(step > 0.0)) throw std::invalid_argument("--step must be positive");
  std::vector<FractionalOrder> orders;
  for (double g : gammas) orders.emplace_back(g);
  const double upper = t_max.value_or(std::ldexp(degree + 1.0, -level));
  if (!(upper > 0.0)) throw std::invalid_argument("--t-max must be positive");
  const long count = static_cast<long>(std::floor(upper / step + 1e-9));
  if (count > 10'000'000) throw std::invalid_argument("--step too small for the range");

  CsvWriter csv(prepare_dir(out_dir) / "basis.csv");
  csv.header({"ell", "gamma", "t", "phi", "dphi"});
  for (const FractionalOrder& gamma : orders) {
    for (int ell = -degree; ell <= 0; ++ell) {
      const BasisIndex idx{degree, level, ell};
      for (long k = 0; k <= count; ++k) {
        const double t = static_cast<double>(k) * step;
        csv.cell(ell).cell(gamma.value()).cell(t);
        csv.cell(basis_eval(idx, t)).cell(caputo_basis(idx, gamma, t));
        csv.end_row();
      }
    }
  }
  return 0;
}

int cmd_ml(double gamma, double beta, double z_min, double z_max, double step,
           const std::string& out_dir) {
  if (z_min > z_max) throw std::invalid_argument("--z-min must not exceed --z-max");
  if (!(step > 0.0)) throw std::invalid_argument("--step must be positive");
  const MLOptions options;
  if (std::abs(z_min) > options.z_max || std::abs(z_max) > options.z_max) {
    throw std::domain_error("z range outside the trusted interval [-" +
                            format_double(options.z_max) + ", " +
                            format_double(options.z_max) + "]");
  }
  const long count = static_cast<long>(std::floor((z_max - z_min) / step + 1e-9));
  if (count > 10'000'000) throw std::invalid_argument("--step too small for the range");
  CsvWriter csv(prepare_dir(out_dir) / "ml.csv");
  csv.header({"z", "value"});
  for (long k = 0; k <= count; ++k) {
    const double z = z_min + static_cast<double>(k) * step;
    csv.cell(z).cell(ml_scalar({gamma, beta}, z, options));
    csv.end_row();
  }
  return 0;
}

void add_common(CLI::App* cmd, CommonOptions& opts) {
  cmd->add_option("--config", opts.config_path, "Run configuration file")->required();
  cmd->add_option("--out", opts.out_dir, "Output directory (overrides [output] dir)");
  cmd->add_option("--grid-level", opts.grid_level, "Error sample grid level K (2^K points per unit)");
  cmd->add_option("--threads", opts.threads, "Worker threads (default: all cores)");
  cmd->add_flag("--dump-config", opts.dump_config, "Print the normalised config and exit");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Spline collocation solver for linear fractional dynamical systems"};
  app.require_subcommand(1);

  CommonOptions solve_opts;
  auto* solve_cmd = app.add_subcommand("solve", "Solve one configured problem");
  add_common(solve_cmd, solve_opts);

  CommonOptions conv_opts;
  int j_min = 0;
  int j_max = 0;
  auto* conv_cmd = app.add_subcommand("converge", "Error and order sweep over levels j");
  add_common(conv_cmd, conv_opts);
  conv_cmd->add_option("--j-min", j_min, "First level")->required();
  conv_cmd->add_option("--j-max", j_max, "Last level")->required();

  int basis_n = 3;
  std::vector<double> basis_gamma{0.5};
  int basis_level = 0;
  double basis_step = 0.01;
  std::optional<double> basis_tmax;
  std::string basis_out = ".";
  auto* basis_cmd = app.add_subcommand("basis", "Sample edge and first interior basis functions");
  basis_cmd->add_option("--n", basis_n, "Spline degree");
  basis_cmd->add_option("--gamma", basis_gamma, "Derivative order(s), 0 < gamma <= 1")
      ->delimiter(',');
  basis_cmd->add_option("--level", basis_level, "Dilation level j");
  basis_cmd->add_option("--step", basis_step, "Sample spacing in t");
  basis_cmd->add_option("--t-max", basis_tmax, "Right end of the sample range");
  basis_cmd->add_option("--out", basis_out, "Output directory");

  double ml_gamma = 0.5;
  double ml_beta = 1.0;
  double ml_zmin = -1.0;
  double ml_zmax = 1.0;
  double ml_step = 0.1;
  std::string ml_out = ".";
  auto* ml_cmd = app.add_subcommand("ml", "Tabulate the scalar Mittag-Leffler function");
  ml_cmd->add_option("--gamma", ml_gamma, "First parameter");
  ml_cmd->add_option("--beta", ml_beta, "Second parameter");
  ml_cmd->add_option("--z-min", ml_zmin, "Range start");
  ml_cmd->add_option("--z-max", ml_zmax, "Range end");
  ml_cmd->add_option("--step", ml_step, "Spacing");
  ml_cmd->add_option("--out", ml_out, "Output directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kExitUsage;
  }

  try {
    if (*solve_cmd) return cmd_solve(solve_opts);
    if (*conv_cmd) return cmd_converge(conv_opts, j_min, j_max);
    if (*basis_cmd) {
      return cmd_basis(basis_n, basis_gamma, basis_level, basis_step, basis_tmax, basis_out);
    }
    if (*ml_cmd) return cmd_ml(ml_gamma, ml_beta, ml_zmin, ml_zmax, ml_step, ml_out);
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::domain_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return kExitNumerical;
  }
  return kExitUsage;
}
