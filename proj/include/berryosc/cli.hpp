#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "berryosc/berry_phase.hpp"
#include "berryosc/csv.hpp"
#include "berryosc/grid.hpp"
#include "berryosc/observables.hpp"
#include "berryosc/oscillator.hpp"
#include "berryosc/parallel.hpp"
#include "berryosc/propagator.hpp"
#include "berryosc/wavefunction.hpp"

namespace berryosc {

// Exit codes: 0 success, 1 verification failure, 2 usage error, 3 I/O error.
enum ExitCode : int {
  kExitOk = 0,
  kExitVerificationFailed = 1,
  kExitUsage = 2,
  kExitIo = 3,
};

enum class Command { params, wavefunction, verify, phase, figure1, propagate };

struct TimeSpec {
  double t_end = 2.0 * std::numbers::pi;
  double step = 0.01;
};

struct RunConfig {
  Command command = Command::verify;
  InitialData data;
  std::vector<int> n_list{0};
  TimeSpec time_spec;
  Grid grid_spec{-12.0, 12.0, 2401};
  std::string output_path;  // empty: standard output

  // Test-only hook: applied to every sampled state inside `verify`, so tests
  // can prove that a corrupted state fails the checks.  Never set by flags.
  std::function<void(WaveSample&)> corrupt_hook;
};

// Thrown on bad command lines; the driver prints the message and exits 2.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Thrown when the user asked for --help; the driver prints and exits 0.
struct HelpRequested : std::runtime_error {
  using std::runtime_error::runtime_error;
};

namespace detail {

inline void build_app(CLI::App& app, RunConfig& cfg,
                      std::vector<std::pair<Command, CLI::App*>>& subs) {
  app.description("Generalized harmonic-oscillator states and their Berry phase");
  app.set_config("--config")->description("key=value file; flags override file entries");
  app.require_subcommand(1);
  app.fallthrough();

  app.add_option("--mu0", cfg.data.mu0, "mu(0); defaults to 1/beta0 (unit norm)");
  app.add_option("--alpha0", cfg.data.alpha0, "alpha(0)");
  app.add_option("--beta0", cfg.data.beta0, "beta(0), nonzero");
  app.add_option("--gamma0", cfg.data.gamma0, "gamma(0)");
  app.add_option("--delta0", cfg.data.delta0, "delta(0)");
  app.add_option("--eps0", cfg.data.eps0, "eps(0)");
  app.add_option("--kappa0", cfg.data.kappa0, "kappa(0)");
  app.add_option("--n", cfg.n_list, "quantum number, repeatable")->expected(-1);
  app.add_option("--t-end", cfg.time_spec.t_end, "final time");
  app.add_option("--t-step", cfg.time_spec.step, "output time step");
  app.add_option("--x-min", cfg.grid_spec.x_min, "grid lower edge");
  app.add_option("--x-max", cfg.grid_spec.x_max, "grid upper edge");
  app.add_option("--x-points", cfg.grid_spec.count, "grid point count");
  app.add_option("--out", cfg.output_path, "output CSV path (default: stdout)");

  subs = {
      {Command::params, app.add_subcommand("params", "emit the seven parameter functions over time")},
      {Command::wavefunction, app.add_subcommand("wavefunction", "emit psi_n on the grid at t-end")},
      {Command::verify, app.add_subcommand("verify", "run the verification suite; exit 0 only if all checks pass")},
      {Command::phase, app.add_subcommand("phase", "emit the Berry phase from all three routes")},
      {Command::figure1, app.add_subcommand("figure1", "emit the reference phase traces (beta0=2/3, delta0=1, n=0,1)")},
      {Command::propagate, app.add_subcommand("propagate", "Crank-Nicolson evolution cross-check")},
  };
  for (auto& [cmd, sub] : subs) sub->fallthrough();
}

}  // namespace detail

// Parse a command line (without the program name) into a RunConfig.
// Constraint violations (beta0 = 0, mu0 <= 0, empty n list, bad grid or time
// range) are usage errors.
inline RunConfig parse_args(const std::vector<std::string>& argv) {
  RunConfig cfg;
  CLI::App app{"", "berryosc"};
  std::vector<std::pair<Command, CLI::App*>> subs;
  detail::build_app(app, cfg, subs);

  std::vector<std::string> reversed(argv.rbegin(), argv.rend());
  try {
    app.parse(std::move(reversed));
  } catch (const CLI::CallForHelp& e) {
    std::ostringstream help;
    help << app.help();
    throw HelpRequested(help.str());
  } catch (const CLI::ParseError& e) {
    throw UsageError(std::string(e.what()) + "\nRun with --help for usage.");
  }

  for (const auto& [cmd, sub] : subs)
    if (sub->parsed()) cfg.command = cmd;

  if (cfg.data.beta0 == 0.0) throw UsageError("--beta0 must be nonzero");
  if (app.count("--mu0") == 0) cfg.data.mu0 = 1.0 / cfg.data.beta0;
  if (!(cfg.data.mu0 > 0.0)) throw UsageError("--mu0 must be positive");
  if (cfg.n_list.empty()) throw UsageError("--n list must not be empty");
  for (int n : cfg.n_list)
    if (n < 0) throw UsageError("--n must be non-negative");
  if (!(cfg.time_spec.t_end > 0.0)) throw UsageError("--t-end must be positive");
  if (!(cfg.time_spec.step > 0.0)) throw UsageError("--t-step must be positive");
  if (!(cfg.grid_spec.x_min < cfg.grid_spec.x_max))
    throw UsageError("--x-min must be below --x-max");
  if (cfg.grid_spec.count < 3) throw UsageError("--x-points must be >= 3");

  if (cfg.command == Command::figure1) {
    // fixed reference dataset; user-supplied initial data is ignored
    cfg.data = InitialData{1.5, 0.0, 2.0 / 3.0, 0.0, 1.0, 0.0, 0.0};
    cfg.n_list = {0, 1};
  }
  return cfg;
}

namespace detail {

// Requested output times 0, step, 2 step, ..., t_end.
inline std::vector<double> output_times(const TimeSpec& ts) {
  const int rows = std::max(1, (int)std::lround(ts.t_end / ts.step));
  std::vector<double> out(rows + 1);
  for (int i = 0; i <= rows; ++i) out[i] = ts.t_end * i / rows;
  return out;
}

// Densify a strictly increasing time sequence starting at 0 so consecutive
// gaps are at most max_gap; `targets_at` maps each original index to its
// position in the result.
inline std::vector<double> densify_times(const std::vector<double>& targets, double max_gap,
                                         std::vector<std::size_t>& targets_at) {
  std::vector<double> dense{0.0};
  targets_at.assign(targets.size(), 0);
  for (std::size_t i = 1; i < targets.size(); ++i) {
    const double gap = targets[i] - targets[i - 1];
    const int pieces = std::max(1, (int)std::ceil(gap / max_gap - 1e-12));
    for (int k = 1; k <= pieces; ++k)
      dense.push_back(targets[i - 1] + gap * k / pieces);
    targets_at[i] = dense.size() - 1;
  }
  return dense;
}

struct CheckResult {
  std::string name;
  bool pass;
  std::string detail;
};

inline int run_params(const RunConfig& cfg, std::ostream& os) {
  os << "t,mu,alpha,beta,gamma,delta,eps,kappa\n";
  for (double t : output_times(cfg.time_spec)) {
    const ParameterState p = evaluate(cfg.data, t);
    csv_row(os, p.t, p.mu, p.alpha, p.beta, p.gamma, p.delta, p.eps, p.kappa);
  }
  return kExitOk;
}

inline int run_wavefunction(const RunConfig& cfg, std::ostream& os) {
  os << "n,x,re_psi,im_psi,density\n";
  for (int n : cfg.n_list) {
    const WaveSample s = sample(cfg.data, n, cfg.grid_spec, cfg.time_spec.t_end);
    for (int i = 0; i < s.grid.count; ++i)
      csv_row(os, n, s.grid.x(i), s.values[i].real(), s.values[i].imag(),
              std::norm(s.values[i]));
  }
  return kExitOk;
}

inline int run_phase(const RunConfig& cfg, std::ostream& os) {
  const std::vector<double> targets = output_times(cfg.time_spec);
  std::vector<std::size_t> at;
  const std::vector<double> dense = densify_times(targets, 0.01, at);
  const double ode_step = recommended_ode_step(cfg.data);
  const double fd_step = recommended_fd_step(cfg.data);

  std::vector<PhaseTrace> traces(cfg.n_list.size());
  parallel_for(cfg.n_list.size(), [&](std::size_t j) {
    traces[j] = integrate_phase_ode(cfg.data, cfg.n_list[j], dense, ode_step, fd_step);
  });

  os << "n,t,theta_ode,theta_closed,theta_gamma,max_pairwise_diff\n";
  for (std::size_t j = 0; j < cfg.n_list.size(); ++j) {
    const int n = cfg.n_list[j];
    for (std::size_t i = 0; i < targets.size(); ++i) {
      const double ode = traces[j].values[at[i]];
      const double closed = closed_form_phase(cfg.data, n, targets[i]);
      const double gamma = gamma_route_phase(cfg.data, n, targets[i]);
      const double spread = std::max({std::abs(ode - closed), std::abs(ode - gamma),
                                      std::abs(closed - gamma)});
      csv_row(os, n, targets[i], ode, closed, gamma, spread);
    }
  }
  return kExitOk;
}

inline int run_figure1(const RunConfig& cfg, std::ostream& os) {
  os << "t,theta_n0,theta_n1\n";
  for (int k = 0; k <= 400; ++k) {
    const double t = k * std::numbers::pi / 200.0;
    csv_row(os, t, closed_form_phase(cfg.data, 0, t), closed_form_phase(cfg.data, 1, t));
  }
  return kExitOk;
}

inline int run_propagate(const RunConfig& cfg, std::ostream& os) {
  const PropagationConfig pc(cfg.grid_spec, cfg.time_spec.step, cfg.time_spec.t_end);
  os << "n,t,max_error,norm2,invariant_expectation\n";
  for (int n : cfg.n_list) {
    const auto checkpoints = propagate_with_checkpoints(cfg.data, n, pc);
    for (const auto& c : checkpoints)
      csv_row(os, n, c.t, c.max_error, c.norm_squared, c.invariant_expectation);
  }
  return kExitOk;
}

inline int run_verify(const RunConfig& cfg, std::ostream& os, std::ostream& table) {
  const InitialData& d = cfg.data;
  const Grid& g = cfg.grid_spec;
  const double t_end = cfg.time_spec.t_end;
  const std::vector<double> ts{0.25 * t_end, 0.5 * t_end, 0.75 * t_end, t_end};
  std::vector<CheckResult> checks;
  std::vector<ExpectationReport> reports;

  const auto sample_state = [&](int n, double t) {
    WaveSample s = sample(d, n, g, t);
    if (cfg.corrupt_hook) cfg.corrupt_hook(s);
    return s;
  };

  // normalization: integral |psi|^2 = 1/(beta0 mu0) at every t
  {
    double worst = 0.0;
    const double expected = 1.0 / (d.beta0 * d.mu0);
    for (int n : cfg.n_list)
      for (double t : ts) worst = std::max(worst, std::abs(norm_squared(sample_state(n, t)) - expected));
    checks.push_back({"normalization", worst <= 1e-8, "max |norm^2 - 1/(beta0 mu0)| = " + format_g15(worst)});
  }

  // invariant eigenproblem: ||E psi - (n+1/2) psi|| / ||psi||
  {
    double worst = 0.0;
    for (int n : cfg.n_list)
      for (double t : ts) worst = std::max(worst, invariant_eigen_residual(d, sample_state(n, t)));
    checks.push_back({"invariant eigen-residual", worst <= 1e-6, "max residual = " + format_g15(worst)});
  }

  // <E> = n + 1/2, constant in t
  {
    double worst_value = 0.0;
    double worst_spread = 0.0;
    for (int n : cfg.n_list) {
      double lo = 1e300, hi = -1e300;
      for (double t : ts) {
        WaveSample s = sample_state(n, t);
        const WaveSample es = apply_invariant(d, s);
        std::vector<double> num(g.count), den(g.count);
        for (int i = 0; i < g.count; ++i) {
          num[i] = std::real(std::conj(s.values[i]) * es.values[i]);
          den[i] = std::norm(s.values[i]);
        }
        const auto [nv, ne] = detail::integrate_with_estimate(num, g);
        const auto [dv, de] = detail::integrate_with_estimate(den, g);
        const double value = nv / dv;
        reports.push_back(
            ExpectationReport{t, n, value, std::abs(ne / dv) + std::abs(value * de / dv)});
        worst_value = std::max(worst_value, std::abs(value - (n + 0.5)));
        lo = std::min(lo, value);
        hi = std::max(hi, value);
      }
      worst_spread = std::max(worst_spread, hi - lo);
    }
    checks.push_back({"<E> eigenvalue", worst_value <= 1e-6,
                      "max |<E> - (n+1/2)| = " + format_g15(worst_value)});
    checks.push_back({"<E> conservation", worst_spread <= 2e-7,
                      "max spread over t = " + format_g15(worst_spread)});
  }

  // Schroedinger residual on a refined copy of the grid (dx <= 0.003)
  {
    const int fine_count =
        std::max(g.count, 2 * (int)std::ceil((g.x_max - g.x_min) / 0.003 / 2) + 1);
    const Grid fine(g.x_min, g.x_max, fine_count);
    const double t = 0.7 * t_end;
    const double dt = 5e-4;
    double worst = 0.0;
    for (int n : cfg.n_list) {
      WaveSample minus = sample(d, n, fine, t - dt);
      WaveSample center = sample(d, n, fine, t);
      WaveSample plus = sample(d, n, fine, t + dt);
      if (cfg.corrupt_hook) {
        cfg.corrupt_hook(minus);
        cfg.corrupt_hook(center);
        cfg.corrupt_hook(plus);
      }
      worst = std::max(worst, schroedinger_residual(minus, center, plus, dt));
    }
    checks.push_back({"schroedinger residual", worst <= 1e-4, "max residual = " + format_g15(worst)});
  }

  // three-route phase agreement
  {
    const double horizon = std::min(t_end, 2.0 * std::numbers::pi);
    std::vector<double> targets(51);
    for (int i = 0; i <= 50; ++i) targets[i] = horizon * i / 50;
    std::vector<std::size_t> at;
    const std::vector<double> dense = densify_times(targets, 0.01, at);
    const double ode_step = recommended_ode_step(d);
    const double fd_step = recommended_fd_step(d);
    std::vector<double> worst_oc(cfg.n_list.size(), 0.0), worst_cg(cfg.n_list.size(), 0.0);
    parallel_for(cfg.n_list.size(), [&](std::size_t j) {
      const int n = cfg.n_list[j];
      const PhaseTrace trace = integrate_phase_ode(d, n, dense, ode_step, fd_step);
      for (std::size_t i = 0; i < targets.size(); ++i) {
        const double closed = closed_form_phase(d, n, targets[i]);
        worst_oc[j] = std::max(worst_oc[j], std::abs(trace.values[at[i]] - closed));
        worst_cg[j] = std::max(worst_cg[j], std::abs(closed - gamma_route_phase(d, n, targets[i])));
      }
    });
    const double oc = *std::max_element(worst_oc.begin(), worst_oc.end());
    const double cg = *std::max_element(worst_cg.begin(), worst_cg.end());
    checks.push_back({"phase: ode vs closed form", oc <= 1e-6, "max diff = " + format_g15(oc)});
    checks.push_back({"phase: closed form vs gamma route", cg <= 1e-9, "max diff = " + format_g15(cg)});
  }

  bool all = true;
  for (const auto& c : checks) {
    all = all && c.pass;
    table << (c.pass ? "PASS  " : "FAIL  ") << c.name << "  (" << c.detail << ")\n";
  }
  if (&os != &table) {
    os << "t,n,value,quadrature_error_estimate\n";
    for (const auto& r : reports) csv_row(os, r.t, r.n, r.value, r.quadrature_error_estimate);
  }
  return all ? kExitOk : kExitVerificationFailed;
}

}  // namespace detail

// Execute a parsed command.  Returns the process exit code.
inline int run(const RunConfig& cfg) {
  std::ofstream file;
  const bool to_file = !cfg.output_path.empty() && cfg.output_path != "-";
  if (to_file) {
    file.open(cfg.output_path, std::ios::binary);
    if (!file) {
      std::cerr << "error: cannot open output file: " << cfg.output_path << "\n";
      return kExitIo;
    }
  }
  std::ostream& os = to_file ? file : std::cout;

  int code = kExitOk;
  try {
    switch (cfg.command) {
      case Command::params: code = detail::run_params(cfg, os); break;
      case Command::wavefunction: code = detail::run_wavefunction(cfg, os); break;
      case Command::verify: code = detail::run_verify(cfg, os, std::cout); break;
      case Command::phase: code = detail::run_phase(cfg, os); break;
      case Command::figure1: code = detail::run_figure1(cfg, os); break;
      case Command::propagate: code = detail::run_propagate(cfg, os); break;
    }
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::runtime_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitVerificationFailed;
  }

  os.flush();
  if (to_file && !file.good()) {
    std::cerr << "error: write failed: " << cfg.output_path << "\n";
    return kExitIo;
  }
  return code;
}

// Full driver: parse, run, map errors to exit codes.
inline int cli_main(const std::vector<std::string>& argv) {
  try {
    return run(parse_args(argv));
  } catch (const HelpRequested& h) {
    std::cout << h.what();
    return kExitOk;
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
}

}  // namespace berryosc
