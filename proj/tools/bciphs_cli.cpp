// bciphs: validate, run and sweep boundary-controlled IPHS models.

#include "bciphs/config.hpp"
#include "bciphs/output.hpp"
#include "bciphs/simulator.hpp"

#include "CLI11.hpp"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <future>
#include <iostream>
#include <optional>
#include <sstream>

namespace fs = std::filesystem;
using namespace bciphs;

namespace {

enum ExitCode : int {
  exit_ok = 0,
  exit_validation = 1,
  exit_audit = 2,
  exit_aborted = 3,
  exit_config = 4,
  exit_io = 5,
};

struct Options {
  std::string config;
  std::string out;
  std::optional<std::uint64_t> seed;
  std::optional<double> tol_scale;
};

const Eigen::IOFormat matrix_format(Eigen::StreamPrecision, 0, " ", "\n", "    [", "]");

void print_matrix(std::ostream& os, const char* name, const Eigen::MatrixXd& m) {
  os << "  " << name << " (" << m.rows() << "x" << m.cols() << ")\n";
  if (m.size() > 0) {
    os << m.format(matrix_format) << "\n";
  }
}

RunConfig load(const Options& opt) {
  RunConfig cfg = parse_config(opt.config);
  if (opt.seed) {
    cfg.seed = *opt.seed;
  }
  if (opt.tol_scale) {
    cfg.tol_scale = *opt.tol_scale;
  }
  return cfg;
}

fs::path output_dir(const RunConfig& cfg, const Options& opt) {
  if (!opt.out.empty()) {
    return opt.out;
  }
  const fs::path sub = cfg.out_dir.empty() ? fs::path("bciphs_out") : fs::path(cfg.out_dir);
  if (sub.is_absolute()) {
    return sub;
  }
  const char* root = std::getenv("BCIPHS_OUT_DIR");
  return root != nullptr && *root != '\0' ? fs::path(root) / sub : sub;
}

/// Structure, closure, Xi and (for nonsingular P1) boundary-condition checks.
bool validate(const ModelDefinition& md, const RunConfig& cfg, std::ostream& os, bool verbose) {
  ValidationReport report = validate_structure(md.sm);
  const bool structure_ok = report.ok();
  if (structure_ok) {
    report.merge(validate_closure(md.tc, sample_closure(md.tc, Grid(cfg.a, cfg.b, cfg.nodes),
                                                        cfg.samples, cfg.seed)));
  }
  report.merge(check_xi(md.Xi1, md.Xi2));

  std::optional<PortParametrization> pp;
  if (structure_ok) {
    try {
      pp = md.ports();
    } catch (const Error& err) {
      report.add("ports", err.what());
    }
  }
  if (pp && md.sm.n > 0) {
    Eigen::FullPivLU<Eigen::MatrixXd> lu(md.sm.P1);
    if (lu.isInvertible()) {
      const Index K = pp->trace_size();
      report.merge(validate_bcphs(restrict_to_intensive(pp->WB, md.sm.n, K),
                                  restrict_to_intensive(pp->WC, md.sm.n, K), md.sm.P1));
    }
  }

  if (verbose) {
    os << "model " << md.name << ": " << md.summary << "\n";
    os << "  n=" << md.sm.n << " m=" << md.sm.m << " gs=" << md.sm.gs << "\n";
    for (const auto& [key, value] : md.parameters) {
      os << "  " << key << " = " << format_double(value) << "\n";
    }
    print_matrix(os, "Pe", md.pe());
    if (pp) {
      print_matrix(os, "M", pp->M);
      print_matrix(os, "Mp", pp->Mp);
      print_matrix(os, "Pep", pp->Pep);
      print_matrix(os, "WB", pp->WB);
      print_matrix(os, "WC", pp->WC);
    }
    os << "  inputs v:\n";
    for (const auto& l : md.inputs) {
      os << "    " << l.name << " [" << l.unit << "]\n";
    }
    os << "  outputs y:\n";
    for (const auto& l : md.outputs) {
      os << "    " << l.name << " [" << l.unit << "]\n";
    }
  }
  for (const auto& w : md.warnings) {
    os << "warning: " << w << "\n";
  }
  os << "validation: " << (report.ok() ? "PASS" : "FAIL") << "\n";
  if (!report.ok()) {
    os << report;
  }
  return report.ok();
}

int execute(const RunConfig& cfg, const fs::path& dir, std::ostream& os) {
  const ModelDefinition md = build_model(cfg);
  if (!validate(md, cfg, os, false)) {
    return exit_validation;
  }
  const Grid grid(cfg.a, cfg.b, cfg.nodes);
  const Simulator sim(md, grid, cfg.sign);
  const FieldState initial = build_initial_state(cfg, md, grid);
  const BoundaryInputSignal signal = build_signal(cfg.signal, sim.ports().ports());

  RunOptions ro;
  ro.dt = cfg.dt;
  ro.t_end = cfg.t_end;
  ro.report_every = cfg.report_every;
  ro.snapshot_every = cfg.snapshot_every;
  ro.cfl = cfg.cfl;
  const RunResult res = sim.run(initial, signal, ro);

  std::error_code ec;
  fs::create_directories(dir, ec);
  std::ofstream balance(dir / cfg.balance_file);
  std::ofstream trajectory(dir / cfg.trajectory_file);
  if (ec || !balance || !trajectory) {
    os << "error: cannot write outputs to " << dir.string() << "\n";
    return exit_io;
  }
  write_balance_csv(balance, res.reports);
  write_trajectory_csv(trajectory, res.trajectory, md);
  os << "wrote " << (dir / cfg.balance_file).string() << " and "
     << (dir / cfg.trajectory_file).string() << "\n";

  if (res.aborted) {
    os << "run aborted: " << res.abort_reason << "\n";
    return exit_aborted;
  }
  const double tol = cfg.tolerance.at(grid.dz(), cfg.dt, cfg.tol_scale);
  const AuditSummary energy = audit_energy(res.reports, tol);
  const AuditSummary entropy = audit_entropy(res.reports, tol);
  os << "energy audit: " << (energy.pass ? "PASS" : "FAIL") << " (" << energy.detail << ")\n";
  os << "entropy audit: " << (entropy.pass ? "PASS" : "FAIL") << " (" << entropy.detail
     << ", min sigma " << entropy.sigma_min << ")\n";
  if (!energy.pass) {
    os << "failed: energy audit\n";
    return exit_audit;
  }
  if (!entropy.pass) {
    os << "failed: entropy audit\n";
    return exit_audit;
  }
  return exit_ok;
}

int guarded(const std::function<int()>& body) {
  try {
    return body();
  } catch (const ParseError& err) {
    std::cerr << "parse error: " << err.what() << "\n";
    return exit_config;
  } catch (const SchemaError& err) {
    std::cerr << "config error: " << err.what() << "\n";
    return exit_config;
  } catch (const Error& err) {
    std::cerr << "error: " << err.what() << "\n";
    return exit_config;
  }
}

int cmd_list() {
  for (const auto& name : builtin_models()) {
    const ModelDefinition md = make_model(name);
    std::cout << md.name << ": " << md.summary << "\n";
    std::cout << "  ports: " << md.inputs.size() << ", fields:";
    for (const auto& f : md.field_names) {
      std::cout << " " << f;
    }
    std::cout << " s\n  parameters:";
    for (const auto& [key, value] : md.parameters) {
      std::cout << " " << key << "=" << format_double(value);
    }
    std::cout << "\n";
  }
  return exit_ok;
}

int cmd_validate(const Options& opt) {
  return guarded([&] {
    const RunConfig cfg = load(opt);
    return validate(build_model(cfg), cfg, std::cout, true) ? exit_ok : exit_validation;
  });
}

int cmd_run(const Options& opt) {
  return guarded([&] {
    const RunConfig cfg = load(opt);
    return execute(cfg, output_dir(cfg, opt), std::cout);
  });
}

int cmd_sweep(const Options& opt) {
  return guarded([&] {
    const RunConfig base = load(opt);
    if (base.sweep_parameter.empty()) {
      throw SchemaError("sweep", "missing");
    }
    const fs::path root = output_dir(base, opt);
    std::vector<std::future<std::pair<int, std::string>>> jobs;
    for (const double value : base.sweep_values) {
      RunConfig cfg = base;
      cfg.parameters[cfg.sweep_parameter] = value;
      const fs::path dir = root / (cfg.sweep_parameter + "=" + format_double(value));
      jobs.push_back(std::async(std::launch::async, [cfg, dir] {
        std::ostringstream log;
        int code = exit_config;
        try {
          code = execute(cfg, dir, log);
        } catch (const Error& err) {
          log << "error: " << err.what() << "\n";
        }
        return std::make_pair(code, log.str());
      }));
    }
    int worst = exit_ok;
    for (std::size_t i = 0; i < jobs.size(); ++i) {
      const auto [code, log] = jobs[i].get();
      std::cout << "== " << base.sweep_parameter << "=" << format_double(base.sweep_values[i])
                << " (exit " << code << ")\n"
                << log;
      worst = std::max(worst, code);
    }
    return worst;
  });
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Simulator for boundary-controlled irreversible port-Hamiltonian systems"};
  app.require_subcommand(1);
  Options opt;

  const auto add_common = [&opt](CLI::App* sub, bool runs) {
    sub->add_option("--config", opt.config, "YAML run configuration")->required()->check(
        CLI::ExistingFile);
    sub->add_option("--seed", opt.seed, "seed for closure sampling");
    if (runs) {
      sub->add_option("--out", opt.out, "output directory");
      sub->add_option("--tol-scale", opt.tol_scale, "multiplier on audit tolerances");
    }
  };
  CLI::App* validate_cmd = app.add_subcommand("validate", "check structure, closure and ports");
  add_common(validate_cmd, false);
  CLI::App* run_cmd = app.add_subcommand("run", "simulate and audit the balances");
  add_common(run_cmd, true);
  CLI::App* sweep_cmd = app.add_subcommand("sweep", "run once per value of a parameter");
  add_common(sweep_cmd, true);
  CLI::App* list_cmd = app.add_subcommand("list-models", "print the built-in models");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& err) {
    const int code = app.exit(err);
    return code == 0 ? exit_ok : exit_config;
  }

  if (list_cmd->parsed()) return cmd_list();
  if (validate_cmd->parsed()) return cmd_validate(opt);
  if (run_cmd->parsed()) return cmd_run(opt);
  if (sweep_cmd->parsed()) return cmd_sweep(opt);
  return exit_config;
}
