// Acceptance checks. One PASS/FAIL line per criterion; nonzero exit on any FAIL.

#include "support.hpp"

#include <chrono>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>

using namespace bciphs;
using bciphs::testing::max_abs;

namespace {

// Every tolerance used below.
constexpr double tol_structure = 1e-10;
constexpr double max_seconds_structure = 1.0;
constexpr double tol_xi = 1e-12;
constexpr double tol_bcphs = 1e-10;
constexpr double tol_ports = 1e-10;
constexpr int port_trials = 50;
constexpr Index heat_nodes = 101;
constexpr Index heat_steps = 10000;
constexpr double tol_heat_drift = 1e-6;
constexpr double ratio_lo = 3.5;
constexpr double ratio_hi = 4.5;
constexpr double max_seconds_run = 10.0;
constexpr int entropy_runs = 100;
// The stability bound moves with the state; runs start below it.
constexpr double dt_margin = 0.8;
constexpr double tol_sigma = -1e-12;
constexpr double tol_mass = 1e-8;
constexpr double tol_well_mixed = 1e-5;
constexpr double reaction_cB_floor = 1e-3;
constexpr int dense_states = 50;
constexpr Index dense_max_nodes = 16;
constexpr double tol_dense = 1e-12;
constexpr double sbp_min_order = 1.8;

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

struct Outcome {
  bool pass = true;
  std::ostringstream detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      if (!pass) detail << "; ";
      else detail.str("");
      detail << what;
      pass = false;
    }
  }
};

using Check = std::function<void(Outcome&)>;

Eigen::MatrixXd projector(const Eigen::MatrixXd& M) {
  return M * (M.transpose() * M).inverse() * M.transpose();
}

std::pair<Eigen::MatrixXd, Eigen::MatrixXd> hand_xi() {
  const double s = 1.0 / std::sqrt(2.0);
  Eigen::MatrixXd Xi1(2, 2), Xi2(2, 2);
  Xi1 << s, 0, s, 0;
  Xi2 << 0, s, 0, -s;
  return {Xi1, Xi2};
}

void golden_structure(Outcome& out) {
  const auto t0 = Clock::now();
  const ModelDefinition md = p_system_viscous();
  const Eigen::MatrixXd Pe = assemble_pe(md.sm);
  const Eigen::MatrixXd M = rank_factor(Pe);
  const auto [Xi1, Xi2] = hand_xi();
  const PortParametrization pp = build_ports(M, Pe, Xi1, Xi2);
  const double elapsed = seconds_since(t0);

  Eigen::MatrixXd M_ref(5, 2);
  M_ref << 0.5, 0, 0, 1, 0, 0, 0.5, 0, 0, 0;
  const double span = M.cols() == 2 ? max_abs(projector(M) - projector(M_ref)) : 1.0;
  const double pep = max_abs(pp.Pep - Eigen::Matrix2d{{0, 1}, {1, 0}});
  out.detail << "Pep error " << pep << ", projector error " << span << ", " << elapsed << " s";
  out.require(M.cols() == 2, "rank is not 2");
  out.require(pep <= tol_structure, "Pep differs");
  out.require(span <= tol_structure, "column space differs");
  out.require(elapsed < max_seconds_structure, "too slow");
}

void xi_conditions(Outcome& out) {
  const auto [Xi1, Xi2] = hand_xi();
  // Blockwise pair for the reaction model, trace (mu (2), T, Psi (2), Phi).
  const double s = 1.0 / std::sqrt(2.0);
  Eigen::MatrixXd R1 = Eigen::MatrixXd::Zero(6, 6), R2 = Eigen::MatrixXd::Zero(6, 6);
  for (Index i = 0; i < 3; ++i) {
    R1(i, 3 + i) = -s;
    R1(3 + i, 3 + i) = s;
    R2(i, i) = s;
    R2(3 + i, i) = s;
  }
  double worst = 0.0;
  for (const auto& [A, B] : {std::pair{Xi1, Xi2}, std::pair{R1, R2}}) {
    const Index r = A.rows();
    worst = std::max(worst, max_abs(B.transpose() * A + A.transpose() * B));
    worst = std::max(worst, max_abs(B.transpose() * B + A.transpose() * A -
                                    Eigen::MatrixXd::Identity(r, r)));
    out.require(check_xi(A, B, tol_xi).ok(), "check_xi rejects a pair");
  }
  out.detail << "max deviation " << worst;
  out.require(worst <= tol_xi, "deviation above tolerance");
}

void reversible_bcphs(Outcome& out) {
  Eigen::MatrixXd WB(2, 4), WC(2, 4);
  WB << 1, 0, 0, 0, 0, 0, -1, 0;
  WC << 0, 1, 0, 0, 0, 0, 0, 1;
  const Eigen::Matrix2d P1{{0, 1}, {1, 0}};
  const ValidationReport rep = validate_bcphs(WB, WC, P1, tol_bcphs);

  const PortParametrization pp = p_system_reversible().ports();
  const Eigen::MatrixXd wb = restrict_to_intensive(pp.WB, 2, 4);
  const Eigen::MatrixXd wc = restrict_to_intensive(pp.WC, 2, 4);
  out.detail << "hand maps " << (rep.ok() ? "valid" : "invalid") << ", computed maps "
             << (wb == WB && wc == WC ? "equal" : "differ");
  out.require(rep.ok(), "conditions fail");
  out.require(wb == WB && wc == WC, "computed WB, WC differ from the hand maps");
}

void port_semantics(Outcome& out) {
  std::mt19937_64 rng(404);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  double worst = 0.0;
  for (int trial = 0; trial < port_trials; ++trial) {
    const Grid g(0, 1, 11 + trial);
    const DiffOperator d(g);
    const Index last = g.size() - 1;
    {
      HeatParams hp;
      hp.lambda = 0.1 + 2.0 * unit(rng);
      const ModelDefinition md = heat_conduction(hp);
      const FieldState st = testing::random_state(md, g, rng);
      const CoEnergy ce = co_energy(st, md.tc);
      const PortValues pv =
          evaluate_ports(md.ports(), boundary_trace(ce, driving_forces(st, ce, md.tc, md.sm, d)));
      const Field T = ce.dHds;
      const Field dT = d(T);
      const Eigen::Vector2d v(hp.lambda / T[last] * dT[last], -hp.lambda / T[0] * dT[0]);
      const Eigen::Vector2d y(T[last], T[0]);
      worst = std::max({worst, max_abs(pv.v - v), max_abs(pv.y - y)});
    }
    {
      FluidParams fp;
      fp.mu_hat = 0.5 * unit(rng);
      fp.kappa = 0.5 + unit(rng);
      const ModelDefinition md = p_system_viscous(fp);
      const FieldState st = testing::random_state(md, g, rng);
      const CoEnergy ce = co_energy(st, md.tc);
      const PortValues pv =
          evaluate_ports(md.ports(), boundary_trace(ce, driving_forces(st, ce, md.tc, md.sm, d)));
      const Field u = st.x.col(1);
      const Field du = d(u);
      const auto p = [&](Index k) { return -fp.kappa * (st.x(k, 0) - fp.phi0); };
      // (mu_hat/T) du/dz times T: the trace carries R1 T.
      const Eigen::Vector2d v(-p(last) + fp.mu_hat * du[last], p(0) - fp.mu_hat * du[0]);
      const Eigen::Vector2d y(u[last], u[0]);
      worst = std::max({worst, max_abs(pv.v - v), max_abs(pv.y - y)});
    }
  }
  out.detail << port_trials << " states per model, max error " << worst;
  out.require(worst <= tol_ports, "port values differ");
}

/// Smooth profile compatible with constant boundary entropy fluxes.
FieldState forced_heat_state(const ModelDefinition& md, const Grid& g) {
  Field s(g.size());
  for (Index k = 0; k < g.size(); ++k) {
    const double z = g.node(k);
    s[k] = md.entropy_at(Eigen::VectorXd(0), 300.0 + 30.0 * z * z - 10.0 * z);
  }
  return FieldState(g, Fields(g.size(), 0), s);
}

void first_principle(Outcome& out) {
  const ModelDefinition md = heat_conduction();
  {
    const Grid g(0, 1, heat_nodes);
    const Simulator sim(md, g);
    RunOptions opt;
    opt.dt = md.dt;
    opt.t_end = static_cast<double>(heat_steps) * md.dt;
    opt.report_every = 100;
    const auto t0 = Clock::now();
    const RunResult res = sim.run(md.initial_state(g), BoundaryInputSignal::closed(2), opt);
    const double elapsed = seconds_since(t0);
    const double H0 = res.reports.front().H;
    const double drift = std::abs(res.reports.back().H - H0) / std::abs(H0);
    out.detail << "closed drift " << drift << " (" << elapsed << " s)";
    out.require(!res.aborted, "closed run aborted: " + res.abort_reason);
    out.require(drift <= tol_heat_drift, "drift above tolerance");
    out.require(elapsed < max_seconds_run, "closed run too slow");
  }
  // Constant entropy fluxes matching the initial profile's end slopes.
  const Eigen::Vector2d v(md.parameters.at("lambda") * 50.0 / 320.0,
                          md.parameters.at("lambda") * 10.0 / 300.0);
  std::vector<double> residual;
  for (Index N : {21, 41, 81, 161}) {
    const Grid g(0, 1, N);
    const Simulator sim(md, g);
    RunOptions opt;
    opt.dt = 0.25 * g.dz() * g.dz() * md.parameters.at("cv") / md.parameters.at("lambda");
    opt.t_end = 0.02;
    const auto t0 = Clock::now();
    const RunResult res = sim.run(forced_heat_state(md, g), BoundaryInputSignal::constant(v), opt);
    const double elapsed = seconds_since(t0);
    out.require(!res.aborted, "forced run aborted: " + res.abort_reason);
    out.require(elapsed < max_seconds_run, "forced run too slow");
    residual.push_back(audit_energy(res.reports, 0.0).max_residual);
  }
  out.detail << "; forced ratios";
  for (std::size_t i = 1; i < residual.size(); ++i) {
    const double ratio = residual[i - 1] / residual[i];
    out.detail << " " << ratio;
    out.require(ratio >= ratio_lo && ratio <= ratio_hi, "ratio outside [3.5, 4.5]");
  }
}

void second_principle(Outcome& out) {
  std::mt19937_64 rng(2718);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const auto names = builtin_models();
  double sigma_min = std::numeric_limits<double>::infinity();
  double worst_ratio = 0.0;
  int failures = 0;
  for (int run = 0; run < entropy_runs; ++run) {
    const std::string& name = names[static_cast<std::size_t>(run) % names.size()];
    std::map<std::string, double> params;
    if (name == "heat_conduction") params = {{"lambda", 0.2 + unit(rng)}};
    if (name == "p_system_viscous") params = {{"mu_hat", 0.05 * unit(rng)}};
    if (name == "diffusion_reaction_ab") {
      params = {{"LA", 1e-3 * (0.5 + unit(rng))}, {"LB", 1e-3 * (0.5 + unit(rng))},
                {"Keq", 0.5 + 2.0 * unit(rng)}};
    }
    const ModelDefinition md = make_model(name, params);
    const Grid g(0, 1, 21 + static_cast<Index>(20 * unit(rng)));
    const Simulator sim(md, g);
    const FieldState st = testing::random_state(md, g, rng);
    const CoEnergy ce = co_energy(st, md.tc);
    const BoundaryTrace tr =
        boundary_trace(ce, driving_forces(st, ce, md.tc, md.sm, sim.d_dz()));
    const Eigen::VectorXd v = sim.ports().WB * tr.stacked();
    RunOptions opt;
    opt.dt = dt_margin * sim.stable_dt(st);
    opt.t_end = 40.0 * opt.dt;
    const RunResult res = sim.run(st, BoundaryInputSignal::constant(v), opt);
    const double tol = md.tolerance.at(g.dz(), opt.dt);
    const AuditSummary audit = audit_entropy(res.reports, tol);
    sigma_min = std::min(sigma_min, audit.sigma_min);
    worst_ratio = std::max(worst_ratio, audit.max_residual / tol);
    if (res.aborted || !audit.pass) {
      ++failures;
      out.require(false, name + " run " + std::to_string(run) + ": " +
                             (res.aborted ? res.abort_reason : audit.detail));
    }
  }
  if (out.pass) {
    out.detail << entropy_runs << " runs, min sigma " << sigma_min
               << ", worst residual/tolerance " << worst_ratio;
  } else {
    out.detail << " (" << failures << " failing runs)";
  }
  out.require(sigma_min >= tol_sigma, "negative production");
}

/// 0-D reference: dcA/dt = -r, dcB/dt = r, ds/dt = r A / T.
Eigen::Vector3d well_mixed_reference(const ReactionParams& p, const ModelDefinition& md,
                                     Eigen::Vector3d y, double t_end, Index steps) {
  const auto f = [&](const Eigen::Vector3d& u) {
    const double T = reaction::temperature(p, u[0], u[1], u[2]);
    const double r = reaction::rate(p, u[0], u[1], T);
    return Eigen::Vector3d(-r, r, r * reaction::affinity(p, u[0], u[1], T) / T);
  };
  (void)md;
  const double h = t_end / static_cast<double>(steps);
  for (Index k = 0; k < steps; ++k) {
    const Eigen::Vector3d k1 = f(y);
    const Eigen::Vector3d k2 = f(y + 0.5 * h * k1);
    const Eigen::Vector3d k3 = f(y + 0.5 * h * k2);
    const Eigen::Vector3d k4 = f(y + h * k3);
    y += h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
  }
  return y;
}

void reaction_conservation(Outcome& out) {
  const auto total = [](const FieldState& s) {
    return integrate(s.grid, Field(s.x.col(0) + s.x.col(1)));
  };
  {
    // Nearly pure A, uniform, closed.
    const ModelDefinition md = diffusion_reaction_ab();
    const Grid g(0, 1, 21);
    const Simulator sim(md, g);
    const Eigen::Vector2d c0(1.0, reaction_cB_floor);
    const FieldState st(g, c0.transpose().replicate(g.size(), 1),
                        Field::Constant(g.size(), md.entropy_at(c0, md.parameters.at("T0"))));
    RunOptions opt;
    opt.dt = sim.stable_dt(st);
    opt.t_end = 1.0;
    opt.report_every = 1000;
    const RunResult res = sim.run(st, BoundaryInputSignal::closed(6), opt);
    const double m0 = total(st);
    const double drift = std::abs(total(res.trajectory.back().state) - m0) / m0;
    out.detail << "mass drift " << drift;
    out.require(!res.aborted, "closed run aborted: " + res.abort_reason);
    out.require(drift <= tol_mass, "mass not conserved");
  }
  {
    // Default nonuniform run, reported only.
    const ModelDefinition md = diffusion_reaction_ab();
    const Grid g = md.default_grid();
    const Simulator sim(md, g);
    const FieldState st = md.initial_state(g);
    RunOptions opt;
    opt.dt = md.dt;
    opt.t_end = md.t_end;
    opt.report_every = 1000;
    const RunResult res = sim.run(st, BoundaryInputSignal::closed(6), opt);
    const double m0 = total(st);
    out.detail << " (nonuniform default run, not gated: "
               << std::abs(total(res.trajectory.back().state) - m0) / m0 << ")";
  }
  {
    ReactionParams p;
    p.LA = p.LB = 1e-12;
    p.lambda = 1e-12;
    p.Ea = 2000.0;
    p.cv = 50.0;
    const ModelDefinition md = diffusion_reaction_ab(p);
    const Grid g(0, 1, 11);
    const Simulator sim(md, g);
    const Eigen::Vector2d c0(1.0, 0.1);
    const double s0 = md.entropy_at(c0, p.T0);
    const FieldState st(g, c0.transpose().replicate(g.size(), 1), Field::Constant(g.size(), s0));
    RunOptions opt;
    opt.dt = 1e-3;
    opt.t_end = 1.0;
    opt.report_every = 1000;
    const RunResult res = sim.run(st, BoundaryInputSignal::closed(6), opt);
    const Eigen::Vector3d ref =
        well_mixed_reference(p, md, Eigen::Vector3d(c0[0], c0[1], s0), opt.t_end, 100000);
    const Fields& c = res.trajectory.back().state.x;
    const double err = (c.col(0).array() - ref[0]).abs().maxCoeff() / std::abs(ref[0]);
    out.detail << ", well-mixed c_A error " << err;
    out.require(!res.aborted, "well-mixed run aborted: " + res.abort_reason);
    out.require(err <= tol_well_mixed, "well-mixed limit differs from the 0-D reference");
  }
}

void oracle_equivalence(Outcome& out) {
  std::mt19937_64 rng(1618);
  double worst = 0.0;
  for (const auto& name : builtin_models()) {
    const ModelDefinition md = make_model(name);
    for (int i = 0; i < dense_states; ++i) {
      const Grid g(0, 1, 5 + i % (dense_max_nodes - 4));
      const FieldState st = testing::random_state(md, g, rng);
      const Eigen::VectorXd u = stack_co_energy(co_energy(st, md.tc));
      const Eigen::VectorXd want = stack_rhs(apply_rhs(st, md.sm, md.tc, DiffOperator(g)));
      const Eigen::VectorXd got = dense_operator(st, md.sm, md.tc) * u;
      const double scale = std::max(1.0, want.cwiseAbs().maxCoeff());
      worst = std::max(worst, (got - want).cwiseAbs().maxCoeff() / scale);
    }
  }
  out.detail << "dense relative error " << worst << "; SBP orders";
  out.require(worst <= tol_dense, "dense operator differs from the rhs");

  for (const auto& name : builtin_models()) {
    const ModelDefinition md = make_model(name);
    std::vector<double> defect;
    for (Index N : {8, 16, 32, 64}) {
      const Grid g(0, 1, N);
      Fields x(N, md.sm.n);
      Field s(N);
      for (Index k = 0; k < N; ++k) {
        const double z = g.node(k);
        Eigen::VectorXd xk(md.sm.n);
        for (Index i = 0; i < md.sm.n; ++i) {
          const double lo = md.tc.sampling.x_lower[i];
          const double hi = md.tc.sampling.x_upper[i];
          xk[i] = 0.5 * (lo + hi) + 0.2 * (hi - lo) * std::sin(1.3 * z + 0.7 * i);
        }
        x.row(k) = xk.transpose();
        s[k] = md.entropy_at(xk, md.parameters.at("T0") * (1.0 + 0.05 * std::cos(2.1 * z)));
      }
      const FieldState st(g, x, s);
      const DiffOperator d(g);
      const CoEnergy ce = co_energy(st, md.tc);
      const BoundaryTrace tr = boundary_trace(ce, driving_forces(st, ce, md.tc, md.sm, d));
      const Eigen::VectorXd u = stack_co_energy(ce);
      const Eigen::VectorXd q = trapezoid_weights(g).replicate(md.sm.n + 1, 1);
      const double rate = u.dot(q.asDiagonal() * (dense_operator(st, md.sm, md.tc) * u));
      const Eigen::MatrixXd Pe = md.pe();
      const double flow = 0.5 * (tr.e_b.dot(Pe * tr.e_b) - tr.e_a.dot(Pe * tr.e_a));
      defect.push_back(std::abs(rate - flow));
    }
    double order = std::numeric_limits<double>::infinity();
    for (std::size_t i = 1; i < defect.size(); ++i) {
      if (defect[i] > 0.0) order = std::min(order, std::log2(defect[i - 1] / defect[i]));
    }
    out.detail << " " << name << "=" << order;
    out.require(order >= sbp_min_order, name + " SBP defect not second order");
  }
}

void degenerate_inputs(Outcome& out) {
  std::mt19937_64 rng(31415);
  bool ok = true;
  for (const auto& name : builtin_models()) {
    const ModelDefinition md = testing::without_dissipation(make_model(name));
    const Grid g(0, 1, 21);
    const Simulator sim(md, g);
    const FieldState st = testing::random_state(md, g, rng);
    const CoEnergy ce = co_energy(st, md.tc);
    const DrivingForces f = driving_forces(st, ce, md.tc, md.sm, sim.d_dz());
    const Eigen::VectorXd v = sim.ports().WB * boundary_trace(ce, f).stacked();
    const Rhs rhs = sim.rhs(st, v);
    // reversible part only, with the enforced boundary values
    const BoundaryTrace sub = sim.enforce(boundary_trace(ce, f), v);
    Fields X = ce.dHdx;
    if (md.sm.n > 0) {
      X.row(0) = sub.e_a.head(md.sm.n).transpose();
      X.row(g.size() - 1) = sub.e_b.head(md.sm.n).transpose();
    }
    const Fields want = ce.dHdx * md.sm.P0.transpose() + sim.d_dz()(X) * md.sm.P1.transpose();
    const bool zero_sigma = sim.entropy_production(f).isZero(0);
    const bool frozen_s = rhs.ds_dt.isZero(0);
    const bool reversible = max_abs(rhs.dx_dt - want) == 0.0;
    if (!(zero_sigma && frozen_s && reversible)) {
      out.require(false, name + ": " + (zero_sigma ? "" : "sigma ") + (frozen_s ? "" : "ds/dt ") +
                             (reversible ? "" : "dx/dt"));
      ok = false;
    }
  }

  FluidParams fp;
  fp.mu_hat = 0.0;
  const ModelDefinition visc = p_system_viscous(fp);
  const ModelDefinition rev = p_system_reversible(fp);
  const Grid g = visc.default_grid();
  Eigen::MatrixXd vals(3, 2);
  vals << 0.0, 0.0, 0.02, -0.01, 0.0, 0.0;
  const auto sig = BoundaryInputSignal::table({0.0, 0.25, 0.5}, vals);
  RunOptions opt;
  opt.dt = visc.dt;
  opt.t_end = 1.0;
  opt.snapshot_every = 10;
  const RunResult a = Simulator(visc, g).run(visc.initial_state(g), sig, opt);
  const RunResult b = Simulator(rev, g).run(rev.initial_state(g), sig, opt);
  bool identical = !a.aborted && !b.aborted && a.trajectory.size() == b.trajectory.size();
  for (std::size_t i = 0; identical && i < a.trajectory.size(); ++i) {
    identical = a.trajectory[i].state.x == b.trajectory[i].state.x;
  }
  out.require(identical, "inviscid viscous trajectory differs from the reversible one");
  if (out.pass) {
    out.detail << "no production, frozen entropy, reversible rhs; inviscid run identical over "
               << a.trajectory.size() << " snapshots";
  }
  (void)ok;
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, Check>> criteria = {
      {"golden structure", golden_structure},
      {"xi conditions", xi_conditions},
      {"reversible boundary conditions", reversible_bcphs},
      {"port semantics", port_semantics},
      {"energy balance", first_principle},
      {"entropy balance", second_principle},
      {"reaction conservation", reaction_conservation},
      {"oracle equivalence", oracle_equivalence},
      {"degenerate inputs", degenerate_inputs},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome out;
    try {
      criteria[i].second(out);
    } catch (const std::exception& err) {
      out.require(false, std::string("exception: ") + err.what());
    }
    std::printf("%s %zu %s: %s\n", out.pass ? "PASS" : "FAIL", i + 1, criteria[i].first.c_str(),
                out.detail.str().c_str());
    std::fflush(stdout);
    failed += out.pass ? 0 : 1;
  }
  return failed == 0 ? 0 : 1;
}
