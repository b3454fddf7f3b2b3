#include "bciphs/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace bciphs {

BoundaryInputSignal BoundaryInputSignal::closed(Index ports) {
  return constant(Eigen::VectorXd::Zero(ports));
}

BoundaryInputSignal BoundaryInputSignal::constant(Eigen::VectorXd v) {
  if (!v.allFinite()) {
    throw Error("boundary signal: values must be finite");
  }
  BoundaryInputSignal sig;
  sig.times_ = {0.0};
  sig.values_ = v.transpose();
  return sig;
}

BoundaryInputSignal BoundaryInputSignal::table(std::vector<double> times,
                                               Eigen::MatrixXd values) {
  if (times.empty() || static_cast<Index>(times.size()) != values.rows()) {
    throw Error("boundary signal: need one row of values per time");
  }
  for (std::size_t i = 1; i < times.size(); ++i) {
    if (!(times[i] > times[i - 1])) {
      throw Error("boundary signal: times must be strictly increasing");
    }
  }
  if (!values.allFinite()) {
    throw Error("boundary signal: values must be finite");
  }
  BoundaryInputSignal sig;
  sig.times_ = std::move(times);
  sig.values_ = std::move(values);
  return sig;
}

Eigen::VectorXd BoundaryInputSignal::operator()(double t) const {
  if (t <= times_.front()) {
    return values_.row(0).transpose();
  }
  if (t >= times_.back()) {
    return values_.row(values_.rows() - 1).transpose();
  }
  const auto hi = std::upper_bound(times_.begin(), times_.end(), t);
  const Index j = hi - times_.begin();
  const double w = (t - times_[j - 1]) / (times_[j] - times_[j - 1]);
  return ((1.0 - w) * values_.row(j - 1) + w * values_.row(j)).transpose();
}

Simulator::Simulator(ModelDefinition model, Grid grid, BracketSign sign)
    : model_(std::move(model)),
      grid_(grid),
      sign_(sign),
      d_dz_(grid_),
      ports_(model_.ports()) {
  const Index r = ports_.ports();
  if (r == 0) {
    return;
  }
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(ports_.WB);
  qr.setThreshold(1e-10);
  if (qr.rank() < r) {
    throw InvalidParametrization("simulator: WB does not have full row rank");
  }
  owned_.assign(qr.colsPermutation().indices().data(),
                qr.colsPermutation().indices().data() + r);
  Eigen::MatrixXd B(r, r);
  for (Index i = 0; i < r; ++i) {
    B.col(i) = ports_.WB.col(owned_[i]);
  }
  owned_solve_ = B.fullPivLu().inverse();
}

BoundaryTrace Simulator::enforce(const BoundaryTrace& tr, const Eigen::VectorXd& v) const {
  const Index r = ports_.ports();
  if (v.size() != r) {
    throw DimensionMismatch("boundary input has " + std::to_string(v.size()) +
                            " entries, model has " + std::to_string(r) + " ports");
  }
  if (r == 0) {
    return tr;
  }
  Eigen::VectorXd w = tr.stacked();
  for (const Index j : owned_) {
    w[j] = 0.0;
  }
  const Eigen::VectorXd owned_values = owned_solve_ * (v - ports_.WB * w);
  for (Index i = 0; i < r; ++i) {
    w[owned_[i]] = owned_values[i];
  }
  const Index K = ports_.trace_size();
  return {w.head(K), w.tail(K)};
}

Rhs Simulator::rhs(const FieldState& state, const Eigen::VectorXd& v) const {
  const CoEnergy ce = co_energy(state, model_.tc);
  const DrivingForces forces = driving_forces(state, ce, model_.tc, model_.sm, d_dz_, sign_);
  if (ports_.ports() == 0) {
    return assemble_rhs(ce, forces, model_.sm, d_dz_);
  }
  const BoundaryTrace sub = enforce(boundary_trace(ce, forces), v);
  return assemble_rhs(ce, forces, model_.sm, d_dz_, &sub);
}

double Simulator::stable_dt(const FieldState& state, double cfl) const {
  const StabilityLimits lim = model_.stability(state, co_energy(state, model_.tc));
  const double dz = grid_.dz();
  double limit = std::numeric_limits<double>::infinity();
  if (lim.diffusivity > 0.0) {
    limit = std::min(limit, dz * dz / lim.diffusivity);
  }
  if (lim.wave_speed > 0.0) {
    limit = std::min(limit, dz / lim.wave_speed);
  }
  if (lim.rate > 0.0) {
    limit = std::min(limit, 1.0 / lim.rate);
  }
  return cfl * limit;
}

namespace {

FieldState advance(const FieldState& y, double h, const Rhs& k) {
  return FieldState(y.grid, y.x + h * k.dx_dt, y.s + h * k.ds_dt);
}

}  // namespace

FieldState Simulator::step(const FieldState& state, double dt, const BoundaryInputSignal& signal,
                           double t, double cfl) const {
  if (!(dt > 0.0)) {
    throw Error("step: dt must be positive");
  }
  require_admissible(state, model_.tc);
  const double limit = stable_dt(state, cfl);
  if (dt > limit * (1.0 + 1e-12)) {
    std::ostringstream msg;
    msg << "step: dt=" << dt << " exceeds the stability bound " << limit << " (cfl=" << cfl
        << ")";
    throw StepRejected(msg.str());
  }
  const double half = 0.5 * dt;
  const Rhs k1 = rhs(state, signal(t));
  const FieldState y2 = advance(state, half, k1);
  require_admissible(y2, model_.tc);
  const Rhs k2 = rhs(y2, signal(t + half));
  const FieldState y3 = advance(state, half, k2);
  require_admissible(y3, model_.tc);
  const Rhs k3 = rhs(y3, signal(t + half));
  const FieldState y4 = advance(state, dt, k3);
  require_admissible(y4, model_.tc);
  const Rhs k4 = rhs(y4, signal(t + dt));

  const double w = dt / 6.0;
  FieldState next(state.grid,
                  state.x + w * (k1.dx_dt + 2.0 * k2.dx_dt + 2.0 * k3.dx_dt + k4.dx_dt),
                  state.s + w * (k1.ds_dt + 2.0 * k2.ds_dt + 2.0 * k3.ds_dt + k4.ds_dt));
  require_admissible(next, model_.tc);
  return next;
}

Field Simulator::entropy_production(const DrivingForces& forces) const {
  Field sigma = model_.sm.gs * forces.sigma_s;
  if (forces.sigma0.cols() > 0) {
    sigma += forces.sigma0.rowwise().sum();
    sigma += forces.sigma1.rowwise().sum();
  }
  return sigma;
}

BalanceReport Simulator::measure(const FieldState& state, const BoundaryInputSignal& signal,
                                 double t) const {
  const CoEnergy ce = co_energy(state, model_.tc);
  const DrivingForces forces = driving_forces(state, ce, model_.tc, model_.sm, d_dz_, sign_);
  const Index N = state.nodes();

  Field h(N);
  for (Index k = 0; k < N; ++k) {
    h[k] = model_.tc.h(state.node_x(k), state.s[k]);
  }

  BalanceReport rep;
  rep.t = t;
  rep.H = integrate(grid_, h);
  rep.S = integrate(grid_, state.s);

  BoundaryTrace tr = boundary_trace(ce, forces);
  if (ports_.ports() > 0) {
    const Eigen::VectorXd v = signal(t);
    tr = enforce(tr, v);
    const Eigen::VectorXd y = ports_.WC * tr.stacked();
    rep.power = y.dot(v);
  }
  const Field sigma = entropy_production(forces);
  rep.sigma_total = integrate(grid_, sigma);
  rep.sigma_min = sigma.minCoeff();
  const Index last = tr.e_b.size() - 1;
  const double fs_b = -model_.sm.gs * tr.e_b[last];
  const double fs_a = -model_.sm.gs * tr.e_a[last];
  rep.entropy_flux = fs_b - fs_a;
  return rep;
}

RunResult Simulator::run(const FieldState& initial, const BoundaryInputSignal& signal,
                         const RunOptions& options) const {
  if (options.t_end < 0.0) {
    throw Error("run: t_end must be nonnegative");
  }
  if (options.t_end > 0.0 && !(options.dt > 0.0)) {
    throw Error("run: dt must be positive");
  }
  if (options.report_every < 1 || options.snapshot_every < 0) {
    throw Error("run: report_every must be >= 1 and snapshot_every >= 0");
  }
  if (signal.size() != ports_.ports()) {
    throw DimensionMismatch("run: signal has " + std::to_string(signal.size()) +
                            " entries, model has " + std::to_string(ports_.ports()) + " ports");
  }

  const Index steps =
      options.t_end > 0.0
          ? static_cast<Index>(std::ceil(options.t_end / options.dt * (1.0 - 1e-12)))
          : 0;

  RunResult result;
  FieldState state = initial;
  result.trajectory.push_back({0.0, state});
  double t = 0.0;
  bool last_snapped = true;
  try {
    require_admissible(state, model_.tc);
    result.reports.push_back(measure(state, signal, 0.0));
    for (Index k = 1; k <= steps; ++k) {
      const double t_next = k == steps ? options.t_end : static_cast<double>(k) * options.dt;
      state = step(state, t_next - t, signal, t, options.cfl);
      t = t_next;
      last_snapped = false;
      if (k % options.report_every == 0 || k == steps) {
        result.reports.push_back(measure(state, signal, t));
      }
      if (k == steps || (options.snapshot_every > 0 && k % options.snapshot_every == 0)) {
        result.trajectory.push_back({t, state});
        last_snapped = true;
      }
    }
  } catch (const Error& err) {
    result.aborted = true;
    std::ostringstream msg;
    msg << "t=" << t << ": " << err.what();
    result.abort_reason = msg.str();
    if (!last_snapped) {
      result.trajectory.push_back({t, state});
    }
  }
  fill_residuals(result.reports);
  return result;
}

std::vector<double> time_derivative(const std::vector<double>& t, const std::vector<double>& f) {
  const std::size_t n = t.size();
  if (n < 3 || f.size() != n) {
    return {};
  }
  std::vector<double> d(n);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t c = std::clamp<std::size_t>(i, 1, n - 2);
    const double t0 = t[c - 1], t1 = t[c], t2 = t[c + 1];
    const double x = t[i];
    // Derivative at x of the quadratic through (t0,f0), (t1,f1), (t2,f2).
    const double l0 = ((x - t1) + (x - t2)) / ((t0 - t1) * (t0 - t2));
    const double l2 = ((x - t0) + (x - t1)) / ((t2 - t0) * (t2 - t1));
    // The weights sum to zero; differencing against f[c] keeps constants exact.
    d[i] = l0 * (f[c - 1] - f[c]) + l2 * (f[c + 1] - f[c]);
  }
  return d;
}

void fill_residuals(std::vector<BalanceReport>& reports) {
  std::vector<double> t, H, S;
  for (const auto& r : reports) {
    t.push_back(r.t);
    H.push_back(r.H);
    S.push_back(r.S);
  }
  const auto dH = time_derivative(t, H);
  const auto dS = time_derivative(t, S);
  constexpr double nan = std::numeric_limits<double>::quiet_NaN();
  for (std::size_t i = 0; i < reports.size(); ++i) {
    auto& r = reports[i];
    if (dH.empty()) {
      r.energy_residual = nan;
      r.entropy_residual = nan;
      continue;
    }
    r.energy_residual = std::abs(dH[i] - r.power);
    r.entropy_residual = std::abs(dS[i] - r.sigma_total + r.entropy_flux);
  }
}

namespace {

AuditSummary summarize(const std::vector<BalanceReport>& reports, double tolerance,
                       double BalanceReport::*field) {
  AuditSummary out;
  out.tolerance = tolerance;
  out.sigma_min = std::numeric_limits<double>::infinity();
  if (reports.size() < 3) {
    out.detail = "needs at least 3 reports, got " + std::to_string(reports.size());
    return out;
  }
  double sum = 0.0;
  bool finite = true;
  for (const auto& r : reports) {
    const double v = r.*field;
    finite = finite && std::isfinite(v);
    out.max_residual = std::max(out.max_residual, v);
    sum += v;
    out.sigma_min = std::min(out.sigma_min, r.sigma_min);
  }
  out.mean_residual = sum / static_cast<double>(reports.size());
  if (!finite) {
    out.detail = "non-finite residual";
    return out;
  }
  out.pass = out.max_residual <= tolerance;
  std::ostringstream msg;
  msg << "max residual " << out.max_residual << (out.pass ? " <= " : " > ") << "tolerance "
      << tolerance;
  out.detail = msg.str();
  return out;
}

}  // namespace

AuditSummary audit_energy(const std::vector<BalanceReport>& reports, double tolerance) {
  return summarize(reports, tolerance, &BalanceReport::energy_residual);
}

AuditSummary audit_entropy(const std::vector<BalanceReport>& reports, double tolerance) {
  AuditSummary out = summarize(reports, tolerance, &BalanceReport::entropy_residual);
  if (reports.size() >= 3 && out.sigma_min < -1e-12) {
    out.pass = false;
    std::ostringstream msg;
    msg << "; negative entropy production " << out.sigma_min;
    out.detail += msg.str();
  }
  return out;
}

}  // namespace bciphs
