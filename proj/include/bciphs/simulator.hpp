#pragma once

#include "bciphs/discretization.hpp"
#include "bciphs/models.hpp"

#include <string>
#include <vector>

namespace bciphs {

/// Boundary inputs v(t). Piecewise-linear tables are held constant outside
/// their time range.
class BoundaryInputSignal {
 public:
  /// v = 0.
  static BoundaryInputSignal closed(Index ports);
  static BoundaryInputSignal constant(Eigen::VectorXd v);
  /// One row of `values` per entry of `times` (strictly increasing).
  static BoundaryInputSignal table(std::vector<double> times, Eigen::MatrixXd values);

  Index size() const { return values_.cols(); }
  Eigen::VectorXd operator()(double t) const;

 private:
  std::vector<double> times_;
  Eigen::MatrixXd values_;
};

struct BalanceReport {
  double t = 0.0;
  double H = 0.0;
  double S = 0.0;
  double power = 0.0;         ///< y'v
  double sigma_total = 0.0;   ///< integral of the entropy production
  double entropy_flux = 0.0;  ///< f_s(b) - f_s(a), f_s = -gs rs T
  double energy_residual = 0.0;
  double entropy_residual = 0.0;
  double sigma_min = 0.0;
};

struct Snapshot {
  double t;
  FieldState state;
};

struct RunOptions {
  double dt = 0.0;
  double t_end = 0.0;
  Index report_every = 1;
  Index snapshot_every = 0;  ///< 0 keeps only the first and last state
  double cfl = 0.25;
};

struct RunResult {
  std::vector<Snapshot> trajectory;
  std::vector<BalanceReport> reports;
  bool aborted = false;
  std::string abort_reason;
};

struct AuditSummary {
  bool pass = false;
  double max_residual = 0.0;
  double mean_residual = 0.0;
  double tolerance = 0.0;
  double sigma_min = 0.0;
  std::string detail;
};

/// Method-of-lines integrator for one model on one grid.
///
/// At each Runge-Kutta stage the boundary trace w = [e(b); e(a)] is
/// corrected so that WB w equals the prescribed input: each input row owns
/// one trace coordinate (chosen by a column-pivoted QR of WB, ties to the
/// lowest index) and only those coordinates move.
class Simulator {
 public:
  Simulator(ModelDefinition model, Grid grid, BracketSign sign = BracketSign::physical);

  const ModelDefinition& model() const { return model_; }
  const Grid& grid() const { return grid_; }
  const PortParametrization& ports() const { return ports_; }
  const DiffOperator& d_dz() const { return d_dz_; }

  /// Boundary trace with the input v imposed.
  BoundaryTrace enforce(const BoundaryTrace& tr, const Eigen::VectorXd& v) const;

  /// Time derivative with the input v imposed.
  Rhs rhs(const FieldState& state, const Eigen::VectorXd& v) const;

  /// Largest dt allowed by the stability limits at `state`.
  double stable_dt(const FieldState& state, double cfl = 0.25) const;

  /// One classical RK4 step. Throws StepRejected above the stable dt and
  /// InadmissibleState when a stage leaves the admissible region.
  FieldState step(const FieldState& state, double dt, const BoundaryInputSignal& signal,
                  double t, double cfl = 0.25) const;

  /// Instantaneous totals at time t; residual columns left at zero.
  BalanceReport measure(const FieldState& state, const BoundaryInputSignal& signal,
                        double t) const;

  /// Nodewise entropy production sum_i sigma0 + sum_i sigma1 + gs sigma_s.
  Field entropy_production(const DrivingForces& forces) const;

  /// Fixed-step march to t_end (the last step is shortened to land on it).
  /// Reports every `report_every` steps and at t_end; residuals use
  /// three-point differences of H and S over the report times. Errors during
  /// stepping end the run with `aborted` set.
  RunResult run(const FieldState& initial, const BoundaryInputSignal& signal,
                const RunOptions& options) const;

 private:
  ModelDefinition model_;
  Grid grid_;
  BracketSign sign_;
  DiffOperator d_dz_;
  PortParametrization ports_;
  std::vector<Index> owned_;     ///< trace coordinates set by the inputs
  Eigen::MatrixXd owned_solve_;  ///< inverse of WB restricted to owned_
};

/// Fills energy_residual and entropy_residual from the recorded totals;
/// NaN when fewer than three reports exist.
void fill_residuals(std::vector<BalanceReport>& reports);

/// Derivative of samples f at times t by three-point differences (centered
/// in the interior, one-sided at the ends). Empty for fewer than 3 samples.
std::vector<double> time_derivative(const std::vector<double>& t, const std::vector<double>& f);

/// PASS iff at least three reports and max energy_residual <= tolerance.
AuditSummary audit_energy(const std::vector<BalanceReport>& reports, double tolerance);

/// PASS iff at least three reports, sigma_min >= -1e-12 throughout and max
/// entropy_residual <= tolerance.
AuditSummary audit_entropy(const std::vector<BalanceReport>& reports, double tolerance);

}  // namespace bciphs
