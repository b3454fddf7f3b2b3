#pragma once

#include "bciphs/common.hpp"

#include <cstdint>
#include <functional>
#include <limits>
#include <span>

namespace bciphs {

/// Uniform grid on [a, b] with N nodes z_k = a + k*dz.
class Grid {
 public:
  Grid(double a, double b, Index nodes);

  double a() const { return a_; }
  double b() const { return b_; }
  Index size() const { return nodes_; }
  double dz() const { return dz_; }
  double node(Index k) const { return a_ + static_cast<double>(k) * dz_; }
  Field nodes() const;

 private:
  double a_;
  double b_;
  Index nodes_;
  double dz_;
};

/// Constant matrices of the quasi-Hamiltonian operator.
///
/// P0 (n x n, skew) and G0 (n x m) form the zero-order block, P1 (n x n,
/// symmetric), G1 (n x m) and gs the first-order block. n = 0 is allowed:
/// the state is then the entropy density alone.
struct StructureMatrices {
  Index n = 0;
  Index m = 0;
  Eigen::MatrixXd P0;
  Eigen::MatrixXd P1;
  Eigen::MatrixXd G0;
  Eigen::MatrixXd G1;
  double gs = 0.0;

  static StructureMatrices zeros(Index n, Index m);
};

/// Structural invariants: exact skew-symmetry of P0, exact symmetry of P1,
/// dimensions consistent with n and m.
ValidationReport validate_structure(const StructureMatrices& sm);

/// Pointwise arguments handed to a modulation function.
///
/// Besides (x, z, dh/dx) the temperature and entropy density are passed,
/// since every modulation of the built-in models depends on T.
struct PointState {
  const Eigen::VectorXd& x;
  double s;
  double z;
  const Eigen::VectorXd& dh_dx;
  double temperature;
};

using Modulation = std::function<double(const PointState&)>;

/// Box bounds on (x, s). Open bounds: a state is admissible when every
/// coordinate lies strictly inside. Infinite bounds are allowed.
struct Box {
  Eigen::VectorXd x_lower;
  Eigen::VectorXd x_upper;
  double s_lower = -std::numeric_limits<double>::infinity();
  double s_upper = std::numeric_limits<double>::infinity();

  static Box unbounded(Index n);
  bool contains(const Eigen::VectorXd& x, double s) const;
};

/// Energy density, its co-energy maps and the positive modulations.
struct ThermoClosure {
  Index n = 0;
  Index m = 0;
  std::function<double(const Eigen::VectorXd&, double)> h;
  std::function<Eigen::VectorXd(const Eigen::VectorXd&, double)> dh_dx;
  std::function<double(const Eigen::VectorXd&, double)> dh_ds;
  std::vector<Modulation> gamma0;
  std::vector<Modulation> gamma1;
  Modulation gamma_s;

  /// Where the closure is valid (positivity of concentrations, ...).
  Box admissible;
  /// Finite region used to draw validation samples; must lie inside
  /// `admissible`.
  Box sampling;

  /// Box membership and T > 0.
  bool admits(const Eigen::VectorXd& x, double s) const;
};

struct ClosureSample {
  Eigen::VectorXd x;
  double s = 0.0;
  double z = 0.0;
};

/// Checks T > 0, every gamma >= 0, and agreement of dh_dx and dh_ds with
/// central differences of h (step 1e-6*(1+|v|), relative tolerance 1e-6).
ValidationReport validate_closure(const ThermoClosure& tc,
                                  std::span<const ClosureSample> samples);

/// Uniform samples from the closure's sampling box, deterministic in `seed`.
std::vector<ClosureSample> sample_closure(const ThermoClosure& tc,
                                          const Grid& grid, std::size_t count,
                                          std::uint64_t seed);

/// Sampled extensive variables: x has one column per field, s one entry per
/// node.
struct FieldState {
  Grid grid;
  Fields x;
  Field s;

  FieldState(Grid g, Fields x_fields, Field s_field);

  Index nodes() const { return grid.size(); }
  Index n() const { return x.cols(); }
  /// State of node k as an n-vector.
  Eigen::VectorXd node_x(Index k) const { return x.row(k).transpose(); }
};

/// Throws InadmissibleState naming the first node outside the closure's
/// admissible region.
void require_admissible(const FieldState& state, const ThermoClosure& tc);

}  // namespace bciphs
