#include "bciphs/discretization.hpp"

namespace bciphs {

namespace {

void overwrite_ends(Field& f, double at_a, double at_b) {
  f[0] = at_a;
  f[f.size() - 1] = at_b;
}

}  // namespace

Rhs assemble_rhs(const CoEnergy& ce, const DrivingForces& forces,
                 const StructureMatrices& sm, const DiffOperator& d_dz,
                 const BoundaryTrace* boundary) {
  const Index nodes = ce.dHds.size();
  const Index n = sm.n;
  const Index m = sm.m;
  const Field& T = ce.dHds;

  // Differentiated quantities, optionally pinned at the ends.
  Fields X = ce.dHdx;
  Field Tb = T;
  Fields Psi = forces.R1.array().colwise() * T.array();
  Field Phi = forces.rs.cwiseProduct(T);
  if (boundary != nullptr) {
    const Eigen::VectorXd& eb = boundary->e_b;
    const Eigen::VectorXd& ea = boundary->e_a;
    if (eb.size() != n + m + 2 || ea.size() != n + m + 2) {
      throw DimensionMismatch("assemble_rhs: substituted trace has wrong length");
    }
    X.row(0) = ea.head(n).transpose();
    X.row(nodes - 1) = eb.head(n).transpose();
    overwrite_ends(Tb, ea[n], eb[n]);
    Psi.row(0) = ea.segment(n + 1, m).transpose();
    Psi.row(nodes - 1) = eb.segment(n + 1, m).transpose();
    overwrite_ends(Phi, ea[n + m + 1], eb[n + m + 1]);
  }

  const Fields dX = d_dz(X);
  const Fields R0T = forces.R0.array().colwise() * T.array();

  Rhs out;
  out.dx_dt = Fields::Zero(nodes, n);
  out.ds_dt = Field::Zero(nodes);
  if (n > 0) {
    out.dx_dt.noalias() += ce.dHdx * sm.P0.transpose();
    out.dx_dt.noalias() += dX * sm.P1.transpose();
    if (m > 0) {
      out.dx_dt.noalias() += R0T * sm.G0.transpose();
      out.dx_dt.noalias() += d_dz(Psi) * sm.G1.transpose();
      out.ds_dt -= ((ce.dHdx * sm.G0).array() * forces.R0.array()).rowwise().sum().matrix();
      out.ds_dt += ((dX * sm.G1).array() * forces.R1.array()).rowwise().sum().matrix();
    }
  }
  if (sm.gs != 0.0) {
    out.ds_dt += sm.gs * (forces.rs.cwiseProduct(d_dz(Tb)) + d_dz(Phi));
  }
  return out;
}

Rhs apply_rhs(const FieldState& state, const StructureMatrices& sm,
              const ThermoClosure& tc, const DiffOperator& d_dz, BracketSign sign) {
  const CoEnergy ce = co_energy(state, tc);
  const DrivingForces forces = driving_forces(state, ce, tc, sm, d_dz, sign);
  return assemble_rhs(ce, forces, sm, d_dz);
}

Eigen::MatrixXd dense_operator(const FieldState& state, const StructureMatrices& sm,
                               const ThermoClosure& tc, BracketSign sign) {
  const Index N = state.nodes();
  if (N > dense_operator_cap) {
    throw TooLarge("dense_operator: " + std::to_string(N) + " nodes exceeds the cap of " +
                   std::to_string(dense_operator_cap));
  }
  const DiffOperator d_dz(state.grid);
  const CoEnergy ce = co_energy(state, tc);
  const DrivingForces f = driving_forces(state, ce, tc, sm, d_dz, sign);
  const Index n = sm.n;
  const Eigen::MatrixXd D = d_dz.matrix();
  const Eigen::MatrixXd I = Eigen::MatrixXd::Identity(N, N);

  // Nodewise couplings between field i and the temperature.
  const Fields g0r0 = n > 0 ? Fields(f.R0 * sm.G0.transpose()) : Fields(N, 0);
  const Fields g1r1 = n > 0 ? Fields(f.R1 * sm.G1.transpose()) : Fields(N, 0);

  Eigen::MatrixXd A = Eigen::MatrixXd::Zero((n + 1) * N, (n + 1) * N);
  for (Index i = 0; i < n; ++i) {
    for (Index j = 0; j < n; ++j) {
      A.block(i * N, j * N, N, N) = sm.P0(i, j) * I + sm.P1(i, j) * D;
    }
    A.block(i * N, n * N, N, N) =
        Eigen::MatrixXd(g0r0.col(i).asDiagonal()) + D * g1r1.col(i).asDiagonal();
    A.block(n * N, i * N, N, N) =
        -Eigen::MatrixXd(g0r0.col(i).asDiagonal()) + g1r1.col(i).asDiagonal() * D;
  }
  A.block(n * N, n * N, N, N) =
      sm.gs * (f.rs.asDiagonal() * D + D * f.rs.asDiagonal());
  return A;
}

Eigen::VectorXd stack_co_energy(const CoEnergy& ce) {
  const Index N = ce.dHds.size();
  const Index n = ce.dHdx.cols();
  Eigen::VectorXd u((n + 1) * N);
  u.head(n * N) = ce.dHdx.reshaped();
  u.tail(N) = ce.dHds;
  return u;
}

Eigen::VectorXd stack_rhs(const Rhs& rhs) {
  const Index N = rhs.ds_dt.size();
  const Index n = rhs.dx_dt.cols();
  Eigen::VectorXd u((n + 1) * N);
  u.head(n * N) = rhs.dx_dt.reshaped();
  u.tail(N) = rhs.ds_dt;
  return u;
}

}  // namespace bciphs
