#include "bciphs/brackets.hpp"

#include <sstream>

namespace bciphs {

Field DrivingForces::sigma_total() const {
  Field total = sigma_s;
  if (sigma0.cols() > 0) {
    total += sigma0.rowwise().sum();
  }
  if (sigma1.cols() > 0) {
    total += sigma1.rowwise().sum();
  }
  return total;
}

CoEnergy co_energy(const FieldState& state, const ThermoClosure& tc) {
  if (state.n() != tc.n) {
    throw DimensionMismatch("co_energy: state has " + std::to_string(state.n()) +
                            " fields, closure expects " + std::to_string(tc.n));
  }
  const Index nodes = state.nodes();
  CoEnergy ce;
  ce.dHdx.resize(nodes, tc.n);
  ce.dHds.resize(nodes);
  for (Index k = 0; k < nodes; ++k) {
    const Eigen::VectorXd xk = state.node_x(k);
    const double T = tc.dh_ds(xk, state.s[k]);
    if (!(T > 0.0) || !std::isfinite(T)) {
      std::ostringstream msg;
      msg << "temperature " << T << " at node " << k << " (z="
          << state.grid.node(k) << ") is not positive";
      throw InadmissibleState(msg.str());
    }
    ce.dHds[k] = T;
    if (tc.n > 0) {
      ce.dHdx.row(k) = tc.dh_dx(xk, state.s[k]).transpose();
    }
  }
  return ce;
}

Field bracket_zero(const CoEnergy& ce, const Eigen::VectorXd& g_col) {
  if (g_col.size() != ce.dHdx.cols()) {
    throw DimensionMismatch("bracket_zero: column length does not match n");
  }
  if (g_col.size() == 0) {
    return Field::Zero(ce.dHds.size());
  }
  return -(ce.dHdx * g_col);
}

Field bracket_one(const CoEnergy& ce, const Eigen::VectorXd& g_col,
                  const DiffOperator& d_dz, BracketSign sign) {
  if (g_col.size() != ce.dHdx.cols()) {
    throw DimensionMismatch("bracket_one: column length does not match n");
  }
  if (g_col.size() == 0) {
    return Field::Zero(ce.dHds.size());
  }
  Field b = d_dz(ce.dHdx) * g_col;
  if (sign == BracketSign::literal) {
    b = -b;
  }
  return b;
}

Field bracket_s(const CoEnergy& ce, const DiffOperator& d_dz) {
  return d_dz(ce.dHds);
}

DrivingForces driving_forces(const FieldState& state, const CoEnergy& ce,
                       const ThermoClosure& tc, const StructureMatrices& sm,
                       const DiffOperator& d_dz, BracketSign sign) {
  if (sm.n != tc.n || sm.m != tc.m) {
    throw DimensionMismatch("driving_forces: structure and closure disagree "
                            "on n or m");
  }
  const Index nodes = state.nodes();
  const Index m = sm.m;

  Fields b0(nodes, m);
  Fields b1(nodes, m);
  for (Index i = 0; i < m; ++i) {
    b0.col(i) = bracket_zero(ce, sm.G0.col(i));
    b1.col(i) = bracket_one(ce, sm.G1.col(i), d_dz, sign);
  }
  const Field bs = bracket_s(ce, d_dz);

  Fields g0(nodes, m);
  Fields g1(nodes, m);
  Field gs(nodes);
  for (Index k = 0; k < nodes; ++k) {
    const Eigen::VectorXd xk = state.node_x(k);
    const Eigen::VectorXd pk = ce.dHdx.row(k).transpose();
    const PointState pt{xk, state.s[k], state.grid.node(k), pk, ce.dHds[k]};
    for (Index i = 0; i < m; ++i) {
      g0(k, i) = tc.gamma0[i](pt);
      g1(k, i) = tc.gamma1[i](pt);
    }
    gs[k] = tc.gamma_s(pt);
  }

  DrivingForces f;
  f.R0 = g0.cwiseProduct(b0);
  f.R1 = g1.cwiseProduct(b1);
  f.rs = gs.cwiseProduct(bs);
  f.sigma0 = f.R0.cwiseProduct(b0);
  f.sigma1 = f.R1.cwiseProduct(b1);
  f.sigma_s = f.rs.cwiseProduct(bs);
  return f;
}

DrivingForces driving_forces(const FieldState& state, const ThermoClosure& tc,
                       const StructureMatrices& sm, const DiffOperator& d_dz,
                       BracketSign sign) {
  return driving_forces(state, co_energy(state, tc), tc, sm, d_dz, sign);
}

}  // namespace bciphs
