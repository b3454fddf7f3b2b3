#include "bciphs/ports.hpp"

namespace bciphs {

Eigen::MatrixXd assemble_pe(const StructureMatrices& sm) {
  const Index n = sm.n;
  const Index m = sm.m;
  const Index K = n + m + 2;
  Eigen::MatrixXd Pe = Eigen::MatrixXd::Zero(K, K);
  Pe.topLeftCorner(n, n) = sm.P1;
  Pe.block(0, n + 1, n, m) = sm.G1;
  Pe.block(n + 1, 0, m, n) = sm.G1.transpose();
  Pe(n, K - 1) = sm.gs;
  Pe(K - 1, n) = sm.gs;
  return Pe;
}

std::pair<Eigen::MatrixXd, Eigen::MatrixXd> default_xi(Index r) {
  Eigen::MatrixXd Xi1 = Eigen::MatrixXd::Zero(r, r);
  Eigen::MatrixXd Xi2 = Eigen::MatrixXd::Zero(r, r);
  const Index k = r / 2;
  const double s = 1.0 / std::sqrt(2.0);
  for (Index i = 0; i < k; ++i) {
    Xi1(i, i) = s;
    Xi1(k + i, i) = s;
    Xi2(i, k + i) = s;
    Xi2(k + i, k + i) = -s;
  }
  if (r % 2 == 1) {
    Xi1(r - 1, r - 1) = 1.0;
  }
  return {Xi1, Xi2};
}

Eigen::VectorXd BoundaryTrace::stacked() const {
  Eigen::VectorXd w(e_b.size() + e_a.size());
  w << e_b, e_a;
  return w;
}

Eigen::VectorXd trace_at(const CoEnergy& ce, const DrivingForces& forces, Index k) {
  const Index n = ce.dHdx.cols();
  const Index m = forces.R1.cols();
  const double T = ce.dHds[k];
  Eigen::VectorXd e(n + m + 2);
  e.head(n) = ce.dHdx.row(k).transpose();
  e[n] = T;
  e.segment(n + 1, m) = forces.R1.row(k).transpose() * T;
  e[n + m + 1] = forces.rs[k] * T;
  return e;
}

BoundaryTrace boundary_trace(const CoEnergy& ce, const DrivingForces& forces) {
  const Index last = ce.dHds.size() - 1;
  return {trace_at(ce, forces, last), trace_at(ce, forces, 0)};
}

PortValues evaluate_ports(const PortParametrization& pp, const BoundaryTrace& tr) {
  const Index K = pp.trace_size();
  if (tr.e_b.size() != K || tr.e_a.size() != K) {
    throw DimensionMismatch("evaluate_ports: trace has length " +
                            std::to_string(tr.e_b.size()) + ", ports expect " +
                            std::to_string(K));
  }
  const Eigen::VectorXd w = tr.stacked();
  return {pp.WB * w, pp.WC * w};
}

}  // namespace bciphs
