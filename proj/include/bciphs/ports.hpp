#pragma once

#include "bciphs/brackets.hpp"
#include "bciphs/structure.hpp"

#include <Eigen/QR>

#include <algorithm>
#include <cmath>
#include <sstream>
#include <utility>

namespace bciphs {

template <typename Scalar>
using DenseMatrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

/// Extended port matrix
///
///   [ P1  0   G1  0  ]
///   [ 0   0   0   gs ]
///   [ G1' 0   0   0  ]
///   [ 0   gs  0   0  ]
///
/// acting on the boundary trace [dH/dx; T; R1 T; rs T]. Symmetric by
/// construction; side n + m + 2.
Eigen::MatrixXd assemble_pe(const StructureMatrices& sm);

/// Basis of the column space of a symmetric port matrix.
///
/// A column-pivoted Householder QR with relative threshold `rel_tol` picks
/// r = rank(Pe) independent columns of Pe (pivot ties go to the lowest column
/// index). The selected columns are returned in their original order, each
/// scaled by the inverse of its squared norm. Rank zero yields an empty
/// (size x 0) basis.
template <typename Derived>
DenseMatrix<typename Derived::Scalar> rank_factor(
    const Eigen::MatrixBase<Derived>& Pe,
    typename Derived::RealScalar rel_tol = typename Derived::RealScalar(1e-10)) {
  using Scalar = typename Derived::Scalar;
  const Index size = Pe.rows();
  if (Pe.cols() != size) {
    throw DimensionMismatch("rank_factor: port matrix must be square");
  }
  if (size == 0 || Pe.isZero(0)) {
    return DenseMatrix<Scalar>(size, 0);
  }
  Eigen::ColPivHouseholderQR<DenseMatrix<Scalar>> qr(Pe.derived());
  qr.setThreshold(rel_tol);
  const Index r = qr.rank();
  std::vector<Index> picked(qr.colsPermutation().indices().data(),
                            qr.colsPermutation().indices().data() + r);
  std::sort(picked.begin(), picked.end());
  DenseMatrix<Scalar> M(size, r);
  for (Index j = 0; j < r; ++j) {
    const auto col = Pe.col(picked[j]);
    M.col(j) = col / col.squaredNorm();
  }
  return M;
}

/// Checks Xi2' Xi1 + Xi1' Xi2 = 0 and Xi2' Xi2 + Xi1' Xi1 = I entrywise.
template <typename D1, typename D2>
ValidationReport check_xi(const Eigen::MatrixBase<D1>& Xi1,
                          const Eigen::MatrixBase<D2>& Xi2,
                          typename D1::RealScalar tol = typename D1::RealScalar(1e-12)) {
  ValidationReport report;
  const Index r = Xi1.rows();
  if (Xi1.cols() != r || Xi2.rows() != r || Xi2.cols() != r) {
    std::ostringstream msg;
    msg << "Xi1 is " << Xi1.rows() << "x" << Xi1.cols() << ", Xi2 is "
        << Xi2.rows() << "x" << Xi2.cols() << "; both must be square of equal side";
    report.add("xi shape", msg.str());
    return report;
  }
  const auto skew = (Xi2.transpose() * Xi1 + Xi1.transpose() * Xi2).eval();
  const auto unit = (Xi2.transpose() * Xi2 + Xi1.transpose() * Xi1 -
                     DenseMatrix<typename D1::Scalar>::Identity(r, r))
                        .eval();
  if (r > 0 && skew.cwiseAbs().maxCoeff() > tol) {
    std::ostringstream msg;
    msg << "Xi2'Xi1 + Xi1'Xi2 deviates from 0 by " << skew.cwiseAbs().maxCoeff();
    report.add("xi skew", msg.str());
  }
  if (r > 0 && unit.cwiseAbs().maxCoeff() > tol) {
    std::ostringstream msg;
    msg << "Xi2'Xi2 + Xi1'Xi1 deviates from I by " << unit.cwiseAbs().maxCoeff();
    report.add("xi identity", msg.str());
  }
  return report;
}

/// Default parametrization for r ports: coordinates i and i + r/2 are
/// paired with the 2x2 pattern Xi1 = [1 0; 1 0]/sqrt2, Xi2 = [0 1; 0 -1]/sqrt2;
/// for odd r the last coordinate gets Xi1 = 1, Xi2 = 0.
std::pair<Eigen::MatrixXd, Eigen::MatrixXd> default_xi(Index r);

/// Rounds entries lying within a few ulps of a multiple of 1/1024 onto it.
/// Port maps that are signed selections up to round-off then come out exact.
template <typename Derived>
void snap_roundoff(Eigen::MatrixBase<Derived>& A) {
  using std::abs;
  using std::round;
  using Scalar = typename Derived::Scalar;
  const Scalar grid(1024);
  const Scalar eps = Eigen::NumTraits<Scalar>::epsilon();
  for (Index j = 0; j < A.cols(); ++j) {
    for (Index i = 0; i < A.rows(); ++i) {
      const Scalar v = A(i, j);
      const Scalar nearest = round(v * grid) / grid;
      if (abs(v - nearest) <= Scalar(8) * eps * std::max(Scalar(1), abs(v))) {
        A(i, j) = nearest;
      }
    }
  }
}

template <typename Scalar>
struct PortParametrizationT {
  DenseMatrix<Scalar> Xi1;
  DenseMatrix<Scalar> Xi2;
  DenseMatrix<Scalar> M;    ///< K x r, spans col(Pe)
  DenseMatrix<Scalar> Mp;   ///< r x K, (M'M)^-1 M'
  DenseMatrix<Scalar> Pep;  ///< r x r, M' Pe M
  DenseMatrix<Scalar> WB;   ///< r x 2K, inputs
  DenseMatrix<Scalar> WC;   ///< r x 2K, outputs

  Index ports() const { return M.cols(); }
  Index trace_size() const { return M.rows(); }
};

using PortParametrization = PortParametrizationT<double>;

/// Builds Mp, Pep, WB and WC from a basis M of col(Pe) and a (Xi1, Xi2) pair.
/// Throws InvalidParametrization when the Xi conditions fail (1e-12) and
/// SingularGram when M'M is numerically singular.
template <typename DM, typename DP, typename D1, typename D2>
PortParametrizationT<typename DM::Scalar> build_ports(
    const Eigen::MatrixBase<DM>& M, const Eigen::MatrixBase<DP>& Pe,
    const Eigen::MatrixBase<D1>& Xi1, const Eigen::MatrixBase<D2>& Xi2) {
  using Scalar = typename DM::Scalar;
  using Mat = DenseMatrix<Scalar>;
  const Index K = M.rows();
  const Index r = M.cols();
  if (Pe.rows() != K || Pe.cols() != K) {
    throw DimensionMismatch("build_ports: Pe and M disagree on the trace size");
  }
  if (Xi1.rows() != r || Xi2.rows() != r) {
    throw InvalidParametrization("build_ports: Xi matrices must be " +
                                 std::to_string(r) + "x" + std::to_string(r));
  }
  const ValidationReport xi = check_xi(Xi1, Xi2);
  if (!xi.ok()) {
    throw InvalidParametrization("build_ports: " + xi.violations().front().message);
  }

  PortParametrizationT<Scalar> pp;
  pp.Xi1 = Xi1;
  pp.Xi2 = Xi2;
  pp.M = M;
  if (r == 0) {
    pp.Mp = Mat(0, K);
    pp.Pep = Mat(0, 0);
    pp.WB = Mat(0, 2 * K);
    pp.WC = Mat(0, 2 * K);
    return pp;
  }
  const Mat gram = M.transpose() * M;
  Eigen::ColPivHouseholderQR<Mat> gram_qr(gram);
  gram_qr.setThreshold(Scalar(1e-12));
  if (gram_qr.rank() < r) {
    throw SingularGram("build_ports: M'M is numerically singular");
  }
  pp.Mp = gram_qr.solve(Mat(M.transpose()));
  pp.Pep = M.transpose() * Pe * M;

  const Scalar s = Scalar(1) / std::sqrt(Scalar(2));
  const Mat x1p = Xi1 * pp.Pep;
  const Mat x2p = Xi2 * pp.Pep;
  pp.WB.resize(r, 2 * K);
  pp.WC.resize(r, 2 * K);
  pp.WB.leftCols(K) = s * (Xi2 + x1p) * pp.Mp;
  pp.WB.rightCols(K) = s * (Xi2 - x1p) * pp.Mp;
  pp.WC.leftCols(K) = s * (Xi1 + x2p) * pp.Mp;
  pp.WC.rightCols(K) = s * (Xi1 - x2p) * pp.Mp;
  snap_roundoff(pp.Mp);
  snap_roundoff(pp.Pep);
  snap_roundoff(pp.WB);
  snap_roundoff(pp.WC);
  return pp;
}

/// Checks the boundary conditions of a reversible BC-PHS:
///   WB S WB' = 0, WC S WC' = 0, WB S WC' = I,  S = diag(P1^-1, -P1^-1),
/// each entrywise to `tol`. Throws SingularP1 if P1 is not invertible.
template <typename DB, typename DC, typename DP>
ValidationReport validate_bcphs(const Eigen::MatrixBase<DB>& WB,
                                const Eigen::MatrixBase<DC>& WC,
                                const Eigen::MatrixBase<DP>& P1,
                                typename DB::RealScalar tol = typename DB::RealScalar(1e-10)) {
  using Scalar = typename DB::Scalar;
  using Mat = DenseMatrix<Scalar>;
  const Index n = P1.rows();
  if (P1.cols() != n || WB.cols() != 2 * n || WC.cols() != 2 * n ||
      WB.rows() != WC.rows()) {
    throw DimensionMismatch("validate_bcphs: WB, WC must be r x 2n with n the "
                            "side of P1");
  }
  Eigen::FullPivLU<Mat> lu(P1.derived());
  if (n == 0 || !lu.isInvertible()) {
    throw SingularP1("validate_bcphs: P1 is singular");
  }
  const Mat inv = lu.inverse();
  Mat sigma = Mat::Zero(2 * n, 2 * n);
  sigma.topLeftCorner(n, n) = inv;
  sigma.bottomRightCorner(n, n) = -inv;

  ValidationReport report;
  const auto expect = [&](const Mat& got, const Mat& want, const char* what) {
    const Scalar err = (got - want).cwiseAbs().maxCoeff();
    if (!(err <= tol)) {
      std::ostringstream msg;
      msg << what << " violated by " << err;
      report.add("bcphs", msg.str());
    }
  };
  const Index r = WB.rows();
  expect(WB * sigma * WB.transpose(), Mat::Zero(r, r), "WB S WB' = 0");
  expect(WC * sigma * WC.transpose(), Mat::Zero(r, r), "WC S WC' = 0");
  expect(WB * sigma * WC.transpose(), Mat::Identity(r, r), "WB S WC' = I");
  return report;
}

/// Columns of a 2K-wide port map that act on the dH/dx entries at b and a.
template <typename Derived>
DenseMatrix<typename Derived::Scalar> restrict_to_intensive(
    const Eigen::MatrixBase<Derived>& W, Index n, Index trace_size) {
  DenseMatrix<typename Derived::Scalar> out(W.rows(), 2 * n);
  out.leftCols(n) = W.middleCols(0, n);
  out.rightCols(n) = W.middleCols(trace_size, n);
  return out;
}

/// Boundary port variables at z = b and z = a, ordered
/// [dH/dx (n); T; R1 T (m); rs T].
struct BoundaryTrace {
  Eigen::VectorXd e_b;
  Eigen::VectorXd e_a;

  /// [e_b; e_a]
  Eigen::VectorXd stacked() const;
};

/// Trace at node k.
Eigen::VectorXd trace_at(const CoEnergy& ce, const DrivingForces& forces, Index k);

BoundaryTrace boundary_trace(const CoEnergy& ce, const DrivingForces& forces);

struct PortValues {
  Eigen::VectorXd v;
  Eigen::VectorXd y;
};

/// v = WB [e_b; e_a], y = WC [e_b; e_a].
PortValues evaluate_ports(const PortParametrization& pp, const BoundaryTrace& tr);

}  // namespace bciphs
