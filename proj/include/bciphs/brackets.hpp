#pragma once

#include "bciphs/differential.hpp"
#include "bciphs/structure.hpp"

namespace bciphs {

/// Sign convention for first-order brackets.
///
/// `physical` returns +g^T d/dz(dH/dx), the driving force (gradient of the
/// intensive variable) whose square times gamma is the entropy production
/// appearing in the entropy equation. `literal` returns the opposite sign,
/// obtained by treating the adjoint of g d/dz as g^T d/dz. Zero-order and
/// entropy brackets are the same under both conventions.
enum class BracketSign { physical, literal };

/// Variational derivatives sampled at the nodes.
struct CoEnergy {
  Fields dHdx;  ///< N x n, intensive variables
  Field dHds;   ///< temperature
};

/// Modulated driving forces and the entropy productions they generate.
struct DrivingForces {
  Fields R0;       ///< N x m
  Fields R1;       ///< N x m
  Field rs;        ///< N
  Fields sigma0;   ///< N x m, gamma0 * bracket0^2
  Fields sigma1;   ///< N x m, gamma1 * bracket1^2
  Field sigma_s;   ///< N, gamma_s * bracket_s^2

  /// Total internal production per node.
  Field sigma_total() const;
};

/// Throws InadmissibleState if T <= 0 at any node.
CoEnergy co_energy(const FieldState& state, const ThermoClosure& tc);

/// {S|g|H} = -g^T dH/dx, nodewise. For a stoichiometric column this is the
/// reaction affinity.
Field bracket_zero(const CoEnergy& ce, const Eigen::VectorXd& g_col);

/// {S|g d/dz|H}, nodewise. +g^T d/dz(dH/dx) under the physical sign.
Field bracket_one(const CoEnergy& ce, const Eigen::VectorXd& g_col,
                  const DiffOperator& d_dz,
                  BracketSign sign = BracketSign::physical);

/// {S|H} = d/dz(dH/ds): the temperature gradient.
Field bracket_s(const CoEnergy& ce, const DiffOperator& d_dz);

/// R0, R1, rs and the sigma fields for every process.
DrivingForces driving_forces(const FieldState& state, const CoEnergy& ce,
                       const ThermoClosure& tc, const StructureMatrices& sm,
                       const DiffOperator& d_dz,
                       BracketSign sign = BracketSign::physical);

DrivingForces driving_forces(const FieldState& state, const ThermoClosure& tc,
                       const StructureMatrices& sm, const DiffOperator& d_dz,
                       BracketSign sign = BracketSign::physical);

}  // namespace bciphs
