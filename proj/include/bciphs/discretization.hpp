#pragma once

#include "bciphs/brackets.hpp"
#include "bciphs/differential.hpp"
#include "bciphs/ports.hpp"
#include "bciphs/structure.hpp"

namespace bciphs {

/// Time derivative of a FieldState.
struct Rhs {
  Fields dx_dt;
  Field ds_dt;
};

/// Right-hand side of the IPHS on the grid:
///
///   dx/dt = P0 X + G0 (R0 T) + P1 d/dz X + d/dz(G1 R1 T)
///   ds/dt = -R0'G0'X + R1'G1' d/dz X + gs rs d/dz T + gs d/dz(rs T)
///
/// with X = dH/dx and T = dH/ds sampled at the nodes. Products inside d/dz
/// are formed nodewise before differencing.
///
/// When `boundary` is given, its entries replace the boundary-node values of
/// X, T, R1 T and rs T wherever they are differentiated; pointwise
/// coefficients keep the values of the state.
Rhs assemble_rhs(const CoEnergy& ce, const DrivingForces& forces,
                 const StructureMatrices& sm, const DiffOperator& d_dz,
                 const BoundaryTrace* boundary = nullptr);

Rhs apply_rhs(const FieldState& state, const StructureMatrices& sm,
              const ThermoClosure& tc, const DiffOperator& d_dz,
              BracketSign sign = BracketSign::physical);

/// Largest grid accepted by dense_operator.
inline constexpr Index dense_operator_cap = 64;

/// The operator of assemble_rhs as an explicit (n+1)N square matrix, with R0,
/// R1 and rs frozen at the values of `state`. Acts on stacked co-energy
/// [X(:,0); ...; X(:,n-1); T] and returns [dx_dt(:,0); ...; ds_dt].
/// Throws TooLarge above dense_operator_cap nodes.
Eigen::MatrixXd dense_operator(const FieldState& state, const StructureMatrices& sm,
                               const ThermoClosure& tc,
                               BracketSign sign = BracketSign::physical);

/// [X(:,0); ...; X(:,n-1); T]
Eigen::VectorXd stack_co_energy(const CoEnergy& ce);

/// [dx_dt(:,0); ...; ds_dt]
Eigen::VectorXd stack_rhs(const Rhs& rhs);

}  // namespace bciphs
