#pragma once

#include "bciphs/brackets.hpp"
#include "bciphs/ports.hpp"
#include "bciphs/structure.hpp"

#include <map>
#include <optional>
#include <string>

namespace bciphs {

/// Nodewise maxima that bound the explicit time step.
struct StabilityLimits {
  double diffusivity = 0.0;  ///< m^2/s, parabolic terms
  double wave_speed = 0.0;   ///< m/s, hyperbolic terms
  double rate = 0.0;         ///< 1/s, stiff source terms
};

/// Balance-audit tolerance absolute + dz2 * dz^2 + dt4 * dt^4, times a
/// user scale.
struct AuditTolerance {
  double absolute = 1e-10;
  double dz2 = 0.0;
  double dt4 = 0.0;

  double at(double dz, double dt, double scale = 1.0) const {
    return scale * (absolute + dz2 * dz * dz + dt4 * dt * dt * dt * dt);
  }
};

/// Name and unit of one port entry.
struct PortLabel {
  std::string name;
  std::string unit;
};

struct ModelDefinition {
  std::string name;
  std::string summary;
  StructureMatrices sm;
  ThermoClosure tc;
  Eigen::MatrixXd Xi1;
  Eigen::MatrixXd Xi2;
  /// Basis of col(Pe) to use instead of rank_factor.
  std::optional<Eigen::MatrixXd> port_basis;

  double a = 0.0;
  double b = 1.0;
  Index nodes = 101;
  double dt = 0.0;
  double t_end = 1.0;

  std::vector<std::string> field_names;  ///< n names of x
  std::vector<PortLabel> inputs;
  std::vector<PortLabel> outputs;
  AuditTolerance tolerance;
  std::map<std::string, double> parameters;  ///< resolved values
  std::vector<std::string> warnings;

  std::function<StabilityLimits(const FieldState&, const CoEnergy&)> stability;
  /// Entropy density giving temperature T at extensive state x.
  std::function<double(const Eigen::VectorXd&, double)> entropy_at;
  /// Default initial profile on a grid.
  std::function<FieldState(const Grid&)> initial_state;

  Grid default_grid() const { return Grid(a, b, nodes); }
  Eigen::MatrixXd pe() const { return assemble_pe(sm); }
  Eigen::MatrixXd basis() const;
  PortParametrization ports() const;
};

/// Checks structure, closure on `samples` draws from its sampling box, and
/// the Xi conditions.
ValidationReport validate_model(const ModelDefinition& model, std::size_t samples = 64,
                                std::uint64_t seed = 1);

struct FluidParams {
  double kappa = 1.0;   ///< Pa, stiffness of u(phi)
  double phi0 = 1.0;    ///< reference specific volume
  double cv = 1.0;      ///< heat capacity of the inert thermal term
  double T0 = 300.0;    ///< K
  double mu_hat = 0.01;  ///< viscosity, viscous model only
};

struct HeatParams {
  double lambda = 1.0;  ///< W/(m K)
  double cv = 1.0;
  double T0 = 300.0;
};

struct ReactionParams {
  double LA = 1e-3;
  double LB = 1e-3;
  double lambda = 1.0;
  double cv = 1000.0;
  double T0 = 300.0;
  double R = 8.314;
  double k0 = 1.0;
  double Ea = 0.0;
  double Keq = 2.0;    ///< equilibrium constant at T_ref
  double T_ref = 300.0;
  double muA0 = 0.0;
  double c_ref = 1.0;
  bool one_way = false;
};

/// Isentropic fluid in Lagrangian coordinates, x = (phi, upsilon), no
/// dissipation. u = kappa/2 (phi-phi0)^2 + cv T0 phi0 exp(s/cv); mu_hat is
/// ignored.
ModelDefinition p_system_reversible(const FluidParams& p = {});

/// The same fluid with viscous stress; one first-order process with
/// gamma1 = mu_hat / T.
ModelDefinition p_system_viscous(const FluidParams& p = {});

/// Fourier conduction with u(s) = cv T0 exp(s/cv) and gamma_s = lambda/T^2.
ModelDefinition heat_conduction(const HeatParams& p = {});

/// Ideal two-species mixture with A <-> B mass-action kinetics, species
/// diffusion and heat conduction. Throws InvalidKinetics if k0 <= 0 or
/// Keq <= 0.
ModelDefinition diffusion_reaction_ab(const ReactionParams& p = {});

/// Closed-form pieces of the reaction closure, shared with tests.
namespace reaction {

double temperature(const ReactionParams& p, double cA, double cB, double s);
double mixing_entropy(const ReactionParams& p, double cA, double cB);
double equilibrium_constant(const ReactionParams& p, double T);
double rate(const ReactionParams& p, double cA, double cB, double T);
/// RT ln(K cA / cB)
double affinity(const ReactionParams& p, double cA, double cB, double T);

}  // namespace reaction

/// Names accepted by make_model.
std::vector<std::string> builtin_models();

/// Builds a model by name, overriding its parameters. Unknown names or
/// parameter keys throw Error.
ModelDefinition make_model(const std::string& name,
                           const std::map<std::string, double>& overrides = {});

}  // namespace bciphs
