#include "bciphs/models.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

namespace bciphs {

namespace {

constexpr double pi = std::numbers::pi;

Modulation zero_modulation() {
  return [](const PointState&) { return 0.0; };
}

double unit_coordinate(const Grid& grid, Index k) {
  return (grid.node(k) - grid.a()) / (grid.b() - grid.a());
}

}  // namespace

Eigen::MatrixXd ModelDefinition::basis() const {
  return port_basis ? *port_basis : rank_factor(pe());
}

PortParametrization ModelDefinition::ports() const {
  return build_ports(basis(), pe(), Xi1, Xi2);
}

ValidationReport validate_model(const ModelDefinition& model, std::size_t samples,
                                std::uint64_t seed) {
  ValidationReport report = validate_structure(model.sm);
  if (!report.ok()) {
    return report;
  }
  const Grid grid = model.default_grid();
  const auto draws = sample_closure(model.tc, grid, samples, seed);
  report.merge(validate_closure(model.tc, draws));
  report.merge(check_xi(model.Xi1, model.Xi2));

  const Eigen::MatrixXd Pe = model.pe();
  const Eigen::MatrixXd M = model.basis();
  if (M.rows() != Pe.rows() || M.cols() != model.Xi1.rows()) {
    report.add("port basis", "basis is " + std::to_string(M.rows()) + "x" +
                                 std::to_string(M.cols()) + " for a parametrization of side " +
                                 std::to_string(model.Xi1.rows()));
    return report;
  }
  if (M.cols() > 0) {
    const Eigen::MatrixXd Mp = M.completeOrthogonalDecomposition().pseudoInverse();
    const double span_err = (Pe - M * Mp * Pe).cwiseAbs().maxCoeff();
    if (span_err > 1e-10) {
      std::ostringstream msg;
      msg << "basis does not span col(Pe): residual " << span_err;
      report.add("port basis", msg.str());
    }
  }
  return report;
}

namespace {

ThermoClosure fluid_closure(const FluidParams& p, Index m) {
  ThermoClosure tc;
  tc.n = 2;
  tc.m = m;
  tc.h = [p](const Eigen::VectorXd& x, double s) {
    const double dphi = x[0] - p.phi0;
    return 0.5 * x[1] * x[1] + 0.5 * p.kappa * dphi * dphi +
           p.cv * p.T0 * p.phi0 * std::exp(s / p.cv);
  };
  tc.dh_dx = [p](const Eigen::VectorXd& x, double) {
    return Eigen::Vector2d(p.kappa * (x[0] - p.phi0), x[1]).eval();
  };
  tc.dh_ds = [p](const Eigen::VectorXd&, double s) {
    return p.T0 * p.phi0 * std::exp(s / p.cv);
  };
  tc.gamma_s = zero_modulation();
  tc.admissible = Box::unbounded(2);
  tc.admissible.x_lower[0] = 0.0;
  tc.sampling.x_lower = Eigen::Vector2d(0.5 * p.phi0, -1.0);
  tc.sampling.x_upper = Eigen::Vector2d(1.5 * p.phi0, 1.0);
  tc.sampling.s_lower = -p.cv;
  tc.sampling.s_upper = p.cv;
  return tc;
}

ModelDefinition fluid_common(const FluidParams& p) {
  if (!(p.kappa > 0.0) || !(p.phi0 > 0.0) || !(p.cv > 0.0) || !(p.T0 > 0.0)) {
    throw Error("fluid: kappa, phi0, cv and T0 must be positive");
  }
  ModelDefinition md;
  md.field_names = {"phi", "upsilon"};
  std::tie(md.Xi1, md.Xi2) = default_xi(2);
  md.nodes = 101;
  md.dt = 0.2 * (md.b - md.a) / static_cast<double>(md.nodes - 1) / std::sqrt(p.kappa);
  md.t_end = 1.0;
  md.outputs = {{"upsilon(b)", "m/s"}, {"upsilon(a)", "m/s"}};
  md.parameters = {{"kappa", p.kappa}, {"phi0", p.phi0}, {"cv", p.cv}, {"T0", p.T0}};
  md.entropy_at = [p](const Eigen::VectorXd&, double T) {
    return p.cv * std::log(T / (p.T0 * p.phi0));
  };
  md.initial_state = [p](const Grid& grid) {
    Fields x(grid.size(), 2);
    for (Index k = 0; k < grid.size(); ++k) {
      x(k, 0) = p.phi0 + 0.05 * p.phi0 * std::sin(pi * unit_coordinate(grid, k));
      x(k, 1) = 0.0;
    }
    return FieldState(grid, x, Field::Zero(grid.size()));
  };
  md.tolerance = {1e-10, 0.5, 0.0};
  return md;
}

}  // namespace

ModelDefinition p_system_reversible(const FluidParams& p) {
  ModelDefinition md = fluid_common(p);
  md.name = "p_system_reversible";
  md.summary = "isentropic fluid, specific volume and velocity";
  md.sm = StructureMatrices::zeros(2, 0);
  md.sm.P1 << 0.0, 1.0, 1.0, 0.0;
  md.tc = fluid_closure(p, 0);
  md.inputs = {{"-p(b)", "Pa"}, {"p(a)", "Pa"}};
  md.stability = [p](const FieldState&, const CoEnergy&) {
    return StabilityLimits{0.0, std::sqrt(p.kappa), 0.0};
  };
  return md;
}

ModelDefinition p_system_viscous(const FluidParams& p) {
  if (!(p.mu_hat >= 0.0)) {
    throw Error("p_system_viscous: mu_hat must be nonnegative");
  }
  ModelDefinition md = fluid_common(p);
  md.name = "p_system_viscous";
  md.summary = "viscous fluid, specific volume, velocity and entropy";
  md.sm = StructureMatrices::zeros(2, 1);
  md.sm.P1 << 0.0, 1.0, 1.0, 0.0;
  md.sm.G1 << 0.0, 1.0;
  md.tc = fluid_closure(p, 1);
  md.tc.gamma0 = {zero_modulation()};
  const double mu = p.mu_hat;
  md.tc.gamma1 = {[mu](const PointState& pt) { return mu / pt.temperature; }};
  md.inputs = {{"-p(b) + mu_hat dupsilon/dz(b)", "Pa"},
               {"p(a) - mu_hat dupsilon/dz(a)", "Pa"}};
  md.parameters["mu_hat"] = mu;
  md.stability = [p](const FieldState&, const CoEnergy&) {
    return StabilityLimits{p.mu_hat, std::sqrt(p.kappa), 0.0};
  };
  return md;
}

ModelDefinition heat_conduction(const HeatParams& p) {
  if (!(p.lambda >= 0.0) || !(p.cv > 0.0) || !(p.T0 > 0.0)) {
    throw Error("heat_conduction: need lambda >= 0, cv > 0, T0 > 0");
  }
  ModelDefinition md;
  md.name = "heat_conduction";
  md.summary = "Fourier conduction in a rigid body, entropy only";
  md.sm = StructureMatrices::zeros(0, 0);
  md.sm.gs = 1.0;

  ThermoClosure& tc = md.tc;
  tc.n = 0;
  tc.m = 0;
  tc.h = [p](const Eigen::VectorXd&, double s) { return p.cv * p.T0 * std::exp(s / p.cv); };
  tc.dh_dx = [](const Eigen::VectorXd&, double) { return Eigen::VectorXd(0); };
  tc.dh_ds = [p](const Eigen::VectorXd&, double s) { return p.T0 * std::exp(s / p.cv); };
  const double lambda = p.lambda;
  tc.gamma_s = [lambda](const PointState& pt) {
    return lambda / (pt.temperature * pt.temperature);
  };
  tc.admissible = Box::unbounded(0);
  tc.sampling = Box::unbounded(0);
  tc.sampling.s_lower = -p.cv;
  tc.sampling.s_upper = p.cv;

  md.port_basis = Eigen::MatrixXd::Identity(2, 2);
  std::tie(md.Xi1, md.Xi2) = default_xi(2);
  md.nodes = 101;
  const double dz = (md.b - md.a) / static_cast<double>(md.nodes - 1);
  md.dt = lambda > 0.0 ? 0.25 * dz * dz * p.cv / lambda : 1e-3;
  md.t_end = 1e4 * md.dt;
  md.inputs = {{"entropy flux (lambda/T) dT/dz at b", "W/(K m^2)"},
               {"entropy flux -(lambda/T) dT/dz at a", "W/(K m^2)"}};
  md.outputs = {{"temperature T(b)", "K"}, {"temperature T(a)", "K"}};
  md.parameters = {{"lambda", p.lambda}, {"cv", p.cv}, {"T0", p.T0}};
  md.tolerance = {1e-8, 100.0, 0.0};
  md.stability = [p](const FieldState&, const CoEnergy&) {
    return StabilityLimits{p.lambda / p.cv, 0.0, 0.0};
  };
  md.entropy_at = [p](const Eigen::VectorXd&, double T) { return p.cv * std::log(T / p.T0); };
  md.initial_state = [p](const Grid& grid) {
    Field s(grid.size());
    for (Index k = 0; k < grid.size(); ++k) {
      const double T = 300.0 + 50.0 * std::cos(pi * unit_coordinate(grid, k));
      s[k] = p.cv * std::log(T / p.T0);
    }
    return FieldState(grid, Fields(grid.size(), 0), s);
  };
  return md;
}

namespace reaction {

double mixing_entropy(const ReactionParams& p, double cA, double cB) {
  return p.R * (cA * (1.0 - std::log(cA / p.c_ref)) + cB * (1.0 - std::log(cB / p.c_ref)));
}

double temperature(const ReactionParams& p, double cA, double cB, double s) {
  return p.T0 * std::exp((s - mixing_entropy(p, cA, cB)) / p.cv);
}

double equilibrium_constant(const ReactionParams& p, double T) {
  return std::pow(p.Keq, p.T_ref / T);
}

double rate(const ReactionParams& p, double cA, double cB, double T) {
  const double k = p.k0 * std::exp(-p.Ea / (p.R * T));
  if (p.one_way) {
    return k * cA;
  }
  return k * (cA - cB / equilibrium_constant(p, T));
}

double affinity(const ReactionParams& p, double cA, double cB, double T) {
  return p.R * T * (std::log(equilibrium_constant(p, T)) + std::log(cA) - std::log(cB));
}

}  // namespace reaction

ModelDefinition diffusion_reaction_ab(const ReactionParams& p) {
  if (!(p.k0 > 0.0) || !(p.Keq > 0.0)) {
    throw InvalidKinetics("diffusion_reaction_ab: k0 and Keq must be positive");
  }
  if (!(p.LA > 0.0) || !(p.LB > 0.0) || !(p.lambda > 0.0)) {
    throw Error("diffusion_reaction_ab: LA, LB and lambda must be positive");
  }
  if (!(p.cv > 0.0) || !(p.T0 > 0.0) || !(p.R > 0.0) || !(p.T_ref > 0.0) ||
      !(p.c_ref > 0.0) || !(p.Ea >= 0.0)) {
    throw Error("diffusion_reaction_ab: cv, T0, R, T_ref, c_ref must be positive "
                "and Ea nonnegative");
  }
  const double muB0 = p.muA0 - p.R * p.T_ref * std::log(p.Keq);

  ModelDefinition md;
  md.name = "diffusion_reaction_ab";
  md.summary = "A <-> B in an ideal mixture with species diffusion and conduction";
  md.sm = StructureMatrices::zeros(2, 2);
  md.sm.G0 << -1.0, 0.0, 1.0, 0.0;
  md.sm.G1.setIdentity();
  md.sm.gs = 1.0;

  ThermoClosure& tc = md.tc;
  tc.n = 2;
  tc.m = 2;
  tc.h = [p, muB0](const Eigen::VectorXd& c, double s) {
    return p.cv * reaction::temperature(p, c[0], c[1], s) + c[0] * p.muA0 + c[1] * muB0;
  };
  tc.dh_dx = [p, muB0](const Eigen::VectorXd& c, double s) {
    const double T = reaction::temperature(p, c[0], c[1], s);
    return Eigen::Vector2d(p.muA0 + p.R * T * std::log(c[0] / p.c_ref),
                           muB0 + p.R * T * std::log(c[1] / p.c_ref))
        .eval();
  };
  tc.dh_ds = [p](const Eigen::VectorXd& c, double s) {
    return reaction::temperature(p, c[0], c[1], s);
  };

  const Modulation gamma_r = [p](const PointState& pt) {
    const double T = pt.temperature;
    const double cA = pt.x[0];
    const double cB = pt.x[1];
    const double K = reaction::equilibrium_constant(p, T);
    const double k = p.k0 * std::exp(-p.Ea / (p.R * T));
    const double L = std::log(K) + std::log(cA) - std::log(cB);
    if (p.one_way) {
      return k * cA / (p.R * T * T * L);
    }
    // r / (T A) with r = k cB/K expm1(L) and A = R T L.
    const double ratio = std::abs(L) < 1e-8 ? 1.0 + 0.5 * L : std::expm1(L) / L;
    return k * cB * ratio / (K * p.R * T * T);
  };
  tc.gamma0 = {gamma_r, zero_modulation()};
  const double LA = p.LA;
  const double LB = p.LB;
  tc.gamma1 = {[LA](const PointState& pt) { return LA / (pt.temperature * pt.temperature); },
               [LB](const PointState& pt) { return LB / (pt.temperature * pt.temperature); }};
  const double lambda = p.lambda;
  tc.gamma_s = [lambda](const PointState& pt) {
    return lambda / (pt.temperature * pt.temperature);
  };
  tc.admissible = Box::unbounded(2);
  tc.admissible.x_lower.setZero();
  tc.sampling.x_lower = Eigen::Vector2d::Constant(0.05);
  tc.sampling.x_upper = Eigen::Vector2d::Constant(2.0);
  tc.sampling.s_lower = -0.5 * p.cv;
  tc.sampling.s_upper = 0.5 * p.cv;

  // Trace [muA, muB, T, PsiA, PsiB, Phi]; blocks of sizes (2, 1, 2, 1).
  const double r2 = 1.0 / std::sqrt(2.0);
  md.Xi1 = Eigen::MatrixXd::Zero(6, 6);
  md.Xi2 = Eigen::MatrixXd::Zero(6, 6);
  for (Index i = 0; i < 3; ++i) {
    md.Xi1(i, 3 + i) = -r2;
    md.Xi1(3 + i, 3 + i) = r2;
    md.Xi2(i, i) = r2;
    md.Xi2(3 + i, i) = r2;
  }

  md.field_names = {"c_A", "c_B"};
  md.nodes = 51;
  md.dt = 1e-3;
  md.t_end = 2.0;
  md.inputs = {{"Psi_A(a) species A flux", "mol/(m^2 s)"},
               {"Psi_B(a) species B flux", "mol/(m^2 s)"},
               {"Phi(a) entropy flux", "W/(K m^2)"},
               {"Psi_A(b) species A flux", "mol/(m^2 s)"},
               {"Psi_B(b) species B flux", "mol/(m^2 s)"},
               {"Phi(b) entropy flux", "W/(K m^2)"}};
  md.outputs = {{"-mu_A(a)", "J/mol"}, {"-mu_B(a)", "J/mol"}, {"-T(a)", "K"},
                {"mu_A(b)", "J/mol"},  {"mu_B(b)", "J/mol"},  {"T(b)", "K"}};
  md.parameters = {{"LA", p.LA},     {"LB", p.LB},       {"lambda", p.lambda},
                   {"cv", p.cv},     {"T0", p.T0},       {"R", p.R},
                   {"k0", p.k0},     {"Ea", p.Ea},       {"Keq", p.Keq},
                   {"T_ref", p.T_ref}, {"muA0", p.muA0}, {"c_ref", p.c_ref},
                   {"one_way", p.one_way ? 1.0 : 0.0}};
  if (p.one_way) {
    md.warnings.push_back(
        "one-way kinetics: gamma_r = r/(T A) is negative wherever the affinity is "
        "negative and singular at zero affinity; entropy production may be negative");
  }
  md.tolerance = {1e-8, 50.0, 0.0};
  md.stability = [p](const FieldState& state, const CoEnergy& ce) {
    StabilityLimits lim;
    lim.diffusivity = p.lambda / p.cv;
    for (Index k = 0; k < state.nodes(); ++k) {
      const double cA = state.x(k, 0);
      const double cB = state.x(k, 1);
      lim.diffusivity = std::max({lim.diffusivity, p.LA * p.R / cA, p.LB * p.R / cB});
      const double T = ce.dHds[k];
      const double kT = p.k0 * std::exp(-p.Ea / (p.R * T));
      const double rate =
          p.one_way ? kT : kT * (1.0 + 1.0 / reaction::equilibrium_constant(p, T));
      lim.rate = std::max(lim.rate, rate);
    }
    return lim;
  };
  md.entropy_at = [p](const Eigen::VectorXd& c, double T) {
    return p.cv * std::log(T / p.T0) + reaction::mixing_entropy(p, c[0], c[1]);
  };
  md.initial_state = [p, md_entropy = md.entropy_at](const Grid& grid) {
    Fields c(grid.size(), 2);
    Field s(grid.size());
    for (Index k = 0; k < grid.size(); ++k) {
      c(k, 0) = 1.0 + 0.1 * std::cos(pi * unit_coordinate(grid, k));
      c(k, 1) = 0.2;
      s[k] = md_entropy(c.row(k).transpose(), p.T0);
    }
    return FieldState(grid, c, s);
  };
  return md;
}

std::vector<std::string> builtin_models() {
  return {"p_system_reversible", "p_system_viscous", "heat_conduction",
          "diffusion_reaction_ab"};
}

namespace {

void apply_overrides(const std::string& model,
                     const std::map<std::string, double>& overrides,
                     const std::map<std::string, double*>& slots) {
  for (const auto& [key, value] : overrides) {
    const auto it = slots.find(key);
    if (it == slots.end()) {
      throw Error("model " + model + " has no parameter '" + key + "'");
    }
    *it->second = value;
  }
}

}  // namespace

ModelDefinition make_model(const std::string& name,
                           const std::map<std::string, double>& overrides) {
  if (name == "p_system_reversible" || name == "p_system_viscous") {
    FluidParams p;
    std::map<std::string, double*> slots = {
        {"kappa", &p.kappa}, {"phi0", &p.phi0}, {"cv", &p.cv}, {"T0", &p.T0}};
    if (name == "p_system_viscous") {
      slots["mu_hat"] = &p.mu_hat;
    }
    apply_overrides(name, overrides, slots);
    return name == "p_system_viscous" ? p_system_viscous(p) : p_system_reversible(p);
  }
  if (name == "heat_conduction") {
    HeatParams p;
    apply_overrides(name, overrides, {{"lambda", &p.lambda}, {"cv", &p.cv}, {"T0", &p.T0}});
    return heat_conduction(p);
  }
  if (name == "diffusion_reaction_ab") {
    ReactionParams p;
    double one_way = 0.0;
    apply_overrides(name, overrides,
                    {{"LA", &p.LA},
                     {"LB", &p.LB},
                     {"lambda", &p.lambda},
                     {"cv", &p.cv},
                     {"T0", &p.T0},
                     {"R", &p.R},
                     {"k0", &p.k0},
                     {"Ea", &p.Ea},
                     {"Keq", &p.Keq},
                     {"T_ref", &p.T_ref},
                     {"muA0", &p.muA0},
                     {"c_ref", &p.c_ref},
                     {"one_way", &one_way}});
    p.one_way = one_way != 0.0;
    return diffusion_reaction_ab(p);
  }
  throw Error("unknown model '" + name + "'");
}

}  // namespace bciphs
