#pragma once

#include "bciphs/simulator.hpp"

#include <cmath>
#include <numbers>
#include <random>

namespace bciphs::testing {

inline double max_abs(const Eigen::MatrixXd& a) { return a.size() ? a.cwiseAbs().maxCoeff() : 0.0; }

/// Smooth random profile lo..hi built from a few cosine modes with phases.
inline Field smooth_profile(const Grid& grid, double lo, double hi, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const double mid = 0.5 * (lo + hi);
  const double half = 0.5 * (hi - lo);
  double amp[3];
  double phase[3];
  double total = 0.0;
  for (int j = 0; j < 3; ++j) {
    amp[j] = unit(rng);
    phase[j] = 2.0 * std::numbers::pi * unit(rng);
    total += amp[j];
  }
  Field f(grid.size());
  for (Index k = 0; k < grid.size(); ++k) {
    const double zeta = (grid.node(k) - grid.a()) / (grid.b() - grid.a());
    double v = 0.0;
    for (int j = 0; j < 3; ++j) {
      v += amp[j] * std::cos((j + 1) * std::numbers::pi * zeta + phase[j]);
    }
    f[k] = mid + half * v / total;
  }
  return f;
}

/// Random smooth admissible state: fields inside the central half of the
/// closure's sampling box and T within 10% of the model's T0.
inline FieldState random_state(const ModelDefinition& md, const Grid& grid,
                               std::mt19937_64& rng) {
  const Index n = md.tc.n;
  Fields x(grid.size(), n);
  for (Index i = 0; i < n; ++i) {
    const double lo = md.tc.sampling.x_lower[i];
    const double hi = md.tc.sampling.x_upper[i];
    const double q = 0.25 * (hi - lo);
    x.col(i) = smooth_profile(grid, lo + q, hi - q, rng);
  }
  const double T0 = md.parameters.at("T0");
  const Field T = smooth_profile(grid, 0.9 * T0, 1.1 * T0, rng);
  Field s(grid.size());
  for (Index k = 0; k < grid.size(); ++k) {
    s[k] = md.entropy_at(x.row(k).transpose(), T[k]);
  }
  return FieldState(grid, x, s);
}

/// Same model with every modulation replaced by zero.
inline ModelDefinition without_dissipation(ModelDefinition md) {
  const Modulation zero = [](const PointState&) { return 0.0; };
  for (auto& g : md.tc.gamma0) g = zero;
  for (auto& g : md.tc.gamma1) g = zero;
  md.tc.gamma_s = zero;
  return md;
}

}  // namespace bciphs::testing
