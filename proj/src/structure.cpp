#include "bciphs/structure.hpp"

#include <cmath>
#include <ostream>
#include <random>
#include <sstream>

namespace bciphs {

std::ostream& operator<<(std::ostream& os, const ValidationReport& report) {
  if (report.ok()) {
    return os << "ok\n";
  }
  for (const auto& v : report.violations()) {
    os << "[" << v.check << "] " << v.message << "\n";
  }
  return os;
}

Grid::Grid(double a, double b, Index nodes) : a_(a), b_(b), nodes_(nodes) {
  if (!(a < b)) {
    throw Error("grid: require a < b");
  }
  if (nodes < 3) {
    throw Error("grid: require at least 3 nodes");
  }
  dz_ = (b - a) / static_cast<double>(nodes - 1);
}

Field Grid::nodes() const {
  Field z(nodes_);
  for (Index k = 0; k < nodes_; ++k) {
    z[k] = node(k);
  }
  return z;
}

StructureMatrices StructureMatrices::zeros(Index n, Index m) {
  StructureMatrices sm;
  sm.n = n;
  sm.m = m;
  sm.P0 = Eigen::MatrixXd::Zero(n, n);
  sm.P1 = Eigen::MatrixXd::Zero(n, n);
  sm.G0 = Eigen::MatrixXd::Zero(n, m);
  sm.G1 = Eigen::MatrixXd::Zero(n, m);
  return sm;
}

namespace {

void check_shape(ValidationReport& report, const char* name,
                 const Eigen::MatrixXd& mat, Index rows, Index cols) {
  if (mat.rows() != rows || mat.cols() != cols) {
    std::ostringstream msg;
    msg << name << " is " << mat.rows() << "x" << mat.cols() << ", expected "
        << rows << "x" << cols;
    report.add("dimension", msg.str());
  }
}

}  // namespace

ValidationReport validate_structure(const StructureMatrices& sm) {
  ValidationReport report;
  if (sm.n < 0 || sm.m < 0) {
    report.add("dimension", "n and m must be nonnegative");
    return report;
  }
  check_shape(report, "P0", sm.P0, sm.n, sm.n);
  check_shape(report, "P1", sm.P1, sm.n, sm.n);
  check_shape(report, "G0", sm.G0, sm.n, sm.m);
  check_shape(report, "G1", sm.G1, sm.n, sm.m);
  if (!std::isfinite(sm.gs)) {
    report.add("finite", "gs is not finite");
  }
  if (!report.ok()) {
    return report;
  }

  for (Index i = 0; i < sm.n; ++i) {
    for (Index j = 0; j < sm.n; ++j) {
      if (sm.P0(i, j) != -sm.P0(j, i)) {
        std::ostringstream msg;
        msg << "P0 not skew-symmetric at (" << i << "," << j << "): "
            << sm.P0(i, j) << " vs " << sm.P0(j, i);
        report.add("P0 skew", msg.str());
      }
      if (j > i && sm.P1(i, j) != sm.P1(j, i)) {
        std::ostringstream msg;
        msg << "P1 not symmetric at (" << i << "," << j << "): " << sm.P1(i, j)
            << " vs " << sm.P1(j, i);
        report.add("P1 symmetric", msg.str());
      }
    }
  }
  const auto finite = [&](const char* name, const Eigen::MatrixXd& mat) {
    if (!mat.allFinite()) {
      report.add("finite", std::string(name) + " has non-finite entries");
    }
  };
  finite("P0", sm.P0);
  finite("P1", sm.P1);
  finite("G0", sm.G0);
  finite("G1", sm.G1);
  return report;
}

Box Box::unbounded(Index n) {
  constexpr double inf = std::numeric_limits<double>::infinity();
  Box box;
  box.x_lower = Eigen::VectorXd::Constant(n, -inf);
  box.x_upper = Eigen::VectorXd::Constant(n, inf);
  return box;
}

bool Box::contains(const Eigen::VectorXd& x, double s) const {
  if (x.size() != x_lower.size() || x.size() != x_upper.size()) {
    return false;
  }
  for (Index i = 0; i < x.size(); ++i) {
    if (!(x[i] > x_lower[i] && x[i] < x_upper[i])) {
      return false;
    }
  }
  return s > s_lower && s < s_upper;
}

bool ThermoClosure::admits(const Eigen::VectorXd& x, double s) const {
  if (!x.allFinite() || !std::isfinite(s) || !admissible.contains(x, s)) {
    return false;
  }
  const double T = dh_ds(x, s);
  return std::isfinite(T) && T > 0.0;
}

ValidationReport validate_closure(const ThermoClosure& tc,
                                  std::span<const ClosureSample> samples) {
  ValidationReport report;
  if (static_cast<Index>(tc.gamma0.size()) != tc.m ||
      static_cast<Index>(tc.gamma1.size()) != tc.m || !tc.gamma_s) {
    report.add("closure shape", "closure must provide m gamma0, m gamma1 and "
                                "one gamma_s");
    return report;
  }

  constexpr double rel_tol = 1e-6;
  // Reference scale for a derivative: its own magnitude, floored by the
  // density magnitude per unit of the perturbed variable so that vanishing
  // derivatives are not judged against round-off alone.
  const auto consistent = [&](double analytic, double fd, double h_val,
                              double v) {
    const double scale =
        std::max(std::abs(analytic), 1e-3 * std::abs(h_val) / (1.0 + std::abs(v)));
    return std::abs(fd - analytic) <= rel_tol * scale;
  };

  for (std::size_t k = 0; k < samples.size(); ++k) {
    const auto& smp = samples[k];
    std::ostringstream where;
    where << "sample " << k << " (s=" << smp.s << ", x=["
          << smp.x.transpose() << "])";

    if (smp.x.size() != tc.n) {
      report.add("sample shape", where.str() + ": wrong x dimension");
      continue;
    }
    const double T = tc.dh_ds(smp.x, smp.s);
    if (!(T > 0.0)) {
      std::ostringstream msg;
      msg << where.str() << ": temperature positivity violated, T=" << T;
      report.add("temperature", msg.str());
    }
    const Eigen::VectorXd p = tc.dh_dx(smp.x, smp.s);
    if (p.size() != tc.n) {
      report.add("closure shape", where.str() + ": dh_dx has wrong size");
      continue;
    }

    const PointState pt{smp.x, smp.s, smp.z, p, T};
    const auto check_gamma = [&](const Modulation& g, const std::string& name) {
      const double val = g(pt);
      if (!(val >= 0.0) || !std::isfinite(val)) {
        std::ostringstream msg;
        msg << where.str() << ": " << name << " = " << val << " is not >= 0";
        report.add("gamma", msg.str());
      }
    };
    for (Index i = 0; i < tc.m; ++i) {
      check_gamma(tc.gamma0[i], "gamma0[" + std::to_string(i) + "]");
      check_gamma(tc.gamma1[i], "gamma1[" + std::to_string(i) + "]");
    }
    check_gamma(tc.gamma_s, "gamma_s");

    const double h0 = tc.h(smp.x, smp.s);
    const double ds = 1e-6 * (1.0 + std::abs(smp.s));
    const double fd_s =
        (tc.h(smp.x, smp.s + ds) - tc.h(smp.x, smp.s - ds)) / (2.0 * ds);
    if (!consistent(T, fd_s, h0, smp.s)) {
      std::ostringstream msg;
      msg << where.str() << ": dh_ds=" << T << " but finite difference gives "
          << fd_s;
      report.add("derivative", msg.str());
    }
    for (Index i = 0; i < tc.n; ++i) {
      const double dx = 1e-6 * (1.0 + std::abs(smp.x[i]));
      Eigen::VectorXd xp = smp.x;
      Eigen::VectorXd xm = smp.x;
      xp[i] += dx;
      xm[i] -= dx;
      const double fd = (tc.h(xp, smp.s) - tc.h(xm, smp.s)) / (2.0 * dx);
      if (!consistent(p[i], fd, h0, smp.x[i])) {
        std::ostringstream msg;
        msg << where.str() << ": dh_dx[" << i << "]=" << p[i]
            << " but finite difference gives " << fd;
        report.add("derivative", msg.str());
      }
    }
  }
  return report;
}

std::vector<ClosureSample> sample_closure(const ThermoClosure& tc,
                                          const Grid& grid, std::size_t count,
                                          std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const auto draw = [&](double lo, double hi) {
    return lo + (hi - lo) * unit(rng);
  };
  std::vector<ClosureSample> out;
  out.reserve(count);
  for (std::size_t k = 0; k < count; ++k) {
    ClosureSample smp;
    smp.x.resize(tc.n);
    for (Index i = 0; i < tc.n; ++i) {
      smp.x[i] = draw(tc.sampling.x_lower[i], tc.sampling.x_upper[i]);
    }
    smp.s = draw(tc.sampling.s_lower, tc.sampling.s_upper);
    smp.z = draw(grid.a(), grid.b());
    out.push_back(std::move(smp));
  }
  return out;
}

FieldState::FieldState(Grid g, Fields x_fields, Field s_field)
    : grid(g), x(std::move(x_fields)), s(std::move(s_field)) {
  if (x.rows() != grid.size() || s.size() != grid.size()) {
    throw DimensionMismatch("field state: every field must have one entry "
                            "per grid node");
  }
}

void require_admissible(const FieldState& state, const ThermoClosure& tc) {
  if (state.n() != tc.n) {
    throw DimensionMismatch("field state has " + std::to_string(state.n()) +
                            " fields, closure expects " + std::to_string(tc.n));
  }
  for (Index k = 0; k < state.nodes(); ++k) {
    if (!tc.admits(state.node_x(k), state.s[k])) {
      std::ostringstream msg;
      msg << "state leaves the admissible region at node " << k
          << " (z=" << state.grid.node(k) << ")";
      throw InadmissibleState(msg.str());
    }
  }
}

}  // namespace bciphs
