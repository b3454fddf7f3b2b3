#include "bciphs/output.hpp"

#include <array>
#include <charconv>
#include <ostream>

namespace bciphs {

std::string format_double(double v) {
  std::array<char, 32> buf{};
  const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  return std::string(buf.data(), res.ptr);
}

void write_balance_csv(std::ostream& os, const std::vector<BalanceReport>& reports) {
  os << balance_header << '\n';
  for (const auto& r : reports) {
    os << format_double(r.t) << ',' << format_double(r.H) << ',' << format_double(r.S) << ','
       << format_double(r.power) << ',' << format_double(r.sigma_total) << ','
       << format_double(r.entropy_flux) << ',' << format_double(r.energy_residual) << ','
       << format_double(r.entropy_residual) << ',' << format_double(r.sigma_min) << '\n';
  }
}

void write_trajectory_csv(std::ostream& os, const std::vector<Snapshot>& trajectory,
                          const ModelDefinition& model) {
  os << "t,z";
  for (const auto& name : model.field_names) {
    os << ',' << name;
  }
  os << ",s,T\n";
  for (const auto& snap : trajectory) {
    const FieldState& st = snap.state;
    for (Index k = 0; k < st.nodes(); ++k) {
      os << format_double(snap.t) << ',' << format_double(st.grid.node(k));
      for (Index i = 0; i < st.n(); ++i) {
        os << ',' << format_double(st.x(k, i));
      }
      os << ',' << format_double(st.s[k]) << ','
         << format_double(model.tc.dh_ds(st.node_x(k), st.s[k])) << '\n';
    }
  }
}

}  // namespace bciphs
