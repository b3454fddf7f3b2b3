#pragma once

#include "bciphs/simulator.hpp"

#include <iosfwd>
#include <string>
#include <vector>

namespace bciphs {

/// Shortest decimal text that reads back to the same double.
std::string format_double(double v);

inline constexpr const char* balance_header =
    "t,H,S,power,sigma_total,entropy_flux,energy_residual,entropy_residual,sigma_min";

void write_balance_csv(std::ostream& os, const std::vector<BalanceReport>& reports);

/// Long format: one row per (t, z) with the fields, s and T.
void write_trajectory_csv(std::ostream& os, const std::vector<Snapshot>& trajectory,
                          const ModelDefinition& model);

}  // namespace bciphs
