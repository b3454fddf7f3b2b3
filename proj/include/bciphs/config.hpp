#pragma once

#include "bciphs/models.hpp"
#include "bciphs/simulator.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace bciphs {

/// Malformed config text. line and column are 1-based.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, int line, int column)
      : Error(what + " (line " + std::to_string(line) + ", column " + std::to_string(column) +
              ")"),
        line_(line),
        column_(column) {}
  int line() const { return line_; }
  int column() const { return column_; }

 private:
  int line_;
  int column_;
};

/// Well-formed text that does not fit the schema. key() is the dotted path.
class SchemaError : public Error {
 public:
  SchemaError(const std::string& key, const std::string& what)
      : Error(key + ": " + what), key_(key) {}
  const std::string& key() const { return key_; }

 private:
  std::string key_;
};

/// One initial profile over the unit coordinate zeta = (z-a)/(b-a).
struct ProfileSpec {
  enum class Kind { constant, cosine, sine, linear, table };
  Kind kind = Kind::constant;
  double value = 0.0;      ///< constant
  double mean = 0.0;       ///< cosine, sine
  double amplitude = 0.0;  ///< cosine, sine
  double modes = 1.0;      ///< mean + amplitude * cos(modes pi zeta)
  double left = 0.0;       ///< linear
  double right = 0.0;
  std::vector<double> z;  ///< table, physical coordinates
  std::vector<double> values;

  double at(double z_phys, double a, double b) const;
};

struct SignalSpec {
  enum class Kind { closed, constant, table };
  Kind kind = Kind::closed;
  std::vector<double> value;
  std::vector<double> times;
  std::vector<std::vector<double>> values;
};

struct RunConfig {
  std::string model;
  std::map<std::string, double> parameters;
  std::map<std::string, Eigen::MatrixXd> structure;  ///< P0, P1, G0, G1
  std::optional<double> gs;
  std::optional<Eigen::MatrixXd> Xi1;
  std::optional<Eigen::MatrixXd> Xi2;

  double a = 0.0;
  double b = 1.0;
  Index nodes = 0;
  double dt = 0.0;
  double t_end = 0.0;
  Index report_every = 1;
  Index snapshot_every = 0;
  double cfl = 0.25;
  BracketSign sign = BracketSign::physical;

  std::map<std::string, ProfileSpec> initial;
  SignalSpec signal;

  std::string out_dir;  ///< empty: decided by the caller
  std::string balance_file = "balance.csv";
  std::string trajectory_file = "trajectory.csv";

  double tol_scale = 1.0;
  AuditTolerance tolerance;

  std::size_t samples = 64;
  std::uint64_t seed = 1;

  std::string sweep_parameter;
  std::vector<double> sweep_values;
};

/// Reads a YAML config and fills defaults from the named model. Throws
/// ParseError, SchemaError, or Error when the file cannot be read.
RunConfig parse_config(const std::string& path);
RunConfig parse_config_text(const std::string& text);

/// YAML text that parses back to an equal config.
std::string dump_config(const RunConfig& cfg);

/// The named model with parameter, structure and parametrization overrides.
ModelDefinition build_model(const RunConfig& cfg);

/// Model default profile with the configured variables replaced. Variables
/// are the model's field names plus "T" or "s".
FieldState build_initial_state(const RunConfig& cfg, const ModelDefinition& model,
                               const Grid& grid);

BoundaryInputSignal build_signal(const SignalSpec& spec, Index ports);

}  // namespace bciphs
