#include "bciphs/config.hpp"

#include "bciphs/output.hpp"

#include <yaml-cpp/yaml.h>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <set>
#include <sstream>

namespace bciphs {

double ProfileSpec::at(double z_phys, double a, double b) const {
  const double zeta = (z_phys - a) / (b - a);
  switch (kind) {
    case Kind::constant:
      return value;
    case Kind::cosine:
      return mean + amplitude * std::cos(modes * std::numbers::pi * zeta);
    case Kind::sine:
      return mean + amplitude * std::sin(modes * std::numbers::pi * zeta);
    case Kind::linear:
      return left + (right - left) * zeta;
    case Kind::table: {
      if (z_phys <= z.front()) {
        return values.front();
      }
      if (z_phys >= z.back()) {
        return values.back();
      }
      const auto hi = std::upper_bound(z.begin(), z.end(), z_phys);
      const std::size_t j = static_cast<std::size_t>(hi - z.begin());
      const double w = (z_phys - z[j - 1]) / (z[j] - z[j - 1]);
      return (1.0 - w) * values[j - 1] + w * values[j];
    }
  }
  return value;
}

namespace {

std::string join(const std::string& path, const std::string& key) {
  return path.empty() ? key : path + "." + key;
}

void require_map(const YAML::Node& node, const std::string& path) {
  if (!node.IsMap()) {
    throw SchemaError(path, "expected a mapping");
  }
}

void check_keys(const YAML::Node& node, const std::string& path,
                const std::set<std::string>& allowed) {
  require_map(node, path);
  for (const auto& kv : node) {
    const std::string key = kv.first.as<std::string>();
    if (!allowed.count(key)) {
      throw SchemaError(join(path, key), "unknown key");
    }
  }
}

template <typename T>
T read(const YAML::Node& node, const std::string& path, const char* what) {
  try {
    return node.as<T>();
  } catch (const YAML::Exception&) {
    throw SchemaError(path, std::string("expected ") + what);
  }
}

double read_double(const YAML::Node& node, const std::string& path) {
  const double v = read<double>(node, path, "a number");
  if (!std::isfinite(v)) {
    throw SchemaError(path, "must be finite");
  }
  return v;
}

std::vector<double> read_vector(const YAML::Node& node, const std::string& path) {
  if (!node.IsSequence()) {
    throw SchemaError(path, "expected a list of numbers");
  }
  std::vector<double> out;
  for (std::size_t i = 0; i < node.size(); ++i) {
    out.push_back(read_double(node[i], path + "[" + std::to_string(i) + "]"));
  }
  return out;
}

Eigen::MatrixXd read_matrix(const YAML::Node& node, const std::string& path) {
  if (!node.IsSequence()) {
    throw SchemaError(path, "expected a list of rows");
  }
  std::vector<std::vector<double>> rows;
  for (std::size_t i = 0; i < node.size(); ++i) {
    rows.push_back(read_vector(node[i], path + "[" + std::to_string(i) + "]"));
  }
  const std::size_t cols = rows.empty() ? 0 : rows.front().size();
  Eigen::MatrixXd m(static_cast<Index>(rows.size()), static_cast<Index>(cols));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != cols) {
      throw SchemaError(path, "rows have different lengths");
    }
    for (std::size_t j = 0; j < cols; ++j) {
      m(static_cast<Index>(i), static_cast<Index>(j)) = rows[i][j];
    }
  }
  return m;
}

ProfileSpec read_profile(const YAML::Node& node, const std::string& path) {
  ProfileSpec p;
  if (node.IsScalar()) {
    p.value = read_double(node, path);
    return p;
  }
  require_map(node, path);
  if (!node["kind"]) {
    throw SchemaError(join(path, "kind"), "missing");
  }
  const std::string kind = read<std::string>(node["kind"], join(path, "kind"), "a string");
  if (kind == "constant") {
    check_keys(node, path, {"kind", "value"});
    p.kind = ProfileSpec::Kind::constant;
    p.value = read_double(node["value"], join(path, "value"));
  } else if (kind == "cosine" || kind == "sine") {
    check_keys(node, path, {"kind", "mean", "amplitude", "modes"});
    p.kind = kind == "cosine" ? ProfileSpec::Kind::cosine : ProfileSpec::Kind::sine;
    p.mean = read_double(node["mean"], join(path, "mean"));
    p.amplitude = read_double(node["amplitude"], join(path, "amplitude"));
    if (node["modes"]) {
      p.modes = read_double(node["modes"], join(path, "modes"));
    }
  } else if (kind == "linear") {
    check_keys(node, path, {"kind", "left", "right"});
    p.kind = ProfileSpec::Kind::linear;
    p.left = read_double(node["left"], join(path, "left"));
    p.right = read_double(node["right"], join(path, "right"));
  } else if (kind == "table") {
    check_keys(node, path, {"kind", "z", "values"});
    p.kind = ProfileSpec::Kind::table;
    p.z = read_vector(node["z"], join(path, "z"));
    p.values = read_vector(node["values"], join(path, "values"));
    if (p.z.empty() || p.z.size() != p.values.size()) {
      throw SchemaError(path, "table needs equally many z and values, at least one");
    }
    for (std::size_t i = 1; i < p.z.size(); ++i) {
      if (!(p.z[i] > p.z[i - 1])) {
        throw SchemaError(join(path, "z"), "must be strictly increasing");
      }
    }
  } else {
    throw SchemaError(join(path, "kind"), "unknown profile '" + kind + "'");
  }
  return p;
}

SignalSpec read_signal(const YAML::Node& node, const std::string& path) {
  SignalSpec sig;
  if (node.IsScalar()) {
    const std::string name = read<std::string>(node, path, "a string");
    if (name != "closed") {
      throw SchemaError(path, "unknown preset '" + name + "'");
    }
    return sig;
  }
  check_keys(node, path, {"constant", "table"});
  if (node["constant"] && node["table"]) {
    throw SchemaError(path, "give either constant or table");
  }
  if (node["constant"]) {
    sig.kind = SignalSpec::Kind::constant;
    sig.value = read_vector(node["constant"], join(path, "constant"));
  } else if (node["table"]) {
    const std::string tpath = join(path, "table");
    const YAML::Node table = node["table"];
    check_keys(table, tpath, {"times", "values"});
    sig.kind = SignalSpec::Kind::table;
    sig.times = read_vector(table["times"], join(tpath, "times"));
    const Eigen::MatrixXd values = read_matrix(table["values"], join(tpath, "values"));
    if (values.rows() != static_cast<Index>(sig.times.size()) || sig.times.empty()) {
      throw SchemaError(tpath, "need one row of values per time");
    }
    for (Index i = 0; i < values.rows(); ++i) {
      std::vector<double> row(static_cast<std::size_t>(values.cols()));
      Eigen::Map<Eigen::RowVectorXd>(row.data(), values.cols()) = values.row(i);
      sig.values.push_back(std::move(row));
    }
    for (std::size_t i = 1; i < sig.times.size(); ++i) {
      if (!(sig.times[i] > sig.times[i - 1])) {
        throw SchemaError(join(tpath, "times"), "must be strictly increasing");
      }
    }
  } else {
    throw SchemaError(path, "give closed, constant or table");
  }
  return sig;
}

Index signal_size(const SignalSpec& sig) {
  switch (sig.kind) {
    case SignalSpec::Kind::closed:
      return -1;
    case SignalSpec::Kind::constant:
      return static_cast<Index>(sig.value.size());
    case SignalSpec::Kind::table:
      return static_cast<Index>(sig.values.front().size());
  }
  return -1;
}

Index read_count(const YAML::Node& node, const std::string& path, Index minimum) {
  const long long v = read<long long>(node, path, "an integer");
  if (v < minimum) {
    throw SchemaError(path, "must be at least " + std::to_string(minimum));
  }
  return static_cast<Index>(v);
}

void read_model(const YAML::Node& node, RunConfig& cfg) {
  if (node.IsScalar()) {
    cfg.model = read<std::string>(node, "model", "a string");
    return;
  }
  check_keys(node, "model", {"name", "parameters", "structure", "parametrization", "sign"});
  if (!node["name"]) {
    throw SchemaError("model.name", "missing");
  }
  cfg.model = read<std::string>(node["name"], "model.name", "a string");
  if (const YAML::Node params = node["parameters"]) {
    require_map(params, "model.parameters");
    for (const auto& kv : params) {
      const std::string key = kv.first.as<std::string>();
      cfg.parameters[key] = read_double(kv.second, "model.parameters." + key);
    }
  }
  if (const YAML::Node st = node["structure"]) {
    check_keys(st, "model.structure", {"P0", "P1", "G0", "G1", "gs"});
    for (const char* key : {"P0", "P1", "G0", "G1"}) {
      if (st[key]) {
        cfg.structure[key] = read_matrix(st[key], std::string("model.structure.") + key);
      }
    }
    if (st["gs"]) {
      cfg.gs = read_double(st["gs"], "model.structure.gs");
    }
  }
  if (const YAML::Node xi = node["parametrization"]) {
    check_keys(xi, "model.parametrization", {"Xi1", "Xi2"});
    if (!xi["Xi1"] || !xi["Xi2"]) {
      throw SchemaError("model.parametrization", "give both Xi1 and Xi2");
    }
    cfg.Xi1 = read_matrix(xi["Xi1"], "model.parametrization.Xi1");
    cfg.Xi2 = read_matrix(xi["Xi2"], "model.parametrization.Xi2");
  }
  if (node["sign"]) {
    const std::string s = read<std::string>(node["sign"], "model.sign", "a string");
    if (s == "physical") {
      cfg.sign = BracketSign::physical;
    } else if (s == "literal") {
      cfg.sign = BracketSign::literal;
    } else {
      throw SchemaError("model.sign", "expected physical or literal");
    }
  }
}

RunConfig resolve(const YAML::Node& root) {
  if (!root || root.IsNull()) {
    throw SchemaError("model", "missing");
  }
  check_keys(root, "", {"model", "grid", "time", "initial", "signal", "output", "tolerances",
                        "validation", "sweep"});
  if (!root["model"]) {
    throw SchemaError("model", "missing");
  }
  RunConfig cfg;
  read_model(root["model"], cfg);

  ModelDefinition md;
  try {
    md = build_model(cfg);
  } catch (const SchemaError&) {
    throw;
  } catch (const Error& err) {
    throw SchemaError("model", err.what());
  }

  cfg.a = md.a;
  cfg.b = md.b;
  cfg.nodes = md.nodes;
  bool grid_changed = false;
  if (const YAML::Node g = root["grid"]) {
    check_keys(g, "grid", {"a", "b", "N"});
    if (g["a"]) cfg.a = read_double(g["a"], "grid.a");
    if (g["b"]) cfg.b = read_double(g["b"], "grid.b");
    if (g["N"]) cfg.nodes = read_count(g["N"], "grid.N", 3);
    grid_changed = cfg.a != md.a || cfg.b != md.b || cfg.nodes != md.nodes;
  }
  if (!(cfg.a < cfg.b)) {
    throw SchemaError("grid", "require a < b");
  }

  cfg.t_end = md.t_end;
  std::optional<double> dt;
  if (const YAML::Node t = root["time"]) {
    check_keys(t, "time", {"dt", "t_end", "report_every", "snapshot_every", "cfl"});
    if (t["dt"]) dt = read_double(t["dt"], "time.dt");
    if (t["t_end"]) cfg.t_end = read_double(t["t_end"], "time.t_end");
    if (t["report_every"]) cfg.report_every = read_count(t["report_every"], "time.report_every", 1);
    if (t["snapshot_every"]) {
      cfg.snapshot_every = read_count(t["snapshot_every"], "time.snapshot_every", 0);
    }
    if (t["cfl"]) cfg.cfl = read_double(t["cfl"], "time.cfl");
  }
  if (dt && !(*dt > 0.0)) {
    throw SchemaError("time.dt", "must be positive");
  }
  if (!(cfg.t_end > 0.0)) {
    throw SchemaError("time.t_end", "must be positive");
  }
  if (!(cfg.cfl > 0.0)) {
    throw SchemaError("time.cfl", "must be positive");
  }

  if (const YAML::Node init = root["initial"]) {
    require_map(init, "initial");
    std::set<std::string> allowed(md.field_names.begin(), md.field_names.end());
    allowed.insert("T");
    allowed.insert("s");
    check_keys(init, "initial", allowed);
    if (init["T"] && init["s"]) {
      throw SchemaError("initial", "give T or s, not both");
    }
    for (const auto& kv : init) {
      const std::string key = kv.first.as<std::string>();
      cfg.initial[key] = read_profile(kv.second, "initial." + key);
    }
  }

  if (const YAML::Node sig = root["signal"]) {
    cfg.signal = read_signal(sig, "signal");
  }
  const Index ports = md.ports().ports();
  const Index given = signal_size(cfg.signal);
  if (given >= 0 && given != ports) {
    throw SchemaError("signal", "has " + std::to_string(given) + " entries, model " + md.name +
                                    " has " + std::to_string(ports) + " ports");
  }

  if (const YAML::Node out = root["output"]) {
    check_keys(out, "output", {"dir", "balance", "trajectory"});
    if (out["dir"]) cfg.out_dir = read<std::string>(out["dir"], "output.dir", "a string");
    if (out["balance"]) {
      cfg.balance_file = read<std::string>(out["balance"], "output.balance", "a string");
    }
    if (out["trajectory"]) {
      cfg.trajectory_file = read<std::string>(out["trajectory"], "output.trajectory", "a string");
    }
  }

  cfg.tolerance = md.tolerance;
  if (const YAML::Node tol = root["tolerances"]) {
    check_keys(tol, "tolerances", {"scale", "absolute", "dz2", "dt4"});
    if (tol["scale"]) cfg.tol_scale = read_double(tol["scale"], "tolerances.scale");
    if (tol["absolute"]) cfg.tolerance.absolute = read_double(tol["absolute"], "tolerances.absolute");
    if (tol["dz2"]) cfg.tolerance.dz2 = read_double(tol["dz2"], "tolerances.dz2");
    if (tol["dt4"]) cfg.tolerance.dt4 = read_double(tol["dt4"], "tolerances.dt4");
  }

  if (const YAML::Node val = root["validation"]) {
    check_keys(val, "validation", {"samples", "seed"});
    if (val["samples"]) {
      cfg.samples = static_cast<std::size_t>(read_count(val["samples"], "validation.samples", 1));
    }
    if (val["seed"]) cfg.seed = read<std::uint64_t>(val["seed"], "validation.seed", "an integer");
  }

  if (const YAML::Node sw = root["sweep"]) {
    check_keys(sw, "sweep", {"parameter", "values"});
    if (!sw["parameter"] || !sw["values"]) {
      throw SchemaError("sweep", "give parameter and values");
    }
    cfg.sweep_parameter = read<std::string>(sw["parameter"], "sweep.parameter", "a string");
    cfg.sweep_values = read_vector(sw["values"], "sweep.values");
    RunConfig probe = cfg;
    probe.parameters[cfg.sweep_parameter] = md.parameters.count(cfg.sweep_parameter)
                                                ? md.parameters.at(cfg.sweep_parameter)
                                                : 0.0;
    try {
      (void)make_model(probe.model, probe.parameters);
    } catch (const Error& err) {
      throw SchemaError("sweep.parameter", err.what());
    }
  }

  if (dt) {
    cfg.dt = *dt;
  } else {
    cfg.dt = md.dt;
    if (grid_changed || !cfg.initial.empty()) {
      const Grid grid(cfg.a, cfg.b, cfg.nodes);
      const Simulator sim(md, grid, cfg.sign);
      cfg.dt = std::min(md.dt, sim.stable_dt(build_initial_state(cfg, md, grid), cfg.cfl));
    }
  }
  return cfg;
}

}  // namespace

RunConfig parse_config_text(const std::string& text) {
  YAML::Node root;
  try {
    root = YAML::Load(text);
  } catch (const YAML::ParserException& err) {
    throw ParseError(err.msg, err.mark.line + 1, err.mark.column + 1);
  }
  return resolve(root);
}

RunConfig parse_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw Error("cannot read config file '" + path + "'");
  }
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_config_text(buf.str());
}

ModelDefinition build_model(const RunConfig& cfg) {
  ModelDefinition md = make_model(cfg.model, cfg.parameters);
  for (const auto& [key, mat] : cfg.structure) {
    if (key == "P0") md.sm.P0 = mat;
    if (key == "P1") md.sm.P1 = mat;
    if (key == "G0") md.sm.G0 = mat;
    if (key == "G1") md.sm.G1 = mat;
  }
  if (cfg.gs) {
    md.sm.gs = *cfg.gs;
  }
  if (cfg.Xi1 && cfg.Xi2) {
    md.Xi1 = *cfg.Xi1;
    md.Xi2 = *cfg.Xi2;
  }
  return md;
}

FieldState build_initial_state(const RunConfig& cfg, const ModelDefinition& model,
                               const Grid& grid) {
  FieldState state = model.initial_state(grid);
  Field T(grid.size());
  for (Index k = 0; k < grid.size(); ++k) {
    T[k] = model.tc.dh_ds(state.node_x(k), state.s[k]);
  }
  for (std::size_t i = 0; i < model.field_names.size(); ++i) {
    const auto it = cfg.initial.find(model.field_names[i]);
    if (it == cfg.initial.end()) {
      continue;
    }
    for (Index k = 0; k < grid.size(); ++k) {
      state.x(k, static_cast<Index>(i)) = it->second.at(grid.node(k), grid.a(), grid.b());
    }
  }
  const auto s_it = cfg.initial.find("s");
  const auto T_it = cfg.initial.find("T");
  for (Index k = 0; k < grid.size(); ++k) {
    if (s_it != cfg.initial.end()) {
      state.s[k] = s_it->second.at(grid.node(k), grid.a(), grid.b());
    } else {
      const double Tk =
          T_it != cfg.initial.end() ? T_it->second.at(grid.node(k), grid.a(), grid.b()) : T[k];
      state.s[k] = model.entropy_at(state.node_x(k), Tk);
    }
  }
  return state;
}

BoundaryInputSignal build_signal(const SignalSpec& spec, Index ports) {
  switch (spec.kind) {
    case SignalSpec::Kind::closed:
      return BoundaryInputSignal::closed(ports);
    case SignalSpec::Kind::constant:
      return BoundaryInputSignal::constant(
          Eigen::Map<const Eigen::VectorXd>(spec.value.data(), static_cast<Index>(spec.value.size())));
    case SignalSpec::Kind::table: {
      Eigen::MatrixXd values(static_cast<Index>(spec.values.size()),
                             static_cast<Index>(spec.values.front().size()));
      for (Index i = 0; i < values.rows(); ++i) {
        for (Index j = 0; j < values.cols(); ++j) {
          values(i, j) = spec.values[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
        }
      }
      return BoundaryInputSignal::table(spec.times, values);
    }
  }
  return BoundaryInputSignal::closed(ports);
}

namespace {

void emit_number(YAML::Emitter& out, double v) { out << format_double(v); }

void emit_vector(YAML::Emitter& out, const std::vector<double>& v) {
  out << YAML::Flow << YAML::BeginSeq;
  for (const double x : v) {
    emit_number(out, x);
  }
  out << YAML::EndSeq;
}

void emit_matrix(YAML::Emitter& out, const Eigen::MatrixXd& m) {
  out << YAML::Flow << YAML::BeginSeq;
  for (Index i = 0; i < m.rows(); ++i) {
    out << YAML::Flow << YAML::BeginSeq;
    for (Index j = 0; j < m.cols(); ++j) {
      emit_number(out, m(i, j));
    }
    out << YAML::EndSeq;
  }
  out << YAML::EndSeq;
}

void emit_profile(YAML::Emitter& out, const ProfileSpec& p) {
  out << YAML::BeginMap;
  switch (p.kind) {
    case ProfileSpec::Kind::constant:
      out << YAML::Key << "kind" << YAML::Value << "constant";
      out << YAML::Key << "value" << YAML::Value;
      emit_number(out, p.value);
      break;
    case ProfileSpec::Kind::cosine:
    case ProfileSpec::Kind::sine:
      out << YAML::Key << "kind" << YAML::Value
          << (p.kind == ProfileSpec::Kind::cosine ? "cosine" : "sine");
      out << YAML::Key << "mean" << YAML::Value;
      emit_number(out, p.mean);
      out << YAML::Key << "amplitude" << YAML::Value;
      emit_number(out, p.amplitude);
      out << YAML::Key << "modes" << YAML::Value;
      emit_number(out, p.modes);
      break;
    case ProfileSpec::Kind::linear:
      out << YAML::Key << "kind" << YAML::Value << "linear";
      out << YAML::Key << "left" << YAML::Value;
      emit_number(out, p.left);
      out << YAML::Key << "right" << YAML::Value;
      emit_number(out, p.right);
      break;
    case ProfileSpec::Kind::table:
      out << YAML::Key << "kind" << YAML::Value << "table";
      out << YAML::Key << "z" << YAML::Value;
      emit_vector(out, p.z);
      out << YAML::Key << "values" << YAML::Value;
      emit_vector(out, p.values);
      break;
  }
  out << YAML::EndMap;
}

}  // namespace

std::string dump_config(const RunConfig& cfg) {
  YAML::Emitter out;
  out << YAML::BeginMap;

  out << YAML::Key << "model" << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "name" << YAML::Value << cfg.model;
  if (!cfg.parameters.empty()) {
    out << YAML::Key << "parameters" << YAML::Value << YAML::BeginMap;
    for (const auto& [key, value] : cfg.parameters) {
      out << YAML::Key << key << YAML::Value;
      emit_number(out, value);
    }
    out << YAML::EndMap;
  }
  if (!cfg.structure.empty() || cfg.gs) {
    out << YAML::Key << "structure" << YAML::Value << YAML::BeginMap;
    for (const auto& [key, mat] : cfg.structure) {
      out << YAML::Key << key << YAML::Value;
      emit_matrix(out, mat);
    }
    if (cfg.gs) {
      out << YAML::Key << "gs" << YAML::Value;
      emit_number(out, *cfg.gs);
    }
    out << YAML::EndMap;
  }
  if (cfg.Xi1 && cfg.Xi2) {
    out << YAML::Key << "parametrization" << YAML::Value << YAML::BeginMap;
    out << YAML::Key << "Xi1" << YAML::Value;
    emit_matrix(out, *cfg.Xi1);
    out << YAML::Key << "Xi2" << YAML::Value;
    emit_matrix(out, *cfg.Xi2);
    out << YAML::EndMap;
  }
  out << YAML::Key << "sign" << YAML::Value
      << (cfg.sign == BracketSign::physical ? "physical" : "literal");
  out << YAML::EndMap;

  out << YAML::Key << "grid" << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "a" << YAML::Value;
  emit_number(out, cfg.a);
  out << YAML::Key << "b" << YAML::Value;
  emit_number(out, cfg.b);
  out << YAML::Key << "N" << YAML::Value << static_cast<long long>(cfg.nodes);
  out << YAML::EndMap;

  out << YAML::Key << "time" << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "dt" << YAML::Value;
  emit_number(out, cfg.dt);
  out << YAML::Key << "t_end" << YAML::Value;
  emit_number(out, cfg.t_end);
  out << YAML::Key << "report_every" << YAML::Value << static_cast<long long>(cfg.report_every);
  out << YAML::Key << "snapshot_every" << YAML::Value
      << static_cast<long long>(cfg.snapshot_every);
  out << YAML::Key << "cfl" << YAML::Value;
  emit_number(out, cfg.cfl);
  out << YAML::EndMap;

  if (!cfg.initial.empty()) {
    out << YAML::Key << "initial" << YAML::Value << YAML::BeginMap;
    for (const auto& [key, p] : cfg.initial) {
      out << YAML::Key << key << YAML::Value;
      emit_profile(out, p);
    }
    out << YAML::EndMap;
  }

  out << YAML::Key << "signal" << YAML::Value;
  switch (cfg.signal.kind) {
    case SignalSpec::Kind::closed:
      out << "closed";
      break;
    case SignalSpec::Kind::constant:
      out << YAML::BeginMap << YAML::Key << "constant" << YAML::Value;
      emit_vector(out, cfg.signal.value);
      out << YAML::EndMap;
      break;
    case SignalSpec::Kind::table:
      out << YAML::BeginMap << YAML::Key << "table" << YAML::Value << YAML::BeginMap;
      out << YAML::Key << "times" << YAML::Value;
      emit_vector(out, cfg.signal.times);
      out << YAML::Key << "values" << YAML::Value << YAML::Flow << YAML::BeginSeq;
      for (const auto& row : cfg.signal.values) {
        emit_vector(out, row);
      }
      out << YAML::EndSeq << YAML::EndMap << YAML::EndMap;
      break;
  }

  out << YAML::Key << "output" << YAML::Value << YAML::BeginMap;
  if (!cfg.out_dir.empty()) {
    out << YAML::Key << "dir" << YAML::Value << cfg.out_dir;
  }
  out << YAML::Key << "balance" << YAML::Value << cfg.balance_file;
  out << YAML::Key << "trajectory" << YAML::Value << cfg.trajectory_file;
  out << YAML::EndMap;

  out << YAML::Key << "tolerances" << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "scale" << YAML::Value;
  emit_number(out, cfg.tol_scale);
  out << YAML::Key << "absolute" << YAML::Value;
  emit_number(out, cfg.tolerance.absolute);
  out << YAML::Key << "dz2" << YAML::Value;
  emit_number(out, cfg.tolerance.dz2);
  out << YAML::Key << "dt4" << YAML::Value;
  emit_number(out, cfg.tolerance.dt4);
  out << YAML::EndMap;

  out << YAML::Key << "validation" << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "samples" << YAML::Value << static_cast<unsigned long long>(cfg.samples);
  out << YAML::Key << "seed" << YAML::Value << static_cast<unsigned long long>(cfg.seed);
  out << YAML::EndMap;

  if (!cfg.sweep_parameter.empty()) {
    out << YAML::Key << "sweep" << YAML::Value << YAML::BeginMap;
    out << YAML::Key << "parameter" << YAML::Value << cfg.sweep_parameter;
    out << YAML::Key << "values" << YAML::Value;
    emit_vector(out, cfg.sweep_values);
    out << YAML::EndMap;
  }
  out << YAML::EndMap;
  return std::string(out.c_str()) + "\n";
}

}  // namespace bciphs
