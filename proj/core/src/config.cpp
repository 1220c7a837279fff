#include "ctpi/config.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "ctpi/units.hpp"

namespace ctpi::cli {

using nlohmann::json;

namespace {

[[noreturn]] void fail(const std::string& path, const std::string& what) {
  throw ConfigError(path + ": " + what);
}

const json& require(const json& node, const std::string& key,
                    const std::string& path) {
  auto it = node.find(key);
  if (it == node.end()) fail(path + "." + key, "missing required field");
  return *it;
}

double as_number(const json& node, const std::string& path) {
  if (!node.is_number()) fail(path, "expected a number");
  return node.get<double>();
}

int as_int(const json& node, const std::string& path) {
  if (!node.is_number_integer()) fail(path, "expected an integer");
  return node.get<int>();
}

std::string as_string(const json& node, const std::string& path) {
  if (!node.is_string()) fail(path, "expected a string");
  return node.get<std::string>();
}

Complex as_complex(const json& node, const std::string& path) {
  if (node.is_number()) return Complex{node.get<double>(), 0.0};
  if (node.is_array() && node.size() == 2 && node[0].is_number() &&
      node[1].is_number()) {
    return Complex{node[0].get<double>(), node[1].get<double>()};
  }
  fail(path, "expected a number or [re, im] pair");
}

Matrix as_matrix(const json& node, const std::string& path) {
  if (!node.is_array() || node.empty()) fail(path, "expected a matrix (array of rows)");
  const std::size_t rows = node.size();
  std::size_t cols = 0;
  Matrix m;
  for (std::size_t i = 0; i < rows; ++i) {
    const json& row = node[i];
    if (!row.is_array()) fail(path, "expected a matrix (array of rows)");
    if (i == 0) {
      cols = row.size();
      m = Matrix::Zero(static_cast<Eigen::Index>(rows),
                       static_cast<Eigen::Index>(cols));
    } else if (row.size() != cols) {
      fail(path, "rows have inconsistent lengths");
    }
    for (std::size_t j = 0; j < cols; ++j) {
      std::ostringstream sub;
      sub << path << "[" << i << "][" << j << "]";
      m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
          as_complex(row[j], sub.str());
    }
  }
  return m;
}

std::vector<double> as_double_vector(const json& node, const std::string& path) {
  if (!node.is_array()) fail(path, "expected an array of numbers");
  std::vector<double> out;
  out.reserve(node.size());
  for (std::size_t i = 0; i < node.size(); ++i) {
    std::ostringstream sub;
    sub << path << "[" << i << "]";
    out.push_back(as_number(node[i], sub.str()));
  }
  return out;
}

bath::SpectralDensity parse_density(const json& node, const std::string& path,
                                    double energy_scale) {
  const std::string type = as_string(require(node, "type", path), path + ".type");
  if (type == "ohmic") {
    bath::OhmicFamily o;
    if (node.contains("s")) o.s = as_number(node["s"], path + ".s");
    o.xi = as_number(require(node, "xi", path), path + ".xi");
    o.omega_c =
        energy_scale * as_number(require(node, "omega_c", path), path + ".omega_c");
    return o;
  }
  if (type == "tabulated") {
    bath::Tabulated t;
    t.omega = as_double_vector(require(node, "omega", path), path + ".omega");
    t.j = as_double_vector(require(node, "j", path), path + ".j");
    for (double& w : t.omega) w *= energy_scale;
    for (double& v : t.j) v *= energy_scale;
    return t;
  }
  if (type == "discrete") {
    bath::DiscreteModes d;
    const json& modes = require(node, "modes", path);
    if (!modes.is_array()) fail(path + ".modes", "expected an array");
    for (std::size_t i = 0; i < modes.size(); ++i) {
      std::ostringstream sub;
      sub << path << ".modes[" << i << "]";
      const json& mn = modes[i];
      bath::DiscreteModes::Mode mode;
      mode.omega =
          energy_scale * as_number(require(mn, "omega", sub.str()), sub.str() + ".omega");
      if (mn.contains("m")) mode.m = as_number(mn["m"], sub.str() + ".m");
      if (mn.contains("huang_rhys")) {
        const double s = as_number(mn["huang_rhys"], sub.str() + ".huang_rhys");
        mode.c = std::sqrt(2.0 * s * mode.m) * std::pow(mode.omega, 1.5);
      } else if (mn.contains("c")) {
        if (energy_scale != 1.0) {
          fail(sub.str() + ".c",
               "raw couplings are only accepted in natural units; use huang_rhys");
        }
        mode.c = as_number(mn["c"], sub.str() + ".c");
      } else {
        fail(sub.str(), "mode needs either c or huang_rhys");
      }
      d.modes.push_back(mode);
    }
    return d;
  }
  fail(path + ".type", "unknown density type '" + type + "'");
}

}  // namespace

Matrix RunConfig::named_operator(const std::string& name) const {
  const int d = system.dim();
  if (name == "identity") return ops::identity(d);
  if (name == "sigma_x" || name == "sigma_y" || name == "sigma_z") {
    if (d != 2) {
      throw ConfigError("operator '" + name + "' needs a two-level system");
    }
    if (name == "sigma_x") return ops::sigma_x();
    if (name == "sigma_y") return ops::sigma_y();
    return ops::sigma_z();
  }
  if (name.rfind("projector_", 0) == 0) {
    const int level = std::stoi(name.substr(10));
    if (level < 0 || level >= d) {
      throw ConfigError("operator '" + name + "': level out of range");
    }
    return ops::projector(d, level);
  }
  auto it = operators.find(name);
  if (it == operators.end()) {
    throw ConfigError("unknown operator '" + name +
                      "'; define it under \"operators\"");
  }
  return it->second;
}

CorrelationRequest RunConfig::to_request() const {
  CorrelationRequest req;
  req.system = system;
  req.baths = baths;
  req.a_op = named_operator(observable.a);
  req.b_op = named_operator(observable.b);
  req.beta = beta;
  req.n_steps = n_steps;
  req.truncation = truncation;
  req.quadrature = quadrature;
  req.absorb = absorb;
  req.schedule = schedule;
  if (n_times > 0) {
    req.times.reserve(static_cast<std::size_t>(n_times));
    for (int i = 0; i < n_times; ++i) {
      req.times.push_back(n_times == 1 ? 0.0
                                       : t_max * static_cast<double>(i) /
                                             static_cast<double>(n_times - 1));
    }
  }
  return req;
}

RunConfig parse_config_text(const std::string& text, const std::string& origin) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& err) {
    throw ConfigError(origin + ": " + err.what());
  }

  RunConfig cfg;
  double energy_scale = 1.0;
  if (root.contains("units")) {
    const std::string u = as_string(root["units"], "units");
    if (u == "natural") {
      cfg.units = UnitSystem::Natural;
    } else if (u == "wavenumber") {
      cfg.units = UnitSystem::Wavenumber;
      energy_scale = units::wavenumber_to_angular(1.0);
    } else {
      fail("units", "expected 'natural' or 'wavenumber'");
    }
  }

  const json& sys = require(root, "system", "");
  cfg.system.h0 =
      energy_scale * as_matrix(require(sys, "hamiltonian", "system"),
                               "system.hamiltonian");
  try {
    validate_system(cfg.system);
  } catch (const std::invalid_argument& err) {
    fail("system.hamiltonian", err.what());
  }
  const int d = cfg.system.dim();

  if (root.contains("operators")) {
    const json& ops_node = root["operators"];
    if (!ops_node.is_object()) fail("operators", "expected an object");
    for (auto it = ops_node.begin(); it != ops_node.end(); ++it) {
      Matrix m = as_matrix(it.value(), "operators." + it.key());
      if (m.rows() != d || m.cols() != d) {
        fail("operators." + it.key(), "dimension does not match the system");
      }
      cfg.operators[it.key()] = std::move(m);
    }
  }

  if (root.contains("baths")) {
    const json& baths = root["baths"];
    if (!baths.is_array()) fail("baths", "expected an array");
    for (std::size_t i = 0; i < baths.size(); ++i) {
      std::ostringstream sub;
      sub << "baths[" << i << "]";
      const json& bn = baths[i];
      bath::BathSpec spec;
      spec.density = parse_density(bn, sub.str(), energy_scale);
      try {
        bath::validate_density(spec.density);
      } catch (const std::invalid_argument& err) {
        fail(sub.str(), err.what());
      }
      const std::vector<double> coupling =
          as_double_vector(require(bn, "coupling", sub.str()), sub.str() + ".coupling");
      if (static_cast<int>(coupling.size()) != d) {
        fail(sub.str() + ".coupling", "needs one eigenvalue per system state");
      }
      spec.coupling = coupling;
      if (bn.contains("label")) spec.label = as_string(bn["label"], sub.str() + ".label");
      cfg.baths.push_back(std::move(spec));
    }
  }

  if (root.contains("contour")) {
    const json& contour = root["contour"];
    if (!contour.is_object()) fail("contour", "expected an object");
    if (contour.contains("beta") && contour.contains("temperature")) {
      fail("contour", "give beta or temperature, not both");
    }
    if (contour.contains("beta")) {
      cfg.beta = as_number(contour["beta"], "contour.beta");
    } else if (contour.contains("temperature")) {
      if (cfg.units != UnitSystem::Wavenumber) {
        fail("contour.temperature", "temperature in K needs units = 'wavenumber'");
      }
      cfg.beta = units::kelvin_to_beta(as_number(contour["temperature"],
                                                 "contour.temperature"));
    }
    if (!(cfg.beta > 0)) fail("contour.beta", "must be positive");
    if (contour.contains("n_steps")) {
      cfg.n_steps = as_int(contour["n_steps"], "contour.n_steps");
      if (cfg.n_steps < 1) fail("contour.n_steps", "must be >= 1");
    }
    if (contour.contains("t_max")) {
      cfg.t_max = as_number(contour["t_max"], "contour.t_max");
      if (cfg.t_max < 0) fail("contour.t_max", "must be >= 0");
    }
    if (contour.contains("n_times")) {
      cfg.n_times = as_int(contour["n_times"], "contour.n_times");
      if (cfg.n_times < 1) fail("contour.n_times", "must be >= 1");
    }
  }

  if (root.contains("truncation")) {
    const json& tr = root["truncation"];
    if (tr.contains("cutoff")) {
      cfg.truncation.cutoff = as_number(tr["cutoff"], "truncation.cutoff");
      if (cfg.truncation.cutoff < 0) fail("truncation.cutoff", "must be >= 0");
    }
    if (tr.contains("mode")) {
      const std::string m = as_string(tr["mode"], "truncation.mode");
      if (m == "relative") {
        cfg.truncation.mode = tn::TruncationPolicy::Mode::Relative;
      } else if (m == "absolute") {
        cfg.truncation.mode = tn::TruncationPolicy::Mode::Absolute;
      } else if (m == "weight") {
        cfg.truncation.mode = tn::TruncationPolicy::Mode::Weight;
      } else {
        fail("truncation.mode", "expected 'relative', 'absolute' or 'weight'");
      }
    }
    if (tr.contains("max_bond")) {
      cfg.truncation.max_bond = as_int(tr["max_bond"], "truncation.max_bond");
      if (cfg.truncation.max_bond < 0) fail("truncation.max_bond", "must be >= 0");
    }
  }

  if (root.contains("quadrature")) {
    const json& q = root["quadrature"];
    if (q.contains("rel_tol")) {
      cfg.quadrature.rel_tol = as_number(q["rel_tol"], "quadrature.rel_tol");
      if (!(cfg.quadrature.rel_tol > 0)) fail("quadrature.rel_tol", "must be > 0");
    }
    if (q.contains("omega_max_factor")) {
      cfg.quadrature.omega_max_factor =
          as_number(q["omega_max_factor"], "quadrature.omega_max_factor");
      if (!(cfg.quadrature.omega_max_factor > 0)) {
        fail("quadrature.omega_max_factor", "must be > 0");
      }
    }
    if (q.contains("subdivision_limit")) {
      cfg.quadrature.subdivision_limit =
          as_int(q["subdivision_limit"], "quadrature.subdivision_limit");
      if (cfg.quadrature.subdivision_limit < 1) {
        fail("quadrature.subdivision_limit", "must be >= 1");
      }
    }
  }

  if (root.contains("engine")) {
    const json& en = root["engine"];
    if (en.contains("absorb")) {
      const std::string a = as_string(en["absorb"], "engine.absorb");
      if (a == "left") {
        cfg.absorb = tn::AbsorbSide::Left;
      } else if (a == "right") {
        cfg.absorb = tn::AbsorbSide::Right;
      } else {
        fail("engine.absorb", "expected 'left' or 'right'");
      }
    }
    if (en.contains("schedule")) {
      const std::string s = as_string(en["schedule"], "engine.schedule");
      if (s == "middle_out") {
        cfg.schedule = tn::ScheduleOrder::MiddleOut;
      } else if (s == "left_to_right") {
        cfg.schedule = tn::ScheduleOrder::LeftToRight;
      } else {
        fail("engine.schedule", "expected 'middle_out' or 'left_to_right'");
      }
    }
  }

  if (root.contains("observable")) {
    const json& ob = root["observable"];
    if (ob.contains("a")) cfg.observable.a = as_string(ob["a"], "observable.a");
    if (ob.contains("b")) cfg.observable.b = as_string(ob["b"], "observable.b");
    if (ob.contains("projector")) {
      cfg.observable.projector = as_string(ob["projector"], "observable.projector");
    }
    if (ob.contains("plateau_time")) {
      cfg.observable.plateau_time =
          as_number(ob["plateau_time"], "observable.plateau_time");
    }
    if (ob.contains("window")) {
      const std::string w = as_string(ob["window"], "observable.window");
      if (w != "hann" && w != "rect") {
        fail("observable.window", "expected 'hann' or 'rect'");
      }
      cfg.observable.window = w;
    }
    if (ob.contains("zero_pad")) {
      cfg.observable.zero_pad = as_int(ob["zero_pad"], "observable.zero_pad");
      if (cfg.observable.zero_pad < 1) fail("observable.zero_pad", "must be >= 1");
    }
    if (ob.contains("negative_times")) {
      const std::string nt =
          as_string(ob["negative_times"], "observable.negative_times");
      if (nt != "mirror" && nt != "direct") {
        fail("observable.negative_times", "expected 'mirror' or 'direct'");
      }
      cfg.observable.negative_times = nt;
    }
  }

  if (root.contains("output")) {
    const json& op = root["output"];
    if (op.contains("directory")) {
      cfg.output.directory = as_string(op["directory"], "output.directory");
    }
  }

  // Resolve observable names now so bad references fail at parse time.
  try {
    cfg.named_operator(cfg.observable.a);
    cfg.named_operator(cfg.observable.b);
  } catch (const ConfigError& err) {
    fail("observable", err.what());
  }
  return cfg;
}

RunConfig parse_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config_text(buf.str(), path);
}

}  // namespace ctpi::cli
