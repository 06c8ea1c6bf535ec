#include "hinge/config.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <initializer_list>
#include <sstream>

namespace hinge {
namespace {

using nlohmann::json;

std::string join(const std::string& prefix, std::string_view key) {
  return prefix.empty() ? std::string(key) : prefix + "." + std::string(key);
}

void reject_unknown(const json& obj, const std::string& where,
                    std::initializer_list<std::string_view> allowed) {
  for (const auto& [key, value] : obj.items()) {
    if (std::find(allowed.begin(), allowed.end(), key) == allowed.end()) {
      throw ConfigError(join(where, key), "unknown key");
    }
  }
}

const json& require_object(const json& j, const std::string& key) {
  if (!j.is_object()) throw ConfigError(key, "expected a JSON object");
  return j;
}

double to_number(const json& j, const std::string& key) {
  if (!j.is_number()) throw ConfigError(key, "expected a number");
  const double v = j.get<double>();
  if (!std::isfinite(v)) throw ConfigError(key, "must be finite");
  return v;
}

int to_integer(const json& j, const std::string& key) {
  if (!j.is_number_integer()) {
    if (j.is_number_float()) {
      const double v = j.get<double>();
      if (v == std::floor(v) && std::abs(v) < 1e9) return static_cast<int>(v);
    }
    throw ConfigError(key, "expected an integer");
  }
  const auto v = j.get<long long>();
  if (v < -1'000'000'000LL || v > 1'000'000'000LL) throw ConfigError(key, "integer out of range");
  return static_cast<int>(v);
}

std::string to_text(const json& j, const std::string& key) {
  if (!j.is_string()) throw ConfigError(key, "expected a string");
  return j.get<std::string>();
}

std::vector<double> to_params(const json& j, const std::string& key) {
  if (j.is_number()) return {to_number(j, key)};
  if (!j.is_array()) throw ConfigError(key, "expected an array of numbers");
  std::vector<double> out;
  for (std::size_t i = 0; i < j.size(); ++i) {
    out.push_back(to_number(j[i], key + "[" + std::to_string(i) + "]"));
  }
  return out;
}

CatalogRef to_ref(const json& j, const std::string& key) {
  require_object(j, key);
  reject_unknown(j, key, {"id", "params"});
  CatalogRef ref;
  if (!j.contains("id")) throw ConfigError(join(key, "id"), "missing required key");
  ref.id = to_text(j["id"], join(key, "id"));
  if (j.contains("params")) ref.params = to_params(j["params"], join(key, "params"));
  return ref;
}

template <typename F>
auto checked(const std::string& key, F&& f) {
  try {
    return f();
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception& e) {
    throw ConfigError(key, e.what());
  }
}

json params_json(const std::vector<double>& p) {
  json arr = json::array();
  for (double v : p) arr.push_back(v);
  return arr;
}

}  // namespace

RunConfig parse_config_text(std::string_view text, ConfigMode mode) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError("<document>", std::string("invalid JSON: ") + e.what());
  }
  require_object(root, "<document>");
  reject_unknown(root, "", {"interval", "T", "k", "dt", "method", "output_every", "quadrature",
                            "f1", "f2", "forcing", "initial", "outputs"});
  for (const char* key : {"interval", "T", "k"}) {
    if (!root.contains(key)) throw ConfigError(key, "missing required key");
  }

  RunConfig cfg;
  cfg.mode = mode;

  const json& iv = root["interval"];
  double a = 0.0, b = 0.0;
  if (iv.is_array()) {
    if (iv.size() != 2) throw ConfigError("interval", "expected [a, b]");
    a = to_number(iv[0], "interval[0]");
    b = to_number(iv[1], "interval[1]");
  } else if (iv.is_object()) {
    reject_unknown(iv, "interval", {"a", "b"});
    if (!iv.contains("a") || !iv.contains("b")) throw ConfigError("interval", "needs a and b");
    a = to_number(iv["a"], "interval.a");
    b = to_number(iv["b"], "interval.b");
  } else {
    throw ConfigError("interval", "expected [a, b] or {\"a\", \"b\"}");
  }
  if (!(a < b)) throw ConfigError("interval", "requires a < b");
  cfg.interval = Interval{a, b};

  cfg.T = to_number(root["T"], "T");
  if (!(cfg.T > 0.0)) throw ConfigError("T", "must be positive");
  cfg.k = to_integer(root["k"], "k");
  if (cfg.k < 1) throw ConfigError("k", "must be >= 1");
  const EigenBasis basis(cfg.interval, cfg.k);

  if (root.contains("method")) {
    cfg.method = checked("method", [&] { return parse_method(to_text(root["method"], "method")); });
  }
  if (root.contains("dt")) {
    cfg.dt = to_number(root["dt"], "dt");
    if (!(cfg.dt > 0.0)) throw ConfigError("dt", "must be positive");
  } else {
    cfg.dt = default_dt(basis);
  }
  if (cfg.method == Method::Rk4 && cfg.dt > rk4_dt_limit(basis) * (1.0 + 1e-12)) {
    std::ostringstream msg;
    msg << "rk4 needs dt <= 2.5/lambda_k = " << rk4_dt_limit(basis);
    throw ConfigError("dt", msg.str());
  }
  if (root.contains("output_every")) {
    cfg.output_every = to_integer(root["output_every"], "output_every");
    if (cfg.output_every < 1) throw ConfigError("output_every", "must be >= 1");
  } else {
    cfg.output_every = std::max(1, static_cast<int>(std::lround(0.01 / cfg.dt)));
  }

  cfg.quadrature_nodes = Quadrature::default_node_count(cfg.k);
  if (root.contains("quadrature")) {
    const json& q = require_object(root["quadrature"], "quadrature");
    reject_unknown(q, "quadrature", {"nodes"});
    if (q.contains("nodes")) {
      cfg.quadrature_nodes = to_integer(q["nodes"], "quadrature.nodes");
      if (cfg.quadrature_nodes < Quadrature::kNodesPerPanel) {
        throw ConfigError("quadrature.nodes", "must be >= 10");
      }
    }
  }

  if (root.contains("f1")) cfg.f1 = to_ref(root["f1"], "f1");
  if (root.contains("f2")) {
    const json& f2 = require_object(root["f2"], "f2");
    reject_unknown(f2, "f2", {"id", "params", "anchor", "floor"});
    if (!f2.contains("id")) throw ConfigError("f2.id", "missing required key");
    cfg.f2.id = to_text(f2["id"], "f2.id");
    if (f2.contains("params")) cfg.f2.params = to_params(f2["params"], "f2.params");
    if (f2.contains("anchor")) cfg.f2.anchor = to_number(f2["anchor"], "f2.anchor");
    if (f2.contains("floor")) {
      cfg.f2.floor = to_number(f2["floor"], "f2.floor");
      if (*cfg.f2.floor > 0.0) throw ConfigError("f2.floor", "floor must be non-positive");
    }
  }
  if (root.contains("forcing")) cfg.forcing = to_ref(root["forcing"], "forcing");
  if (root.contains("initial")) {
    const json& init = require_object(root["initial"], "initial");
    reject_unknown(init, "initial", {"y", "z"});
    if (init.contains("y")) cfg.y = to_ref(init["y"], "initial.y");
    if (init.contains("z")) cfg.z = to_ref(init["z"], "initial.z");
  }
  if (root.contains("outputs")) {
    const json& out = require_object(root["outputs"], "outputs");
    reject_unknown(out, "outputs", {"directory", "prefix"});
    if (out.contains("directory")) cfg.out_directory = to_text(out["directory"], "outputs.directory");
    if (out.contains("prefix")) cfg.out_prefix = to_text(out["prefix"], "outputs.prefix");
  }

  // Resolve every catalog reference now so errors name the key.
  const auto damping = catalog_ids(Role::Damping);
  if (std::find(damping.begin(), damping.end(), cfg.f1.id) == damping.end()) {
    throw ConfigError("f1.id", "'" + cfg.f1.id + "' is not an admissible damping nonlinearity");
  }
  const auto restoring = catalog_ids(Role::Restoring);
  if (std::find(restoring.begin(), restoring.end(), cfg.f2.id) == restoring.end()) {
    throw ConfigError("f2.id", "'" + cfg.f2.id + "' is not an admissible restoring nonlinearity");
  }
  (void)to_setup(cfg);
  return cfg;
}

RunConfig parse_config(const std::filesystem::path& path, ConfigMode mode) {
  std::ifstream in(path);
  if (!in) throw ConfigError("<document>", "cannot open config file " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_config_text(buf.str(), mode);
}

std::string config_to_json(const RunConfig& c) {
  json j;
  j["interval"] = json::array({c.interval.a, c.interval.b});
  j["T"] = c.T;
  j["k"] = c.k;
  j["dt"] = c.dt;
  j["method"] = std::string(to_string(c.method));
  j["output_every"] = c.output_every;
  j["quadrature"] = {{"nodes", c.quadrature_nodes}};
  j["f1"] = {{"id", c.f1.id}, {"params", params_json(c.f1.params)}};
  j["f2"] = {{"id", c.f2.id}, {"params", params_json(c.f2.params)}};
  if (c.f2.anchor) j["f2"]["anchor"] = *c.f2.anchor;
  if (c.f2.floor) j["f2"]["floor"] = *c.f2.floor;
  j["forcing"] = {{"id", c.forcing.id}, {"params", params_json(c.forcing.params)}};
  j["initial"] = {{"y", {{"id", c.y.id}, {"params", params_json(c.y.params)}}},
                  {"z", {{"id", c.z.id}, {"params", params_json(c.z.params)}}}};
  j["outputs"] = {{"directory", c.out_directory}, {"prefix", c.out_prefix}};
  return j.dump(2);
}

ProblemSetup to_setup(const RunConfig& c) {
  ProblemSetup s;
  s.interval = c.interval;
  s.k = c.k;
  s.T = c.T;
  s.dt = c.dt;
  s.method = c.method;
  s.output_every = c.output_every;
  s.quadrature_nodes = c.quadrature_nodes;
  const bool strict = c.mode == ConfigMode::Run;
  s.f1 = checked("f1", [&] {
    return make_nonlinearity(c.f1.id, c.f1.params, std::nullopt, std::nullopt, strict);
  });
  s.f2 = checked("f2", [&] {
    return make_nonlinearity(c.f2.id, c.f2.params, c.f2.anchor, c.f2.floor, strict);
  });
  s.forcing = checked("forcing", [&] {
    return make_forcing(c.forcing.id, c.forcing.params, c.interval);
  });
  s.y = checked("initial.y", [&] { return make_initial(c.y.id, c.y.params, c.interval); });
  s.z = checked("initial.z", [&] { return make_initial(c.z.id, c.z.params, c.interval); });
  return s;
}

}  // namespace hinge
