#include <algorithm>
#include <cmath>
#include <functional>
#include <map>

#include "twisted/cli.hpp"
#include "twisted/errors.hpp"

namespace twisted::cli {

namespace {

template <typename T>
void read(const Json& j, T& field, const std::string& key) {
  try {
    field = j.get<T>();
  } catch (const nlohmann::json::exception&) {
    throw Error(ErrorKind::InvalidArgument, "config key '" + key + "' has the wrong type");
  }
}

using Setter = std::function<void(RunConfig&, const Json&, const std::string&)>;

template <typename T>
Setter field(T RunConfig::*member) {
  return [member](RunConfig& c, const Json& j, const std::string& key) { read(j, c.*member, key); };
}

const std::map<std::string, Setter>& setters() {
  static const std::map<std::string, Setter> table = {
      {"p", field(&RunConfig::p)},
      {"q", field(&RunConfig::q)},
      {"dim", field(&RunConfig::dim)},
      {"radius", field(&RunConfig::radius)},
      {"r1", field(&RunConfig::r1)},
      {"r2", field(&RunConfig::r2)},
      {"method", field(&RunConfig::method)},
      {"ode_tol", field(&RunConfig::ode_tol)},
      {"newton_tol", field(&RunConfig::newton_tol)},
      {"zero_tol", field(&RunConfig::zero_tol)},
      {"grid", field(&RunConfig::grid)},
      {"steps", field(&RunConfig::steps)},
      {"volume", field(&RunConfig::volume)},
      {"min_fraction", field(&RunConfig::min_fraction)},
      {"split_tol", field(&RunConfig::split_tol)},
      {"seed", field(&RunConfig::seed)},
      {"cases", field(&RunConfig::cases)},
      {"out", field(&RunConfig::out)},
      {"suite", field(&RunConfig::suite)},
      {"shape", field(&RunConfig::shape)},
      {"a", field(&RunConfig::a)},
      {"b", field(&RunConfig::b)},
      {"samples", field(&RunConfig::samples)},
      {"reproducible", field(&RunConfig::reproducible)},
  };
  return table;
}

bool one_of(const std::string& v, std::initializer_list<const char*> allowed) {
  return std::any_of(allowed.begin(), allowed.end(), [&](const char* a) { return v == a; });
}

}  // namespace

ShootOptions RunConfig::shoot_options() const {
  ShootOptions o;
  o.tolerances = {ode_tol, 1e-2 * ode_tol};
  o.zero_tol = zero_tol;
  return o;
}

Json to_json(const RunConfig& c) {
  Json j;
  j["p"] = c.p;
  j["q"] = c.q;
  j["dim"] = c.dim;
  j["radius"] = c.radius;
  j["r1"] = c.r1;
  j["r2"] = c.r2;
  j["method"] = c.method;
  j["ode_tol"] = c.ode_tol;
  j["newton_tol"] = c.newton_tol;
  j["zero_tol"] = c.zero_tol;
  j["grid"] = c.grid;
  j["steps"] = c.steps;
  j["volume"] = c.volume;
  j["min_fraction"] = c.min_fraction;
  j["split_tol"] = c.split_tol;
  j["seed"] = c.seed;
  j["cases"] = c.cases;
  j["out"] = c.out;
  j["suite"] = c.suite;
  j["shape"] = c.shape;
  j["a"] = c.a;
  j["b"] = c.b;
  j["samples"] = c.samples;
  j["reproducible"] = c.reproducible;
  return j;
}

void apply_json(RunConfig& config, const Json& j, const std::vector<std::string>& locked) {
  if (!j.is_object()) throw Error(ErrorKind::InvalidArgument, "config must be a JSON object");
  const auto& table = setters();
  for (const auto& [key, value] : j.items()) {
    auto it = table.find(key);
    if (it == table.end()) throw Error(ErrorKind::InvalidArgument, "unknown config key '" + key + "'");
    if (std::find(locked.begin(), locked.end(), key) != locked.end()) continue;
    it->second(config, value, key);
  }
}

void check_config(const RunConfig& c) {
  auto positive = [](double v, const char* what) {
    if (!(v > 0.0) || !std::isfinite(v)) {
      throw Error(ErrorKind::InvalidArgument, std::string(what) + " must be positive");
    }
  };
  positive(c.ode_tol, "ode_tol");
  positive(c.newton_tol, "newton_tol");
  positive(c.zero_tol, "zero_tol");
  positive(c.split_tol, "split_tol");
  positive(c.radius, "radius");
  if (c.r1 < 0.0 || c.r2 < 0.0 || c.volume < 0.0) {
    throw Error(ErrorKind::InvalidArgument, "radii and volume must be positive");
  }
  if (!one_of(c.method, {"structured", "direct", "both"})) {
    throw Error(ErrorKind::InvalidArgument, "method must be structured, direct or both");
  }
  if (!one_of(c.out, {"", "json", "csv"})) throw Error(ErrorKind::InvalidArgument, "out must be json or csv");
  if (!one_of(c.shape, {"circle", "ellipse", "lr-ball", "random"})) {
    throw Error(ErrorKind::InvalidArgument, "shape must be circle, ellipse, lr-ball or random");
  }
  const auto& names = suite_names();
  if (c.suite != "all" && std::find(names.begin(), names.end(), c.suite) == names.end()) {
    throw Error(ErrorKind::InvalidArgument, "unknown suite '" + c.suite + "'");
  }
}

Residual at_most(std::string name, double value, double tolerance) {
  return {std::move(name), value, tolerance, value <= tolerance};
}

bool RunReport::all_pass() const {
  return std::all_of(residuals.begin(), residuals.end(), [](const Residual& r) { return r.pass; });
}

Json RunReport::to_json() const {
  Json j;
  j["inputs"] = inputs;
  j["result"] = result;
  Json res = Json::object();
  for (const auto& r : residuals) {
    res[r.name] = Json{{"value", r.value}, {"tolerance", r.tolerance}, {"pass", r.pass}};
  }
  j["residuals"] = res;
  j["flags"] = flags;
  j["timing_ms"] = timing_ms;
  return j;
}

}  // namespace twisted::cli
