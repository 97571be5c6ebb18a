#include "gpt/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "gpt/error.hpp"

namespace gpt::scenario {

using nlohmann::json;

namespace {

[[noreturn]] void fail(const std::string& msg) { throw Error(ErrorKind::Parse, msg); }

void only_keys(const json& j, const std::string& where, std::initializer_list<const char*> keys) {
  if (!j.is_object()) fail(where + " must be an object");
  for (const auto& item : j.items()) {
    if (std::none_of(keys.begin(), keys.end(), [&](const char* k) { return item.key() == k; })) {
      fail("unknown field '" + item.key() + "' in " + where);
    }
  }
}

const json& required(const json& j, const char* key, const std::string& where) {
  if (!j.contains(key)) fail("missing field '" + std::string(key) + "' in " + where);
  return j.at(key);
}

double number(const json& j, const std::string& where) {
  if (!j.is_number()) fail(where + " must be a number");
  const double v = j.get<double>();
  if (!std::isfinite(v)) fail(where + " must be finite");
  return v;
}

Vec3 vec3(const json& j, const std::string& where) {
  if (!j.is_array() || j.size() != 3) fail(where + " must be an array of 3 numbers");
  return Vec3(number(j[0], where), number(j[1], where), number(j[2], where));
}

json vec_json(const Vec3& v) { return json::array({v.x(), v.y(), v.z()}); }

Constraint parse_constraint(const json& j) {
  const std::string where = "constraint";
  if (!j.is_object()) fail("constraint must be an object");
  const std::string type = required(j, "type", where).get<std::string>();
  Constraint c;
  if (type == "ball") {
    only_keys(j, where, {"type", "radius"});
    c.kind = Constraint::Kind::Ball;
    if (j.contains("radius")) c.radius = number(j["radius"], "radius");
  } else if (type == "disk") {
    only_keys(j, where, {"type", "axis", "radius"});
    c.kind = Constraint::Kind::Disk;
    c.axis = vec3(required(j, "axis", where), "axis");
    if (j.contains("radius")) c.radius = number(j["radius"], "radius");
  } else if (type == "slab") {
    only_keys(j, where, {"type", "axis", "lower", "upper"});
    c.kind = Constraint::Kind::Slab;
    c.axis = vec3(required(j, "axis", where), "axis");
    c.lower = number(required(j, "lower", where), "lower");
    c.upper = number(required(j, "upper", where), "upper");
  } else if (type == "paraboloid") {
    only_keys(j, where, {"type", "axis", "offset", "slope"});
    c.kind = Constraint::Kind::Paraboloid;
    c.axis = vec3(required(j, "axis", where), "axis");
    if (j.contains("offset")) c.offset = number(j["offset"], "offset");
    if (j.contains("slope")) c.slope = number(j["slope"], "slope");
  } else if (type == "halfspace") {
    only_keys(j, where, {"type", "normal", "offset"});
    c.kind = Constraint::Kind::Halfspace;
    c.axis = vec3(required(j, "normal", where), "normal");
    c.upper = number(required(j, "offset", where), "offset");
  } else {
    fail("unknown constraint type '" + type + "'");
  }
  if (c.axis.norm() == 0.0) fail("constraint axis must be nonzero");
  return c;
}

json constraint_json(const Constraint& c) {
  switch (c.kind) {
    case Constraint::Kind::Ball: return {{"type", "ball"}, {"radius", c.radius}};
    case Constraint::Kind::Disk: return {{"type", "disk"}, {"axis", vec_json(c.axis)}, {"radius", c.radius}};
    case Constraint::Kind::Slab:
      return {{"type", "slab"}, {"axis", vec_json(c.axis)}, {"lower", c.lower}, {"upper", c.upper}};
    case Constraint::Kind::Paraboloid:
      return {{"type", "paraboloid"}, {"axis", vec_json(c.axis)}, {"offset", c.offset}, {"slope", c.slope}};
    case Constraint::Kind::Halfspace:
      return {{"type", "halfspace"}, {"normal", vec_json(c.axis)}, {"offset", c.upper}};
  }
  return {};
}

TheorySpec parse_theory(const json& j) {
  TheorySpec t;
  if (j.is_string()) {
    t.name = j.get<std::string>();
    if (!theory_from_name(t.name)) throw Error(ErrorKind::UnknownTheory, "unknown theory '" + t.name + "'");
    return t;
  }
  only_keys(j, "theory", {"name", "vertices", "constraints", "continuousAxes"});
  t.name = j.value("name", std::string("custom"));
  if (j.contains("vertices") == j.contains("constraints")) {
    fail("inline theory needs exactly one of 'vertices' or 'constraints'");
  }
  if (j.contains("vertices")) {
    if (j.contains("continuousAxes")) fail("'continuousAxes' applies to constraint bodies only");
    t.kind = TheorySpec::Kind::Vertices;
    const json& vs = j["vertices"];
    if (!vs.is_array()) fail("vertices must be an array");
    for (const auto& v : vs) t.vertices.push_back(vec3(v, "vertex"));
    return t;
  }
  t.kind = TheorySpec::Kind::Constraints;
  const json& cs = j["constraints"];
  if (!cs.is_array() || cs.empty()) fail("constraints must be a nonempty array");
  for (const auto& c : cs) t.constraints.push_back(parse_constraint(c));
  if (j.contains("continuousAxes")) {
    const json& ax = j["continuousAxes"];
    ContinuousAxes axes;
    if (ax.is_string()) {
      if (ax.get<std::string>() != "all") fail("continuousAxes must be \"all\" or a list of axes");
      axes.all = true;
    } else if (ax.is_array()) {
      for (const auto& a : ax) {
        Vec3 v = vec3(a, "continuous axis");
        if (v.norm() == 0.0) fail("continuous axis must be nonzero");
        axes.axes.push_back(v);
      }
    } else {
      fail("continuousAxes must be \"all\" or a list of axes");
    }
    t.continuous_axes = axes;
  }
  return t;
}

json theory_json(const TheorySpec& t) {
  switch (t.kind) {
    case TheorySpec::Kind::Builtin: return t.name;
    case TheorySpec::Kind::Vertices: {
      json vs = json::array();
      for (const auto& v : t.vertices) vs.push_back(vec_json(v));
      return {{"name", t.name}, {"vertices", vs}};
    }
    case TheorySpec::Kind::Constraints: {
      json cs = json::array();
      for (const auto& c : t.constraints) cs.push_back(constraint_json(c));
      json out = {{"name", t.name}, {"constraints", cs}};
      if (t.continuous_axes) {
        if (t.continuous_axes->all) {
          out["continuousAxes"] = "all";
        } else {
          json axes = json::array();
          for (const auto& a : t.continuous_axes->axes) axes.push_back(vec_json(a));
          out["continuousAxes"] = axes;
        }
      }
      return out;
    }
  }
  return {};
}

}  // namespace

bool TheorySpec::operator==(const TheorySpec& o) const {
  if (kind != o.kind || name != o.name || vertices != o.vertices || constraints != o.constraints) {
    return false;
  }
  if (continuous_axes.has_value() != o.continuous_axes.has_value()) return false;
  if (!continuous_axes) return true;
  return continuous_axes->all == o.continuous_axes->all &&
         continuous_axes->axes == o.continuous_axes->axes;
}

const char* to_string(TimeSpec::Mode m) {
  switch (m) {
    case TimeSpec::Mode::Auto: return "auto";
    case TimeSpec::Mode::Continuous: return "continuous";
    case TimeSpec::Mode::Discrete: return "discrete";
  }
  return "?";
}

std::vector<double> TimeSpec::grid() const {
  double step = t_max / 100.0;
  long n = 100;
  if (dt) {
    step = *dt;
    n = static_cast<long>(std::floor(t_max / step + 1e-9));
  } else if (steps) {
    n = *steps;
    step = t_max / static_cast<double>(n);
  }
  std::vector<double> g(static_cast<size_t>(n + 1));
  for (long k = 0; k <= n; ++k) g[static_cast<size_t>(k)] = static_cast<double>(k) * step;
  return g;
}

Scenario from_json(const json& j) {
  only_keys(j, "scenario", {"theory", "hamiltonian", "time", "initialState", "checks", "seed"});
  Scenario s;
  s.theory = parse_theory(required(j, "theory", "scenario"));

  const json& h = required(j, "hamiltonian", "scenario");
  only_keys(h, "hamiltonian", {"vector", "offset", "decomposition"});
  s.hamiltonian.vector = vec3(required(h, "vector", "hamiltonian"), "hamiltonian.vector");
  if (h.contains("offset")) s.hamiltonian.offset = number(h["offset"], "hamiltonian.offset");
  if (h.contains("decomposition")) {
    const json& d = h["decomposition"];
    only_keys(d, "decomposition", {"values", "measurementAxis"});
    Decomposition dec;
    const json& values = required(d, "values", "decomposition");
    if (!values.is_array() || values.size() != 2) fail("decomposition.values must hold 2 numbers");
    for (const auto& v : values) dec.values.push_back(number(v, "decomposition value"));
    if (d.contains("measurementAxis")) {
      dec.measurement_axis = vec3(d["measurementAxis"], "measurementAxis");
      if (dec.measurement_axis.norm() == 0.0) fail("measurementAxis must be nonzero");
    }
    s.hamiltonian.decomposition = dec;
  }

  const json& t = required(j, "time", "scenario");
  only_keys(t, "time", {"mode", "tMax", "dt", "steps"});
  const std::string mode = t.value("mode", std::string("auto"));
  if (mode == "auto") s.time.mode = TimeSpec::Mode::Auto;
  else if (mode == "continuous") s.time.mode = TimeSpec::Mode::Continuous;
  else if (mode == "discrete") s.time.mode = TimeSpec::Mode::Discrete;
  else fail("time.mode must be auto, continuous or discrete");
  s.time.t_max = number(required(t, "tMax", "time"), "time.tMax");
  if (s.time.t_max < 0.0) fail("time.tMax must be nonnegative");
  if (t.contains("dt") && t.contains("steps")) fail("give at most one of time.dt and time.steps");
  if (t.contains("dt")) {
    s.time.dt = number(t["dt"], "time.dt");
    if (*s.time.dt <= 0.0) fail("time.dt must be positive");
  }
  if (t.contains("steps")) {
    if (!t["steps"].is_number_integer() || t["steps"].get<long>() <= 0) fail("time.steps must be a positive integer");
    s.time.steps = t["steps"].get<int>();
  }

  s.initial_state = vec3(required(j, "initialState", "scenario"), "initialState");
  if (j.contains("checks")) {
    const json& c = j["checks"];
    if (!c.is_array()) fail("checks must be an array");
    s.checks.clear();
    for (const auto& name : c) {
      if (!name.is_string()) fail("check names must be strings");
      const std::string n = name.get<std::string>();
      if (n != "OBS" && n != "GEN" && n != "INV" && n != "QUAN") fail("unknown check '" + n + "'");
      s.checks.push_back(n);
    }
  }
  if (j.contains("seed")) {
    if (!j["seed"].is_number_unsigned()) fail("seed must be a nonnegative integer");
    s.seed = j["seed"].get<std::uint64_t>();
  }
  return s;
}

json to_json(const Scenario& s) {
  json h = {{"vector", vec_json(s.hamiltonian.vector)}, {"offset", s.hamiltonian.offset}};
  if (s.hamiltonian.decomposition) {
    h["decomposition"] = {{"values", s.hamiltonian.decomposition->values},
                          {"measurementAxis", vec_json(s.hamiltonian.decomposition->measurement_axis)}};
  }
  json t = {{"mode", to_string(s.time.mode)}, {"tMax", s.time.t_max}};
  if (s.time.dt) t["dt"] = *s.time.dt;
  if (s.time.steps) t["steps"] = *s.time.steps;
  return {{"theory", theory_json(s.theory)},
          {"hamiltonian", h},
          {"time", t},
          {"initialState", vec_json(s.initial_state)},
          {"checks", s.checks},
          {"seed", s.seed}};
}

Scenario parse(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    fail(std::string("malformed JSON: ") + e.what());
  }
  try {
    return from_json(j);
  } catch (const json::exception& e) {
    fail(std::string("bad scenario: ") + e.what());
  }
}

Scenario load(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail("cannot read scenario '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return parse(buf.str());
}

StateSpace build_space(const TheorySpec& spec) {
  switch (spec.kind) {
    case TheorySpec::Kind::Builtin: return builtin_theory(spec.name);
    case TheorySpec::Kind::Vertices: return polytope_space(spec.name, spec.vertices);
    case TheorySpec::Kind::Constraints: {
      std::vector<Constraint> cs = spec.constraints;
      for (auto& c : cs) c.axis.normalize();
      std::optional<ContinuousAxes> axes = spec.continuous_axes;
      if (axes) {
        for (auto& a : axes->axes) a.normalize();
      }
      return constraint_space(spec.name, std::move(cs), std::move(axes));
    }
  }
  throw Error(ErrorKind::UnknownTheory, "unknown theory");
}

dynamics::HamiltonianObservable build_hamiltonian(const HamiltonianSpec& spec) {
  dynamics::HamiltonianObservable h;
  h.vector = spec.vector;
  h.offset = spec.offset;
  if (spec.decomposition) {
    h.decomposition = observable_from_values(spec.decomposition->values,
                                             axis_measurement(spec.decomposition->measurement_axis.normalized()));
  }
  return h;
}

}  // namespace gpt::scenario
