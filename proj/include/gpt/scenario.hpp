#pragma once

// JSON scenario files: theory, Hamiltonian, time grid, initial state,
// requested checks and seed. Unknown fields are rejected.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "gpt/dynamics.hpp"
#include "gpt/statespace.hpp"

namespace gpt::scenario {

struct TheorySpec {
  enum class Kind { Builtin, Vertices, Constraints };
  Kind kind = Kind::Builtin;
  std::string name;  // builtin name, or a label for inline bodies
  std::vector<Vec3> vertices;
  std::vector<Constraint> constraints;
  std::optional<ContinuousAxes> continuous_axes;

  bool operator==(const TheorySpec& o) const;
};

struct Decomposition {
  std::vector<double> values;
  Vec3 measurement_axis = Vec3::UnitZ();
  bool operator==(const Decomposition& o) const {
    return values == o.values && measurement_axis == o.measurement_axis;
  }
};

struct HamiltonianSpec {
  Vec3 vector = Vec3::Zero();
  double offset = 0.0;
  std::optional<Decomposition> decomposition;
  bool operator==(const HamiltonianSpec& o) const {
    return vector == o.vector && offset == o.offset && decomposition == o.decomposition;
  }
};

struct TimeSpec {
  enum class Mode { Auto, Continuous, Discrete };
  Mode mode = Mode::Auto;
  double t_max = 0.0;
  std::optional<double> dt;
  std::optional<int> steps;

  /// Grid points 0, dt, 2 dt, ... up to t_max (100 steps when neither is given).
  std::vector<double> grid() const;
  bool operator==(const TimeSpec&) const = default;
};

struct Scenario {
  TheorySpec theory;
  HamiltonianSpec hamiltonian;
  TimeSpec time;
  Vec3 initial_state = Vec3::Zero();
  std::vector<std::string> checks = {"OBS", "GEN", "INV", "QUAN"};
  std::uint64_t seed = 0;

  bool operator==(const Scenario& o) const {
    return theory == o.theory && hamiltonian == o.hamiltonian && time == o.time &&
           initial_state == o.initial_state && checks == o.checks && seed == o.seed;
  }
};

/// Throws Error(Parse) on malformed input or unknown fields, UnknownTheory on
/// unresolved names.
Scenario from_json(const nlohmann::json& j);
nlohmann::json to_json(const Scenario& s);
Scenario parse(const std::string& text);
Scenario load(const std::string& path);

StateSpace build_space(const TheorySpec& spec);
dynamics::HamiltonianObservable build_hamiltonian(const HamiltonianSpec& spec);

const char* to_string(TimeSpec::Mode m);

}  // namespace gpt::scenario
