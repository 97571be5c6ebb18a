#include "gpt/cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "gpt/liouville.hpp"
#include "gpt/phase.hpp"
#include "gpt/scenario.hpp"
#include "gpt/svg.hpp"
#include "gpt/symmetry.hpp"

#include <unistd.h>

namespace gpt::cli {

using nlohmann::json;

namespace {

struct Globals {
  std::string format = "text";
  std::optional<std::uint64_t> seed;
  bool json() const { return format == "json"; }
};

std::string fmt(double v, const char* spec = "%.12g") {
  char buf[64];
  std::snprintf(buf, sizeof buf, spec, v == 0.0 ? 0.0 : v);
  return buf;
}

json vec_json(const Vec3& v) { return json::array({v.x(), v.y(), v.z()}); }

json mat_json(const Mat3& m) {
  json rows = json::array();
  for (int r = 0; r < 3; ++r) rows.push_back(json::array({m(r, 0), m(r, 1), m(r, 2)}));
  return rows;
}

std::string axis_label(const Vec3& a) {
  const Vec3 n = a.normalized();
  const char* names[] = {"x", "y", "z"};
  for (int k = 0; k < 3; ++k) {
    if (std::abs(std::abs(n[k]) - 1.0) < 1e-12) return (n[k] < 0 ? "-" : "") + std::string(names[k]);
  }
  return "(" + fmt(n.x(), "%.6g") + ", " + fmt(n.y(), "%.6g") + ", " + fmt(n.z(), "%.6g") + ")";
}

Vec3 measurement_axis(const std::string& name) {
  if (name == "x") return Vec3::UnitX();
  if (name == "y") return Vec3::UnitY();
  if (name == "z") return Vec3::UnitZ();
  throw Error(ErrorKind::Parse, "measurement must be x, y or z");
}

json element_json(const Mat3& m) {
  json e = {{"matrix", mat_json(m)}, {"det", std::round(m.determinant())}};
  const auto info = symmetry::axis_angle(m);
  if (const auto* r = std::get_if<symmetry::RotationInfo>(&info)) {
    e["kind"] = "rotation";
    e["angle"] = r->angle;
    if (r->axis) e["axis"] = vec_json(*r->axis);
  } else {
    const auto& f = std::get<symmetry::ReflectionInfo>(info);
    e["kind"] = "improper";
    e["normal"] = vec_json(f.normal);
    e["angle"] = f.rotation_angle;
  }
  return e;
}

std::string element_text(const Mat3& m) {
  const auto info = symmetry::axis_angle(m);
  if (const auto* r = std::get_if<symmetry::RotationInfo>(&info)) {
    if (!r->axis) return "identity";
    return "rotation about " + axis_label(*r->axis) + " by " + fmt(r->angle, "%.6f");
  }
  const auto& f = std::get<symmetry::ReflectionInfo>(info);
  if (std::abs(f.rotation_angle) < 1e-12) return "mirror normal " + axis_label(f.normal);
  return "improper rotation about " + axis_label(f.normal) + " by " + fmt(f.rotation_angle, "%.6f");
}

std::string theory_summary(const StateSpace& s) {
  if (s.restriction) {
    const auto rot = symmetry::rotation_subgroup(*s.restriction);
    return s.name + ": finite group order " + std::to_string(s.restriction->order()) + ", rotations " +
           std::to_string(rot.order());
  }
  if (s.symmetry && s.symmetry->finite) {
    const auto rot = symmetry::rotation_subgroup(*s.symmetry->finite);
    return s.name + ": finite group order " + std::to_string(s.symmetry->finite->order()) +
           ", rotations " + std::to_string(rot.order());
  }
  const ContinuousAxes axes = symmetry::continuous_axes(s);
  if (axes.all) return s.name + ": all axes continuous";
  std::string line = s.name + ": continuous axis";
  for (size_t k = 0; k < axes.axes.size(); ++k) line += (k ? ", " : " ") + axis_label(axes.axes[k]);
  if (s.symmetry->perpendicular_half_turns) {
    line += "; half-turns about axes perpendicular to " + axis_label(*s.symmetry->perpendicular_half_turns);
  }
  return line;
}

void emit(std::ostream& out, const Globals& g, const json& j, const std::string& text) {
  if (g.json()) {
    out << j.dump(2) << "\n";
  } else {
    out << text;
  }
}

json spec_json(const dynamics::EvolutionSpec& spec) {
  json j = {{"mode", to_string(spec.mode)}, {"allowedTimes", spec.allowed_times()},
            {"axis", vec_json(spec.axis)}, {"trivial", spec.trivial}};
  if (spec.mode == dynamics::Mode::Discrete) {
    j["tauStar"] = spec.min_time;
    j["minAngle"] = spec.min_angle;
  }
  return j;
}

struct Loaded {
  scenario::Scenario scn;
  StateSpace space;
  dynamics::HamiltonianObservable h;
  dynamics::EvolutionSpec spec;
};

Loaded load_scenario(const std::string& path, const Globals& g) {
  Loaded l;
  l.scn = scenario::load(path);
  if (g.seed) l.scn.seed = *g.seed;
  l.space = scenario::build_space(l.scn.theory);
  l.h = scenario::build_hamiltonian(l.scn.hamiltonian);
  if (!contains(l.space, l.scn.initial_state)) {
    throw Error(ErrorKind::StateOutsideSpace, "initialState is outside '" + l.space.name + "'");
  }
  l.spec = dynamics::allowed_times(l.space, l.h);
  return l;
}

int cmd_list_theories(std::ostream& out, const Globals& g) {
  json arr = json::array();
  std::string text;
  for (Theory t : all_theories()) {
    const StateSpace s = builtin_theory(t);
    const std::string line = theory_summary(s);
    text += line + "\n";
    json j = {{"name", s.name}, {"summary", line}};
    if (s.restriction || (s.symmetry && s.symmetry->finite)) {
      const FiniteGroup grp = symmetry::finite_transformations(s);
      j["groupOrder"] = grp.order();
      j["rotations"] = symmetry::rotation_subgroup(grp).order();
    } else {
      const ContinuousAxes axes = symmetry::continuous_axes(s);
      j["allAxesContinuous"] = axes.all;
      json list = json::array();
      for (const auto& a : axes.axes) list.push_back(vec_json(a));
      j["continuousAxes"] = list;
    }
    arr.push_back(j);
  }
  emit(out, g, json{{"theories", arr}}, text);
  return kSuccess;
}

int cmd_evolve(std::ostream& out, const Globals& g, const std::string& path,
               const std::string& csv_path, const std::string& svg_path, const std::string& plane) {
  const Loaded l = load_scenario(path, g);
  using TM = scenario::TimeSpec::Mode;
  if (l.scn.time.mode == TM::Discrete && l.spec.mode != dynamics::Mode::Discrete) {
    throw Error(ErrorKind::InadmissibleDynamics,
                std::string("scenario requests discrete time but the evolution is ") + to_string(l.spec.mode));
  }
  if (l.scn.time.mode == TM::Continuous && l.spec.mode != dynamics::Mode::Continuous) {
    throw Error(ErrorKind::InadmissibleDynamics,
                std::string("scenario requests continuous time but the evolution is ") + to_string(l.spec.mode));
  }
  const auto traj = dynamics::trajectory(l.space, l.h, l.scn.initial_state, l.scn.time.grid());
  std::vector<std::string> outputs;
  write_atomic(csv_path, trajectory_csv(traj));
  outputs.push_back(csv_path);
  if (!svg_path.empty()) {
    write_atomic(svg_path, svg::trajectory_svg(l.space, traj, svg::plane_from_name(plane)));
    outputs.push_back(svg_path);
  }
  double drift = 0.0;
  for (double e : traj.energies) drift = std::max(drift, std::abs(e - traj.energies.front()));
  const int code = drift <= 1e-9 ? kSuccess : kCheckFailure;
  json j = {{"command", "evolve"}, {"theory", l.space.name}, {"evolution", spec_json(l.spec)},
            {"points", traj.times.size()}, {"energyDrift", drift}, {"outputs", outputs},
            {"exitCode", code}};
  std::string text = "theory: " + l.space.name + "\nmode: " + to_string(l.spec.mode) +
                     "\nallowed times: " + l.spec.allowed_times() + "\npoints: " +
                     std::to_string(traj.times.size()) + "\nenergy drift: " + fmt(drift) + "\n";
  for (const auto& o : outputs) text += "wrote: " + o + "\n";
  emit(out, g, j, text);
  return code;
}

int cmd_verify(std::ostream& out, const Globals& g, const std::string& path) {
  const Loaded l = load_scenario(path, g);
  dynamics::VerifyOptions opts;
  opts.seed = l.scn.seed;
  const auto report = dynamics::verify_desiderata(l.space, l.h, opts);
  bool ok = true;
  json des = json::object();
  std::string text = "theory: " + l.space.name + "\nmode: " + to_string(l.spec.mode) +
                     "\nallowed times: " + l.spec.allowed_times() + "\n";
  for (const auto& e : report.entries) {
    const bool requested =
        std::find(l.scn.checks.begin(), l.scn.checks.end(), e.name) != l.scn.checks.end();
    if (requested && e.status == dynamics::Status::Fail) ok = false;
    json d = {{"status", to_string(e.status)}, {"requested", requested}, {"worst", e.worst},
              {"detail", e.detail}};
    if (e.witness) d["witness"] = vec_json(*e.witness);
    des[e.name] = d;
    text += e.name + ": " + to_string(e.status) + (requested ? "" : " (not requested)") +
            "  worst=" + fmt(e.worst, "%.3g") + "  " + e.detail + "\n";
  }
  int code = ok ? kSuccess : kCheckFailure;
  if (l.spec.mode == dynamics::Mode::None) code = kInadmissible;
  json j = {{"command", "verify"}, {"theory", l.space.name}, {"seed", l.scn.seed},
            {"evolution", spec_json(l.spec)}, {"desiderata", des}, {"exitCode", code}};
  text += "exit code: " + std::to_string(code) + "\n";
  emit(out, g, j, text);
  return code;
}

int cmd_symmetry(std::ostream& out, const Globals& g, const std::string& name, bool rotations_only) {
  const StateSpace s = builtin_theory(name);
  json j = {{"theory", s.name}, {"summary", theory_summary(s)}};
  std::string text = theory_summary(s) + "\n";
  if (s.restriction || (s.symmetry && s.symmetry->finite)) {
    FiniteGroup grp = symmetry::finite_transformations(s);
    if (rotations_only) grp = symmetry::rotation_subgroup(grp);
    json elems = json::array();
    for (const auto& m : grp.elements()) {
      elems.push_back(element_json(m));
      text += "  " + element_text(m) + "\n";
    }
    j["order"] = grp.order();
    j["elements"] = elems;
    json axes = json::array();
    for (const auto& a : symmetry::rotation_axes(grp)) {
      axes.push_back({{"axis", vec_json(a.axis)}, {"fold", a.fold}});
    }
    j["rotationAxes"] = axes;
  } else {
    const ContinuousAxes axes = symmetry::continuous_axes(s);
    j["allAxesContinuous"] = axes.all;
    json list = json::array();
    for (const auto& a : axes.axes) list.push_back(vec_json(a));
    j["continuousAxes"] = list;
    if (!rotations_only && s.symmetry->perpendicular_half_turns) {
      j["perpendicularHalfTurns"] = vec_json(*s.symmetry->perpendicular_half_turns);
    }
  }
  emit(out, g, j, text);
  return kSuccess;
}

int cmd_phase_group(std::ostream& out, const Globals& g, const std::string& name,
                    const std::string& axis, bool reflections) {
  const StateSpace s = builtin_theory(name);
  const Measurement m = axis_measurement(measurement_axis(axis));
  const auto result = phase::phase_group(s, m, reflections);
  json elems = json::array();
  std::string text = "phase group of " + axis + " measurement on " + s.name + ": finite order " +
                     std::to_string(result.finite.order()) + ", continuous dimension " +
                     std::to_string(result.continuous.size()) + "\n";
  for (const auto& t : result.finite.elements()) {
    elems.push_back(element_json(t));
    text += "  " + element_text(t) + "\n";
  }
  json gens = json::array();
  for (const auto& gm : result.continuous) {
    gens.push_back(mat_json(gm));
    text += "  generator: rotations about " + axis_label(Vec3(gm(2, 1), gm(0, 2), gm(1, 0))) + "\n";
  }
  json j = {{"theory", s.name}, {"measurement", axis}, {"finiteOrder", result.finite.order()},
            {"finite", elems}, {"continuousDimension", result.continuous.size()},
            {"continuous", gens}};
  emit(out, g, j, text);
  return kSuccess;
}

int cmd_branch(std::ostream& out, const Globals& g, const std::string& name, const std::string& axis,
               const std::vector<std::string>& outcomes) {
  const StateSpace s = builtin_theory(name);
  const Measurement m = axis_measurement(measurement_axis(axis));
  std::vector<size_t> subset;
  for (const auto& o : outcomes) {
    const auto it = std::find(m.labels.begin(), m.labels.end(), o);
    if (it == m.labels.end()) throw Error(ErrorKind::Parse, "unknown outcome '" + o + "' (use + or -)");
    subset.push_back(static_cast<size_t>(it - m.labels.begin()));
  }
  std::vector<Mat3> candidates = symmetry::rotation_subgroup(symmetry::finite_transformations(s)).elements();
  if (s.symmetry && !s.restriction && !s.symmetry->finite) {
    for (int k = 1; k < 8; ++k) candidates.push_back(rotation_about(measurement_axis(axis), k * kPi / 4));
  }
  json list = json::array();
  std::string text = "branch localization on " + s.name + ", measurement " + axis + ":\n";
  for (const auto& t : candidates) {
    const auto r = phase::is_branch_localized(t, s, m, subset);
    list.push_back({{"element", element_json(t)}, {"localized", r.localized}, {"vacuous", r.vacuous}});
    text += "  " + element_text(t) + ": " + (r.localized ? "localized" : "not localized") +
            (r.vacuous ? " (vacuous)" : "") + "\n";
  }
  emit(out, g, json{{"theory", s.name}, {"measurement", axis}, {"outcomes", outcomes}, {"elements", list}}, text);
  return kSuccess;
}

std::vector<phase::PeriodPair> read_periods(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::Parse, "cannot read periods file '" + path + "'");
  std::vector<phase::PeriodPair> pairs;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line[0] == '#') continue;
    std::replace(line.begin(), line.end(), ',', ' ');
    std::istringstream ls(line);
    phase::PeriodPair p;
    if (!(ls >> p.i >> p.j >> p.value)) {
      if (lineno == 1) continue;  // header
      throw Error(ErrorKind::Parse, "line " + std::to_string(lineno) + ": expected i,j,tau");
    }
    pairs.push_back(p);
  }
  if (pairs.empty()) throw Error(ErrorKind::Parse, "no period rows in '" + path + "'");
  return pairs;
}

int cmd_energy(std::ostream& out, const Globals& g, const std::string& path) {
  const auto assignment = phase::assign_energies(read_periods(path));
  json energies = json::object();
  std::string text = "convention: Delta = 2*pi/tau (hbar = 1)\n";
  for (size_t k = 0; k < assignment.labels.size(); ++k) {
    energies[std::to_string(assignment.labels[k])] = assignment.energies[k];
    text += "E" + std::to_string(assignment.labels[k]) + " = " + fmt(assignment.energies[k], "%.10f") + "\n";
  }
  text += "residual: " + fmt(assignment.residual, "%.3g") + "\n";
  emit(out, g,
       json{{"convention", "Delta = 2*pi/tau (hbar = 1)"}, {"energies", energies},
            {"residual", assignment.residual}},
       text);
  return kSuccess;
}

int cmd_liouville(std::ostream& out, const Globals& g, const std::string& potential, int n,
                  double t_max, const std::string& method, const std::string& density_out) {
  liouville::PhaseSpaceGrid grid;
  grid.nx = grid.np = n;
  const auto l = liouville::liouville_matrix(grid, liouville::potential_by_name(potential, grid));
  const double antisym = liouville::antisymmetry_defect(l);
  const auto rho0 = liouville::gaussian_density(grid, 0.25 * grid.lx, 0.5 * grid.p_max, 0.5);
  json j = {{"potential", potential}, {"grid", n}, {"tMax", t_max}, {"method", method},
            {"antisymmetryDefect", antisym}};
  std::string text = "potential: " + potential + "\ngrid: " + std::to_string(n) + "x" +
                     std::to_string(n) + "\nmax antisymmetry defect: " + fmt(antisym, "%.3g") + "\n";
  bool ok = antisym == 0.0;
  liouville::DensityField rho;
  if (method == "expm") {
    const Eigen::MatrixXd prop = liouville::propagator(l, t_max);
    const double orth = liouville::orthogonality_defect(prop);
    rho.values = prop * rho0.values;
    const double drift = std::abs(rho.values.norm() - rho0.values.norm());
    j["orthogonalityDefect"] = orth;
    j["normDrift"] = drift;
    text += "orthogonality defect: " + fmt(orth, "%.3g") + "\nL2 norm drift: " + fmt(drift, "%.3g") + "\n";
    ok = ok && orth < 1e-9 && drift < 1e-9;
  } else if (method == "rk4") {
    rho = liouville::liouville_evolve(l, rho0, t_max, liouville::Method::Rk4);
    const double drift = std::abs(rho.values.norm() - rho0.values.norm());
    j["normDrift"] = drift;
    text += "L2 norm drift: " + fmt(drift, "%.3g") + "\n";
    ok = ok && drift < 1e-7 * std::max(1.0, t_max) * rho0.values.norm();
  } else {
    throw Error(ErrorKind::Parse, "method must be expm or rk4");
  }
  if (!density_out.empty()) {
    write_atomic(density_out, liouville::density_csv(grid, rho));
    j["outputs"] = {density_out};
    text += "wrote: " + density_out + "\n";
  }
  const int code = ok ? kSuccess : kCheckFailure;
  j["exitCode"] = code;
  emit(out, g, j, text);
  return code;
}

}  // namespace

int exit_code_for(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::InadmissibleDynamics:
    case ErrorKind::InvalidTime:
      return kInadmissible;
    case ErrorKind::InconsistentCycle:
      return kCheckFailure;
    default:
      return kUsage;
  }
}

std::string trajectory_csv(const dynamics::Trajectory& traj) {
  std::string out = "t,u1,u2,u3,energy\n";
  char line[160];
  for (size_t k = 0; k < traj.times.size(); ++k) {
    const Vec3& u = traj.states[k];
    auto clean = [](double v) { return v == 0.0 ? 0.0 : v; };
    std::snprintf(line, sizeof line, "%.12g,%.12g,%.12g,%.12g,%.12g\n", clean(traj.times[k]),
                  clean(u.x()), clean(u.y()), clean(u.z()), clean(traj.energies[k]));
    out += line;
  }
  return out;
}

void write_atomic(const std::string& path, const std::string& content) {
  namespace fs = std::filesystem;
  const fs::path target(path);
  fs::path tmp = target;
  tmp += ".tmp." + std::to_string(::getpid());
  {
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    if (!f) throw Error(ErrorKind::Parse, "cannot write '" + path + "'");
    f << content;
    f.flush();
    if (!f) throw Error(ErrorKind::Parse, "cannot write '" + path + "'");
  }
  std::error_code ec;
  fs::rename(tmp, target, ec);
  if (ec) {
    fs::remove(tmp);
    throw Error(ErrorKind::Parse, "cannot write '" + path + "': " + ec.message());
  }
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Hamiltonians in generalized probabilistic theories"};
  app.name("gptham");
  app.require_subcommand(1);
  Globals g;
  std::uint64_t seed = 0;
  app.add_option("--format", g.format, "Output format")->check(CLI::IsMember({"json", "text"}));
  auto* seed_opt = app.add_option("--seed", seed, "Override the scenario seed");

  auto* list = app.add_subcommand("list-theories", "List builtin theories");

  std::string scenario_path, out_path, svg_path, plane = "xz";
  auto* evolve = app.add_subcommand("evolve", "Write a trajectory CSV");
  evolve->add_option("--scenario", scenario_path)->required();
  evolve->add_option("--out", out_path)->required();
  evolve->add_option("--svg", svg_path);
  evolve->add_option("--svg-plane", plane)->check(CLI::IsMember({"xy", "xz", "yz"}));

  auto* verify = app.add_subcommand("verify", "Check OBS, GEN, INV and QUAN");
  verify->add_option("--scenario", scenario_path)->required();

  std::string theory, meas;
  bool rotations_only = false, reflections = false;
  auto* sym = app.add_subcommand("symmetry", "Reversible transformations of a theory");
  sym->add_option("--theory", theory)->required();
  sym->add_flag("--rotations-only", rotations_only);

  auto* pg = app.add_subcommand("phase-group", "Phase group of a measurement");
  pg->add_option("--theory", theory)->required();
  pg->add_option("--measurement", meas)->required()->check(CLI::IsMember({"x", "y", "z"}));
  pg->add_flag("--reflections", reflections, "Admit improper transformations");

  std::vector<std::string> outcomes;
  auto* branch = app.add_subcommand("branch", "Branch-localized transformations");
  branch->add_option("--theory", theory)->required();
  branch->add_option("--measurement", meas)->required()->check(CLI::IsMember({"x", "y", "z"}));
  branch->add_option("--outcomes", outcomes, "Outcome labels (+, -)")->required()->delimiter(',');

  std::string periods;
  auto* energy = app.add_subcommand("energy", "Energies from periods");
  energy->add_option("--periods", periods, "CSV rows i,j,tau")->required();

  std::string potential, method = "expm", density_out;
  int grid_n = 16;
  double t_max = 1.0;
  auto* liou = app.add_subcommand("liouville", "Discretized Liouville operator checks");
  liou->add_option("--potential", potential)->required()->check(CLI::IsMember({"free", "harmonic"}));
  liou->add_option("--grid", grid_n)->required();
  liou->add_option("--t-max", t_max)->required();
  liou->add_option("--method", method)->check(CLI::IsMember({"expm", "rk4"}));
  liou->add_option("--density-out", density_out);

  for (auto* sub : app.get_subcommands({})) sub->fallthrough();

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kSuccess : kUsage;
  }
  if (seed_opt->count() > 0) g.seed = seed;

  try {
    if (*list) return cmd_list_theories(out, g);
    if (*evolve) return cmd_evolve(out, g, scenario_path, out_path, svg_path, plane);
    if (*verify) return cmd_verify(out, g, scenario_path);
    if (*sym) return cmd_symmetry(out, g, theory, rotations_only);
    if (*pg) return cmd_phase_group(out, g, theory, meas, reflections);
    if (*branch) return cmd_branch(out, g, theory, meas, outcomes);
    if (*energy) return cmd_energy(out, g, periods);
    if (*liou) return cmd_liouville(out, g, potential, grid_n, t_max, method, density_out);
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return exit_code_for(e.kind());
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << "\n";
    return kInternal;
  }
  return kUsage;
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  std::vector<std::string> args;
  for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
  return run(args, out, err);
}

}  // namespace gpt::cli
