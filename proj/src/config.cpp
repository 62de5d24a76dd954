// File: config.cpp
#include "config.hpp"

#include <cstdio>
#include <fstream>
#include <initializer_list>
#include <sstream>

#include <json.hpp>

namespace vfsim {
namespace {

using nlohmann::json;

std::string join(const std::string& scope, const char* key) {
  return scope.empty() ? std::string(key) : scope + "." + key;
}

[[noreturn]] void fail_type(const std::string& path, const char* want) {
  throw ConfigParseError("config: " + path + " must be " + want);
}

void check_keys(const json& obj, const std::string& scope,
                std::initializer_list<const char*> allowed) {
  for (const auto& item : obj.items()) {
    bool known = false;
    for (const char* key : allowed) {
      if (item.key() == key) {
        known = true;
        break;
      }
    }
    if (!known)
      throw ConfigParseError("config: unknown key \"" + item.key() + "\" in " +
                             (scope.empty() ? "the top-level object" : scope));
  }
}

const json* find(const json& obj, const char* key) {
  auto it = obj.find(key);
  return it == obj.end() ? nullptr : &*it;
}

void read_double(const json& obj, const std::string& scope, const char* key, double& out) {
  if (const json* v = find(obj, key)) {
    if (!v->is_number()) fail_type(join(scope, key), "a number");
    out = v->get<double>();
  }
}

void read_int(const json& obj, const std::string& scope, const char* key, int& out) {
  if (const json* v = find(obj, key)) {
    if (!v->is_number_integer()) fail_type(join(scope, key), "an integer");
    out = v->get<int>();
  }
}

void read_uint64(const json& obj, const std::string& scope, const char* key,
                 std::uint64_t& out) {
  if (const json* v = find(obj, key)) {
    if (!v->is_number_unsigned()) fail_type(join(scope, key), "a non-negative integer");
    out = v->get<std::uint64_t>();
  }
}

void read_bool(const json& obj, const std::string& scope, const char* key, bool& out) {
  if (const json* v = find(obj, key)) {
    if (!v->is_boolean()) fail_type(join(scope, key), "a boolean");
    out = v->get<bool>();
  }
}

void read_string(const json& obj, const std::string& scope, const char* key,
                 std::string& out) {
  if (const json* v = find(obj, key)) {
    if (!v->is_string()) fail_type(join(scope, key), "a string");
    out = v->get<std::string>();
  }
}

void read_vec2(const json& obj, const std::string& scope, const char* key, Vec2& out) {
  if (const json* v = find(obj, key)) {
    if (!v->is_array() || v->size() != 2 || !(*v)[0].is_number() || !(*v)[1].is_number())
      fail_type(join(scope, key), "an array of two numbers");
    out = Vec2((*v)[0].get<double>(), (*v)[1].get<double>());
  }
}

void parse_fluid(const json& obj, FluidProperties& props, bool& mu_given) {
  if (!obj.is_object()) fail_type("scenario.fluid", "an object");
  check_keys(obj, "scenario.fluid", {"rho", "mu", "gravity"});
  read_double(obj, "scenario.fluid", "rho", props.rho);
  if (obj.contains("mu")) {
    mu_given = true;
    read_double(obj, "scenario.fluid", "mu", props.mu);
  }
  read_vec2(obj, "scenario.fluid", "gravity", props.g);
}

void parse_poiseuille(const json& obj, PoiseuilleParams& p) {
  if (!obj.is_object()) fail_type("scenario.poiseuille", "an object");
  const std::string scope = "scenario.poiseuille";
  check_keys(obj, scope, {"cells", "height", "drive"});
  read_int(obj, scope, "cells", p.cells);
  read_double(obj, scope, "height", p.height);
  read_double(obj, scope, "drive", p.drive);
}

void parse_disc(const json& obj, DiscParams& d) {
  if (!obj.is_object()) fail_type("scenario.disc", "an object");
  const std::string scope = "scenario.disc";
  check_keys(obj, scope,
             {"diameter", "u_infty", "reynolds", "resolution", "domain_diameters",
              "center_diameters", "shedding_trigger", "trigger_steps", "trigger_amplitude"});
  read_double(obj, scope, "diameter", d.diameter);
  read_double(obj, scope, "u_infty", d.u_infty);
  read_double(obj, scope, "reynolds", d.reynolds);
  read_int(obj, scope, "resolution", d.resolution);
  read_double(obj, scope, "domain_diameters", d.domain_diameters);
  read_vec2(obj, scope, "center_diameters", d.center_diameters);
  read_bool(obj, scope, "shedding_trigger", d.shedding_trigger);
  read_int(obj, scope, "trigger_steps", d.trigger_steps);
  read_double(obj, scope, "trigger_amplitude", d.trigger_amplitude);
}

void parse_swimmer(const json& obj, SwimmerParams& s) {
  if (!obj.is_object()) fail_type("scenario.swimmer", "an object");
  const std::string scope = "scenario.swimmer";
  check_keys(obj, scope,
             {"resolution", "domain", "body_length", "body_width", "fin_length",
              "density_ratio", "gait_amplitude", "gait_frequency", "gait_phase_lag",
              "cycles", "mirrored"});
  read_int(obj, scope, "resolution", s.resolution);
  read_double(obj, scope, "domain", s.domain);
  read_double(obj, scope, "body_length", s.body_length);
  read_double(obj, scope, "body_width", s.body_width);
  read_double(obj, scope, "fin_length", s.fin_length);
  read_double(obj, scope, "density_ratio", s.density_ratio);
  read_double(obj, scope, "gait_amplitude", s.gait_amplitude);
  read_double(obj, scope, "gait_frequency", s.gait_frequency);
  read_double(obj, scope, "gait_phase_lag", s.gait_phase_lag);
  read_int(obj, scope, "cycles", s.cycles);
  read_bool(obj, scope, "mirrored", s.mirrored);
}

ScenarioKind kind_from_name(const std::string& name) {
  if (name == "poiseuille") return ScenarioKind::poiseuille;
  if (name == "disc") return ScenarioKind::disc;
  if (name == "swimmer") return ScenarioKind::swimmer;
  throw ConfigValidationError("config: scenario.kind \"" + name +
                              "\" is not one of poiseuille, disc, swimmer");
}

const char* kind_name(ScenarioKind kind) {
  switch (kind) {
    case ScenarioKind::poiseuille: return "poiseuille";
    case ScenarioKind::disc: return "disc";
    case ScenarioKind::swimmer: return "swimmer";
  }
  return "?";
}

CouplingMode coupling_from_name(const std::string& name) {
  if (name == "segment_integral") return CouplingMode::segment_integral;
  if (name == "node_collocation") return CouplingMode::node_collocation;
  throw ConfigValidationError("config: integrator.coupling \"" + name +
                              "\" is not one of segment_integral, node_collocation");
}

const char* coupling_name(CouplingMode mode) {
  return mode == CouplingMode::segment_integral ? "segment_integral" : "node_collocation";
}

void parse_scenario(const json& obj, ScenarioSpec& spec, bool& mu_given) {
  if (!obj.is_object()) fail_type("scenario", "an object");
  check_keys(obj, "scenario",
             {"kind", "duration", "output_every", "fluid", "poiseuille", "disc", "swimmer"});
  std::string kind = kind_name(spec.kind);
  read_string(obj, "scenario", "kind", kind);
  spec.kind = kind_from_name(kind);
  read_double(obj, "scenario", "duration", spec.duration);
  read_int(obj, "scenario", "output_every", spec.output_every);
  if (const json* v = find(obj, "fluid")) parse_fluid(*v, spec.props, mu_given);
  if (const json* v = find(obj, "poiseuille")) parse_poiseuille(*v, spec.poiseuille);
  if (const json* v = find(obj, "disc")) parse_disc(*v, spec.disc);
  if (const json* v = find(obj, "swimmer")) parse_swimmer(*v, spec.swimmer);
}

void parse_integrator(const json& obj, IntegratorConfig& integ) {
  if (!obj.is_object()) fail_type("integrator", "an object");
  const std::string scope = "integrator";
  check_keys(obj, scope,
             {"h", "newton_tol", "max_newton_iters", "dual_regularization", "pressure_gauge",
              "include_convection", "coupling", "quad_order"});
  read_double(obj, scope, "h", integ.h);
  read_double(obj, scope, "newton_tol", integ.newton_tol);
  read_int(obj, scope, "max_newton_iters", integ.max_newton_iters);
  read_double(obj, scope, "dual_regularization", integ.dual_regularization);
  read_bool(obj, scope, "pressure_gauge", integ.pressure_gauge);
  read_bool(obj, scope, "include_convection", integ.include_convection);
  std::string coupling = coupling_name(integ.coupling_mode);
  read_string(obj, scope, "coupling", coupling);
  integ.coupling_mode = coupling_from_name(coupling);
  read_int(obj, scope, "quad_order", integ.quad_order);
}

void require(bool ok, const char* message) {
  if (!ok) throw ConfigValidationError(std::string("config: ") + message);
}

double default_mu(ScenarioKind kind) {
  switch (kind) {
    case ScenarioKind::poiseuille: return 0.1;
    case ScenarioKind::swimmer: return 0.005;
    case ScenarioKind::disc: return 0.0;  // derived from the Reynolds number
  }
  return 0.0;
}

std::string fmt(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return buf;
}

}  // namespace

RunConfig parse_config(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    std::string msg = e.what();
    if (auto pos = msg.find("parse error"); pos != std::string::npos) msg = msg.substr(pos);
    throw ConfigParseError("config: " + msg);
  }
  if (!j.is_object()) throw ConfigParseError("config: the document must be a JSON object");
  check_keys(j, "", {"scenario", "integrator", "output_dir", "snapshot_every", "seed"});

  RunConfig cfg;
  bool mu_given = false;
  if (const json* v = find(j, "scenario")) parse_scenario(*v, cfg.scenario, mu_given);
  if (const json* v = find(j, "integrator")) parse_integrator(*v, cfg.integrator);
  read_string(j, "", "output_dir", cfg.output_dir);
  read_int(j, "", "snapshot_every", cfg.snapshot_every);
  read_uint64(j, "", "seed", cfg.seed);
  if (!mu_given) cfg.scenario.props.mu = default_mu(cfg.scenario.kind);

  require(cfg.snapshot_every >= 1, "snapshot_every must be >= 1");
  require(cfg.scenario.output_every >= 1, "scenario.output_every must be >= 1");
  require(!cfg.output_dir.empty(), "output_dir must not be empty");
  require(cfg.scenario.props.rho > 0.0, "scenario.fluid.rho must be > 0");
  require(cfg.scenario.props.mu >= 0.0, "scenario.fluid.mu must be >= 0");
  require(cfg.integrator.h > 0.0, "integrator.h must be > 0");
  require(cfg.integrator.newton_tol > 0.0, "integrator.newton_tol must be > 0");
  require(cfg.integrator.max_newton_iters >= 1, "integrator.max_newton_iters must be >= 1");
  require(cfg.integrator.dual_regularization >= 0.0,
          "integrator.dual_regularization must be >= 0");
  require(cfg.integrator.quad_order >= 1 && cfg.integrator.quad_order <= 5,
          "integrator.quad_order must be in [1, 5]");
  return cfg;
}

RunConfig load_config_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("config: cannot read file \"" + path + "\"");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  if (in.bad()) throw IoError("config: failed while reading \"" + path + "\"");
  return parse_config(buffer.str());
}

std::string canonical_config(const RunConfig& config) {
  const ScenarioSpec& s = config.scenario;
  json j;
  j["scenario"]["kind"] = kind_name(s.kind);
  j["scenario"]["duration"] = s.duration;
  j["scenario"]["output_every"] = s.output_every;
  j["scenario"]["fluid"] = {{"rho", s.props.rho},
                            {"mu", s.props.mu},
                            {"gravity", {s.props.g.x(), s.props.g.y()}}};
  switch (s.kind) {
    case ScenarioKind::poiseuille:
      j["scenario"]["poiseuille"] = {{"cells", s.poiseuille.cells},
                                     {"height", s.poiseuille.height},
                                     {"drive", s.poiseuille.drive}};
      break;
    case ScenarioKind::disc:
      j["scenario"]["disc"] = {
          {"diameter", s.disc.diameter},
          {"u_infty", s.disc.u_infty},
          {"reynolds", s.disc.reynolds},
          {"resolution", s.disc.resolution},
          {"domain_diameters", s.disc.domain_diameters},
          {"center_diameters", {s.disc.center_diameters.x(), s.disc.center_diameters.y()}},
          {"shedding_trigger", s.disc.shedding_trigger},
          {"trigger_steps", s.disc.trigger_steps},
          {"trigger_amplitude", s.disc.trigger_amplitude}};
      break;
    case ScenarioKind::swimmer:
      j["scenario"]["swimmer"] = {{"resolution", s.swimmer.resolution},
                                  {"domain", s.swimmer.domain},
                                  {"body_length", s.swimmer.body_length},
                                  {"body_width", s.swimmer.body_width},
                                  {"fin_length", s.swimmer.fin_length},
                                  {"density_ratio", s.swimmer.density_ratio},
                                  {"gait_amplitude", s.swimmer.gait_amplitude},
                                  {"gait_frequency", s.swimmer.gait_frequency},
                                  {"gait_phase_lag", s.swimmer.gait_phase_lag},
                                  {"cycles", s.swimmer.cycles},
                                  {"mirrored", s.swimmer.mirrored}};
      break;
  }
  j["integrator"] = {{"h", config.integrator.h},
                     {"newton_tol", config.integrator.newton_tol},
                     {"max_newton_iters", config.integrator.max_newton_iters},
                     {"dual_regularization", config.integrator.dual_regularization},
                     {"pressure_gauge", config.integrator.pressure_gauge},
                     {"include_convection", config.integrator.include_convection},
                     {"coupling", coupling_name(config.integrator.coupling_mode)},
                     {"quad_order", config.integrator.quad_order}};
  j["snapshot_every"] = config.snapshot_every;
  j["seed"] = config.seed;
  return j.dump();  // output_dir is a storage location, not part of the run identity
}

std::string config_digest(const RunConfig& config) {
  const std::string text = canonical_config(config);
  std::uint64_t hash = 1469598103934665603ull;
  for (unsigned char c : text) {
    hash ^= c;
    hash *= 1099511628211ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(hash));
  return buf;
}

std::string describe_config(const RunConfig& config) {
  const ScenarioSpec& s = config.scenario;
  std::string out = "scenario: ";
  out += kind_name(s.kind);
  switch (s.kind) {
    case ScenarioKind::poiseuille:
      out += " (cells=" + std::to_string(s.poiseuille.cells) +
             ", drive=" + fmt(s.poiseuille.drive) + ")";
      break;
    case ScenarioKind::disc:
      out += " (Re=" + fmt(s.disc.reynolds) +
             ", resolution=" + std::to_string(s.disc.resolution) + ")";
      break;
    case ScenarioKind::swimmer:
      out += " (resolution=" + std::to_string(s.swimmer.resolution) +
             ", cycles=" + std::to_string(s.swimmer.cycles) + ")";
      break;
  }
  out += "\nfluid: rho=" + fmt(s.props.rho) + ", mu=" + fmt(s.props.mu);
  out += "\nintegrator: h=" + fmt(config.integrator.h) +
         ", newton_tol=" + fmt(config.integrator.newton_tol) + ", coupling=" +
         coupling_name(config.integrator.coupling_mode);
  out += "\noutput: " + config.output_dir + ", snapshots every " +
         std::to_string(config.snapshot_every) + " steps";
  out += "\ndigest: " + config_digest(config);
  out += "\n";
  return out;
}

}  // namespace vfsim
