#include "scenario.hpp"

#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"

namespace wander {

using nlohmann::json;

const char* mode_name(Mode m) { return m == Mode::Escaping ? "escaping" : "oscillating"; }

std::vector<double> default_tower(Mode m, int levels) {
  // the first few gaps are wide so that x_1, x_2 sit visibly off omega; after
  // that the radii halve, which keeps every gap at least twice the grid step
  std::vector<double> r = m == Mode::Escaping
                              ? std::vector<double>{0.85, 0.05, 0.005, 0.0008, 0.0002, 0.0001, 5e-5, 2.5e-5, 1.25e-5}
                              : std::vector<double>{0.1, 0.02, 0.004, 0.001, 0.0004, 0.0002, 1e-4, 5e-5, 2.5e-5};
  while (int(r.size()) < levels) r.push_back(r.back() / 2);
  r.resize(std::size_t(std::max(levels, 1)));
  return r;
}

double default_omega_radius(Mode) { return 2e-4; }

namespace {

[[noreturn]] void bad(const std::string& m) { throw Error(Status::ConfigError, m); }

cd point(const json& j, const char* what) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number())
    bad(std::string(what) + ": expected [re, im]");
  return {j[0].get<double>(), j[1].get<double>()};
}

void only_keys(const json& j, std::initializer_list<const char*> keys, const char* where) {
  std::set<std::string> ok(keys.begin(), keys.end());
  for (auto it = j.begin(); it != j.end(); ++it)
    if (!ok.count(it.key())) bad(std::string("unknown key '") + it.key() + "' in " + where);
}

template <class T>
T get(const json& j, const char* key, T fallback) {
  if (!j.contains(key)) return fallback;
  try {
    return j.at(key).get<T>();
  } catch (const json::exception&) {
    bad(std::string("bad value for '") + key + "'");
  }
}

JordanRegion parse_region(const json& r, const std::string& base_dir) {
  if (!r.is_object()) bad("region must be an object");
  std::string type = get<std::string>(r, "type", "");
  try {
    if (type == "disk") {
      only_keys(r, {"type", "center", "radius"}, "region");
      if (!r.contains("center") || !r.contains("radius")) bad("disk region needs center and radius");
      return JordanRegion::make_disk(point(r["center"], "center"), get<double>(r, "radius", 0));
    }
    if (type == "polygon") {
      only_keys(r, {"type", "vertices"}, "region");
      if (!r.contains("vertices") || !r["vertices"].is_array()) bad("polygon region needs vertices");
      std::vector<cd> v;
      for (auto& p : r["vertices"]) v.push_back(point(p, "vertex"));
      return JordanRegion::make_polygon(v);
    }
    if (type == "mask") {
      only_keys(r, {"type", "path", "origin", "pixel"}, "region");
      std::filesystem::path p = get<std::string>(r, "path", "");
      if (p.empty()) bad("mask region needs path");
      if (p.is_relative()) p = std::filesystem::path(base_dir) / p;
      cd origin = r.contains("origin") ? point(r["origin"], "origin") : cd(0.0);
      return JordanRegion::load_pbm(p.string(), origin, get<double>(r, "pixel", 1.0));
    }
  } catch (const Error& e) {
    if (e.code() == Status::ConfigError) throw;
    bad(std::string("region: ") + e.what());
  }
  bad("region type must be disk, polygon or mask");
}

}  // namespace

Scenario Scenario::parse(const std::string& text, const std::string& base_dir) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    bad(std::string("config is not valid JSON: ") + e.what());
  }
  if (!j.is_object()) bad("config must be an object");
  only_keys(j,
            {"mode", "region", "stages", "resolution", "sequence_length", "seed", "omega_radius", "tower",
             "eps_scale", "degree_cap", "max_halvings", "tolerances"},
            "config");
  Scenario s;
  std::string mode = get<std::string>(j, "mode", "");
  if (mode == "escaping") s.mode = Mode::Escaping;
  else if (mode == "oscillating") s.mode = Mode::Oscillating;
  else bad("mode must be escaping or oscillating");
  if (!j.contains("region")) bad("missing region");
  s.region = parse_region(j["region"], base_dir);
  s.region_text = j["region"].dump();
  s.stages = get<int>(j, "stages", 0);
  s.resolution = get<double>(j, "resolution", 0.0);
  s.sequence_length = get<int>(j, "sequence_length", s.stages + 2);
  s.seed = get<std::uint64_t>(j, "seed", 0);
  s.omega_radius = get<double>(j, "omega_radius", 0.0);
  s.tower = get<std::vector<double>>(j, "tower", {});
  s.eps_scale = get<double>(j, "eps_scale", 1.0);
  s.degree_cap = get<int>(j, "degree_cap", 400);
  s.max_halvings = get<int>(j, "max_halvings", 20);
  if (j.contains("tolerances")) {
    const json& t = j["tolerances"];
    if (!t.is_object()) bad("tolerances must be an object");
    only_keys(t,
              {"fixed_point", "preimage", "separation_floor", "winding_slack", "max_turn", "boundary_samples",
               "containment_slack", "cauchy_safety"},
              "tolerances");
    auto& o = s.tol;
    o.fixed_point = get<double>(t, "fixed_point", o.fixed_point);
    o.preimage = get<double>(t, "preimage", o.preimage);
    o.separation_floor = get<double>(t, "separation_floor", o.separation_floor);
    o.winding_slack = get<double>(t, "winding_slack", o.winding_slack);
    o.max_turn = get<double>(t, "max_turn", o.max_turn);
    o.boundary_samples = get<int>(t, "boundary_samples", o.boundary_samples);
    o.containment_slack = get<double>(t, "containment_slack", o.containment_slack);
    o.cauchy_safety = get<double>(t, "cauchy_safety", o.cauchy_safety);
  }
  s.validate();
  return s;
}

Scenario Scenario::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) bad("cannot read config " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  auto dir = std::filesystem::path(path).parent_path().string();
  return parse(ss.str(), dir.empty() ? "." : dir);
}

void Scenario::validate() const {
  if (stages < 1) bad("stages (K) must be >= 1");
  if (sequence_length < stages + 2) bad("sequence_length (N) must be >= K+2");
  if (!(resolution >= 0)) bad("resolution must be >= 0");
  if (!(omega_radius >= 0)) bad("omega_radius must be >= 0");
  if (!(eps_scale > 0 && eps_scale <= 1)) bad("eps_scale must lie in (0, 1]");
  if (degree_cap < 1) bad("degree_cap must be >= 1");
  if (max_halvings < 0) bad("max_halvings must be >= 0");
  for (std::size_t i = 0; i < tower.size(); ++i)
    if (!(tower[i] > 0) || (i && !(tower[i] < tower[i - 1]))) bad("tower radii must be positive and decreasing");
  if (tol.boundary_samples < 16) bad("boundary_samples must be >= 16");
  if (!(tol.fixed_point > 0 && tol.preimage > 0 && tol.separation_floor > 0)) bad("tolerances must be positive");
}

std::string Scenario::to_json() const {
  json j;
  j["mode"] = mode_name(mode);
  j["region"] = json::parse(region_text.empty() ? "{}" : region_text);
  j["stages"] = stages;
  j["resolution"] = resolution;
  j["sequence_length"] = sequence_length;
  j["seed"] = seed;
  j["omega_radius"] = omega_radius;
  j["tower"] = tower;
  j["eps_scale"] = eps_scale;
  j["degree_cap"] = degree_cap;
  j["max_halvings"] = max_halvings;
  j["tolerances"] = {{"fixed_point", tol.fixed_point},
                     {"preimage", tol.preimage},
                     {"separation_floor", tol.separation_floor},
                     {"winding_slack", tol.winding_slack},
                     {"max_turn", tol.max_turn},
                     {"boundary_samples", tol.boundary_samples},
                     {"containment_slack", tol.containment_slack},
                     {"cauchy_safety", tol.cauchy_safety}};
  return j.dump();
}

}  // namespace wander
