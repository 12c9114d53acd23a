#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "geometry.hpp"
#include "verification.hpp"

namespace wander {

struct Scenario {
  Mode mode = Mode::Escaping;
  JordanRegion region = JordanRegion::make_disk(0.0, 1.0);  // before normalization
  std::string region_text;     // canonical echo of the region block
  int stages = 1;              // K
  double resolution = 0;       // h, before normalization
  int sequence_length = 0;     // N
  std::uint64_t seed = 0;
  double omega_radius = 0;     // size of the normalized region; 0 = mode default
  std::vector<double> tower;   // r_0 > r_1 > ... ; empty = mode default
  double eps_scale = 1.0;      // eps_k <= eps_scale * lemma cap
  int degree_cap = 400;
  int max_halvings = 20;
  Tolerances tol;

  static Scenario parse(const std::string& json_text, const std::string& base_dir = ".");
  static Scenario load(const std::string& path);
  std::string to_json() const;  // canonical echo
  void validate() const;
};

const char* mode_name(Mode m);
std::vector<double> default_tower(Mode m, int levels);
double default_omega_radius(Mode m);

}  // namespace wander
