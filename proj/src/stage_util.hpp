#pragma once

#include <chrono>
#include <cmath>

#include "construct.hpp"

namespace wander::detail {

inline double now() {
  using namespace std::chrono;
  return duration<double>(steady_clock::now().time_since_epoch()).count();
}

// fractional offset of the verification samples, fixed by the seed
inline double jitter(std::uint64_t seed) { return std::fmod(double(seed % 1000003) * 0.6180339887498949, 1.0); }

inline void mark_failed(ConstructionState& st, Status s, const std::string& check, const std::string& detail) {
  st.failed = true;
  st.failure = s;
  st.failure_check = check;
  st.failure_detail = detail;
}

inline void fail_on_certificate(ConstructionState& st, const Certificate& c) {
  for (auto& ch : c.checks)
    if (!ch.pass) {
      mark_failed(st, Status::ConstructionFailed, ch.name, ch.details);
      return;
    }
}

// x, f(x), ..., f^{count-1}(x), shorter if the orbit overflows
inline std::vector<cq> record_orbit(const Polynomial& f, cd x, int count) {
  std::vector<cq> t{cq(x)};
  cq z(x);
  for (int j = 1; j < count; ++j) {
    if (!iterate_wide(f, z, 1)) break;
    t.push_back(z);
  }
  return t;
}

}  // namespace wander::detail
