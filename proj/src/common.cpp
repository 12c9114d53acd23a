#include "common.hpp"

#include <charconv>
#include <cstdlib>
#include <thread>

namespace wander {

const char* status_name(Status s) {
  switch (s) {
    case Status::Ok: return "Ok";
    case Status::DegenerateRegion: return "DegenerateRegion";
    case Status::ResolutionTooCoarse: return "ResolutionTooCoarse";
    case Status::NoRoom: return "NoRoom";
    case Status::Collision: return "Collision";
    case Status::Overflow: return "Overflow";
    case Status::IllConditioned: return "IllConditioned";
    case Status::DegreeCapExceeded: return "DegreeCapExceeded";
    case Status::PiecesOverlap: return "PiecesOverlap";
    case Status::ConstructionFailed: return "ConstructionFailed";
    case Status::ConfigError: return "ConfigError";
    case Status::IoError: return "IoError";
    case Status::InvalidArgument: return "InvalidArgument";
  }
  return "Unknown";
}

std::string format_f128(f128 x) {
  if (x == 0) return signbitq(x) ? "-0" : "0";
  char buf[64];
  for (int prec = 1; prec <= 36; ++prec) {
    quadmath_snprintf(buf, sizeof buf, "%.*Qg", prec, x);
    if (strtoflt128(buf, nullptr) == x) return buf;
  }
  quadmath_snprintf(buf, sizeof buf, "%.40Qg", x);
  return buf;
}

f128 parse_f128(const std::string& s) {
  char* end = nullptr;
  f128 v = strtoflt128(s.c_str(), &end);
  if (end == s.c_str() || *end != '\0') throw Error(Status::IoError, "bad number: " + s);
  return v;
}

std::string format_double(double x) {
  char buf[64];
  auto r = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, r.ptr);
}

int worker_count() {
  int hw = int(std::thread::hardware_concurrency());
  if (hw <= 0) hw = 1;
  if (const char* env = std::getenv("WANDER_THREADS")) {
    int cap = std::atoi(env);
    if (cap >= 1) hw = std::min(hw, cap);
  }
  return hw;
}

}  // namespace wander
