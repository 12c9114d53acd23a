#pragma once

#include <quadmath.h>

#include <cmath>
#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace wander {

using cd = std::complex<double>;
using f128 = __float128;

enum class Status : int {
  Ok = 0,
  DegenerateRegion,
  ResolutionTooCoarse,
  NoRoom,
  Collision,
  Overflow,
  IllConditioned,
  DegreeCapExceeded,
  PiecesOverlap,
  ConstructionFailed,
  ConfigError,
  IoError,
  InvalidArgument,
};

const char* status_name(Status s);

class Error : public std::runtime_error {
 public:
  Error(Status s, const std::string& what) : std::runtime_error(what), code_(s) {}
  Status code() const { return code_; }

 private:
  Status code_;
};

// complex number in binary128; the stage polynomials grow quickly enough that
// double-precision Horner loses the pinned orbit values
struct cq {
  f128 re = 0, im = 0;
  cq() = default;
  cq(f128 r, f128 i = 0) : re(r), im(i) {}
  cq(double r) : re(r), im(0) {}
  cq(cd z) : re(z.real()), im(z.imag()) {}
  cd d() const { return {double(re), double(im)}; }
};

inline cq operator+(cq a, cq b) { return {a.re + b.re, a.im + b.im}; }
inline cq operator-(cq a, cq b) { return {a.re - b.re, a.im - b.im}; }
inline cq operator-(cq a) { return {-a.re, -a.im}; }
inline cq operator*(cq a, cq b) {
  return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
}
inline cq operator*(f128 s, cq a) { return {s * a.re, s * a.im}; }
inline cq operator/(cq a, cq b) {
  // Smith's algorithm
  if (fabsq(b.re) >= fabsq(b.im)) {
    f128 r = b.im / b.re, den = b.re + b.im * r;
    return {(a.re + a.im * r) / den, (a.im - a.re * r) / den};
  }
  f128 r = b.re / b.im, den = b.im + b.re * r;
  return {(a.re * r + a.im) / den, (a.im * r - a.re) / den};
}
inline cq& operator+=(cq& a, cq b) { return a = a + b; }
inline cq& operator-=(cq& a, cq b) { return a = a - b; }
inline cq& operator*=(cq& a, cq b) { return a = a * b; }
inline bool operator==(cq a, cq b) { return a.re == b.re && a.im == b.im; }
inline bool operator!=(cq a, cq b) { return !(a == b); }

inline f128 absq(cq a) { return hypotq(a.re, a.im); }
inline double absd(cq a) { return double(absq(a)); }
inline bool finiteq(cq a) { return ::finiteq(a.re) && ::finiteq(a.im); }

std::string format_f128(f128 x);   // shortest string that parses back exactly
f128 parse_f128(const std::string& s);
std::string format_double(double x);

// worker count: hardware threads capped by WANDER_THREADS
int worker_count();

// split [0,n) into fixed contiguous chunks, one per worker; chunk boundaries
// depend only on n and the worker count so results are reproducible
template <class F>
void parallel_for(std::size_t n, F&& body);

}  // namespace wander

#include "parallel.hpp"
