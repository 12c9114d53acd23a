#include "polynomial.hpp"

#include <fstream>
#include <boost/multiprecision/cpp_bin_float.hpp>
#include <sstream>

namespace wander {

Polynomial::Polynomial(std::vector<cq> coeffs) : c_(std::move(coeffs)) {
  if (c_.empty()) c_.push_back(cq());
  for (auto& a : c_)
    if (!finiteq(a)) throw Error(Status::Overflow, "non-finite coefficient");
  trim();
}

Polynomial Polynomial::from_complex(const std::vector<cd>& coeffs) {
  return Polynomial(std::vector<cq>(coeffs.begin(), coeffs.end()));
}

Polynomial Polynomial::affine(cd alpha, cd beta) { return Polynomial({cq(beta), cq(alpha)}); }
Polynomial Polynomial::constant(cd c) { return Polynomial({cq(c)}); }

void Polynomial::trim() {
  while (c_.size() > 1 && c_.back() == cq()) c_.pop_back();
  cd_.resize(c_.size());
  abs_.resize(c_.size());
  for (std::size_t i = 0; i < c_.size(); ++i) {
    cd_[i] = c_[i].d();
    abs_[i] = std::abs(cd_[i]);
  }
}

bool Polynomial::is_zero() const { return c_.size() == 1 && c_[0] == cq(); }

cq Polynomial::eval(cq z) const {
  cq r;
  for (auto it = c_.rbegin(); it != c_.rend(); ++it) r = r * z + *it;
  if (!finiteq(r) || absq(r) > 1e300) throw Error(Status::Overflow, "polynomial value overflow");
  return r;
}

void Polynomial::eval2(cq z, cq& v, cq& dv) const {
  cq r, d;
  for (auto it = c_.rbegin(); it != c_.rend(); ++it) {
    d = d * z + r;
    r = r * z + *it;
  }
  if (!finiteq(r) || absq(r) > 1e300 || !finiteq(d))
    throw Error(Status::Overflow, "polynomial value overflow");
  v = r;
  dv = d;
}

namespace {

using wide = boost::multiprecision::cpp_bin_float_100;  // ~332 bits

// binary128 -> wide without loss: three doubles carry 159 bits
wide widen(f128 x) {
  double a = double(x);
  double b = double(x - a);
  double c = double(x - a - b);
  return wide(a) + wide(b) + wide(c);
}

f128 narrow(const wide& x) {
  double a = x.convert_to<double>();
  wide r = x - a;
  double b = r.convert_to<double>();
  double c = (r - b).convert_to<double>();
  return f128(a) + f128(b) + f128(c);
}

}  // namespace

void Polynomial::eval2_wide(cq z, cq& v, cq& dv) const {
  wide zr = widen(z.re), zi = widen(z.im), rr = 0, ri = 0, dr = 0, di = 0;
  for (auto it = c_.rbegin(); it != c_.rend(); ++it) {
    wide ndr = dr * zr - di * zi + rr, ndi = dr * zi + di * zr + ri;
    wide nrr = rr * zr - ri * zi + widen(it->re), nri = rr * zi + ri * zr + widen(it->im);
    dr = ndr, di = ndi, rr = nrr, ri = nri;
  }
  v = cq(narrow(rr), narrow(ri));
  dv = cq(narrow(dr), narrow(di));
  if (!finiteq(v) || !finiteq(dv) || absq(v) > 1e300) throw Error(Status::Overflow, "polynomial value overflow");
}

cq Polynomial::eval_wide(cq z) const {
  cq v, dv;
  eval2_wide(z, v, dv);
  return v;
}

Polynomial Polynomial::taylor_shift(cq c) const {
  std::size_t n = c_.size();
  std::vector<wide> re(n), im(n);
  for (std::size_t i = 0; i < n; ++i) re[i] = widen(c_[i].re), im[i] = widen(c_[i].im);
  wide cr = widen(c.re), ci = widen(c.im);
  // repeated synthetic division by (z - c)
  for (std::size_t k = 0; k + 1 < n; ++k)
    for (std::size_t i = n - 1; i > k; --i) {
      wide tr = re[i] * cr - im[i] * ci, ti = re[i] * ci + im[i] * cr;
      re[i - 1] += tr;
      im[i - 1] += ti;
    }
  std::vector<cq> out(n);
  for (std::size_t i = 0; i < n; ++i) out[i] = cq(narrow(re[i]), narrow(im[i]));
  return Polynomial(std::move(out));
}

bool iterate_wide(const Polynomial& p, cq& z, int n) {
  try {
    for (int k = 0; k < n; ++k) z = p.eval_wide(z);
  } catch (const Error&) {
    return false;
  }
  return true;
}

cd Polynomial::eval_fast(cd z, double* err_bound) const {
  cd r = 0;
  double s = 0, az = std::abs(z);
  for (std::size_t i = cd_.size(); i-- > 0;) {
    r = r * z + cd_[i];
    s = s * az + abs_[i];
  }
  if (err_bound) *err_bound = 4.5e-16 * double(cd_.size() + 2) * s;
  return r;
}

Polynomial Polynomial::derivative() const {
  if (c_.size() == 1) return Polynomial();
  std::vector<cq> d(c_.size() - 1);
  for (std::size_t i = 1; i < c_.size(); ++i) d[i - 1] = f128(i) * c_[i];
  return Polynomial(std::move(d));
}

Polynomial operator+(const Polynomial& a, const Polynomial& b) {
  std::vector<cq> r(std::max(a.c_.size(), b.c_.size()));
  for (std::size_t i = 0; i < a.c_.size(); ++i) r[i] += a.c_[i];
  for (std::size_t i = 0; i < b.c_.size(); ++i) r[i] += b.c_[i];
  return Polynomial(std::move(r));
}

Polynomial operator-(const Polynomial& a, const Polynomial& b) {
  std::vector<cq> r(std::max(a.c_.size(), b.c_.size()));
  for (std::size_t i = 0; i < a.c_.size(); ++i) r[i] += a.c_[i];
  for (std::size_t i = 0; i < b.c_.size(); ++i) r[i] -= b.c_[i];
  return Polynomial(std::move(r));
}

Polynomial operator*(const Polynomial& a, const Polynomial& b) {
  std::vector<cq> r(a.c_.size() + b.c_.size() - 1);
  for (std::size_t i = 0; i < a.c_.size(); ++i)
    for (std::size_t j = 0; j < b.c_.size(); ++j) r[i + j] += a.c_[i] * b.c_[j];
  return Polynomial(std::move(r));
}

std::string Polynomial::to_text() const {
  std::string s = "degree " + std::to_string(degree()) + "\n";
  for (auto& a : c_) s += format_f128(a.re) + " " + format_f128(a.im) + "\n";
  return s;
}

Polynomial Polynomial::from_text(const std::string& text) {
  std::istringstream in(text);
  std::string word;
  long d = -1;
  if (!(in >> word >> d) || word != "degree" || d < 0 || d > 100000)
    throw Error(Status::IoError, "polynomial file: expected 'degree d' header");
  std::vector<cq> c(std::size_t(d) + 1);
  for (auto& a : c) {
    std::string re, im;
    if (!(in >> re >> im)) throw Error(Status::IoError, "polynomial file: truncated coefficient list");
    a = cq(parse_f128(re), parse_f128(im));
  }
  if (in >> word) throw Error(Status::IoError, "polynomial file: trailing data");
  return Polynomial(std::move(c));
}

void Polynomial::save(const std::string& path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(Status::IoError, "cannot write " + path);
  out << to_text();
}

Polynomial Polynomial::load(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Status::IoError, "cannot read " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return from_text(ss.str());
}

bool iterate(const Polynomial& p, cq& z, int n) {
  try {
    for (int i = 0; i < n; ++i) z = p.eval(z);
  } catch (const Error&) {
    return false;
  }
  return true;
}

OrbitTable orbit(const Polynomial& p, cq z, int n, int map_stage) {
  if (n < 0) throw Error(Status::InvalidArgument, "orbit length must be >= 0");
  OrbitTable t;
  t.base = z;
  t.map_stage = map_stage;
  t.iterates.push_back(z);
  for (int j = 0; j < n; ++j) {
    try {
      z = p.eval(z);
    } catch (const Error&) {
      t.overflow = true;
      break;
    }
    t.iterates.push_back(z);
  }
  return t;
}

double sup_deviation(const Polynomial& p, const Polynomial& target, const std::vector<cd>& samples) {
  if (samples.empty()) throw Error(Status::InvalidArgument, "sup_deviation: no samples");
  double m = 0;
  for (auto z : samples) m = std::max(m, absd(p.eval(cq(z)) - target.eval(cq(z))));
  return m;
}

}  // namespace wander
