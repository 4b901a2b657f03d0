#pragma once

#include <cmath>
#include <complex>

#include <boost/multiprecision/mpfr.hpp>

namespace rotlab {

using MpReal = boost::multiprecision::mpfr_float;

// Minimal complex arithmetic usable with both double and MpReal.
template <class Real>
struct Cx {
  Real re{0};
  Real im{0};

  Cx() = default;
  Cx(Real r) : re(std::move(r)), im(0) {}
  Cx(Real r, Real i) : re(std::move(r)), im(std::move(i)) {}

  friend Cx operator+(const Cx& a, const Cx& b) { return {a.re + b.re, a.im + b.im}; }
  friend Cx operator-(const Cx& a, const Cx& b) { return {a.re - b.re, a.im - b.im}; }
  friend Cx operator-(const Cx& a) { return {-a.re, -a.im}; }
  friend Cx operator*(const Cx& a, const Cx& b) {
    return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
  }
  friend Cx operator*(const Real& s, const Cx& a) { return {s * a.re, s * a.im}; }
  friend Cx operator/(const Cx& a, const Cx& b) {
    Real d = b.re * b.re + b.im * b.im;
    return {(a.re * b.re + a.im * b.im) / d, (a.im * b.re - a.re * b.im) / d};
  }
  Cx& operator+=(const Cx& o) { re += o.re; im += o.im; return *this; }
  Cx& operator-=(const Cx& o) { re -= o.re; im -= o.im; return *this; }
  Cx& operator*=(const Cx& o) { *this = *this * o; return *this; }

  Cx conj() const { return {re, -im}; }
  Real norm2() const { return re * re + im * im; }
  Real abs() const {
    using std::sqrt;
    return sqrt(norm2());
  }
  Real arg() const {
    using std::atan2;
    return atan2(im, re);
  }

  static Cx polar(const Real& r, const Real& t) {
    using std::cos;
    using std::sin;
    return {r * cos(t), r * sin(t)};
  }

  template <class Other>
  Cx<Other> cast() const {
    return {Other(re), Other(im)};
  }
};

using Cxd = Cx<double>;
using CxMp = Cx<MpReal>;

inline double to_double(double x) { return x; }
inline double to_double(const MpReal& x) { return x.convert_to<double>(); }

template <class Real>
Real real_pi() {
  return boost::math::constants::pi<Real>();
}

// Sets the working precision of MpReal for the lifetime of the object.
class MpPrecision {
 public:
  explicit MpPrecision(unsigned digits10) : saved_(MpReal::default_precision()) {
    MpReal::default_precision(digits10);
  }
  ~MpPrecision() { MpReal::default_precision(saved_); }
  MpPrecision(const MpPrecision&) = delete;
  MpPrecision& operator=(const MpPrecision&) = delete;

 private:
  unsigned saved_;
};

// Decimal digits needed to resolve points at hyperbolic distance `dist` from 0.
inline unsigned digits_for_distance(double dist) {
  return static_cast<unsigned>(dist / std::log(10.0)) + 30u;
}

}  // namespace rotlab
