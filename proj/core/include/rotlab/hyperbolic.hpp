#pragma once

#include <optional>
#include <utility>

#include "rotlab/error.hpp"
#include "rotlab/numeric.hpp"

namespace rotlab {

constexpr double kEpsMatrix = 1e-12;
constexpr double kEpsBoundary = 1e-9;
constexpr double kDiskMargin = 1e-9;

// Orientation-preserving isometry stored as a real SL(2,R) matrix acting on the
// upper half-plane; the disk action is its Cayley conjugate.
template <class Real>
struct Mobius {
  Real p{1}, q{0}, r{0}, s{1};

  static Mobius identity() { return {Real(1), Real(0), Real(0), Real(1)}; }

  // Disk transform z -> (a z + b) / (conj(b) z + conj(a)).
  static Mobius from_disk(const Cx<Real>& a, const Cx<Real>& b) {
    return {a.re + b.re, a.im - b.im, -a.im - b.im, a.re - b.re};
  }
  Cx<Real> disk_a() const { return {(p + s) / 2, (q - r) / 2}; }
  Cx<Real> disk_b() const { return {(p - s) / 2, -(q + r) / 2}; }

  friend Mobius operator*(const Mobius& x, const Mobius& y) {
    return {x.p * y.p + x.q * y.r, x.p * y.q + x.q * y.s, x.r * y.p + x.s * y.r,
            x.r * y.q + x.s * y.s};
  }
  Mobius inverse() const { return {s, -q, -r, p}; }
  Real trace() const { return p + s; }
  Real det() const { return p * s - q * r; }

  Mobius normalized() const {
    using std::abs;
    using std::sqrt;
    Real k = sqrt(abs(det()));
    return {p / k, q / k, r / k, s / k};
  }

  Cx<Real> apply(const Cx<Real>& z) const {
    Cx<Real> a = disk_a(), b = disk_b();
    return (a * z + b) / (b.conj() * z + a.conj());
  }

  template <class Other>
  Mobius<Other> cast() const {
    return {Other(p), Other(q), Other(r), Other(s)};
  }
};

using MobiusD = Mobius<double>;
using MobiusMp = Mobius<MpReal>;

// Boundary fixed points (repelling, attracting) of a hyperbolic transform.
template <class Real>
std::pair<Cx<Real>, Cx<Real>> hyperbolic_fixed_points(const Mobius<Real>& m) {
  using std::sqrt;
  Cx<Real> a = m.disk_a(), b = m.disk_b();
  if (a.re < 0) {
    a = -a;
    b = -b;
  }
  Real root = sqrt(a.re * a.re - 1);
  Cx<Real> bc = b.conj();
  Cx<Real> z1 = Cx<Real>(root, a.im) / bc;
  Cx<Real> z2 = Cx<Real>(-root, a.im) / bc;
  // |f'(z)| = 1 / |conj(b) z + conj(a)|^2
  Real d1 = (bc * z1 + a.conj()).norm2();
  if (d1 > 1) return {z2, z1};
  return {z1, z2};
}

template <class Real>
Real disk_distance(const Cx<Real>& z, const Cx<Real>& w) {
  using std::atanh;
  Real num = (z - w).abs();
  Real den = (Cx<Real>(1) - w.conj() * z).abs();
  return 2 * atanh(num / den);
}

// Normal form of an oriented geodesic: the map z -> rho (z - c) / (1 - conj(c) z)
// sends the tail to -1 and the head to +1; followed by the Cayley map to the
// upper half-plane the geodesic becomes the positive imaginary axis.
template <class Real>
class GeodesicFrame {
 public:
  GeodesicFrame() = default;
  GeodesicFrame(const Cx<Real>& tail, const Cx<Real>& head) {
    c_ = (tail + head) / Cx<Real>(2 + (tail - head).abs());
    Cx<Real> wa = to_centered(tail);
    rho_ = -wa.conj();
    Real n = rho_.abs();
    rho_ = Cx<Real>(rho_.re / n, rho_.im / n);
  }

  Cx<Real> to_disk_normal(const Cx<Real>& z) const { return rho_ * to_centered(z); }
  Cx<Real> from_disk_normal(const Cx<Real>& w) const {
    Cx<Real> v = w / rho_;
    return (v + c_) / (Cx<Real>(1) + c_.conj() * v);
  }

  Cx<Real> to_halfplane(const Cx<Real>& z) const {
    Cx<Real> w = to_disk_normal(z);
    return Cx<Real>(0, 1) * (Cx<Real>(1) + w) / (Cx<Real>(1) - w);
  }
  Cx<Real> from_halfplane(const Cx<Real>& u) const {
    Cx<Real> i(0, 1);
    return from_disk_normal((u - i) / (u + i));
  }

  // (signed distance, arclength) with arclength 0 at the point nearest the origin.
  std::pair<Real, Real> fermi(const Cx<Real>& z) const {
    using std::asinh;
    using std::log;
    Cx<Real> u = to_halfplane(z);
    return {asinh(u.re / u.im), log(u.abs())};
  }
  Cx<Real> point(const Real& s, const Real& t) const {
    using std::cosh;
    using std::exp;
    using std::sinh;
    Real e = exp(t) / cosh(s);
    return from_halfplane(Cx<Real>(e * sinh(s), e));
  }
  Cx<Real> project(const Cx<Real>& z) const { return point(Real(0), fermi(z).second); }

  // Real coordinate on the half-plane boundary of a boundary point.
  Real boundary_coordinate(const Cx<Real>& e) const {
    Cx<Real> w = to_disk_normal(e);
    Cx<Real> u = Cx<Real>(0, 1) * (Cx<Real>(1) + w) / (Cx<Real>(1) - w);
    return u.re;
  }

 private:
  Cx<Real> to_centered(const Cx<Real>& z) const {
    return (z - c_) / (Cx<Real>(1) - c_.conj() * z);
  }
  Cx<Real> c_;
  Cx<Real> rho_{Real(1), Real(0)};
};

// Ideal endpoints (behind p, beyond q) of the geodesic through two interior points.
template <class Real>
std::pair<Cx<Real>, Cx<Real>> geodesic_through(const Cx<Real>& p, const Cx<Real>& q) {
  Cx<Real> one(1);
  Cx<Real> mq = (q - p) / (one - p.conj() * q);
  Real n = mq.abs();
  Cx<Real> u(mq.re / n, mq.im / n);
  auto back = [&](const Cx<Real>& w) { return (w + p) / (one + p.conj() * w); };
  return {back(-u), back(u)};
}

struct BoundaryPoint {
  double angle = 0.0;
  static BoundaryPoint from_angle(double a);
  static BoundaryPoint from_complex(const Cxd& z) { return from_angle(z.arg()); }
  Cxd point() const { return Cxd::polar(1.0, angle); }
};

double circular_distance(BoundaryPoint x, BoundaryPoint y);

struct DiskPoint {
  double x = 0.0;
  double y = 0.0;
  static DiskPoint from(const Cxd& z) { return {z.re, z.im}; }
  Cxd z() const { return {x, y}; }
  double radius() const { return std::hypot(x, y); }
};

struct Geodesic {
  BoundaryPoint a;  // tail
  BoundaryPoint b;  // head
  static Geodesic make(BoundaryPoint a, BoundaryPoint b);
  static Geodesic from_angles(double a, double b) {
    return make(BoundaryPoint::from_angle(a), BoundaryPoint::from_angle(b));
  }
  Geodesic reversed() const { return {b, a}; }
  GeodesicFrame<double> frame() const { return {a.point(), b.point()}; }
};

struct IsometryClass {
  enum class Kind { Identity, Elliptic, Parabolic, Hyperbolic };
  Kind kind = Kind::Identity;
  Geodesic axis{};
  double length = 0.0;
  BoundaryPoint fixed{};
  DiskPoint center{};
  bool near_parabolic = false;
};

enum class Interleave { CrossPositive, CrossNegative, Disjoint, SharedEndpoint };

DiskPoint apply(const MobiusD& m, DiskPoint z);
BoundaryPoint apply(const MobiusD& m, BoundaryPoint z);
Geodesic apply(const MobiusD& m, const Geodesic& g);

double hyp_distance(DiskPoint z, DiskPoint w);
IsometryClass classify(const MobiusD& m);
DiskPoint project_onto_geodesic(DiskPoint z, const Geodesic& g);
double distance_to_geodesic(DiskPoint z, const Geodesic& g);
Interleave boundary_interleave(const Geodesic& g1, const Geodesic& g2);
bool crosses(Interleave i);
// 0 when the geodesics cross or share an endpoint.
double geodesic_distance(const Geodesic& g1, const Geodesic& g2);
bool same_geodesic(const Geodesic& g1, const Geodesic& g2, double tol = kEpsBoundary);

Geodesic geodesic_through_points(DiskPoint p, DiskPoint q);

// Hyperbolic translation of length `dist` along the diameter through angle `angle`.
MobiusD translation_along(double angle, double dist);
MobiusD rotation_about_origin(double angle);

}  // namespace rotlab
