#include "rotlab/hyperbolic.hpp"

#include <cmath>

namespace rotlab {

namespace {
constexpr double kTwoPi = 2.0 * M_PI;
}

const char* error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::NearBoundary: return "NearBoundary";
    case ErrorCode::InvalidGenus: return "InvalidGenus";
    case ErrorCode::InvalidWord: return "InvalidWord";
    case ErrorCode::NumericalEscape: return "NumericalEscape";
    case ErrorCode::BudgetExceeded: return "BudgetExceeded";
    case ErrorCode::NotHyperbolic: return "NotHyperbolic";
    case ErrorCode::NotSimple: return "NotSimple";
    case ErrorCode::AmbiguousCrossing: return "AmbiguousCrossing";
    case ErrorCode::TubeTooWide: return "TubeTooWide";
    case ErrorCode::NotRankTwo: return "NotRankTwo";
    case ErrorCode::AmbiguousPosition: return "AmbiguousPosition";
    case ErrorCode::ResolutionTooCoarse: return "ResolutionTooCoarse";
    case ErrorCode::PreconditionFailed: return "PreconditionFailed";
  }
  return "Unknown";
}

BoundaryPoint BoundaryPoint::from_angle(double a) {
  double t = std::fmod(a, kTwoPi);
  if (t < 0) t += kTwoPi;
  if (t >= kTwoPi) t = 0.0;
  return {t};
}

double circular_distance(BoundaryPoint x, BoundaryPoint y) {
  double d = std::fabs(x.angle - y.angle);
  return std::min(d, kTwoPi - d);
}

Geodesic Geodesic::make(BoundaryPoint a, BoundaryPoint b) {
  if (circular_distance(a, b) <= kEpsBoundary)
    throw Error(ErrorCode::PreconditionFailed, "geodesic endpoints coincide");
  return {a, b};
}

DiskPoint apply(const MobiusD& m, DiskPoint z) {
  Cxd w = m.apply(z.z());
  if (w.abs() >= 1.0 - kDiskMargin)
    throw Error(ErrorCode::NearBoundary, "image too close to the boundary; renormalize via the group");
  return DiskPoint::from(w);
}

BoundaryPoint apply(const MobiusD& m, BoundaryPoint z) {
  return BoundaryPoint::from_complex(m.apply(z.point()));
}

Geodesic apply(const MobiusD& m, const Geodesic& g) { return {apply(m, g.a), apply(m, g.b)}; }

double hyp_distance(DiskPoint z, DiskPoint w) { return disk_distance(z.z(), w.z()); }

IsometryClass classify(const MobiusD& raw) {
  MobiusD m = raw.normalized();
  IsometryClass out;
  double tr = std::fabs(m.trace());
  Cxd a = m.disk_a(), b = m.disk_b();
  if (a.re < 0) {
    a = -a;
    b = -b;
  }
  if (b.abs() < kEpsMatrix && std::fabs(a.im) < kEpsMatrix) {
    out.kind = IsometryClass::Kind::Identity;
    return out;
  }
  if (tr > 2.0 + kEpsMatrix) {
    auto [rep, att] = hyperbolic_fixed_points(m);
    out.kind = IsometryClass::Kind::Hyperbolic;
    out.axis = {BoundaryPoint::from_complex(rep), BoundaryPoint::from_complex(att)};
    out.length = 2.0 * std::acosh(tr / 2.0);
    return out;
  }
  if (tr >= 2.0 - kEpsMatrix) {
    out.kind = IsometryClass::Kind::Parabolic;
    out.near_parabolic = true;
    out.fixed = BoundaryPoint::from_complex(Cxd(0.0, a.im) / b.conj());
    return out;
  }
  out.kind = IsometryClass::Kind::Elliptic;
  if (b.abs() < kEpsMatrix) {
    out.center = {0.0, 0.0};
  } else {
    double root = std::sqrt(std::max(0.0, 1.0 - a.re * a.re));
    double sgn = a.im >= 0 ? 1.0 : -1.0;
    out.center = DiskPoint::from(Cxd(0.0, a.im - sgn * root) / b.conj());
  }
  return out;
}

DiskPoint project_onto_geodesic(DiskPoint z, const Geodesic& g) {
  return DiskPoint::from(g.frame().project(z.z()));
}

double distance_to_geodesic(DiskPoint z, const Geodesic& g) {
  return std::fabs(g.frame().fermi(z.z()).first);
}

Interleave boundary_interleave(const Geodesic& g1, const Geodesic& g2) {
  for (BoundaryPoint p : {g1.a, g1.b})
    for (BoundaryPoint q : {g2.a, g2.b})
      if (circular_distance(p, q) <= kEpsBoundary) return Interleave::SharedEndpoint;
  auto inside = [](double x, double lo, double hi) {
    double span = std::fmod(hi - lo + 2 * kTwoPi, kTwoPi);
    double off = std::fmod(x - lo + 2 * kTwoPi, kTwoPi);
    return off > 0 && off < span;
  };
  bool ia = inside(g2.a.angle, g1.a.angle, g1.b.angle);
  bool ib = inside(g2.b.angle, g1.a.angle, g1.b.angle);
  if (ia == ib) return Interleave::Disjoint;
  return ia ? Interleave::CrossPositive : Interleave::CrossNegative;
}

bool crosses(Interleave i) {
  return i == Interleave::CrossPositive || i == Interleave::CrossNegative;
}

double geodesic_distance(const Geodesic& g1, const Geodesic& g2) {
  Interleave il = boundary_interleave(g1, g2);
  if (il != Interleave::Disjoint) return 0.0;
  auto f = g1.frame();
  double x1 = std::fabs(f.boundary_coordinate(g2.a.point()));
  double x2 = std::fabs(f.boundary_coordinate(g2.b.point()));
  return std::acosh((x1 + x2) / std::fabs(x1 - x2));
}

bool same_geodesic(const Geodesic& g1, const Geodesic& g2, double tol) {
  return circular_distance(g1.a, g2.a) <= tol && circular_distance(g1.b, g2.b) <= tol;
}

Geodesic geodesic_through_points(DiskPoint p, DiskPoint q) {
  auto [a, b] = geodesic_through(p.z(), q.z());
  return Geodesic::make(BoundaryPoint::from_complex(a), BoundaryPoint::from_complex(b));
}

MobiusD translation_along(double angle, double dist) {
  MobiusD rot = rotation_about_origin(angle);
  MobiusD tr = MobiusD::from_disk({std::cosh(dist / 2), 0.0}, {std::sinh(dist / 2), 0.0});
  return rot * tr * rot.inverse();
}

MobiusD rotation_about_origin(double angle) {
  return MobiusD::from_disk(Cxd::polar(1.0, angle / 2), {0.0, 0.0});
}

}  // namespace rotlab
