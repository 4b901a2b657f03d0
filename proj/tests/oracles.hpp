#pragma once

// Independent reference computations used by the unit tests and the acceptance binary.
// None of these call into the routine they are compared against.

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <functional>
#include <random>
#include <vector>

#include "rotlab/horseshoe.hpp"
#include "rotlab/hyperbolic.hpp"

namespace oracle {

using cplx = std::complex<double>;

inline cplx to_c(rotlab::DiskPoint z) { return {z.x, z.y}; }
inline rotlab::DiskPoint from_c(cplx z) { return {z.real(), z.imag()}; }

// Half-plane to disk, u -> (u - i) / (u + i).
inline cplx halfplane_to_disk(cplx u) {
  const cplx i(0, 1);
  return (u - i) / (u + i);
}

// Closed-form disk distance, written out again.
inline double distance(cplx z, cplx w) {
  double num = 2 * std::norm(z - w);
  double den = (1 - std::norm(z)) * (1 - std::norm(w));
  return std::acosh(1 + num / den);
}

// Integrates 2|dz|/(1-|z|^2) along the geodesic from z to w, after moving z to the origin
// where that geodesic becomes a radius.
inline double quadrature_distance(cplx z, cplx w, int panels = 2000) {
  cplx m = (w - z) / (1.0 - std::conj(z) * w);
  double r = std::abs(m);
  auto density = [](double t) { return 2.0 / (1 - t * t); };
  // composite Simpson
  double h = r / panels, sum = density(0) + density(r);
  for (int k = 1; k < panels; ++k) sum += (k % 2 ? 4 : 2) * density(k * h);
  return sum * h / 3;
}

// Arclength parametrisation of the geodesic with ideal endpoints a, b (unit complex numbers,
// neither equal to 1): after the Cayley map to the half-plane, u -> (u - ua) / (u - ub) sends
// the semicircle over [ua, ub] to a ray from 0, along which arclength is log |v|.
struct GeodesicCurve {
  cplx ua, ub, dir;
  GeodesicCurve(cplx a, cplx b) {
    const cplx i(0, 1);
    auto cay = [&](cplx z) { return i * (1.0 + z) / (1.0 - z); };
    ua = cay(a);
    ub = cay(b);
    cplx top(0.5 * (ua.real() + ub.real()), 0.5 * std::abs(ua.real() - ub.real()));
    cplx v = (top - ua) / (top - ub);
    dir = v / std::abs(v);
  }
  cplx operator()(double t) const {
    cplx v = dir * std::exp(t);
    cplx u = (ua - ub * v) / (1.0 - v);
    return halfplane_to_disk(u);
  }
};

// Golden-section minimisation of t -> distance(z, curve(t)).
inline double golden_min_distance(const GeodesicCurve& g, cplx z, double lo = -40, double hi = 40) {
  // Coarse bracket first; the distance is unimodal in t.
  double best_t = lo, best = INFINITY;
  for (int k = 0; k <= 800; ++k) {
    double t = lo + (hi - lo) * k / 800.0;
    double d = distance(z, g(t));
    if (d < best) best = d, best_t = t;
  }
  double step = (hi - lo) / 800.0;
  double x0 = best_t - step, x1 = best_t + step;
  const double phi = (std::sqrt(5.0) - 1) / 2;
  double c = x1 - phi * (x1 - x0), d = x0 + phi * (x1 - x0);
  for (int it = 0; it < 200 && x1 - x0 > 1e-13; ++it) {
    if (distance(z, g(c)) < distance(z, g(d)))
      x1 = d;
    else
      x0 = c;
    c = x1 - phi * (x1 - x0);
    d = x0 + phi * (x1 - x0);
  }
  return distance(z, g(0.5 * (x0 + x1)));
}

// Dense sampling of both geodesics as polylines and a segment-segment test.
// Returns 0 if no crossing, else +1/-1 by the sign of the tangent cross product at the crossing.
inline int sampled_crossing(cplx a1, cplx b1, cplx a2, cplx b2, int samples = 4000) {
  GeodesicCurve g1(a1, b1), g2(a2, b2);
  std::vector<cplx> p1, p2;
  for (int k = 0; k <= samples; ++k) {
    double t = -25 + 50.0 * k / samples;
    p1.push_back(g1(t));
    p2.push_back(g2(t));
  }
  auto cr = [](cplx u, cplx v) { return u.real() * v.imag() - u.imag() * v.real(); };
  for (int i = 0; i < samples; ++i)
    for (int j = 0; j < samples; ++j) {
      cplx a = p1[i], b = p1[i + 1], c = p2[j], d = p2[j + 1];
      double o1 = cr(b - a, c - a), o2 = cr(b - a, d - a), o3 = cr(d - c, a - c), o4 = cr(d - c, b - c);
      if (o1 * o2 < 0 && o3 * o4 < 0) return cr(b - a, d - c) > 0 ? 1 : -1;
    }
  return 0;
}

// ------------------------------------------------------------------ plane geometry

struct P {
  double x, y;
};

inline double cross(P a, P b) { return a.x * b.y - a.y * b.x; }

inline bool proper_cross(P a, P b, P c, P d) {
  auto o = [](P p, P q, P r) { return cross({q.x - p.x, q.y - p.y}, {r.x - p.x, r.y - p.y}); };
  double o1 = o(a, b, c), o2 = o(a, b, d), o3 = o(c, d, a), o4 = o(c, d, b);
  return o1 * o2 <= 0 && o3 * o4 <= 0;
}

// O(n^2) check that no two non-adjacent edges touch.
inline bool simple(const std::vector<P>& poly) {
  std::size_t n = poly.size();
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      if (j == i + 1 || (i == 0 && j == n - 1)) continue;
      if (proper_cross(poly[i], poly[(i + 1) % n], poly[j], poly[(j + 1) % n])) return false;
    }
  return true;
}

// Winding number of a closed polygon around a point.
inline int winding(const std::vector<P>& poly, P z) {
  double total = 0;
  for (std::size_t i = 0; i < poly.size(); ++i) {
    P a{poly[i].x - z.x, poly[i].y - z.y};
    P b{poly[(i + 1) % poly.size()].x - z.x, poly[(i + 1) % poly.size()].y - z.y};
    total += std::atan2(cross(a, b), a.x * b.x + a.y * b.y);
  }
  return static_cast<int>(std::lround(total / (2 * M_PI)));
}

// Markov disposition of a polygon against the unit square, decided by dense sampling of the
// sides and winding numbers. Returns +1, -1 or 0 (not Markovian); `margin` receives the smallest
// clearance seen, so callers can discard near-tangent fixtures.
inline int square_disposition(const std::vector<P>& poly, const std::array<std::size_t, 4>& corners,
                              double* margin) {
  std::size_t n = poly.size();
  auto side = [&](int k) {
    std::vector<P> pts;
    for (std::size_t i = corners[k];; i = (i + 1) % n) {
      std::size_t j = (i + 1) % n;
      for (int s = 0; s < 64; ++s) {
        double t = s / 64.0;
        pts.push_back({poly[i].x + t * (poly[j].x - poly[i].x), poly[i].y + t * (poly[j].y - poly[i].y)});
      }
      if (j == corners[(k + 1) % 4]) {
        pts.push_back(poly[j]);
        break;
      }
    }
    return pts;
  };
  auto lower = side(0), upper = side(2);
  double lo_min = INFINITY, lo_max = -INFINITY, up_min = INFINITY, up_max = -INFINITY;
  for (P p : lower) lo_min = std::min(lo_min, p.y), lo_max = std::max(lo_max, p.y);
  for (P p : upper) up_min = std::min(up_min, p.y), up_max = std::max(up_max, p.y);

  // Side strips: the whole polygon (boundary samples and interior via winding) must miss them.
  double strip = INFINITY;
  for (int k = 0; k < 4; ++k)
    for (P p : side(k)) {
      double c = std::max(std::min(p.x, 1 - p.x), std::max(-p.y, p.y - 1));
      strip = std::min(strip, c);
    }
  for (double y : {0.25, 0.5, 0.75})
    for (double x : {-0.5, 1.5})
      if (winding(poly, {x, y}) != 0) strip = std::min(strip, -1.0);

  double plus = std::min({up_min - 1, -lo_max, strip});
  double minus = std::min({-up_max, lo_min - 1, strip});
  double best = std::max(plus, minus);
  *margin = std::fabs(best);
  if (best <= 0) return 0;
  return plus >= minus ? 1 : -1;
}

// Random x-monotone-ish PL rectangle: lower side near y0, upper near y1, both spanning [x0, x1].
inline std::vector<P> random_pl_rectangle(std::mt19937_64& rng, double x0, double x1, double y0, double y1,
                                          std::array<std::size_t, 4>& corners) {
  std::uniform_real_distribution<double> u(-1, 1);
  double w = x1 - x0, jitter = 0.25 * std::min(w, y1 - y0);
  std::vector<P> pts;
  int per_side = 3;
  auto jit = [&] { return jitter * u(rng); };
  corners[0] = pts.size();
  pts.push_back({x0, y0});
  for (int k = 1; k <= per_side; ++k) pts.push_back({x0 + w * k / (per_side + 1.0), y0 + jit()});
  corners[1] = pts.size();
  pts.push_back({x1, y0 + jit() * 0.5});
  for (int k = 1; k <= per_side; ++k)
    pts.push_back({x1 + 0.2 * jit() * w / jitter, y0 + (y1 - y0) * k / (per_side + 1.0)});
  corners[2] = pts.size();
  pts.push_back({x1, y1 + jit() * 0.5});
  for (int k = per_side; k >= 1; --k) pts.push_back({x0 + w * k / (per_side + 1.0), y1 + jit()});
  corners[3] = pts.size();
  pts.push_back({x0, y1});
  for (int k = per_side; k >= 1; --k)
    pts.push_back({x0 + 0.2 * jit() * w / jitter, y0 + (y1 - y0) * k / (per_side + 1.0)});
  return pts;
}

inline rotlab::MarkedRectangle to_rect(const std::vector<P>& poly, const std::array<std::size_t, 4>& corners) {
  rotlab::MarkedRectangle r;
  for (P p : poly) r.boundary.push_back({p.x, p.y});
  r.corners = corners;
  return r;
}

}  // namespace oracle
