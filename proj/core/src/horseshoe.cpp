#include "rotlab/horseshoe.hpp"

#include <algorithm>
#include <cmath>

#include <gsl/gsl_errno.h>
#include <gsl/gsl_multiroots.h>

namespace rotlab {

double cross(Vec2 a, Vec2 b) { return a.x * b.y - a.y * b.x; }
double norm(Vec2 a) { return std::hypot(a.x, a.y); }

// ---------------------------------------------------------------- rectangles

MarkedRectangle MarkedRectangle::axis_box(double x0, double y0, double x1, double y1) {
  return {{{x0, y0}, {x1, y0}, {x1, y1}, {x0, y1}}, {0, 1, 2, 3}};
}

std::vector<Vec2> MarkedRectangle::side(int k) const {
  std::size_t n = boundary.size();
  std::size_t from = corners[k], to = corners[(k + 1) % 4];
  std::vector<Vec2> out;
  for (std::size_t i = from;; i = (i + 1) % n) {
    out.push_back(boundary[i]);
    if (i == to) break;
  }
  return out;
}

double MarkedRectangle::signed_area() const {
  double a = 0;
  for (std::size_t i = 0; i < boundary.size(); ++i)
    a += cross(boundary[i], boundary[(i + 1) % boundary.size()]);
  return a / 2;
}

namespace {

bool segments_intersect(Vec2 a, Vec2 b, Vec2 c, Vec2 d) {
  auto orient = [](Vec2 p, Vec2 q, Vec2 r) { return cross(q - p, r - p); };
  double o1 = orient(a, b, c), o2 = orient(a, b, d), o3 = orient(c, d, a), o4 = orient(c, d, b);
  auto on = [](Vec2 p, Vec2 q, Vec2 r) {
    return std::min(p.x, q.x) - 1e-15 <= r.x && r.x <= std::max(p.x, q.x) + 1e-15 &&
           std::min(p.y, q.y) - 1e-15 <= r.y && r.y <= std::max(p.y, q.y) + 1e-15;
  };
  if (((o1 > 0 && o2 < 0) || (o1 < 0 && o2 > 0)) && ((o3 > 0 && o4 < 0) || (o3 < 0 && o4 > 0)))
    return true;
  if (o1 == 0 && on(a, b, c)) return true;
  if (o2 == 0 && on(a, b, d)) return true;
  if (o3 == 0 && on(c, d, a)) return true;
  if (o4 == 0 && on(c, d, b)) return true;
  return false;
}

}  // namespace

bool is_simple_polygon(const std::vector<Vec2>& poly) {
  std::size_t n = poly.size();
  if (n < 3) return false;
  // Sweep over x: segments sorted by their left end, tested against the active ones.
  struct Seg {
    double lo, hi;
    std::size_t i;
  };
  std::vector<Seg> segs;
  for (std::size_t i = 0; i < n; ++i) {
    Vec2 a = poly[i], b = poly[(i + 1) % n];
    segs.push_back({std::min(a.x, b.x), std::max(a.x, b.x), i});
  }
  std::sort(segs.begin(), segs.end(), [](const Seg& a, const Seg& b) { return a.lo < b.lo; });
  std::vector<Seg> active;
  for (const Seg& s : segs) {
    active.erase(std::remove_if(active.begin(), active.end(), [&](const Seg& t) { return t.hi < s.lo; }),
                 active.end());
    for (const Seg& t : active) {
      std::size_t i = s.i, j = t.i;
      bool adjacent = (i + 1) % n == j || (j + 1) % n == i;
      Vec2 a = poly[i], b = poly[(i + 1) % n], c = poly[j], d = poly[(j + 1) % n];
      if (adjacent) {
        // Adjacent edges may only share their common vertex.
        Vec2 shared = (i + 1) % n == j ? b : a;
        Vec2 p = (i + 1) % n == j ? a : b, q = (i + 1) % n == j ? d : c;
        if (std::fabs(cross(p - shared, q - shared)) < 1e-300 &&
            (p.x - shared.x) * (q.x - shared.x) + (p.y - shared.y) * (q.y - shared.y) > 0)
          return false;
        continue;
      }
      if (segments_intersect(a, b, c, d)) return false;
    }
    active.push_back(s);
  }
  return true;
}

void validate_rectangle(const MarkedRectangle& r) {
  std::size_t n = r.boundary.size();
  if (n < 4) throw Error(ErrorCode::PreconditionFailed, "rectangle needs at least four vertices");
  for (auto c : r.corners)
    if (c >= n) throw Error(ErrorCode::PreconditionFailed, "corner index out of range");
  // Corners must appear in cyclic boundary order.
  std::size_t steps = 0;
  for (int k = 0; k < 4; ++k) {
    std::size_t d = (r.corners[(k + 1) % 4] + n - r.corners[k]) % n;
    if (d == 0) throw Error(ErrorCode::PreconditionFailed, "repeated corner");
    steps += d;
  }
  if (steps != n) throw Error(ErrorCode::PreconditionFailed, "corners are not in cyclic order");
  if (!is_simple_polygon(r.boundary))
    throw Error(ErrorCode::PreconditionFailed, "rectangle boundary is not simple");
}

namespace {

void refine_into(const PlaneMap& f, Vec2 a, Vec2 b, Vec2 fa, Vec2 fb, double tol, int depth,
                 std::vector<Vec2>& out) {
  Vec2 mid = 0.5 * (a + b);
  Vec2 fm = f(mid);
  double dev = norm(fm - 0.5 * (fa + fb));
  double scale = std::max(1.0, norm(fb - fa));
  if (depth <= 0 || dev <= tol * scale) {
    out.push_back(fb);
    return;
  }
  refine_into(f, a, mid, fa, fm, tol, depth - 1, out);
  refine_into(f, mid, b, fm, fb, tol, depth - 1, out);
}

}  // namespace

MarkedRectangle map_rectangle(const MarkedRectangle& r, const PlaneMap& f, double tolerance,
                              int max_depth) {
  MarkedRectangle out;
  std::size_t n = r.boundary.size();
  std::vector<Vec2> images(n);
  for (std::size_t i = 0; i < n; ++i) images[i] = f(r.boundary[i]);
  std::vector<std::size_t> index_of(n);
  for (std::size_t i = 0; i < n; ++i) {
    index_of[i] = out.boundary.size();
    out.boundary.push_back(images[i]);
    std::vector<Vec2> pts;
    std::size_t j = (i + 1) % n;
    refine_into(f, r.boundary[i], r.boundary[j], images[i], images[j], tolerance, max_depth, pts);
    pts.pop_back();  // the endpoint is pushed as the next vertex
    out.boundary.insert(out.boundary.end(), pts.begin(), pts.end());
  }
  for (int k = 0; k < 4; ++k) out.corners[k] = index_of[r.corners[k]];
  return out;
}

// ---------------------------------------------------------------- fan chart

FanChart::FanChart(const MarkedRectangle& r) {
  validate_rectangle(r);
  const std::size_t n = r.boundary.size();
  const Vec2 square[4] = {{0, 0}, {1, 0}, {1, 1}, {0, 1}};
  source_ = r.boundary;
  target_.assign(n, {});
  for (int k = 0; k < 4; ++k) {
    std::vector<std::size_t> idx;
    for (std::size_t i = r.corners[k];; i = (i + 1) % n) {
      idx.push_back(i);
      if (i == r.corners[(k + 1) % 4]) break;
    }
    double total = 0;
    std::vector<double> acc{0.0};
    for (std::size_t m = 1; m < idx.size(); ++m) {
      total += norm(source_[idx[m]] - source_[idx[m - 1]]);
      acc.push_back(total);
    }
    for (std::size_t m = 0; m + 1 < idx.size(); ++m)
      target_[idx[m]] = square[k] + (acc[m] / total) * (square[(k + 1) % 4] - square[k]);
  }

  double area = r.signed_area();
  double sign = area > 0 ? 1.0 : -1.0;
  auto star_from = [&](Vec2 c) {
    for (std::size_t i = 0; i < n; ++i) {
      Vec2 a = source_[i], b = source_[(i + 1) % n];
      if (sign * cross(b - a, c - a) <= 1e-12 * norm(b - a)) return false;
    }
    return true;
  };
  // Area centroid first, then the vertex average.
  Vec2 centroid{};
  for (std::size_t i = 0; i < n; ++i) {
    Vec2 a = source_[i], b = source_[(i + 1) % n];
    double w = cross(a, b);
    centroid = centroid + (w / (6 * area)) * (a + b);
  }
  Vec2 average{};
  for (const auto& p : source_) average = average + (1.0 / n) * p;
  if (star_from(centroid))
    center_ = centroid;
  else if (star_from(average))
    center_ = average;
  else
    throw Error(ErrorCode::PreconditionFailed, "rectangle is not star-shaped about its centroid");
  // Sources run clockwise for negatively oriented rectangles; order sectors counterclockwise.
  if (sign < 0) {
    std::reverse(source_.begin(), source_.end());
    std::reverse(target_.begin(), target_.end());
    target_sign_ = -1.0;
  }
}

namespace {

// Index i with d in the closed cone spanned by pts[i] - c, pts[i+1] - c, for counterclockwise
// (sign +1) or clockwise (sign -1) sequences.
std::size_t find_sector(const std::vector<Vec2>& pts, Vec2 c, Vec2 d, double sign) {
  std::size_t n = pts.size();
  std::size_t best = 0;
  double best_score = -INFINITY;
  for (std::size_t i = 0; i < n; ++i) {
    Vec2 u = pts[i] - c, v = pts[(i + 1) % n] - c;
    double s1 = sign * cross(u, d) / (norm(u) * norm(d));
    double s2 = sign * cross(d, v) / (norm(v) * norm(d));
    double score = std::min(s1, s2);
    bool ahead = u.x * d.x + u.y * d.y > 0 || v.x * d.x + v.y * d.y > 0;
    if (ahead && score > best_score) {
      best_score = score;
      best = i;
    }
  }
  return best;
}

Vec2 solve2(Vec2 u, Vec2 v, Vec2 d) {
  double det = cross(u, v);
  return {cross(d, v) / det, cross(u, d) / det};
}

}  // namespace

Vec2 FanChart::forward(Vec2 z) const {
  const Vec2 c2{0.5, 0.5};
  Vec2 d = z - center_;
  if (norm(d) < 1e-300) return c2;
  std::size_t i = find_sector(source_, center_, d, 1.0);
  std::size_t j = (i + 1) % source_.size();
  Vec2 ab = solve2(source_[i] - center_, source_[j] - center_, d);
  return c2 + ab.x * (target_[i] - c2) + ab.y * (target_[j] - c2);
}

Vec2 FanChart::inverse(Vec2 u) const {
  const Vec2 c2{0.5, 0.5};
  Vec2 d = u - c2;
  if (norm(d) < 1e-300) return center_;
  std::size_t i = find_sector(target_, c2, d, target_sign_);
  std::size_t j = (i + 1) % target_.size();
  Vec2 ab = solve2(target_[i] - c2, target_[j] - c2, d);
  return center_ + ab.x * (source_[i] - center_) + ab.y * (source_[j] - center_);
}

std::vector<Vec2> FanChart::map_segment(Vec2 a, Vec2 b) const {
  std::vector<double> ts{0.0, 1.0};
  Vec2 e = b - a;
  for (const Vec2& p : source_) {
    Vec2 v = p - center_;
    double det = cross(e, v);
    if (std::fabs(det) < 1e-300) continue;
    // a + t e = c + s v
    Vec2 w = center_ - a;
    double t = cross(w, v) / det;
    double s = cross(w, e) / det;
    if (t > 0 && t < 1 && s > 0) ts.push_back(t);
  }
  std::sort(ts.begin(), ts.end());
  std::vector<Vec2> out;
  for (double t : ts) out.push_back(forward(a + t * e));
  return out;
}

std::vector<Vec2> FanChart::inverse_segment(Vec2 a, Vec2 b) const {
  const Vec2 c2{0.5, 0.5};
  std::vector<double> ts{0.0, 1.0};
  Vec2 e = b - a;
  for (const Vec2& p : target_) {
    Vec2 v = p - c2;
    double det = cross(e, v);
    if (std::fabs(det) < 1e-300) continue;
    Vec2 w = c2 - a;
    double t = cross(w, v) / det;
    double s = cross(w, e) / det;
    if (t > 0 && t < 1 && s > 0) ts.push_back(t);
  }
  std::sort(ts.begin(), ts.end());
  std::vector<Vec2> out;
  for (double t : ts) out.push_back(inverse(a + t * e));
  return out;
}

// ---------------------------------------------------------------- Markov check

namespace {

// Positive outside the two side strips {x <= 0 or x >= 1, 0 <= y <= 1}, negative inside.
double strip_clearance(Vec2 z) {
  return std::max(std::min(z.x, 1 - z.x), std::max(-z.y, z.y - 1));
}

double segment_strip_clearance(Vec2 p, Vec2 q) {
  Vec2 e = q - p;
  std::vector<double> ts{0.0, 1.0};
  auto add = [&](double num, double den) {
    if (std::fabs(den) > 1e-300) {
      double t = num / den;
      if (t > 0 && t < 1) ts.push_back(t);
    }
  };
  add(0.5 - p.x, e.x);
  add(0.5 - p.y, e.y);
  // Kinks where the two terms of the outer max coincide.
  add(-p.y - p.x, e.x + e.y);           // x = -y
  add(p.y - 1 - p.x, e.x - e.y);        // x = y - 1
  add(1 - p.x + p.y, e.x - e.y);        // 1 - x = -y
  add(2 - p.x - p.y, e.x + e.y);        // 1 - x = y - 1
  double best = INFINITY;
  for (double t : ts) best = std::min(best, strip_clearance(p + t * e));
  return best;
}

std::vector<Vec2> chart_polyline(const FanChart& chart, const std::vector<Vec2>& pts) {
  std::vector<Vec2> out;
  for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
    auto seg = chart.map_segment(pts[i], pts[i + 1]);
    if (!out.empty()) seg.erase(seg.begin());
    out.insert(out.end(), seg.begin(), seg.end());
  }
  return out;
}

}  // namespace

MarkovMargins markov_margins(const MarkedRectangle& first, const FanChart& chart) {
  MarkovMargins m;
  auto up = chart_polyline(chart, first.upper());
  auto low = chart_polyline(chart, first.lower());
  double up_min = INFINITY, up_max = -INFINITY, low_min = INFINITY, low_max = -INFINITY;
  for (auto p : up) up_min = std::min(up_min, p.y), up_max = std::max(up_max, p.y);
  for (auto p : low) low_min = std::min(low_min, p.y), low_max = std::max(low_max, p.y);
  m.upper_above = up_min - 1;
  m.lower_below = -low_max;
  m.upper_below = -up_max;
  m.lower_above = low_min - 1;
  m.strips = INFINITY;
  std::size_t n = first.boundary.size();
  for (std::size_t i = 0; i < n; ++i) {
    auto seg = chart.map_segment(first.boundary[i], first.boundary[(i + 1) % n]);
    for (std::size_t k = 0; k + 1 < seg.size(); ++k)
      m.strips = std::min(m.strips, segment_strip_clearance(seg[k], seg[k + 1]));
  }
  return m;
}

std::optional<MarkovCertificate> markovian_check(const MarkedRectangle& first,
                                                 const MarkedRectangle& second) {
  validate_rectangle(first);
  FanChart chart(second);
  MarkovMargins m = markov_margins(first, chart);
  double plus = std::min({m.upper_above, m.lower_below, m.strips});
  double minus = std::min({m.upper_below, m.lower_above, m.strips});
  double best = std::max(plus, minus);
  if (best > kEpsGeom) {
    MarkovCertificate c;
    c.first = first;
    c.second = second;
    c.orientation = plus >= minus ? 1 : -1;
    c.margin = best;
    return c;
  }
  if (best < -kEpsGeom) return std::nullopt;
  throw Error(ErrorCode::AmbiguousPosition, "rectangles are tangent within the geometric tolerance");
}

namespace {

bool same_rectangle(const MarkedRectangle& a, const MarkedRectangle& b) {
  if (a.boundary.size() != b.boundary.size() || a.corners != b.corners) return false;
  for (std::size_t i = 0; i < a.boundary.size(); ++i)
    if (norm(a.boundary[i] - b.boundary[i]) > 1e-12) return false;
  return true;
}

}  // namespace

MarkedRectangle clip_to_slab(const MarkovCertificate& c) {
  FanChart chart(c.second);
  const auto& src = c.first.boundary;
  std::vector<Vec2> poly;
  for (std::size_t i = 0; i < src.size(); ++i) {
    auto seg = chart.map_segment(src[i], src[(i + 1) % src.size()]);
    poly.insert(poly.end(), seg.begin(), seg.end() - 1);
  }
  // Sutherland-Hodgman against y >= 0, then y <= 1, snapping the cut points onto the lines.
  auto clip = [](const std::vector<Vec2>& in, double level, double dir) {
    std::vector<Vec2> out;
    auto inside = [&](Vec2 p) { return dir * (p.y - level) >= 0; };
    for (std::size_t i = 0; i < in.size(); ++i) {
      Vec2 a = in[i], b = in[(i + 1) % in.size()];
      bool ia = inside(a), ib = inside(b);
      if (ia) out.push_back(a);
      if (ia != ib) {
        double t = (level - a.y) / (b.y - a.y);
        out.push_back({a.x + t * (b.x - a.x), level});
      }
    }
    return out;
  };
  poly = clip(clip(poly, 0.0, 1.0), 1.0, -1.0);
  std::vector<Vec2> q;
  for (const Vec2& p : poly)
    if (q.empty() || norm(p - q.back()) > 1e-14) q.push_back(p);
  while (q.size() > 1 && norm(q.front() - q.back()) <= 1e-14) q.pop_back();
  const std::size_t n = q.size();
  if (n < 4) throw Error(ErrorCode::ResolutionTooCoarse, "clipped crossing is degenerate");

  // The clipped piece has exactly one run of vertices on each line.
  auto on = [&](std::size_t i, double level) { return q[i].y == level; };
  auto run = [&](double level) {
    std::optional<std::size_t> start;
    int runs = 0;
    for (std::size_t i = 0; i < n; ++i)
      if (on(i, level) && on((i + 1) % n, level) && !(on((i + n - 1) % n, level))) {
        start = i;
        ++runs;
      }
    if (runs != 1) throw Error(ErrorCode::ResolutionTooCoarse, "clipped crossing has several components");
    std::size_t end = *start;
    while (on((end + 1) % n, level)) end = (end + 1) % n;
    return std::pair<std::size_t, std::size_t>{*start, end};
  };
  auto [l0, l1] = run(0.0);
  auto [u0, u1] = run(1.0);

  MarkedRectangle out;
  std::array<std::size_t, 4> chart_corners{l0, l1, u0, u1};
  // Rotate so that boundary index 0 is the first lower corner; merge pulled-back points that coincide.
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t i = (l0 + k) % n;
    auto seg = chart.inverse_segment(q[i], q[(i + 1) % n]);
    seg.pop_back();
    for (std::size_t m = 0; m < seg.size(); ++m) {
      bool fresh = out.boundary.empty() || norm(seg[m] - out.boundary.back()) > 1e-12;
      if (fresh) out.boundary.push_back(seg[m]);
      if (m == 0)
        for (int c = 0; c < 4; ++c)
          if (chart_corners[static_cast<std::size_t>(c)] == i) out.corners[static_cast<std::size_t>(c)] = out.boundary.size() - 1;
    }
  }
  validate_rectangle(out);
  return out;
}

MarkovCertificate chain(const MarkovCertificate& c12, const MarkovCertificate& c23, const PlaneMap& g,
                        double tolerance, bool clip) {
  if (!c23.source || !same_rectangle(c12.second, *c23.source))
    throw Error(ErrorCode::PreconditionFailed, "certificates do not share the middle rectangle");
  MarkedRectangle piece = clip ? clip_to_slab(c12) : c12.first;
  MarkedRectangle image = map_rectangle(piece, g, tolerance);
  std::optional<MarkovCertificate> c;
  try {
    c = markovian_check(image, c23.second);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::AmbiguousPosition && e.code() != ErrorCode::PreconditionFailed) throw;
  }
  if (!c) throw Error(ErrorCode::ResolutionTooCoarse, "chained image fails the Markov check");
  c->source = c12.source;
  return *c;
}

// ---------------------------------------------------------------- fixed points

int displacement_winding(const PlaneMap& f, const std::vector<Vec2>& curve) {
  double total = 0;
  std::size_t n = curve.size();
  auto angle = [&](Vec2 z) {
    Vec2 d = f(z) - z;
    return std::atan2(d.y, d.x);
  };
  double prev = angle(curve[0]);
  for (std::size_t i = 1; i <= n; ++i) {
    double cur = angle(curve[i % n]);
    double d = cur - prev;
    while (d > M_PI) d -= 2 * M_PI;
    while (d < -M_PI) d += 2 * M_PI;
    total += d;
    prev = cur;
  }
  return static_cast<int>(std::lround(total / (2 * M_PI)));
}

namespace {

struct CellSearch {
  const PlaneMap& f;
  const FanChart& chart;
  const FixedPointOptions& opt;
  std::optional<Vec2> hit;

  double residual(Vec2 z) const { return norm(f(z) - z); }

  // Winding of the displacement around the chart cell, sampling adaptively in chart space.
  std::optional<int> winding(Vec2 lo, Vec2 hi) {
    const Vec2 corners[4] = {lo, {hi.x, lo.y}, hi, {lo.x, hi.y}};
    double total = 0;
    for (int k = 0; k < 4; ++k) {
      Vec2 a = corners[k], b = corners[(k + 1) % 4];
      std::vector<Vec2> pts;
      for (int s = 0; s <= opt.boundary_samples; ++s) pts.push_back(a + (double(s) / opt.boundary_samples) * (b - a));
      for (std::size_t s = 0; s + 1 < pts.size(); ++s) {
        auto ang = [&](Vec2 u, double* r) {
          Vec2 z = chart.inverse(u);
          Vec2 d = f(z) - z;
          *r = norm(d);
          if (*r < opt.tolerance) hit = z;
          return std::atan2(d.y, d.x);
        };
        double r0, r1;
        double a0 = ang(pts[s], &r0), a1 = ang(pts[s + 1], &r1);
        if (hit) return std::nullopt;
        double d = a1 - a0;
        while (d > M_PI) d -= 2 * M_PI;
        while (d < -M_PI) d += 2 * M_PI;
        if (std::fabs(d) > M_PI / 3) {
          // Refine this piece before trusting the increment.
          int sub = 64;
          double acc = 0, prev = a0;
          for (int m = 1; m <= sub; ++m) {
            double rr;
            double cur = ang(pts[s] + (double(m) / sub) * (pts[s + 1] - pts[s]), &rr);
            if (hit) return std::nullopt;
            double dd = cur - prev;
            while (dd > M_PI) dd -= 2 * M_PI;
            while (dd < -M_PI) dd += 2 * M_PI;
            if (std::fabs(dd) > M_PI / 2) return std::nullopt;  // unresolved
            acc += dd;
            prev = cur;
          }
          d = acc;
        }
        total += d;
      }
    }
    return static_cast<int>(std::lround(total / (2 * M_PI)));
  }
};

std::optional<Vec2> newton(const PlaneMap& f, Vec2 z, double tol) {
  for (int it = 0; it < 60; ++it) {
    Vec2 r = f(z) - z;
    if (norm(r) < tol) return z;
    double h = 1e-7 * std::max(1.0, norm(z));
    Vec2 fx = (1.0 / (2 * h)) * (f({z.x + h, z.y}) - f({z.x - h, z.y}));
    Vec2 fy = (1.0 / (2 * h)) * (f({z.x, z.y + h}) - f({z.x, z.y - h}));
    Vec2 jx{fx.x - 1, fx.y}, jy{fy.x, fy.y - 1};
    double det = cross(jx, jy);
    if (std::fabs(det) < 1e-300) return std::nullopt;
    Vec2 step = solve2(jx, jy, r);
    z = z - step;
  }
  return norm(f(z) - z) < tol ? std::optional<Vec2>(z) : std::nullopt;
}

}  // namespace

FixedPointResult fixed_point_search(const MarkedRectangle& r, const PlaneMap& f,
                                    const FixedPointOptions& opt) {
  FixedPointResult out;
  if (opt.require_markov) {
    MarkedRectangle image = map_rectangle(r, f);
    if (!markovian_check(image, r))
      throw Error(ErrorCode::PreconditionFailed, "f(R) n R is not Markovian");
  }
  FanChart chart(r);
  CellSearch cs{f, chart, opt, std::nullopt};
  Vec2 lo{0, 0}, hi{1, 1};
  auto w = cs.winding(lo, hi);
  if (cs.hit) {
    out.point = cs.hit;
    out.residual = cs.residual(*cs.hit);
    out.diagnostics = "boundary sample";
    return out;
  }
  if (!w || *w == 0) {
    out.diagnostics = "displacement has zero or unresolved index on the rectangle";
    return out;
  }
  out.winding = *w;
  for (int depth = 0; depth < opt.max_depth; ++depth) {
    out.depth = depth;
    Vec2 mid = 0.5 * (lo + hi);
    auto z = newton(f, chart.inverse(mid), opt.tolerance * 1e-3);
    if (z && chart.forward(*z).x >= -1e-9 && chart.forward(*z).x <= 1 + 1e-9 &&
        chart.forward(*z).y >= -1e-9 && chart.forward(*z).y <= 1 + 1e-9) {
      out.point = z;
      out.residual = cs.residual(*z);
      out.diagnostics = "newton from cell center";
      return out;
    }
    bool found = false;
    const Vec2 quads[4][2] = {{lo, mid}, {{mid.x, lo.y}, {hi.x, mid.y}}, {mid, hi}, {{lo.x, mid.y}, {mid.x, hi.y}}};
    for (const auto& q : quads) {
      auto wq = cs.winding(q[0], q[1]);
      if (cs.hit) {
        out.point = cs.hit;
        out.residual = cs.residual(*cs.hit);
        out.diagnostics = "cell boundary sample";
        return out;
      }
      if (wq && *wq != 0) {
        lo = q[0];
        hi = q[1];
        found = true;
        break;
      }
    }
    if (!found) {
      out.diagnostics = "lost the index during subdivision";
      return out;
    }
  }
  Vec2 z = chart.inverse(0.5 * (lo + hi));
  out.residual = cs.residual(z);
  if (out.residual < opt.tolerance) out.point = z;
  out.diagnostics = "subdivision depth exhausted";
  return out;
}

// ---------------------------------------------------------------- horseshoes

HorseshoeModel planar_model(PlaneMap f, std::vector<Vec2> translations, std::vector<std::string> labels) {
  HorseshoeModel m;
  m.f = std::move(f);
  for (Vec2 t : translations) {
    m.decks.push_back([t](Vec2 z) { return z + t; });
    m.deck_inverses.push_back([t](Vec2 z) { return z - t; });
  }
  m.labels = std::move(labels);
  m.distance = [](Vec2 a, Vec2 b) { return norm(a - b); };
  auto names = m.labels;
  m.product_label = [names](const std::vector<int>& w) {
    std::string s;
    for (int i : w) s += names[static_cast<std::size_t>(i)];
    return s;
  };
  return m;
}

HorseshoeModel lifted_model(SystemPtr s, const std::vector<Word>& decks) {
  HorseshoeModel m;
  const SurfaceGroup& g = s->group();
  m.f = [s](Vec2 z) {
    DiskPoint p = s->step_point({z.x, z.y});
    return Vec2{p.x, p.y};
  };
  for (const Word& w : decks) {
    MobiusD u = g.evaluate(w), ui = u.inverse();
    m.decks.push_back([u](Vec2 z) {
      Cxd r = u.apply(Cxd(z.x, z.y));
      return Vec2{r.re, r.im};
    });
    m.deck_inverses.push_back([ui](Vec2 z) {
      Cxd r = ui.apply(Cxd(z.x, z.y));
      return Vec2{r.re, r.im};
    });
    m.labels.push_back(to_string(w));
  }
  m.distance = [](Vec2 a, Vec2 b) { return hyp_distance({a.x, a.y}, {b.x, b.y}); };
  m.product_label = [decks](const std::vector<int>& w) {
    Word acc;
    for (int i : w) acc = concat(acc, decks[static_cast<std::size_t>(i)]);
    return to_string(acc);
  };
  return m;
}

namespace {

PlaneMap leg_map(const HorseshoeModel& m, int i) {
  PlaneMap f = m.f, inv = m.deck_inverses[static_cast<std::size_t>(i)];
  return [f, inv](Vec2 z) { return inv(f(z)); };
}

}  // namespace

HorseshoeCertificate certify_horseshoe(const HorseshoeModel& m, const MarkedRectangle& r) {
  HorseshoeCertificate cert;
  cert.rect = r;
  cert.decks = m.labels;
  for (std::size_t a = 0; a < m.labels.size(); ++a)
    for (std::size_t b = a + 1; b < m.labels.size(); ++b)
      if (m.labels[a] == m.labels[b]) throw Error(ErrorCode::PreconditionFailed, "deck words must be distinct");
  for (std::size_t i = 0; i < m.decks.size(); ++i) {
    // U_i R n f(R) is Markovian exactly when R n U_i^-1 f(R) is.
    MarkedRectangle image = map_rectangle(r, leg_map(m, static_cast<int>(i)));
    auto c = markovian_check(image, r);
    if (!c) throw Error(ErrorCode::PreconditionFailed, "deck " + m.labels[i] + " crossing is not Markovian");
    c->source = r;
    cert.crossings.push_back(*c);
  }
  return cert;
}

double diameter(const MarkedRectangle& r, const std::function<double(Vec2, Vec2)>& dist) {
  double d = 0;
  for (std::size_t i = 0; i < r.boundary.size(); ++i)
    for (std::size_t j = i + 1; j < r.boundary.size(); ++j) d = std::max(d, dist(r.boundary[i], r.boundary[j]));
  return d;
}

namespace {

Vec2 apply_product(const HorseshoeModel& m, const std::vector<int>& w, std::size_t count, Vec2 z) {
  // U_{w1} ... U_{w_count} z
  for (std::size_t k = count; k-- > 0;) z = m.decks[static_cast<std::size_t>(w[k])](z);
  return z;
}

bool inside_chart(const FanChart& chart, Vec2 z) {
  Vec2 u = chart.forward(z);
  return u.x >= -1e-9 && u.x <= 1 + 1e-9 && u.y >= -1e-9 && u.y <= 1 + 1e-9;
}

// Points z_0..z_{q-1} of R with leg_{w_{i+1}}(z_i) = z_{i+1} cyclically, by Newton on all of them at once.
struct Shooting {
  const std::vector<PlaneMap>& legs;
  static int eval(const gsl_vector* x, void* params, gsl_vector* f) {
    auto* self = static_cast<Shooting*>(params);
    std::size_t q = self->legs.size();
    for (std::size_t i = 0; i < q; ++i) {
      Vec2 z{gsl_vector_get(x, 2 * i), gsl_vector_get(x, 2 * i + 1)};
      std::size_t j = (i + 1) % q;
      Vec2 next{gsl_vector_get(x, 2 * j), gsl_vector_get(x, 2 * j + 1)};
      Vec2 r = self->legs[i](z) - next;
      gsl_vector_set(f, 2 * i, r.x);
      gsl_vector_set(f, 2 * i + 1, r.y);
    }
    return GSL_SUCCESS;
  }
};

std::optional<std::vector<Vec2>> shoot(const std::vector<PlaneMap>& legs, const std::vector<Vec2>& start,
                                       double tol) {
  const std::size_t dim = 2 * legs.size();
  Shooting sh{legs};
  gsl_multiroot_function fn{&Shooting::eval, dim, &sh};
  gsl_vector* x = gsl_vector_alloc(dim);
  for (std::size_t i = 0; i < legs.size(); ++i) {
    gsl_vector_set(x, 2 * i, start[i].x);
    gsl_vector_set(x, 2 * i + 1, start[i].y);
  }
  gsl_multiroot_fsolver* solver = gsl_multiroot_fsolver_alloc(gsl_multiroot_fsolver_hybrids, dim);
  gsl_multiroot_fsolver_set(solver, &fn, x);
  int status = GSL_CONTINUE;
  for (int it = 0; it < 200 && status == GSL_CONTINUE; ++it) {
    if (gsl_multiroot_fsolver_iterate(solver)) break;
    status = gsl_multiroot_test_residual(solver->f, tol);
  }
  std::optional<std::vector<Vec2>> out;
  if (status == GSL_SUCCESS) {
    std::vector<Vec2> pts;
    for (std::size_t i = 0; i < legs.size(); ++i)
      pts.push_back({gsl_vector_get(solver->x, 2 * i), gsl_vector_get(solver->x, 2 * i + 1)});
    out = pts;
  }
  gsl_multiroot_fsolver_free(solver);
  gsl_vector_free(x);
  return out;
}

PeriodicItinerary solve_itinerary(const HorseshoeModel& m, const HorseshoeCertificate& cert,
                                  const std::vector<PlaneMap>& leg_maps, const std::vector<Vec2>& leg_fixed,
                                  const std::vector<int>& word, double tol) {
  PeriodicItinerary it;
  it.word = word;
  it.deck_word = m.product_label(word);
  std::vector<PlaneMap> legs;
  for (int i : word) legs.push_back(leg_maps[static_cast<std::size_t>(i)]);
  try {
    MarkovCertificate c = cert.crossings[static_cast<std::size_t>(word[0])];
    for (std::size_t j = 1; j < word.size(); ++j)
      c = chain(c, cert.crossings[static_cast<std::size_t>(word[j])], legs[j], 1e-9, true);
    it.chained = true;
  } catch (const Error&) {
    it.chained = false;
  }
  FanChart chart(cert.rect);
  auto accept = [&](const std::vector<Vec2>& orbit) {
    for (const Vec2& z : orbit)
      if (!inside_chart(chart, z)) return false;
    return true;
  };
  std::optional<std::vector<Vec2>> orbit;
  // The composed map first; its fixed point may leave R in between, so check the whole orbit.
  {
    PlaneMap G = [&legs](Vec2 z) {
      for (const auto& g : legs) z = g(z);
      return z;
    };
    FixedPointOptions fo;
    fo.require_markov = false;
    FixedPointResult fp = fixed_point_search(cert.rect, G, fo);
    if (fp.point) {
      std::vector<Vec2> pts{*fp.point};
      for (std::size_t j = 0; j + 1 < legs.size(); ++j) pts.push_back(legs[j](pts.back()));
      if (accept(pts)) orbit = pts;
    }
  }
  // Otherwise shoot from the fixed points of the individual legs, then from chart grid points.
  if (!orbit) {
    std::vector<std::vector<Vec2>> starts;
    std::vector<Vec2> s0;
    for (int i : word) s0.push_back(leg_fixed[static_cast<std::size_t>(i)]);
    starts.push_back(s0);
    for (int gx = 1; gx < 4; ++gx)
      for (int gy = 1; gy < 4; ++gy) starts.push_back(std::vector<Vec2>(word.size(), chart.inverse({gx / 4.0, gy / 4.0})));
    for (const auto& st : starts) {
      auto pts = shoot(legs, st, tol * 1e-3);
      if (pts && accept(*pts)) {
        orbit = pts;
        break;
      }
    }
  }
  if (!orbit) return it;
  Vec2 z = orbit->front();
  Vec2 fz = z;
  for (std::size_t j = 0; j < word.size(); ++j) fz = m.f(fz);
  it.residual = m.distance(fz, apply_product(m, word, word.size(), z));
  if (it.residual < tol) it.point = z;
  return it;
}

}  // namespace

HorseshoeAudit horseshoe_audit(const HorseshoeModel& m, const HorseshoeCertificate& cert,
                               const std::vector<int>& word, const HorseshoeAuditOptions& opt) {
  HorseshoeAudit out;
  int k = static_cast<int>(m.decks.size());
  if (k < 1) throw Error(ErrorCode::PreconditionFailed, "horseshoe needs at least one deck");
  if (cert.crossings.size() != m.decks.size())
    throw Error(ErrorCode::PreconditionFailed, "certificate and model disagree on the decks");
  for (int c : word)
    if (c < 0 || c >= k) throw Error(ErrorCode::PreconditionFailed, "shadow word uses an unknown deck index");

  std::vector<PlaneMap> leg_maps;
  std::vector<Vec2> leg_fixed;
  for (int i = 0; i < k; ++i) {
    leg_maps.push_back(leg_map(m, i));
    FixedPointResult fp = fixed_point_search(cert.rect, leg_maps.back());
    if (!fp.point) {
      out.failures.push_back("deck " + m.labels[static_cast<std::size_t>(i)] + ": no fixed point for its leg");
      leg_fixed.push_back(FanChart(cert.rect).center());
    } else {
      leg_fixed.push_back(*fp.point);
    }
  }

  // (i) every periodic word up to the maximal period
  for (int q = 1; q <= opt.max_period; ++q) {
    std::vector<int> w(static_cast<std::size_t>(q), 0);
    for (;;) {
      PeriodicItinerary it = solve_itinerary(m, cert, leg_maps, leg_fixed, w, opt.residual_tolerance);
      if (!it.point || !it.chained) {
        std::string name;
        for (int c : w) name += std::to_string(c + 1);
        out.failures.push_back("periodic word " + name + (it.chained ? ": no fixed point" : ": chain failed"));
      }
      out.periodic.push_back(std::move(it));
      int pos = q - 1;
      while (pos >= 0 && w[static_cast<std::size_t>(pos)] == k - 1) w[static_cast<std::size_t>(pos--)] = 0;
      if (pos < 0) break;
      ++w[static_cast<std::size_t>(pos)];
    }
  }

  // (ii) shadowing along the periodic extension of the given word
  out.diameter = diameter(cert.rect, m.distance);
  out.shadow_word = word;
  if (!word.empty()) {
    PeriodicItinerary it = solve_itinerary(m, cert, leg_maps, leg_fixed, word, opt.residual_tolerance);
    if (!it.point) {
      out.failures.push_back("shadowing word has no periodic point");
    } else {
      Vec2 z = *it.point;
      std::size_t q = word.size();
      std::vector<Vec2> partial{z};  // f^r(z), r < q
      for (std::size_t r = 1; r < q; ++r) partial.push_back(m.f(partial.back()));
      std::vector<int> extended;
      for (int i = 0; i <= opt.shadow_steps; ++i) extended.push_back(word[static_cast<std::size_t>(i) % q]);
      for (int i = 0; i <= opt.shadow_steps; ++i) {
        std::size_t ui = static_cast<std::size_t>(i);
        // f^i(z) = P^(i div q) f^(i mod q)(z) with P = U_{w1}...U_{wq}
        Vec2 x = partial[ui % q];
        for (std::size_t j = 0; j < ui / q; ++j) x = apply_product(m, word, q, x);
        Vec2 target = apply_product(m, extended, ui, z);
        out.shadow_max = std::max(out.shadow_max, m.distance(x, target));
      }
      out.shadow_ok = out.shadow_max <= out.diameter + 1e-9;
      if (!out.shadow_ok) out.failures.push_back("shadowing bound exceeded");
    }
  }

  // (iii) symbolic entropy
  out.separated_count = shift_count(k, opt.separated_n).str();
  out.entropy_estimate = shift_growth_rate(k, opt.separated_n);
  out.entropy_bound = shift_entropy(k);
  if (out.entropy_estimate > out.entropy_bound + 1e-12) out.failures.push_back("entropy estimate exceeds log k");
  return out;
}

// ---------------------------------------------------------------- symbolic shift

boost::multiprecision::cpp_int shift_count(int k, int n) {
  if (k < 1 || n < 0) throw Error(ErrorCode::PreconditionFailed, "shift_count needs k >= 1 and n >= 0");
  return boost::multiprecision::pow(boost::multiprecision::cpp_int(k), static_cast<unsigned>(n));
}

double shift_entropy(int k) {
  if (k < 1) throw Error(ErrorCode::PreconditionFailed, "alphabet must be nonempty");
  return std::log(static_cast<double>(k));
}

double shift_growth_rate(int k, int n) {
  if (n <= 0) throw Error(ErrorCode::PreconditionFailed, "n must be positive");
  boost::multiprecision::cpp_int c = shift_count(k, n);
  if (c <= 1) return 0.0;
  // log c = log(mantissa) + shift * log 2, keeping 53 significant bits.
  std::size_t bits = boost::multiprecision::msb(c) + 1;
  std::size_t shift = bits > 60 ? bits - 60 : 0;
  double mant = static_cast<double>(c >> shift);
  return (std::log(mant) + static_cast<double>(shift) * std::log(2.0)) / n;
}

HorseshoeModel linear_two_leg_model() {
  // y + lift(y) with lift 2-periodic: 4y - 3/2 on [0,1], falling back linearly on [1,2].
  auto f = [](Vec2 z) {
    double period = std::floor(z.y / 2) * 2;
    double r = z.y - period;
    double lift = r <= 1 ? 4 * r - 1.5 : 2.5 - 4 * (r - 1);
    return Vec2{z.x / 3 + 1.0 / 3, z.y + lift};
  };
  return planar_model(f, {{0, 0}, {0, 2}}, {"U1", "U2"});
}

}  // namespace rotlab
