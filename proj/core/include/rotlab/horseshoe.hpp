#pragma once

#include <array>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "rotlab/dynamics.hpp"

namespace rotlab {

struct Vec2 {
  double x = 0.0, y = 0.0;
  friend Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
  friend Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
  friend Vec2 operator*(double s, Vec2 a) { return {s * a.x, s * a.y}; }
};
double cross(Vec2 a, Vec2 b);
double norm(Vec2 a);

using PlaneMap = std::function<Vec2(Vec2)>;

constexpr double kEpsGeom = 1e-7;

// Closed polygon with four marked corners c0..c3 in boundary order:
// c0 -> c1 is the lower side, c1 -> c2 the right side, c2 -> c3 the upper side, c3 -> c0 the left side.
struct MarkedRectangle {
  std::vector<Vec2> boundary;
  std::array<std::size_t, 4> corners{};

  static MarkedRectangle axis_box(double x0, double y0, double x1, double y1);
  // Side k as a polyline from corner k to corner k+1.
  std::vector<Vec2> side(int k) const;
  std::vector<Vec2> lower() const { return side(0); }
  std::vector<Vec2> upper() const { return side(2); }
  double signed_area() const;
};

// Throws PreconditionFailed when the boundary self-intersects or the corners are out of order.
void validate_rectangle(const MarkedRectangle& r);
bool is_simple_polygon(const std::vector<Vec2>& poly);
// Image of a rectangle, refining edges until the image is resolved to `tolerance`.
MarkedRectangle map_rectangle(const MarkedRectangle& r, const PlaneMap& f, double tolerance = 1e-9,
                              int max_depth = 24);

// Piecewise-linear fan chart sending a star-shaped rectangle onto [0,1]^2, extended radially.
class FanChart {
 public:
  explicit FanChart(const MarkedRectangle& r);
  Vec2 forward(Vec2 z) const;
  Vec2 inverse(Vec2 u) const;
  // Image of a segment, split at the sector rays so that it is exact.
  std::vector<Vec2> map_segment(Vec2 a, Vec2 b) const;
  // Preimage of a chart-space segment, split at the sector rays.
  std::vector<Vec2> inverse_segment(Vec2 a, Vec2 b) const;
  Vec2 center() const { return center_; }

 private:
  Vec2 center_;
  std::vector<Vec2> source_;  // boundary vertices of the rectangle, counterclockwise
  std::vector<Vec2> target_;  // their images on the square boundary
  double target_sign_ = 1.0;  // -1 when the chart reverses orientation
};

struct MarkovCertificate {
  MarkedRectangle first, second;  // first crosses second
  std::optional<MarkedRectangle> source;  // rectangle whose image is `first`, when known
  int orientation = 0;  // +1: upper side of first maps above the square; -1: below
  double margin = 0.0;  // smallest clearance among the three conditions
};

struct MarkovMargins {
  double upper_above = 0.0, lower_below = 0.0;  // orientation +1
  double upper_below = 0.0, lower_above = 0.0;  // orientation -1
  double strips = 0.0;                          // clearance of the side strips
};
MarkovMargins markov_margins(const MarkedRectangle& first, const FanChart& chart);

// Throws AmbiguousPosition when a condition holds or fails only within kEpsGeom.
std::optional<MarkovCertificate> markovian_check(const MarkedRectangle& first,
                                                 const MarkedRectangle& second);

// From certificates for F(R1) n R2 and G(R2) n R3, where `g` is G, a certificate for G(F(R1)) n R3.
// With `clip`, only the piece of F(R1) inside the horizontal slab of R2 is carried forward; this is
// the nested set that an itinerary visits, and stays valid for maps that fold outside R2.
MarkovCertificate chain(const MarkovCertificate& c12, const MarkovCertificate& c23, const PlaneMap& g,
                        double tolerance = 1e-9, bool clip = false);
// Sub-rectangle of c.first whose chart image lies in the slab 0 <= y <= 1 of c.second.
MarkedRectangle clip_to_slab(const MarkovCertificate& c);

struct FixedPointOptions {
  bool require_markov = true;
  double tolerance = 1e-6;
  int max_depth = 30;
  int boundary_samples = 64;
};
struct FixedPointResult {
  std::optional<Vec2> point;
  double residual = INFINITY;
  int depth = 0;
  int winding = 0;
  std::string diagnostics;
};
// Winding number of f(z) - z along a closed sampled curve.
int displacement_winding(const PlaneMap& f, const std::vector<Vec2>& curve);
FixedPointResult fixed_point_search(const MarkedRectangle& r, const PlaneMap& f,
                                    const FixedPointOptions& opt = {});

// Map, deck transformations and metric for a horseshoe audit.
struct HorseshoeModel {
  PlaneMap f;
  std::vector<PlaneMap> decks, deck_inverses;
  std::vector<std::string> labels;
  std::function<double(Vec2, Vec2)> distance;
  // Reduced label of a product of decks, leftmost first.
  std::function<std::string(const std::vector<int>&)> product_label;
};
HorseshoeModel planar_model(PlaneMap f, std::vector<Vec2> translations, std::vector<std::string> labels);
// Disk-chart model of a lifted system with deck words.
HorseshoeModel lifted_model(SystemPtr s, const std::vector<Word>& decks);

struct HorseshoeCertificate {
  MarkedRectangle rect;
  std::vector<std::string> decks;
  std::vector<MarkovCertificate> crossings;  // U_i R against f(R)
};
// Checks U_i R n f(R) for every deck; throws PreconditionFailed if one fails.
HorseshoeCertificate certify_horseshoe(const HorseshoeModel& m, const MarkedRectangle& r);

struct PeriodicItinerary {
  std::vector<int> word;  // 0-based deck indices
  std::string deck_word;  // U_{w1} ... U_{wq}
  std::optional<Vec2> point;
  double residual = INFINITY;
  bool chained = false;
};
struct HorseshoeAuditOptions {
  int max_period = 6;
  int shadow_steps = 100;
  int separated_n = 16;
  double residual_tolerance = 1e-5;
};
struct HorseshoeAudit {
  std::vector<PeriodicItinerary> periodic;
  std::vector<int> shadow_word;
  double shadow_max = 0.0;
  double diameter = 0.0;
  bool shadow_ok = false;
  std::string separated_count;  // decimal
  double entropy_estimate = 0.0;
  double entropy_bound = 0.0;
  std::vector<std::string> failures;
  bool passed() const { return failures.empty(); }
};
HorseshoeAudit horseshoe_audit(const HorseshoeModel& m, const HorseshoeCertificate& cert,
                               const std::vector<int>& word, const HorseshoeAuditOptions& opt = {});

double diameter(const MarkedRectangle& r, const std::function<double(Vec2, Vec2)>& dist);

boost::multiprecision::cpp_int shift_count(int k, int n);
double shift_entropy(int k);
// log(shift_count(k, n)) / n.
double shift_growth_rate(int k, int n);

// f(x, y) = (x/3 + 1/3, 5y - 3/2) on the unit square, extended to commute with the decks id and (0, 2).
HorseshoeModel linear_two_leg_model();

}  // namespace rotlab
