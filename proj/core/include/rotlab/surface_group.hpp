#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "rotlab/hyperbolic.hpp"

namespace rotlab {

// Letters are numbered a1, b1, a1^-1, b1^-1, a2, ... ; letter ^ 2 is the inverse.
inline int letter_inverse(int letter) { return letter ^ 2; }

struct Word {
  std::vector<int> letters;

  bool empty() const { return letters.empty(); }
  std::size_t size() const { return letters.size(); }
  bool operator==(const Word& o) const { return letters == o.letters; }
  bool operator!=(const Word& o) const { return letters != o.letters; }
  bool operator<(const Word& o) const;  // shortlex
};

Word parse_word(const std::string& text, int genus);
std::string to_string(const Word& w);
Word reduce(const Word& w);
Word concat(const Word& x, const Word& y);
Word inverse(const Word& w);
Word power(const Word& w, int n);
Word conjugate(const Word& u, const Word& w);  // u w u^-1
// Signed generator counts (a1, b1, a2, b2, ...).
std::vector<int> abelianize(const Word& w, int genus);

struct FundamentalDomain {
  std::vector<DiskPoint> vertices;  // counterclockwise
  std::vector<int> pairing;         // side index -> paired side index (may be empty)
  DiskPoint basepoint{};

  bool contains(DiskPoint z) const;
  double distance(DiskPoint z) const;  // 0 inside
  double diameter() const;
};

struct LocatedPoint {
  Word word;
  DiskPoint rep;
};

class SurfaceGroup {
 public:
  static SurfaceGroup build(int genus);

  int genus() const { return genus_; }
  int num_letters() const { return 4 * genus_; }
  const MobiusD& letter(int l) const { return gens_[l]; }
  int side_of_letter(int l) const { return side_of_letter_[l]; }

  MobiusD evaluate(const Word& w) const;
  // Uses the current MpReal precision.
  MobiusMp evaluate_mp(const Word& w) const;
  std::vector<MobiusMp> letters_mp() const;

  Word relator() const;
  double relator_residual() const;
  double angle_sum() const;
  double inradius() const { return inradius_; }
  double circumradius() const { return circumradius_; }
  double min_translation_length() const { return min_length_; }
  double max_letter_displacement() const { return 2.0 * inradius_; }
  const FundamentalDomain& domain() const { return domain_; }

 private:
  int genus_ = 0;
  std::vector<MobiusD> gens_;
  std::vector<int> side_of_letter_;
  double inradius_ = 0, circumradius_ = 0, min_length_ = 0;
  FundamentalDomain domain_;
};

LocatedPoint locate(const SurfaceGroup& g, DiskPoint z);
DiskPoint reconstruct(const SurfaceGroup& g, const LocatedPoint& p);
// Re-anchors a point given relative to a located frame: returns (word * locate(z).word, rep).
LocatedPoint relocate(const SurfaceGroup& g, const Word& prefix, DiskPoint z);

struct AxisInfo {
  Geodesic axis;
  double length = 0.0;
};
AxisInfo axis_of(const SurfaceGroup& g, const Word& w);

// Boundary endpoints of axis(w) mapped by `conj`, evaluated in the current MpReal precision.
std::pair<CxMp, CxMp> axis_endpoints_mp(const SurfaceGroup& g, const Word& w,
                                        const Word& conj = {});

constexpr std::size_t kWordBudget = 1000000;

std::size_t count_reduced_words(int num_letters, int radius);
// All freely reduced words of length <= radius in shortlex order.
std::vector<Word> reduced_words(int num_letters, int radius, std::size_t budget = kWordBudget);

struct BallElement {
  Word word;
  MobiusD m;
  double dist = 0.0;  // d(0, m.0)
};
// Group elements moving the origin at most `rho`, found by walking the tiling.
std::vector<BallElement> ball_by_distance(const SurfaceGroup& g, double rho);

struct SvarcMilnorResult {
  double c_hat = 1.0;
  Word witness;
  std::size_t words = 0;
};
SvarcMilnorResult svarc_milnor_probe(const SurfaceGroup& g, int radius);

struct QuasiConvexityResult {
  double r_hat = 0.0;
  DiskPoint p{}, q{}, worst{};
  int samples = 0;
};
QuasiConvexityResult quasi_convexity_probe(const FundamentalDomain& d, int samples,
                                           std::uint64_t seed = 1);

// Domain with a sliver near side `side` moved across to the paired side.
FundamentalDomain deformed_domain(const SurfaceGroup& g, int side, double depth);

}  // namespace rotlab
