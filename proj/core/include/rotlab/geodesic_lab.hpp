#pragma once

#include <optional>
#include <string>
#include <vector>

#include "rotlab/surface_group.hpp"

namespace rotlab {

struct Crossing {
  DiskPoint point;
  int orientation = 0;  // +1 CrossPositive, -1 CrossNegative
};

// Throws AmbiguousCrossing when the geodesics share an endpoint.
std::optional<Crossing> geodesics_cross(const Geodesic& g1, const Geodesic& g2);

struct IntersectionWitness {
  Word deck;
  DiskPoint point;
  int orientation = 0;
};

struct WitnessSearch {
  std::optional<IntersectionWitness> witness;
  int radius = 0;
  std::size_t examined = 0;
};

// First deck word u (shortlex, |u| <= radius) with u.axis(w) crossing axis(w).
WitnessSearch self_intersection_witness(const SurfaceGroup& g, const Word& w, int radius);

// Crossing of axis(w) with its translate by `deck`, if any.
std::optional<IntersectionWitness> check_witness(const SurfaceGroup& g, const Word& w,
                                                 const Word& deck);

struct NielsenResult {
  Word first;
  Word second;
  std::vector<std::string> trace;
  bool degenerate = false;  // a move produced the trivial word
};

NielsenResult nielsen_reduce(const Word& w1, const Word& w2);

// Words of the subgroup <x, y> up to `radius` letters in x, y and their inverses.
std::vector<Word> subgroup_ball(const Word& x, const Word& y, int radius,
                                std::size_t budget = kWordBudget);

// Loops based at the self-intersection of axis(w) with deck.axis(w): (h, h^-1 w).
std::pair<Word, Word> splice_lobes(const SurfaceGroup& g, const Word& w, const Word& deck);
// True when w1 is a lobe of w1 w2 cut at one of its self-intersections.
bool is_splice(const SurfaceGroup& g, const Word& w1, const Word& w2);

struct CoveringClass {
  enum class Kind { PuncturedTorus, ThreePuncturedSphere, Undetermined };
  Kind kind = Kind::Undetermined;
  int radius = 0;
  std::string hypothesis;  // "crossing", "splice" or "none"
  std::string reason;
  Word reduced_first, reduced_second;
  struct Labelled {
    std::string element;  // w1, w2, w1w2 or w1W2
    Word word;
    IntersectionWitness witness;
  };
  std::vector<Labelled> witnesses;
};

const char* kind_name(CoveringClass::Kind k);

constexpr int kDefaultCoveringRadius = 6;
constexpr int kMinCoveringRadius = 3;

CoveringClass classify_covering(const SurfaceGroup& g, const Word& w1, const Word& w2,
                                int radius = kDefaultCoveringRadius,
                                int min_radius = kMinCoveringRadius);

}  // namespace rotlab
