#include "rotlab/geodesic_lab.hpp"

#include <cmath>

namespace rotlab {

std::optional<Crossing> geodesics_cross(const Geodesic& g1, const Geodesic& g2) {
  Interleave il = boundary_interleave(g1, g2);
  if (il == Interleave::SharedEndpoint)
    throw Error(ErrorCode::AmbiguousCrossing, "geodesics share an endpoint");
  if (il == Interleave::Disjoint) return std::nullopt;
  auto f = g1.frame();
  double x1 = f.boundary_coordinate(g2.a.point());
  double x2 = f.boundary_coordinate(g2.b.point());
  Cxd u(0.0, std::sqrt(-x1 * x2));
  return Crossing{DiskPoint::from(f.from_halfplane(u)), il == Interleave::CrossPositive ? 1 : -1};
}

namespace {

bool same_unoriented(const Geodesic& x, const Geodesic& y) {
  return same_geodesic(x, y) || same_geodesic(x, y.reversed());
}

std::optional<IntersectionWitness> witness_for(const Geodesic& axis, const MobiusD& m,
                                               const Word& deck) {
  Geodesic moved = apply(m, axis);
  if (same_unoriented(axis, moved)) return std::nullopt;
  Interleave il = boundary_interleave(axis, moved);
  if (!crosses(il)) return std::nullopt;
  auto c = geodesics_cross(axis, moved);
  return IntersectionWitness{deck, c->point, c->orientation};
}

}  // namespace

std::optional<IntersectionWitness> check_witness(const SurfaceGroup& g, const Word& w,
                                                 const Word& deck) {
  return witness_for(axis_of(g, w).axis, g.evaluate(deck), deck);
}

WitnessSearch self_intersection_witness(const SurfaceGroup& g, const Word& w, int radius) {
  Geodesic axis = axis_of(g, w).axis;
  if (count_reduced_words(g.num_letters(), radius) > kWordBudget)
    throw Error(ErrorCode::BudgetExceeded, "witness search exceeds budget");
  WitnessSearch out;
  out.radius = radius;
  std::vector<Word> frontier{Word{}};
  std::vector<MobiusD> mats{MobiusD::identity()};
  for (int len = 1; len <= radius; ++len) {
    std::vector<Word> next;
    std::vector<MobiusD> next_m;
    for (std::size_t i = 0; i < frontier.size(); ++i) {
      for (int l = 0; l < g.num_letters(); ++l) {
        const Word& u = frontier[i];
        if (!u.empty() && u.letters.back() == letter_inverse(l)) continue;
        Word v = u;
        v.letters.push_back(l);
        MobiusD m = mats[i] * g.letter(l);
        ++out.examined;
        if (auto wit = witness_for(axis, m, v)) {
          out.witness = wit;
          return out;
        }
        next.push_back(std::move(v));
        next_m.push_back(m);
      }
    }
    frontier = std::move(next);
    mats = std::move(next_m);
  }
  return out;
}

NielsenResult nielsen_reduce(const Word& w1, const Word& w2) {
  if (reduce(w1).empty() || reduce(w2).empty())
    throw Error(ErrorCode::PreconditionFailed, "Nielsen reduction needs nontrivial words");
  NielsenResult res{reduce(w1), reduce(w2), {}, false};
  for (;;) {
    const Word& u = res.first;
    const Word& v = res.second;
    Word ui = inverse(u), vi = inverse(v);
    struct Move {
      const char* name;
      Word x, y;
    };
    Move moves[] = {
        {"(uv, v)", concat(u, v), v},        {"(vu, v)", concat(v, u), v},
        {"(uV, v)", concat(u, vi), v},       {"(Vu, v)", concat(vi, u), v},
        {"(u, vu)", u, concat(v, u)},        {"(u, uv)", u, concat(u, v)},
        {"(u, vU)", u, concat(v, ui)},       {"(u, Uv)", u, concat(ui, v)},
    };
    std::size_t total = u.size() + v.size();
    bool moved = false;
    for (auto& mv : moves) {
      if (mv.x.empty() || mv.y.empty()) {
        res.degenerate = true;
        res.trace.push_back(std::string(mv.name) + " -> trivial");
        return res;
      }
      if (mv.x.size() + mv.y.size() < total) {
        res.trace.push_back(mv.name);
        res.first = mv.x;
        res.second = mv.y;
        moved = true;
        break;
      }
    }
    if (!moved) return res;
  }
}

std::vector<Word> subgroup_ball(const Word& x, const Word& y, int radius, std::size_t budget) {
  std::vector<Word> gens{x, y, inverse(x), inverse(y)};
  std::vector<Word> out;
  for (const Word& abstract : reduced_words(4, radius, budget)) {
    Word w;
    for (int l : abstract.letters) w = concat(w, gens[l]);
    out.push_back(std::move(w));
  }
  return out;
}

std::pair<Word, Word> splice_lobes(const SurfaceGroup& g, const Word& w, const Word& deck) {
  AxisInfo ai = axis_of(g, w);
  auto wit = check_witness(g, w, deck);
  if (!wit) throw Error(ErrorCode::PreconditionFailed, "deck word is not a self-intersection witness");
  auto f = ai.axis.frame();
  double tp = f.fermi(wit->point.z()).second;
  Word ui = inverse(deck);
  for (int j = -4; j <= 4; ++j) {
    Word h = concat(power(w, j), ui);
    double tq = f.fermi(g.evaluate(h).apply(wit->point.z())).second;
    double gap = tq - tp;
    if (gap > 1e-9 && gap < ai.length - 1e-9) return {h, concat(inverse(h), w)};
  }
  throw Error(ErrorCode::NumericalEscape, "could not locate the second passage through the double point");
}

bool is_splice(const SurfaceGroup& g, const Word& w1, const Word& w2) {
  Word w = concat(w1, w2);
  if (w.empty()) return false;
  IsometryClass c = classify(g.evaluate(w));
  if (c.kind != IsometryClass::Kind::Hyperbolic) return false;
  Geodesic moved = apply(g.evaluate(w1), c.axis);
  if (same_unoriented(c.axis, moved)) return false;
  std::optional<Crossing> q;
  try {
    q = geodesics_cross(c.axis, moved);
  } catch (const Error&) {
    return false;
  }
  if (!q) return false;
  auto f = c.axis.frame();
  double tq = f.fermi(q->point.z()).second;
  double tp = f.fermi(g.evaluate(inverse(w1)).apply(q->point.z())).second;
  double gap = tq - tp;
  return gap > 1e-9 && gap < c.length - 1e-9;
}

const char* kind_name(CoveringClass::Kind k) {
  switch (k) {
    case CoveringClass::Kind::PuncturedTorus: return "PuncturedTorus";
    case CoveringClass::Kind::ThreePuncturedSphere: return "ThreePuncturedSphere";
    case CoveringClass::Kind::Undetermined: return "Undetermined";
  }
  return "Undetermined";
}

CoveringClass classify_covering(const SurfaceGroup& g, const Word& w1, const Word& w2, int radius,
                                int min_radius) {
  CoveringClass out;
  out.radius = radius;
  Geodesic ax1 = axis_of(g, w1).axis;
  Geodesic ax2 = axis_of(g, w2).axis;
  NielsenResult nr = nielsen_reduce(w1, w2);
  if (nr.degenerate || same_unoriented(ax1, ax2))
    throw Error(ErrorCode::NotRankTwo, "pair generates a cyclic subgroup");
  out.reduced_first = nr.first;
  out.reduced_second = nr.second;

  bool crossing = crosses(boundary_interleave(ax1, ax2));
  bool splice = !crossing && (is_splice(g, w1, w2) || is_splice(g, w2, w1));
  out.hypothesis = crossing ? "crossing" : splice ? "splice" : "none";
  if (!crossing && !splice) {
    out.reason = "pair neither crosses nor splices";
    return out;
  }
  if (radius < min_radius) {
    out.reason = "radius below the minimum for a decision";
    return out;
  }

  std::vector<Word> ball = subgroup_ball(nr.first, nr.second, radius);
  std::vector<MobiusD> mats;
  mats.reserve(ball.size());
  for (const Word& u : ball) mats.push_back(g.evaluate(u));

  // Any basis element of the subgroup is simple in a punctured-torus cover.
  struct Candidate {
    const char* label;
    Word word;
  };
  Candidate candidates[] = {{"w1", reduce(w1)},
                            {"w2", reduce(w2)},
                            {"w1w2", concat(w1, w2)},
                            {"w1W2", concat(w1, inverse(w2))}};
  for (auto& c : candidates) {
    IsometryClass cls = classify(g.evaluate(c.word));
    if (cls.kind != IsometryClass::Kind::Hyperbolic) continue;
    for (std::size_t i = 0; i < ball.size(); ++i) {
      if (auto wit = witness_for(cls.axis, mats[i], ball[i])) {
        out.witnesses.push_back({c.label, c.word, *wit});
        break;
      }
    }
  }
  if (!out.witnesses.empty()) {
    out.kind = CoveringClass::Kind::ThreePuncturedSphere;
    out.reason = "a primitive element of the subgroup self-intersects in the cover";
  } else if (crossing) {
    out.kind = CoveringClass::Kind::PuncturedTorus;
    out.reason = "crossing pair with no self-intersection witness in the subgroup ball";
  } else {
    out.reason = "no witness found";
  }
  return out;
}

}  // namespace rotlab
