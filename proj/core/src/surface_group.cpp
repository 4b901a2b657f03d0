#include "rotlab/surface_group.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <map>
#include <random>
#include <unordered_map>

namespace rotlab {

// ---------------------------------------------------------------- words

bool Word::operator<(const Word& o) const {
  if (letters.size() != o.letters.size()) return letters.size() < o.letters.size();
  return letters < o.letters;
}

Word parse_word(const std::string& text, int genus) {
  Word w;
  std::size_t i = 0;
  while (i < text.size()) {
    char c = text[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
      continue;
    }
    int base;
    switch (c) {
      case 'a': base = 0; break;
      case 'b': base = 1; break;
      case 'A': base = 2; break;
      case 'B': base = 3; break;
      default: throw Error(ErrorCode::InvalidWord, "unexpected character in word: " + text);
    }
    std::size_t j = i + 1;
    int index = 0;
    while (j < text.size() && std::isdigit(static_cast<unsigned char>(text[j])))
      index = index * 10 + (text[j++] - '0');
    if (j == i + 1 || index < 1 || index > genus)
      throw Error(ErrorCode::InvalidWord, "bad generator index in word: " + text);
    w.letters.push_back(4 * (index - 1) + base);
    i = j;
  }
  return w;
}

std::string to_string(const Word& w) {
  static const char kNames[4] = {'a', 'b', 'A', 'B'};
  std::string out;
  for (int l : w.letters) {
    out += kNames[l % 4];
    out += std::to_string(l / 4 + 1);
  }
  return out;
}

Word reduce(const Word& w) {
  Word out;
  for (int l : w.letters) {
    if (!out.letters.empty() && out.letters.back() == letter_inverse(l))
      out.letters.pop_back();
    else
      out.letters.push_back(l);
  }
  return out;
}

Word concat(const Word& x, const Word& y) {
  Word out = x;
  for (int l : y.letters) {
    if (!out.letters.empty() && out.letters.back() == letter_inverse(l))
      out.letters.pop_back();
    else
      out.letters.push_back(l);
  }
  return out;
}

Word inverse(const Word& w) {
  Word out;
  out.letters.reserve(w.size());
  for (auto it = w.letters.rbegin(); it != w.letters.rend(); ++it)
    out.letters.push_back(letter_inverse(*it));
  return out;
}

Word power(const Word& w, int n) {
  Word base = n >= 0 ? w : inverse(w);
  Word out;
  for (int i = 0; i < std::abs(n); ++i) out = concat(out, base);
  return out;
}

Word conjugate(const Word& u, const Word& w) { return concat(concat(u, w), inverse(u)); }

std::vector<int> abelianize(const Word& w, int genus) {
  std::vector<int> v(2 * genus, 0);
  for (int l : w.letters) {
    int pair = l / 4, kind = l % 4;
    int slot = 2 * pair + (kind % 2);
    v[slot] += kind < 2 ? 1 : -1;
  }
  return v;
}

// ---------------------------------------------------------------- domain

namespace {

Cxd to_klein(DiskPoint z) {
  double n = z.x * z.x + z.y * z.y;
  return {2 * z.x / (1 + n), 2 * z.y / (1 + n)};
}

double distance_to_segment(DiskPoint z, DiskPoint p, DiskPoint q) {
  Geodesic g = geodesic_through_points(p, q);
  auto f = g.frame();
  auto [s, t] = f.fermi(z.z());
  double tp = f.fermi(p.z()).second, tq = f.fermi(q.z()).second;
  if (t >= std::min(tp, tq) && t <= std::max(tp, tq)) return std::fabs(s);
  return std::min(hyp_distance(z, p), hyp_distance(z, q));
}

}  // namespace

bool FundamentalDomain::contains(DiskPoint z) const {
  Cxd k = to_klein(z);
  bool inside = false;
  std::size_t n = vertices.size();
  for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
    Cxd a = to_klein(vertices[i]), b = to_klein(vertices[j]);
    if ((a.im > k.im) != (b.im > k.im)) {
      double x = (b.re - a.re) * (k.im - a.im) / (b.im - a.im) + a.re;
      if (k.re < x) inside = !inside;
    }
  }
  return inside;
}

double FundamentalDomain::distance(DiskPoint z) const {
  if (contains(z)) return 0.0;
  double best = INFINITY;
  std::size_t n = vertices.size();
  for (std::size_t i = 0; i < n; ++i)
    best = std::min(best, distance_to_segment(z, vertices[i], vertices[(i + 1) % n]));
  return best;
}

double FundamentalDomain::diameter() const {
  double d = 0;
  for (auto& p : vertices)
    for (auto& q : vertices) d = std::max(d, hyp_distance(p, q));
  return d;
}

// ---------------------------------------------------------------- group

namespace {

template <class Real>
std::vector<Mobius<Real>> build_letters(int genus) {
  using std::acosh;
  using std::cos;
  using std::cosh;
  using std::sin;
  using std::sinh;
  int n = 4 * genus;
  Real pi = real_pi<Real>();
  Real angle = 2 * pi / n;
  Real inr = acosh(cos(angle / 2) / sin(pi / n));
  auto rot = [](const Real& t) {
    return Mobius<Real>::from_disk(Cx<Real>::polar(Real(1), t / 2), Cx<Real>(Real(0)));
  };
  Real d = 2 * inr;
  Mobius<Real> tr =
      Mobius<Real>::from_disk(Cx<Real>(Real(cosh(d / 2))), Cx<Real>(Real(sinh(d / 2))));
  auto phi = [&](int k) { return Real(2 * pi * k / n); };
  auto side_pairing = [&](int k, int kp) { return rot(phi(k)) * tr * rot(pi - phi(kp)); };
  std::vector<Mobius<Real>> out(n);
  for (int j = 0; j < genus; ++j) {
    Mobius<Real> a = side_pairing(4 * j, 4 * j + 2);
    Mobius<Real> b = side_pairing(4 * j + 3, 4 * j + 1);
    out[4 * j] = a;
    out[4 * j + 1] = b;
    out[4 * j + 2] = a.inverse();
    out[4 * j + 3] = b.inverse();
  }
  return out;
}

double matrix_gap(const MobiusD& m, double sign) {
  return std::max({std::fabs(m.p - sign), std::fabs(m.q), std::fabs(m.r), std::fabs(m.s - sign)});
}

}  // namespace

SurfaceGroup SurfaceGroup::build(int genus) {
  if (genus < 2) throw Error(ErrorCode::InvalidGenus, "genus must be at least 2");
  SurfaceGroup g;
  g.genus_ = genus;
  int n = 4 * genus;
  g.gens_ = build_letters<double>(genus);
  g.side_of_letter_.resize(n);
  for (int j = 0; j < genus; ++j) {
    g.side_of_letter_[4 * j] = 4 * j;
    g.side_of_letter_[4 * j + 1] = 4 * j + 3;
    g.side_of_letter_[4 * j + 2] = 4 * j + 2;
    g.side_of_letter_[4 * j + 3] = 4 * j + 1;
  }
  double angle = 2 * M_PI / n;
  g.inradius_ = std::acosh(std::cos(angle / 2) / std::sin(M_PI / n));
  g.circumradius_ = std::acosh(1.0 / (std::tan(M_PI / n) * std::tan(angle / 2)));
  g.min_length_ = INFINITY;
  for (auto& m : g.gens_) g.min_length_ = std::min(g.min_length_, classify(m).length);

  double rv = std::tanh(g.circumradius_ / 2);
  for (int k = 0; k < n; ++k)
    g.domain_.vertices.push_back(DiskPoint::from(Cxd::polar(rv, 2 * M_PI * k / n + M_PI / n)));
  g.domain_.pairing.resize(n);
  for (int l = 0; l < n; ++l)
    g.domain_.pairing[g.side_of_letter_[l]] = g.side_of_letter_[letter_inverse(l)];
  return g;
}

MobiusD SurfaceGroup::evaluate(const Word& w) const {
  MobiusD m = MobiusD::identity();
  for (int l : w.letters) m = m * gens_[l];
  return m;
}

std::vector<MobiusMp> SurfaceGroup::letters_mp() const {
  thread_local std::map<std::pair<int, unsigned>, std::vector<MobiusMp>> cache;
  auto key = std::make_pair(genus_, MpReal::default_precision());
  auto it = cache.find(key);
  if (it == cache.end()) it = cache.emplace(key, build_letters<MpReal>(genus_)).first;
  return it->second;
}

MobiusMp SurfaceGroup::evaluate_mp(const Word& w) const {
  auto letters = letters_mp();
  MobiusMp m = MobiusMp::identity();
  for (int l : w.letters) m = m * letters[l];
  return m;
}

Word SurfaceGroup::relator() const {
  Word w;
  for (int l = 0; l < num_letters(); ++l) w.letters.push_back(l);
  return w;
}

double SurfaceGroup::relator_residual() const {
  MobiusD m = evaluate(relator()).normalized();
  return std::min(matrix_gap(m, 1.0), matrix_gap(m, -1.0));
}

double SurfaceGroup::angle_sum() const {
  const auto& v = domain_.vertices;
  std::size_t n = v.size();
  double total = 0;
  for (std::size_t k = 0; k < n; ++k) {
    Cxd c = v[k].z();
    auto centered = [&](Cxd z) { return (z - c) / (Cxd(1.0) - c.conj() * z); };
    // geodesics through the origin are diameters, so angles can be read off directly
    Cxd prev = centered(v[(k + n - 1) % n].z()), next = centered(v[(k + 1) % n].z());
    double a = std::fabs(prev.arg() - next.arg());
    total += std::min(a, 2 * M_PI - a);
  }
  return total;
}

// ---------------------------------------------------------------- locate

LocatedPoint locate(const SurfaceGroup& g, DiskPoint z) {
  int n = g.num_letters();
  std::vector<Cxd> centers(n);
  for (int l = 0; l < n; ++l) centers[l] = g.letter(l).apply(Cxd(0.0));
  Cxd cur = z.z();
  double d0 = disk_distance(cur, Cxd(0.0));
  int budget = static_cast<int>(10.0 * (1.0 + d0 / g.min_translation_length()));
  LocatedPoint out;
  for (int step = 0; step <= budget; ++step) {
    double here = disk_distance(cur, Cxd(0.0));
    int best = -1;
    double best_d = here - 1e-12;
    for (int l = 0; l < n; ++l) {
      double d = disk_distance(cur, centers[l]);
      if (d < best_d - 1e-13) {
        best = l;
        best_d = d;
      }
    }
    if (best < 0) {
      out.word = reduce(out.word);
      out.rep = DiskPoint::from(cur);
      return out;
    }
    cur = g.letter(best).inverse().apply(cur);
    out.word.letters.push_back(best);
  }
  throw Error(ErrorCode::NumericalEscape, "locate did not terminate");
}

DiskPoint reconstruct(const SurfaceGroup& g, const LocatedPoint& p) {
  return DiskPoint::from(g.evaluate(p.word).apply(p.rep.z()));
}

LocatedPoint relocate(const SurfaceGroup& g, const Word& prefix, DiskPoint z) {
  LocatedPoint lp = locate(g, z);
  lp.word = concat(prefix, lp.word);
  return lp;
}

AxisInfo axis_of(const SurfaceGroup& g, const Word& w) {
  IsometryClass c = classify(g.evaluate(w));
  if (c.kind != IsometryClass::Kind::Hyperbolic)
    throw Error(ErrorCode::NotHyperbolic, "word " + to_string(w) + " is not hyperbolic");
  return {c.axis, c.length};
}

std::pair<CxMp, CxMp> axis_endpoints_mp(const SurfaceGroup& g, const Word& w, const Word& conj) {
  MobiusMp m = g.evaluate_mp(w);
  auto ends = hyperbolic_fixed_points(m);
  if (conj.empty()) return ends;
  MobiusMp u = g.evaluate_mp(conj);
  return {u.apply(ends.first), u.apply(ends.second)};
}

// ---------------------------------------------------------------- enumeration

std::size_t count_reduced_words(int num_letters, int radius) {
  double total = 1, level = num_letters;
  for (int k = 1; k <= radius; ++k) {
    total += level;
    level *= (num_letters - 1);
    if (total > 1e18) break;
  }
  return total > 1e18 ? static_cast<std::size_t>(-1) : static_cast<std::size_t>(total);
}

std::vector<Word> reduced_words(int num_letters, int radius, std::size_t budget) {
  if (count_reduced_words(num_letters, radius) > budget)
    throw Error(ErrorCode::BudgetExceeded, "word enumeration exceeds budget");
  std::vector<Word> out{Word{}};
  std::size_t begin = 0;
  for (int k = 1; k <= radius; ++k) {
    std::size_t end = out.size();
    for (std::size_t i = begin; i < end; ++i) {
      for (int l = 0; l < num_letters; ++l) {
        const Word& w = out[i];
        if (!w.empty() && w.letters.back() == letter_inverse(l)) continue;
        Word next = w;
        next.letters.push_back(l);
        out.push_back(std::move(next));
      }
    }
    begin = end;
  }
  return out;
}

namespace {

struct CellKey {
  long long x, y;
  bool operator==(const CellKey& o) const { return x == o.x && y == o.y; }
};
struct CellHash {
  std::size_t operator()(const CellKey& k) const {
    return std::hash<long long>()(k.x * 1000003LL) ^ std::hash<long long>()(k.y);
  }
};

}  // namespace

std::vector<BallElement> ball_by_distance(const SurfaceGroup& g, double rho) {
  const double cell = 1e-9;
  double limit = rho + 2.0 * g.circumradius();
  std::unordered_map<CellKey, std::size_t, CellHash> seen;
  std::vector<BallElement> all;
  std::vector<Cxd> centers;
  auto find = [&](Cxd c) -> bool {
    long long cx = std::llround(c.re / cell), cy = std::llround(c.im / cell);
    for (long long dx = -1; dx <= 1; ++dx)
      for (long long dy = -1; dy <= 1; ++dy)
        if (seen.count({cx + dx, cy + dy})) return true;
    return false;
  };
  auto insert = [&](BallElement e, Cxd c) {
    seen[{std::llround(c.re / cell), std::llround(c.im / cell)}] = all.size();
    all.push_back(std::move(e));
    centers.push_back(c);
  };
  insert({Word{}, MobiusD::identity(), 0.0}, Cxd(0.0));
  for (std::size_t i = 0; i < all.size(); ++i) {
    for (int l = 0; l < g.num_letters(); ++l) {
      const BallElement& cur = all[i];
      if (!cur.word.empty() && cur.word.letters.back() == letter_inverse(l)) continue;
      MobiusD m = cur.m * g.letter(l);
      Cxd c = m.apply(Cxd(0.0));
      double d = disk_distance(c, Cxd(0.0));
      if (d > limit || find(c)) continue;
      Word w = cur.word;
      w.letters.push_back(l);
      insert({std::move(w), m, d}, c);
    }
  }
  std::vector<BallElement> out;
  for (auto& e : all)
    if (e.dist <= rho) out.push_back(e);
  std::stable_sort(out.begin(), out.end(),
                   [](const BallElement& x, const BallElement& y) { return x.dist < y.dist; });
  return out;
}

// ---------------------------------------------------------------- probes

SvarcMilnorResult svarc_milnor_probe(const SurfaceGroup& g, int radius) {
  if (radius < 1) throw Error(ErrorCode::PreconditionFailed, "radius must be positive");
  if (count_reduced_words(g.num_letters(), radius) > kWordBudget)
    throw Error(ErrorCode::BudgetExceeded, "word enumeration exceeds budget");
  SvarcMilnorResult res;
  Word w;
  std::vector<MobiusD> stack{MobiusD::identity()};
  auto visit = [&](auto&& self, int depth) -> void {
    if (depth == radius) return;
    for (int l = 0; l < g.num_letters(); ++l) {
      if (!w.empty() && w.letters.back() == letter_inverse(l)) continue;
      w.letters.push_back(l);
      MobiusD m = stack.back() * g.letter(l);
      double d = disk_distance(m.apply(Cxd(0.0)), Cxd(0.0));
      double len = static_cast<double>(w.size());
      double ratio = d < 1e-9 ? INFINITY : std::max(len / d, d / len);
      ++res.words;
      if (ratio > res.c_hat) {
        res.c_hat = ratio;
        res.witness = w;
      }
      stack.push_back(m);
      self(self, depth + 1);
      stack.pop_back();
      w.letters.pop_back();
    }
  };
  visit(visit, 0);
  return res;
}

namespace {

DiskPoint sample_in_domain(const FundamentalDomain& d, std::mt19937_64& rng) {
  double rmax = 0;
  for (auto& v : d.vertices) rmax = std::max(rmax, v.radius());
  std::uniform_real_distribution<double> u(-rmax, rmax);
  for (;;) {
    DiskPoint p{u(rng), u(rng)};
    if (p.radius() < rmax && d.contains(p)) return p;
  }
}

}  // namespace

QuasiConvexityResult quasi_convexity_probe(const FundamentalDomain& d, int samples,
                                           std::uint64_t seed) {
  if (samples < 1) throw Error(ErrorCode::PreconditionFailed, "samples must be positive");
  QuasiConvexityResult res;
  res.samples = samples;
  const int kSteps = 64;
  for (int i = 0; i < samples; ++i) {
    std::seed_seq seq{seed, static_cast<std::uint64_t>(i)};
    std::mt19937_64 rng(seq);
    DiskPoint p = sample_in_domain(d, rng), q = sample_in_domain(d, rng);
    if (hyp_distance(p, q) < 1e-12) continue;
    auto f = geodesic_through_points(p, q).frame();
    double tp = f.fermi(p.z()).second, tq = f.fermi(q.z()).second;
    for (int k = 0; k <= kSteps; ++k) {
      double t = tp + (tq - tp) * k / kSteps;
      DiskPoint x = DiskPoint::from(f.point(0.0, t));
      double dist = d.distance(x);
      if (dist > res.r_hat) {
        res.r_hat = dist;
        res.p = p;
        res.q = q;
        res.worst = x;
      }
    }
  }
  return res;
}

FundamentalDomain deformed_domain(const SurfaceGroup& g, int side, double depth) {
  int n = g.num_letters();
  int letter = -1;
  for (int l = 0; l < n; ++l)
    if (g.side_of_letter(l) == side) letter = l;
  if (letter < 0) throw Error(ErrorCode::PreconditionFailed, "no such side");
  int paired = g.side_of_letter(letter_inverse(letter));
  double phi = 2 * M_PI * side / n;
  DiskPoint notch = DiskPoint::from(Cxd::polar(std::tanh((g.inradius() - depth) / 2), phi));
  DiskPoint bump = apply(g.letter(letter).inverse(), notch);
  const auto& v = g.domain().vertices;
  FundamentalDomain out;
  // side k runs from vertex k-1 to vertex k
  for (int k = 0; k < n; ++k) {
    if (k == side) out.vertices.push_back(notch);
    if (k == paired) out.vertices.push_back(bump);
    out.vertices.push_back(v[k]);
  }
  return out;
}

}  // namespace rotlab
