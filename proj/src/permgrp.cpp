#include "bv/permgrp.hpp"

#include <algorithm>
#include <cassert>
#include <numeric>
#include <sstream>

#include "bv/error.hpp"
#include "bv/tokens.hpp"

namespace bv::permgrp {

Perm::Perm(std::size_t n) : img_(n) { std::iota(img_.begin(), img_.end(), Point{0}); }

Perm::Perm(std::vector<Point> images) : img_(std::move(images)) {
  std::vector<char> seen(img_.size(), 0);
  for (Point p : img_) {
    if (p >= img_.size() || seen[p])
      throw InvalidArgument("image list is not a permutation");
    seen[p] = 1;
  }
}

Perm Perm::from_cycles(std::size_t n, const std::vector<std::vector<Point>> &cycles) {
  std::vector<Point> img(n);
  std::iota(img.begin(), img.end(), Point{0});
  std::vector<char> used(n, 0);
  for (const auto &c : cycles) {
    for (std::size_t i = 0; i < c.size(); ++i) {
      const Point a = c[i], b = c[(i + 1) % c.size()];
      if (a < 1 || a > n || b < 1 || b > n)
        throw InvalidArgument("cycle point out of range");
      if (used[a - 1])
        throw InvalidArgument("cycles are not disjoint");
      used[a - 1] = 1;
      img[a - 1] = b - 1;
    }
  }
  return Perm(std::move(img));
}

Perm Perm::parse(std::size_t n, const std::string &text) {
  std::vector<std::vector<Point>> cycles;
  std::size_t i = 0;
  auto skip = [&] {
    while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i])))
      ++i;
  };
  skip();
  while (i < text.size()) {
    if (text[i] != '(')
      throw ParseError(i, "(");
    ++i;
    std::vector<Point> cyc;
    skip();
    while (i < text.size() && text[i] != ')') {
      skip();
      std::size_t j = i;
      while (j < text.size() && std::isdigit(static_cast<unsigned char>(text[j])))
        ++j;
      if (j == i)
        throw ParseError(i, "point");
      cyc.push_back(static_cast<Point>(std::stoul(text.substr(i, j - i))));
      i = j;
      skip();
      if (i < text.size() && text[i] == ',')
        ++i;
    }
    if (i >= text.size())
      throw ParseError(i, ")");
    ++i;
    if (cyc.size() > 1)
      cycles.push_back(std::move(cyc));
    skip();
  }
  return from_cycles(n, cycles);
}

Perm Perm::operator*(const Perm &o) const {
  assert(o.img_.size() == img_.size());
  std::vector<Point> r(img_.size());
  for (std::size_t i = 0; i < img_.size(); ++i)
    r[i] = o.img_[img_[i]];
  Perm p;
  p.img_ = std::move(r);
  return p;
}

Perm Perm::inverse() const {
  std::vector<Point> r(img_.size());
  for (std::size_t i = 0; i < img_.size(); ++i)
    r[img_[i]] = static_cast<Point>(i);
  Perm p;
  p.img_ = std::move(r);
  return p;
}

Perm Perm::pow(long long e) const {
  Perm base = e < 0 ? inverse() : *this;
  unsigned long long k = e < 0 ? 0ULL - static_cast<unsigned long long>(e) : e;
  // Walk each cycle once instead of repeated squaring.
  std::vector<Point> r(img_.size());
  std::vector<char> seen(img_.size(), 0);
  std::vector<Point> cyc;
  for (std::size_t s = 0; s < img_.size(); ++s) {
    if (seen[s])
      continue;
    cyc.clear();
    for (Point p = static_cast<Point>(s); !seen[p]; p = base.img_[p]) {
      seen[p] = 1;
      cyc.push_back(p);
    }
    const std::size_t len = cyc.size(), shift = k % len;
    for (std::size_t i = 0; i < len; ++i)
      r[cyc[i]] = cyc[(i + shift) % len];
  }
  Perm p;
  p.img_ = std::move(r);
  return p;
}

Perm Perm::conj(const Perm &g) const { return g.inverse() * (*this) * g; }

bool Perm::is_identity() const {
  for (std::size_t i = 0; i < img_.size(); ++i)
    if (img_[i] != i)
      return false;
  return true;
}

std::uint64_t Perm::order() const {
  std::uint64_t o = 1;
  for (std::size_t len : cycle_type())
    o = std::lcm<std::uint64_t>(o, len);
  return o;
}

std::vector<std::size_t> Perm::cycle_type() const {
  std::vector<std::size_t> t;
  std::vector<char> seen(img_.size(), 0);
  for (std::size_t s = 0; s < img_.size(); ++s) {
    if (seen[s])
      continue;
    std::size_t len = 0;
    for (Point p = static_cast<Point>(s); !seen[p]; p = img_[p]) {
      seen[p] = 1;
      ++len;
    }
    if (len > 1)
      t.push_back(len);
  }
  std::sort(t.rbegin(), t.rend());
  return t;
}

std::string Perm::to_cycle_string() const {
  std::ostringstream os;
  std::vector<char> seen(img_.size(), 0);
  bool any = false;
  for (std::size_t s = 0; s < img_.size(); ++s) {
    if (seen[s] || img_[s] == s)
      continue;
    any = true;
    os << '(';
    for (Point p = static_cast<Point>(s); !seen[p]; p = img_[p]) {
      seen[p] = 1;
      if (p != s)
        os << ',';
      os << p + 1;
    }
    os << ')';
  }
  if (!any)
    os << "()";
  return os.str();
}

std::size_t Perm::hash() const {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (Point p : img_) {
    h ^= p;
    h *= 0x100000001b3ULL;
  }
  return static_cast<std::size_t>(h);
}

std::uint64_t Rng::below(std::uint64_t n) {
  if (n <= 1)
    return 0;
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                              std::numeric_limits<std::uint64_t>::max() % n;
  std::uint64_t v;
  do
    v = eng_();
  while (v >= limit);
  return v % n;
}

RandomSource make_random_source(const std::vector<Perm> &gens, std::uint64_t seed) {
  if (gens.empty())
    throw InvalidArgument("random source needs at least one generator");
  return RandomSource(gens, Perm(gens.front().degree()), seed);
}

Perm random_element(RandomSource &rs) { return rs.next(); }

// --- Schreier-Sims -------------------------------------------------------

std::vector<Point> Bsgs::base() const {
  std::vector<Point> b;
  for (const auto &lv : levels_)
    b.push_back(lv.base_point);
  return b;
}

std::vector<Perm> Bsgs::strong_generators() const {
  if (levels_.empty())
    return {};
  return levels_.front().gens;
}

BigInt Bsgs::order() const {
  BigInt o = 1;
  for (const auto &lv : levels_)
    o *= static_cast<unsigned long>(lv.orbit.size());
  return o;
}

std::vector<std::size_t> Bsgs::orbit_sizes() const {
  std::vector<std::size_t> s;
  for (const auto &lv : levels_)
    s.push_back(lv.orbit.size());
  return s;
}

std::pair<Perm, std::size_t> Bsgs::sift(const Perm &g, std::size_t start) const {
  Perm h = g;
  for (std::size_t i = start; i < levels_.size(); ++i) {
    const auto &lv = levels_[i];
    const std::int32_t k = lv.pos[h[lv.base_point]];
    if (k < 0)
      return {h, i};
    if (k > 0)
      h = h * lv.uinv[k];
  }
  return {h, levels_.size()};
}

bool Bsgs::contains(const Perm &g) const {
  if (g.degree() != degree_)
    return false;
  auto [h, lvl] = sift(g);
  return lvl == levels_.size() && h.is_identity();
}

void Bsgs::extend_orbit(Level &lv, std::size_t first_gen) {
  // Existing points under the new generators, then new points under all.
  const std::size_t old = lv.orbit.size();
  for (std::size_t k = 0; k < lv.orbit.size(); ++k) {
    const std::size_t g0 = k < old ? first_gen : 0;
    for (std::size_t s = g0; s < lv.gens.size(); ++s) {
      const Point img = lv.gens[s][lv.orbit[k]];
      if (lv.pos[img] >= 0)
        continue;
      lv.pos[img] = static_cast<std::int32_t>(lv.orbit.size());
      lv.orbit.push_back(img);
      // uinv(img) = s^-1 * uinv(orbit[k])
      lv.uinv.push_back(lv.gens[s].inverse() * lv.uinv[k]);
    }
  }
}

void Bsgs::insert(const Perm &h, std::size_t level, std::size_t first) {
  if (level == levels_.size()) {
    Point b = 0;
    while (h[b] == b)
      ++b;
    Level lv;
    lv.base_point = b;
    lv.pos.assign(degree_, -1);
    lv.pos[b] = 0;
    lv.orbit.push_back(b);
    lv.uinv.push_back(Perm(degree_));
    levels_.push_back(std::move(lv));
  }
  for (std::size_t j = first; j <= level; ++j) {
    auto &lv = levels_[j];
    lv.gens.push_back(h);
    extend_orbit(lv, lv.gens.size() - 1);
  }
}

void Bsgs::verify_chain() {
  if (levels_.empty())
    return;
  std::size_t i = levels_.size();
  while (i-- > 0) {
  restart:
    auto &lv = levels_[i];
    for (std::size_t k = 0; k < lv.orbit.size(); ++k) {
      const Perm u = lv.uinv[k].inverse();
      for (std::size_t s = 0; s < lv.gens.size(); ++s) {
        const Point img = lv.gens[s][lv.orbit[k]];
        const Perm sch = u * lv.gens[s] * lv.uinv[lv.pos[img]];
        if (sch.is_identity())
          continue;
        auto [h, lvl] = sift(sch, i + 1);
        if (lvl == levels_.size() && h.is_identity())
          continue;
        insert(h, lvl, i + 1);
        i = lvl;
        goto restart;
      }
    }
  }
}

Bsgs schreier_sims(const std::vector<Perm> &gens, const SchreierSimsOptions &opts) {
  Bsgs b;
  if (!gens.empty())
    b.degree_ = gens.front().degree();
  for (const auto &g : gens)
    if (g.degree() != b.degree_)
      throw InvalidArgument("generators have different degrees");

  auto add = [&](const Perm &g) {
    auto [h, lvl] = b.sift(g);
    if (lvl == b.levels_.size() && h.is_identity())
      return false;
    b.insert(h, lvl, 0);
    return true;
  };

  std::vector<Perm> nontrivial;
  for (const auto &g : gens)
    if (!g.is_identity())
      nontrivial.push_back(g);
  if (nontrivial.empty()) {
    b.complete_ = true;
    return b;
  }
  // Generators go in whole at level 0 so that base = first moved points.
  for (const auto &g : nontrivial)
    if (b.levels_.empty() || !b.contains(g))
      b.insert(g, 0, 0);

  auto certified = [&] { return opts.known_order && b.order() == *opts.known_order; };
  if (!certified()) {
    RandomSource rs(nontrivial, Perm(b.degree_), opts.seed);
    unsigned quiet = 0;
    while (quiet < opts.random_sifts && !certified()) {
      if (add(rs.next()))
        quiet = 0;
      else
        ++quiet;
    }
  }
  if (certified()) {
    b.complete_ = true;
  } else if (opts.verify) {
    b.verify_chain();
    b.complete_ = true;
  }
  return b;
}

// --- matrix actions --------------------------------------------------------

std::string to_string(Action a) {
  return a == Action::NonzeroVectors ? "NonzeroVectors" : "ProjectivePoints";
}

MatrixAction::MatrixAction(const ffield::FieldCtx &field, unsigned d, Action action,
                           std::size_t max_points)
    : f_(&field), d_(d), action_(action) {
  const BigInt total = numtheory::ipow(BigInt(static_cast<unsigned long>(field.order())), d);
  BigInt count = total - 1;
  if (action == Action::ProjectivePoints)
    count /= static_cast<unsigned long>(field.order() - 1);
  if (count > BigInt(static_cast<unsigned long>(max_points)))
    throw TooManyPoints("action on " + count.get_str() + " points exceeds limit " +
                        std::to_string(max_points));
  const std::uint64_t q = field.order(), n = total.get_ui();
  if (action == Action::NonzeroVectors) {
    ranks_.resize(n - 1);
    std::iota(ranks_.begin(), ranks_.end(), std::uint64_t{1});
    return;
  }
  // Normalized vectors: zeros, then the element 1, then anything.
  const std::uint64_t one = field.lex_rank(1);
  ranks_.reserve(count.get_ui());
  for (unsigned lead = 0; lead < d; ++lead) {
    std::uint64_t tail = 1;
    for (unsigned i = lead + 1; i < d; ++i)
      tail *= q;
    for (std::uint64_t t = 0; t < tail; ++t)
      ranks_.push_back(one * tail + t);
  }
  std::sort(ranks_.begin(), ranks_.end());
}

std::uint64_t MatrixAction::rank(const std::vector<ffield::Code> &v) const {
  std::uint64_t r = 0;
  for (unsigned i = 0; i < d_; ++i)
    r = r * f_->order() + f_->lex_rank(v[i]);
  return r;
}

std::vector<ffield::Code> MatrixAction::point(std::size_t i) const {
  std::vector<ffield::Code> v(d_);
  std::uint64_t r = ranks_.at(i);
  for (unsigned k = d_; k-- > 0;) {
    v[k] = f_->from_lex_rank(r % f_->order());
    r /= f_->order();
  }
  return v;
}

std::size_t MatrixAction::index_of(std::vector<ffield::Code> v) const {
  if (action_ == Action::ProjectivePoints) {
    unsigned lead = 0;
    while (lead < d_ && v[lead] == 0)
      ++lead;
    if (lead == d_)
      throw InvalidArgument("zero vector has no projective point");
    const auto s = f_->inv(v[lead]);
    for (unsigned k = lead; k < d_; ++k)
      v[k] = f_->mul(v[k], s);
  }
  const std::uint64_t r = rank(v);
  if (action_ == Action::NonzeroVectors) {
    if (r == 0)
      throw InvalidArgument("zero vector is not a point");
    return r - 1;
  }
  auto it = std::lower_bound(ranks_.begin(), ranks_.end(), r);
  assert(it != ranks_.end() && *it == r);
  return static_cast<std::size_t>(it - ranks_.begin());
}

Perm MatrixAction::image(const matgrp::Matrix &m) const {
  if (m.dim() != d_ || &m.field() != f_)
    throw InvalidArgument("matrix does not match the action");
  std::vector<Point> img(ranks_.size());
  std::vector<ffield::Code> w(d_);
  for (std::size_t i = 0; i < ranks_.size(); ++i) {
    const auto v = point(i);
    for (unsigned c = 0; c < d_; ++c) {
      ffield::Code acc = 0;
      for (unsigned r = 0; r < d_; ++r)
        if (v[r] != 0)
          acc = f_->add(acc, f_->mul(v[r], m.code(r, c)));
      w[c] = acc;
    }
    img[i] = static_cast<Point>(index_of(w));
  }
  return Perm(std::move(img));
}

PermImage matrix_to_perm(const matgrp::GroupSpec &spec, Action action,
                         std::size_t max_points) {
  if (spec.matrix_gens.empty())
    throw InvalidArgument("group has no matrix generators");
  const auto &f = spec.matrix_gens.front().field();
  MatrixAction act(f, spec.d, action, max_points);
  PermImage out;
  out.points = act.size();
  for (const auto &m : spec.matrix_gens)
    out.gens.push_back(act.image(m));
  return out;
}

std::uint64_t scalar_count(const matgrp::GroupSpec &spec) {
  using matgrp::Family;
  const std::uint64_t q = spec.q(), d = spec.d;
  switch (spec.family) {
  case Family::GL:
    return q - 1;
  case Family::SL:
    return std::gcd(d, q - 1);
  case Family::GU:
    return q + 1;
  case Family::SU:
    return std::gcd(d, q + 1);
  case Family::Sp:
    return q % 2 ? 2 : 1;
  case Family::OmegaPlus:
  case Family::OmegaMinus: {
    if (q % 2 == 0)
      return 1;
    const BigInt qm = numtheory::ipow(BigInt(static_cast<unsigned long>(q)), d / 2);
    const unsigned long r = mpz_fdiv_ui(qm.get_mpz_t(), 4);
    return r == (spec.family == Family::OmegaPlus ? 1UL : 3UL) ? 2 : 1;
  }
  case Family::OmegaOdd:
  case Family::SuzukiB2:
    return 1;
  case Family::Ingested:
    break;
  }
  throw UnsupportedFamily("scalar count unknown for " + spec.name());
}

namespace {
bool is_perfect(const matgrp::GroupSpec &spec) {
  using matgrp::Family;
  const std::uint64_t q = spec.q();
  switch (spec.family) {
  case Family::SL:
    return !(spec.d == 2 && q <= 3);
  case Family::SU:
    return spec.d >= 3 && !(spec.d == 3 && q == 2);
  case Family::Sp:
    return !(spec.d == 2 && q <= 3) && !(spec.d == 4 && q == 2);
  case Family::OmegaPlus:
    return spec.d >= 6 || (spec.d == 4 && q > 3);
  case Family::OmegaMinus:
    return spec.d >= 6 || (spec.d == 4 && q > 2);
  case Family::OmegaOdd:
    return spec.d >= 5 || (spec.d == 3 && q > 3);
  case Family::SuzukiB2:
    return true;
  default:
    return false;
  }
}
} // namespace

Realization realize(matgrp::GroupSpec spec, Action action, std::size_t max_points) {
  if (spec.family == matgrp::Family::Ingested)
    throw UnsupportedFamily("ingested groups are realized from their permutation data");
  if (action == Action::ProjectivePoints && !is_perfect(spec))
    throw InvalidArgument(spec.name() + " is not perfect; use the vector action");
  const auto &f = spec.matrix_field();
  MatrixAction act(f, spec.d, action, max_points);
  BigInt target = spec.declared_order ? *spec.declared_order : matgrp::classical_order(spec).value();
  if (action == Action::ProjectivePoints)
    target /= static_cast<unsigned long>(scalar_count(spec));

  SchreierSimsOptions quick;
  quick.known_order = target;
  quick.verify = false;

  Realization r;
  r.action = action;
  if (!spec.matrix_gens.empty()) {
    for (const auto &m : spec.matrix_gens)
      r.perm_gens.push_back(act.image(m));
  } else {
    std::vector<matgrp::Matrix> chosen;
    Bsgs cur;
    bool have = false;
    for (const auto &m : matgrp::candidate_generators(spec)) {
      if (have && cur.order() == target)
        break;
      Perm p = act.image(m);
      if (p.is_identity() || (have && cur.contains(p)))
        continue;
      chosen.push_back(m);
      r.perm_gens.push_back(std::move(p));
      cur = schreier_sims(r.perm_gens, quick);
      have = true;
    }
    spec.matrix_gens = std::move(chosen);
  }
  SchreierSimsOptions full;
  full.known_order = target;
  r.bsgs = schreier_sims(r.perm_gens, full);
  r.order = r.bsgs.order();
  if (r.order != target)
    throw InvalidArgument(spec.name() + ": generators give order " + r.order.get_str() +
                          ", expected " + target.get_str());
  r.spec = std::move(spec);
  return r;
}

Perm OrbitAction::restrict(const Perm &g) const {
  std::vector<Point> img(orbit.size());
  for (std::size_t i = 0; i < orbit.size(); ++i) {
    const std::int32_t k = pos[g[orbit[i]]];
    if (k < 0)
      throw InvalidArgument("permutation does not preserve the orbit");
    img[i] = static_cast<Point>(k);
  }
  return Perm(std::move(img));
}

OrbitAction restrict_to_orbit(const std::vector<Perm> &gens, Point start) {
  if (gens.empty())
    throw InvalidArgument("no generators");
  OrbitAction oa;
  oa.pos.assign(gens.front().degree(), -1);
  oa.pos[start] = 0;
  oa.orbit.push_back(start);
  for (std::size_t k = 0; k < oa.orbit.size(); ++k)
    for (const auto &g : gens) {
      const Point img = g[oa.orbit[k]];
      if (oa.pos[img] < 0) {
        oa.pos[img] = static_cast<std::int32_t>(oa.orbit.size());
        oa.orbit.push_back(img);
      }
    }
  for (const auto &g : gens)
    oa.gens.push_back(oa.restrict(g));
  return oa;
}

std::optional<ConjugacyClass> class_orbit(const Perm &g, const std::vector<Perm> &gens,
                                          std::size_t cap) {
  ConjugacyClass cls;
  cls.elements.push_back(g);
  cls.index.insert(g);
  std::vector<Perm> inv;
  for (const auto &s : gens)
    inv.push_back(s.inverse());
  for (std::size_t k = 0; k < cls.elements.size(); ++k) {
    for (std::size_t s = 0; s < gens.size(); ++s) {
      Perm c = inv[s] * cls.elements[k] * gens[s];
      if (cls.index.count(c))
        continue;
      if (cls.elements.size() >= cap)
        return std::nullopt;
      cls.index.insert(c);
      cls.elements.push_back(std::move(c));
    }
  }
  return cls;
}

namespace {
std::vector<Point> range(Point lo, Point hi) {
  std::vector<Point> r;
  for (Point i = lo; i <= hi; ++i)
    r.push_back(i);
  return r;
}
std::vector<Point> down(Point hi, Point lo) {
  std::vector<Point> r;
  for (Point i = hi; i >= lo; --i)
    r.push_back(i);
  return r;
}
} // namespace

AltTriple alt_triple(unsigned n) {
  if (n < 6)
    throw BadN("alt_triple needs n >= 6");
  AltTriple t;
  if (n % 2 == 1) {
    t.x = Perm::from_cycles(n, {range(1, n - 2)});
    t.y = Perm::from_cycles(n, {down(n, 3)});
    const Perm z = t.x * t.y;
    if (z.cycle_type() != std::vector<std::size_t>{5})
      throw InvalidArgument("xy is not a 5-cycle");
    t.expected_type = {n - 2, n - 2, 5};
  } else {
    t.x = Perm::from_cycles(n, {{1, 2}, down(n, 3)});
    t.y = Perm::from_cycles(n, {range(1, n - 3), {n - 2, n - 1, n}});
    if (t.x * t.y != Perm::from_cycles(n, {{1, 3, n - 2}}))
      throw InvalidArgument("xy is not (1,3,n-2)");
    t.expected_type = {std::lcm<std::uint64_t>(3, n - 3), n - 2, 3};
  }
  BigInt target = 1;
  for (unsigned i = 3; i <= n; ++i)
    target *= i;
  SchreierSimsOptions o;
  o.known_order = target;
  if (schreier_sims({t.x, t.y}, o).order() != target)
    throw InvalidArgument("alt_triple pair does not generate Alt(n)");
  return t;
}

std::vector<Perm> alt_generators(unsigned n) {
  if (n < 3)
    throw BadN("Alt(n) generators need n >= 3");
  const Perm a = Perm::from_cycles(n, {{1, 2, 3}});
  if (n == 3)
    return {a};
  const Perm b = n % 2 == 1 ? Perm::from_cycles(n, {range(1, n)})
                            : Perm::from_cycles(n, {range(2, n)});
  return {a, b};
}

std::vector<Perm> sym_generators(unsigned n) {
  if (n < 2)
    throw BadN("Sym(n) generators need n >= 2");
  return {Perm::from_cycles(n, {{1, 2}}), Perm::from_cycles(n, {range(1, n)})};
}

std::vector<Perm> parse_perm_file(const std::string &text) {
  const auto toks = tokenize(text);
  std::size_t i = 0;
  auto need = [&](const char *what) -> const Token & {
    if (i >= toks.size()) {
      const std::size_t line = toks.empty() ? 1 : toks.back().line;
      const std::size_t col = toks.empty() ? 1 : toks.back().column + toks.back().text.size();
      throw IngestError(line, col, std::string("expected ") + what);
    }
    return toks[i++];
  };
  auto number = [&](const char *what) {
    const Token &t = need(what);
    if (t.text.empty() || !std::all_of(t.text.begin(), t.text.end(),
                                       [](char c) { return std::isdigit(static_cast<unsigned char>(c)); }))
      throw IngestError(t.line, t.column, std::string("expected ") + what + ", got '" + t.text + "'");
    return std::make_pair(std::stoull(t.text), &t);
  };
  const Token &head = need("'perm'");
  if (head.text != "perm")
    throw IngestError(head.line, head.column, "expected 'perm', got '" + head.text + "'");
  const auto degree = number("degree").first;
  const auto count = number("count").first;
  if (degree == 0 || degree > (1ULL << 31))
    throw IngestError(head.line, head.column, "degree out of range");
  std::vector<Perm> out;
  for (std::uint64_t g = 0; g < count; ++g) {
    std::vector<Point> img(degree);
    std::vector<char> seen(degree, 0);
    for (std::uint64_t k = 0; k < degree; ++k) {
      auto [v, tok] = number("image");
      if (v < 1 || v > degree)
        throw IngestError(tok->line, tok->column, "image " + tok->text + " out of range");
      if (seen[v - 1])
        throw IngestError(tok->line, tok->column, "repeated image " + tok->text);
      seen[v - 1] = 1;
      img[k] = static_cast<Point>(v - 1);
    }
    out.emplace_back(std::move(img));
  }
  if (i < toks.size())
    throw IngestError(toks[i].line, toks[i].column, "trailing data '" + toks[i].text + "'");
  return out;
}

} // namespace bv::permgrp
