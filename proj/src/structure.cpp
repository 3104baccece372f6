#include "bv/structure.hpp"

#include <algorithm>
#include <atomic>
#include <cctype>
#include <map>
#include <mutex>
#include <numeric>
#include <thread>
#include <unordered_map>

#include "bv/error.hpp"

namespace bv::structure {

std::string to_string(const Type &t) {
  return "(" + std::to_string(t[0]) + "," + std::to_string(t[1]) + "," + std::to_string(t[2]) +
         ")";
}

bool is_hyperbolic(const Type &t) {
  const BigInt l = static_cast<unsigned long>(t[0]), m = static_cast<unsigned long>(t[1]),
               n = static_cast<unsigned long>(t[2]);
  return l * m + m * n + n * l < l * m * n;
}

bool same_type(const Type &a, const Type &b) {
  Type x = a, y = b;
  std::sort(x.begin(), x.end());
  std::sort(y.begin(), y.end());
  return x == y;
}

// --- GroupHandle -----------------------------------------------------------

GroupHandle GroupHandle::from_perms(std::string name, std::vector<Perm> gens,
                                    std::optional<BigInt> order) {
  if (gens.empty())
    throw InvalidArgument("group needs at least one generator");
  auto d = std::make_shared<Data>();
  d->name = std::move(name);
  d->gens = std::move(gens);
  permgrp::SchreierSimsOptions o;
  o.known_order = order;
  d->bsgs = permgrp::schreier_sims(d->gens, o);
  d->order = d->bsgs.order();
  if (order && d->order != *order)
    throw InvalidArgument(d->name + ": generators give order " + d->order.get_str() +
                          ", declared " + order->get_str());
  GroupHandle g;
  g.d_ = std::move(d);
  return g;
}

GroupHandle GroupHandle::from_realization(permgrp::Realization r, bool restrict_orbit) {
  auto d = std::make_shared<Data>();
  d->name = r.spec.name();
  d->action = std::make_shared<permgrp::MatrixAction>(r.spec.matrix_field(), r.spec.d, r.action);
  d->gens = std::move(r.perm_gens);
  d->order = r.order;
  if (restrict_orbit) {
    d->orbit = permgrp::restrict_to_orbit(d->gens, 0);
    d->gens = d->orbit->gens;
    permgrp::SchreierSimsOptions o;
    o.known_order = d->order;
    d->bsgs = permgrp::schreier_sims(d->gens, o);
    if (d->bsgs.order() != d->order)
      throw InvalidArgument(d->name + ": orbit action is not faithful");
  } else {
    d->bsgs = std::move(r.bsgs);
  }
  d->spec = std::move(r.spec);
  GroupHandle g;
  g.d_ = std::move(d);
  return g;
}

Perm GroupHandle::from_matrix(const matgrp::Matrix &m) const {
  if (!d_->action)
    throw InvalidArgument(name() + " has no matrix action");
  Perm p = d_->action->image(m);
  if (d_->action->action() == permgrp::Action::NonzeroVectors) {
    const BigInt mo = matgrp::order_of_matrix(m);
    if (mo != BigInt(static_cast<unsigned long>(p.order())))
      throw InvalidArgument("matrix and permutation orders disagree");
  }
  if (d_->orbit)
    p = d_->orbit->restrict(p);
  return p;
}

permgrp::RandomSource GroupHandle::random_source(std::uint64_t seed) const {
  return permgrp::make_random_source(d_->gens, seed);
}

// --- triples ---------------------------------------------------------------

std::string to_string(TripleFailure f) {
  switch (f) {
  case TripleFailure::None:
    return "None";
  case TripleFailure::NotInGroup:
    return "NotInGroup";
  case TripleFailure::NotGenerating:
    return "NotGenerating";
  case TripleFailure::NotHyperbolic:
    return "NotHyperbolic";
  }
  return "?";
}

std::string TripleCheck::diagnosis() const {
  switch (failure) {
  case TripleFailure::None:
    return "ok";
  case TripleFailure::NotInGroup:
    return "element outside the group";
  case TripleFailure::NotGenerating:
    return "NotGenerating(" + subgroup_order.get_str() + ")";
  case TripleFailure::NotHyperbolic: {
    const std::uint64_t l = type[0], m = type[1], n = type[2];
    const std::uint64_t num = m * n + l * n + l * m, den = l * m * n;
    const std::uint64_t g = std::gcd(num, den);
    return "NotHyperbolic(" + std::to_string(num / g) + "/" + std::to_string(den / g) + ")";
  }
  }
  return "?";
}

TripleCheck verify_triple(const GroupHandle &g, const Perm &x, const Perm &y,
                          std::uint64_t bsgs_seed) {
  TripleCheck r;
  if (!g.contains(x) || !g.contains(y)) {
    r.failure = TripleFailure::NotInGroup;
    return r;
  }
  const Perm z = (x * y).inverse();
  r.type = {x.order(), y.order(), z.order()};
  permgrp::SchreierSimsOptions o;
  o.known_order = g.order();
  o.seed = bsgs_seed;
  r.subgroup_order = permgrp::schreier_sims({x, y}, o).order();
  if (r.subgroup_order != g.order()) {
    r.failure = TripleFailure::NotGenerating;
    return r;
  }
  if (!is_hyperbolic(r.type)) {
    r.failure = TripleFailure::NotHyperbolic;
    return r;
  }
  r.triple = HyperbolicTriple{x, y, z, r.type, r.subgroup_order};
  return r;
}

// --- condition (iii) ---------------------------------------------------------

std::string to_string(CertKind k) {
  switch (k) {
  case CertKind::CoprimeOrders:
    return "CoprimeOrders";
  case CertKind::ClassChecked:
    return "ClassChecked";
  case CertKind::Violation:
    return "Violation";
  case CertKind::Undecided:
    return "Undecided";
  }
  return "?";
}

namespace {

std::vector<std::uint64_t> prime_divisors(std::uint64_t n) {
  std::vector<std::uint64_t> ps;
  const auto f = numtheory::factorize(n);
  for (const auto &pp : f.factors())
    ps.push_back(pp.prime.get_ui());
  return ps;
}

/// g with a^g = b, by breadth-first search over the class of a.
std::optional<Perm> conjugator(const Perm &a, const Perm &b, const std::vector<Perm> &gens,
                               std::size_t cap) {
  std::unordered_map<Perm, Perm, permgrp::PermHash> seen;
  std::vector<Perm> queue = {a};
  seen.emplace(a, Perm(a.degree()));
  for (std::size_t k = 0; k < queue.size(); ++k) {
    const Perm cur = queue[k];
    const Perm via = seen.at(cur);
    if (cur == b)
      return via;
    for (const auto &s : gens) {
      Perm c = cur.conj(s);
      if (seen.count(c))
        continue;
      if (seen.size() >= cap)
        return std::nullopt;
      seen.emplace(c, via * s);
      queue.push_back(std::move(c));
    }
  }
  return std::nullopt;
}

} // namespace

Condition3 condition_iii(const GroupHandle &g, const HyperbolicTriple &t1,
                         const HyperbolicTriple &t2, std::size_t cap) {
  Condition3 c;
  const BigInt p1 = BigInt(static_cast<unsigned long>(t1.type[0])) * t1.type[1] * t1.type[2];
  const BigInt p2 = BigInt(static_cast<unsigned long>(t2.type[0])) * t2.type[1] * t2.type[2];
  BigInt common;
  mpz_gcd(common.get_mpz_t(), p1.get_mpz_t(), p2.get_mpz_t());
  if (common == 1) {
    c.kind = CertKind::CoprimeOrders;
    return c;
  }
  const std::array<std::pair<const char *, const Perm *>, 3> a = {
      {{"x1", &t1.x}, {"y1", &t1.y}, {"z1", &t1.z}}};
  const std::array<std::pair<const char *, const Perm *>, 3> b = {
      {{"x2", &t2.x}, {"y2", &t2.y}, {"z2", &t2.z}}};
  std::map<std::pair<int, std::uint64_t>, std::optional<permgrp::ConjugacyClass>> classes;
  bool undecided = false;
  for (int i = 0; i < 3; ++i) {
    const Perm &u = *a[i].second;
    const std::uint64_t ou = u.order();
    for (int j = 0; j < 3; ++j) {
      const Perm &v = *b[j].second;
      const std::uint64_t ov = v.order();
      for (std::uint64_t r : prime_divisors(std::gcd(ou, ov))) {
        const Perm pu = u.pow(static_cast<long long>(ou / r));
        const Perm pv = v.pow(static_cast<long long>(ov / r));
        const auto ct = pu.cycle_type();
        PowerCheck chk{a[i].first, b[j].first, r, "cycle-type"};
        for (std::uint64_t k = 1; k < r; ++k) {
          const Perm w = pv.pow(static_cast<long long>(k));
          if (w.cycle_type() != ct)
            continue;
          auto key = std::make_pair(i, r);
          if (!classes.count(key))
            classes[key] = permgrp::class_orbit(pu, g.gens(), cap);
          const auto &cls = classes[key];
          if (!cls) {
            chk.verdict = "cap";
            undecided = true;
            break;
          }
          chk.verdict = "class";
          if (cls->contains(w)) {
            chk.verdict = "conjugate";
            c.checks.push_back(chk);
            c.kind = CertKind::Violation;
            auto h = conjugator(pu, w, g.gens(), cap);
            c.witness = std::array<Perm, 3>{pu, w, h ? *h : Perm(pu.degree())};
            return c;
          }
        }
        c.checks.push_back(chk);
      }
    }
  }
  c.kind = undecided ? CertKind::Undecided : CertKind::ClassChecked;
  return c;
}

// --- searches ------------------------------------------------------------------

std::uint64_t worker_seed(std::uint64_t master, unsigned worker) {
  // splitmix64 step
  std::uint64_t z = master + 0x9e3779b97f4a7c15ULL * (worker + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

namespace {

/// Runs body(worker, iteration, rs) for each worker's share of the budget;
/// the least worker index that succeeds wins.
template <class Result, class Body>
Result run_workers(const GroupHandle &g, const SearchOptions &opts, Body body) {
  const unsigned w = std::max(1u, opts.workers);
  const std::uint64_t share = (opts.budget + w - 1) / w;
  std::vector<std::optional<Result>> found(w);
  std::vector<std::uint64_t> attempts(w, 0);
  std::atomic<unsigned> best{w};
  auto work = [&](unsigned k) {
    auto rs = g.random_source(worker_seed(opts.seed, k));
    for (std::uint64_t it = 1; it <= share; ++it) {
      if (best.load() < k)
        return;
      ++attempts[k];
      if (auto r = body(rs)) {
        r->log.worker = k;
        r->log.iteration = it;
        found[k] = std::move(r);
        unsigned cur = best.load();
        while (k < cur && !best.compare_exchange_weak(cur, k)) {
        }
        return;
      }
    }
  };
  if (w == 1) {
    work(0);
  } else {
    std::vector<std::thread> threads;
    for (unsigned k = 0; k < w; ++k)
      threads.emplace_back(work, k);
    for (auto &t : threads)
      t.join();
  }
  Result out;
  out.log.attempts = std::accumulate(attempts.begin(), attempts.end(), std::uint64_t{0});
  for (unsigned k = 0; k < w; ++k)
    if (found[k]) {
      out = std::move(*found[k]);
      // workers below k ran their full share; later ones stop at timing-dependent points
      out.log.attempts = k * share + out.log.iteration;
      break;
    }
  out.log.seed = opts.seed;
  return out;
}

} // namespace

GowResult gow_search(const GroupHandle &g, const Perm &x0,
                     const std::variant<std::uint64_t, Perm> &target, const SearchOptions &opts) {
  if (x0.is_identity())
    throw InvalidArgument("gow_search needs a nontrivial source element");
  std::optional<permgrp::ConjugacyClass> target_class;
  std::vector<std::size_t> target_ct;
  if (auto *z0 = std::get_if<Perm>(&target)) {
    target_class = permgrp::class_orbit(*z0, g.gens(), 1000000);
    if (!target_class)
      throw CapExceeded("target class exceeds 10^6 elements");
    target_ct = z0->cycle_type();
  }
  return run_workers<GowResult>(g, opts, [&](permgrp::RandomSource &rs) -> std::optional<GowResult> {
    const Perm h = rs.next();
    const Perm y = x0.conj(h);
    const Perm s = x0 * y;
    if (target_class) {
      if (s.cycle_type() != target_ct || !target_class->contains(s))
        return std::nullopt;
    } else if (s.order() != std::get<std::uint64_t>(target)) {
      return std::nullopt;
    }
    GowResult r;
    if (opts.require_generation) {
      auto chk = verify_triple(g, x0, y);
      if (!chk.ok())
        return std::nullopt;
      r.triple = chk.triple;
    }
    r.found = true;
    r.x = x0;
    r.y = y;
    r.g = h;
    return r;
  });
}

TypeSearchResult search_by_type(const GroupHandle &g, const Type &type,
                                const SearchOptions &opts) {
  for (auto o : type)
    if (o < 2)
      throw InvalidArgument("type entries must be at least 2");
  const auto [l, m, n] = type;
  return run_workers<TypeSearchResult>(
      g, opts, [&](permgrp::RandomSource &rs) -> std::optional<TypeSearchResult> {
        const Perm u = rs.next();
        const std::uint64_t ou = u.order();
        if (ou % l)
          return std::nullopt;
        const Perm v = rs.next();
        const std::uint64_t ov = v.order();
        if (ov % m)
          return std::nullopt;
        const Perm x = u.pow(static_cast<long long>(ou / l));
        const Perm y = v.pow(static_cast<long long>(ov / m));
        if ((x * y).order() != n)
          return std::nullopt;
        TypeSearchResult r;
        if (opts.require_generation) {
          auto chk = verify_triple(g, x, y);
          if (!chk.ok())
            return std::nullopt;
          r.triple = chk.triple;
        } else {
          r.triple = HyperbolicTriple{x, y, (x * y).inverse(), type, BigInt(0)};
        }
        r.found = true;
        return r;
      });
}

std::uint64_t structure_constant(const GroupHandle &g, const Perm &c1, const Perm &c2,
                                 const Perm &z, std::size_t cap) {
  const auto k1 = permgrp::class_orbit(c1, g.gens(), cap);
  if (!k1)
    throw CapExceeded("class of c1 exceeds cap");
  std::optional<permgrp::ConjugacyClass> k2;
  const auto ct2 = c2.cycle_type();
  std::uint64_t count = 0;
  for (const auto &a : k1->elements) {
    const Perm b = a.inverse() * z;
    if (b.cycle_type() != ct2)
      continue;
    if (!k2) {
      k2 = permgrp::class_orbit(c2, g.gens(), cap);
      if (!k2)
        throw CapExceeded("class of c2 exceeds cap");
    }
    if (k2->contains(b))
      ++count;
  }
  return count;
}

// --- words -------------------------------------------------------------------

std::string WordExpr::to_string() const {
  std::string s;
  if (gen >= 0) {
    s = gen == 0 ? "a" : "b";
  } else {
    for (const auto &f : factors)
      s += f.to_string();
    if (exponent != 1)
      s = "(" + s + ")";
  }
  if (exponent != 1)
    s += "^" + std::to_string(exponent);
  return s;
}

namespace {

struct WordParser {
  const std::string &t;
  std::size_t i = 0;

  void skip() {
    while (i < t.size() && std::isspace(static_cast<unsigned char>(t[i])))
      ++i;
  }
  bool at_atom() {
    skip();
    return i < t.size() && (t[i] == 'a' || t[i] == 'b' || t[i] == '(');
  }
  WordExpr word() {
    WordExpr w;
    if (!at_atom())
      throw ParseError(i, "atom");
    while (at_atom())
      w.factors.push_back(term());
    if (w.factors.size() == 1)
      return std::move(w.factors.front());
    return w;
  }
  WordExpr term() {
    WordExpr a;
    skip();
    if (t[i] == '(') {
      ++i;
      WordExpr inner = word();
      skip();
      if (i >= t.size() || t[i] != ')')
        throw ParseError(i, ")");
      ++i;
      if (inner.gen >= 0 || inner.exponent != 1) {
        a.factors.push_back(std::move(inner));
      } else {
        a = std::move(inner);
      }
    } else {
      a.gen = t[i] == 'a' ? 0 : 1;
      ++i;
    }
    skip();
    if (i < t.size() && t[i] == '^') {
      ++i;
      skip();
      const std::size_t start = i;
      bool neg = false;
      if (i < t.size() && t[i] == '-') {
        neg = true;
        ++i;
      }
      const std::size_t digits = i;
      while (i < t.size() && std::isdigit(static_cast<unsigned char>(t[i])))
        ++i;
      if (i == digits)
        throw ParseError(start, "exponent");
      long long e = std::stoll(t.substr(digits, i - digits));
      if (e == 0)
        throw ParseError(start, "nonzero exponent");
      e = neg ? -e : e;
      if (a.exponent != 1) {
        WordExpr wrap;
        wrap.factors.push_back(std::move(a));
        a = std::move(wrap);
      }
      a.exponent = e;
    }
    return a;
  }
};

} // namespace

WordExpr parse_word(const std::string &text) {
  WordParser p{text};
  WordExpr w = p.word();
  p.skip();
  if (p.i < text.size())
    throw ParseError(p.i, text[p.i] == ')' ? "end of word" : "atom");
  return w;
}

Perm evaluate_word(const Perm &a, const Perm &b, const WordExpr &w) {
  Perm r;
  if (w.gen >= 0) {
    r = w.gen == 0 ? a : b;
  } else {
    r = Perm(a.degree());
    for (const auto &f : w.factors)
      r = r * evaluate_word(a, b, f);
  }
  return w.exponent == 1 ? r : r.pow(w.exponent);
}

// --- exhaustive ---------------------------------------------------------------

ExhaustiveResult exhaustive_beauville(const GroupHandle &g, std::uint64_t max_order) {
  if (g.order() > BigInt(static_cast<unsigned long>(max_order)))
    throw InvalidArgument("group too large for exhaustive search");
  ExhaustiveResult res;
  res.group_order = g.order().get_ui();
  // Elements by closure, then classes.
  std::vector<Perm> elems = {g.identity()};
  std::unordered_map<Perm, std::size_t, permgrp::PermHash> index = {{elems[0], 0}};
  for (std::size_t k = 0; k < elems.size(); ++k)
    for (const auto &s : g.gens()) {
      Perm e = elems[k] * s;
      if (!index.count(e)) {
        index.emplace(e, elems.size());
        elems.push_back(std::move(e));
      }
    }
  std::vector<int> cls(elems.size(), -1);
  std::vector<std::size_t> reps;
  for (std::size_t k = 0; k < elems.size(); ++k) {
    if (cls[k] >= 0)
      continue;
    const auto orbit = permgrp::class_orbit(elems[k], g.gens(), elems.size());
    for (const auto &c : orbit->elements)
      cls[index.at(c)] = static_cast<int>(reps.size());
    reps.push_back(k);
  }
  res.classes = reps.size();
  const std::size_t words = (reps.size() + 63) / 64;
  using Mask = std::vector<std::uint64_t>;
  auto power_mask = [&](const Perm &u) {
    Mask m(words, 0);
    const std::uint64_t o = u.order();
    Perm w = u;
    for (std::uint64_t k = 1; k < o; ++k, w = w * u) {
      const int c = cls[index.at(w)];
      m[c / 64] |= 1ULL << (c % 64);
    }
    return m;
  };
  std::vector<Mask> elem_mask(elems.size());
  for (std::size_t k = 0; k < elems.size(); ++k)
    elem_mask[k] = power_mask(elems[k]);
  std::vector<Mask> masks;
  for (std::size_t r : reps) {
    const Perm &x = elems[r];
    if (x.is_identity())
      continue;
    for (const auto &y : elems) {
      if (y.is_identity())
        continue;
      const Perm z = (x * y).inverse();
      const Type t = {x.order(), y.order(), z.order()};
      if (!is_hyperbolic(t))
        continue;
      if (!verify_triple(g, x, y).ok())
        continue;
      ++res.hyperbolic_triples;
      Mask m = elem_mask[r];
      const Mask &my = elem_mask[index.at(y)], &mz = elem_mask[index.at(z)];
      for (std::size_t w = 0; w < words; ++w)
        m[w] |= my[w] | mz[w];
      if (std::find(masks.begin(), masks.end(), m) == masks.end())
        masks.push_back(std::move(m));
    }
  }
  for (std::size_t i = 0; i < masks.size() && !res.structure_exists; ++i)
    for (std::size_t j = i; j < masks.size(); ++j) {
      bool disjoint = true;
      for (std::size_t w = 0; w < words && disjoint; ++w)
        disjoint = (masks[i][w] & masks[j][w]) == 0;
      if (disjoint) {
        res.structure_exists = true;
        break;
      }
    }
  return res;
}

} // namespace bv::structure
