#include "bv/covers.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <sstream>

#include "bv/error.hpp"

namespace bv::covers {

namespace {

std::uint32_t mulmod(std::uint32_t a, std::uint32_t b, std::uint32_t p) {
  return static_cast<std::uint32_t>(static_cast<std::uint64_t>(a) * b % p);
}

std::uint32_t powmod(std::uint32_t a, std::uint64_t e, std::uint32_t p) {
  std::uint32_t r = 1 % p;
  while (e) {
    if (e & 1)
      r = mulmod(r, a, p);
    a = mulmod(a, a, p);
    e >>= 1;
  }
  return r;
}

} // namespace

std::shared_ptr<const CliffordCtx> CliffordCtx::make(unsigned n, std::uint32_t p) {
  if (n < 1 || n > 20)
    throw RankOutOfRange("Clifford rank must be in 1..20");
  if (p < 3 || !numtheory::is_prime(BigInt(p)))
    throw BadField("Clifford field must have odd prime order");
  std::shared_ptr<CliffordCtx> c(new CliffordCtx);
  c->n_ = n;
  c->p_ = p;
  for (std::uint32_t r = 1; r < p; ++r)
    if (mulmod(r, r, p) == 2) {
      c->sqrt2_ = r;
      break;
    }
  if (c->sqrt2_ == 0)
    throw BadField("2 is not a square mod " + std::to_string(p));
  c->inv_sqrt2_ = powmod(c->sqrt2_, p - 2, p);
  c->above_.resize(std::size_t{1} << n);
  for (std::uint32_t s = 0; s < c->above_.size(); ++s) {
    std::uint32_t mask = 0, parity = 0;
    for (unsigned j = n; j-- > 0;) {
      if (parity)
        mask |= 1u << j;
      parity ^= (s >> j) & 1u;
    }
    c->above_[s] = mask;
  }
  return c;
}

bool CliffordCtx::negative(std::uint32_t s, std::uint32_t t) const {
  return (std::popcount(t & above_[s]) + std::popcount(s & t)) & 1;
}

CoverElement::CoverElement(std::shared_ptr<const CliffordCtx> ctx, std::uint32_t scalar)
    : ctx_(std::move(ctx)) {
  scalar %= ctx_->p();
  if (scalar)
    terms_.emplace_back(0u, scalar);
}

CoverElement CoverElement::monomial(std::shared_ptr<const CliffordCtx> ctx, std::uint32_t mask,
                                    std::uint32_t coeff) {
  CoverElement u(std::move(ctx), 0);
  coeff %= u.ctx_->p();
  if (coeff)
    u.terms_.emplace_back(mask, coeff);
  return u;
}

CoverElement CoverElement::operator*(const CoverElement &o) const {
  const CliffordCtx &c = *ctx_;
  const std::uint32_t p = c.p();
  thread_local std::vector<std::uint32_t> acc;
  thread_local std::vector<char> mark;
  thread_local std::vector<std::uint32_t> touched;
  const std::size_t dim = std::size_t{1} << c.rank();
  if (acc.size() < dim) {
    acc.assign(dim, 0);
    mark.assign(dim, 0);
  }
  touched.clear();
  for (const auto &[s, a] : terms_)
    for (const auto &[t, b] : o.terms_) {
      const std::uint32_t m = s ^ t;
      std::uint32_t v = mulmod(a, b, p);
      if (c.negative(s, t))
        v = p - v;
      if (!mark[m]) {
        mark[m] = 1;
        touched.push_back(m);
      }
      acc[m] = (acc[m] + v) % p;
    }
  CoverElement r(ctx_, 0);
  std::sort(touched.begin(), touched.end());
  for (std::uint32_t m : touched) {
    if (acc[m])
      r.terms_.emplace_back(m, acc[m]);
    acc[m] = 0;
    mark[m] = 0;
  }
  return r;
}

CoverElement CoverElement::operator+(const CoverElement &o) const {
  const std::uint32_t p = ctx_->p();
  CoverElement r(ctx_, 0);
  auto i = terms_.begin(), j = o.terms_.begin();
  while (i != terms_.end() || j != o.terms_.end()) {
    if (j == o.terms_.end() || (i != terms_.end() && i->first < j->first)) {
      r.terms_.push_back(*i++);
    } else if (i == terms_.end() || j->first < i->first) {
      r.terms_.push_back(*j++);
    } else {
      const std::uint32_t v = (i->second + j->second) % p;
      if (v)
        r.terms_.emplace_back(i->first, v);
      ++i;
      ++j;
    }
  }
  return r;
}

CoverElement CoverElement::operator-() const {
  CoverElement r = *this;
  for (auto &t : r.terms_)
    t.second = ctx_->p() - t.second;
  return r;
}

bool CoverElement::is_scalar(std::uint32_t c) const {
  c %= ctx_->p();
  if (c == 0)
    return terms_.empty();
  return terms_.size() == 1 && terms_[0].first == 0 && terms_[0].second == c;
}

CoverElement CoverElement::inverse() const {
  if (terms_.empty())
    throw InvalidArgument("zero is not invertible");
  const std::uint32_t p = ctx_->p();
  const int parity = std::popcount(terms_.front().first) & 1;
  CoverElement r = *this;
  for (auto &[m, v] : r.terms_) {
    const unsigned k = static_cast<unsigned>(std::popcount(m));
    const bool flip = ((k * (k - (k ? 1 : 0)) / 2) & 1) != static_cast<unsigned>(parity);
    if (flip)
      v = p - v;
  }
  const CoverElement prod = (*this) * r;
  if (prod.terms_.size() != 1 || prod.terms_[0].first != 0)
    throw InvalidArgument("element is not a product of vectors");
  const std::uint32_t s = powmod(prod.terms_[0].second, p - 2, p);
  for (auto &t : r.terms_)
    t.second = mulmod(t.second, s, p);
  return r;
}

CoverElement CoverElement::pow(long long e) const {
  CoverElement base = e < 0 ? inverse() : *this;
  unsigned long long k = e < 0 ? 0ULL - static_cast<unsigned long long>(e) : e;
  CoverElement r(ctx_, 1);
  while (k) {
    if (k & 1)
      r = r * base;
    k >>= 1;
    if (k)
      base = base * base;
  }
  return r;
}

std::size_t CoverElement::hash() const {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (const auto &[m, v] : terms_) {
    h ^= (static_cast<std::uint64_t>(m) << 8) | v;
    h *= 0x100000001b3ULL;
  }
  return static_cast<std::size_t>(h);
}

std::string CoverElement::to_string() const {
  if (terms_.empty())
    return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto &[m, v] : terms_) {
    if (!first)
      os << " + ";
    first = false;
    os << v;
    if (m) {
      os << "*e";
      bool f = true;
      for (unsigned i = 0; i < ctx_->rank(); ++i)
        if (m >> i & 1) {
          os << (f ? "" : ".") << i + 1;
          f = false;
        }
    }
  }
  return os.str();
}

std::uint64_t Lift::order() const {
  const std::uint64_t o = p.order();
  const CoverElement w = u.pow(static_cast<long long>(o));
  if (w.is_one())
    return o;
  if (w.is_scalar(u.ctx()->p() - 1))
    return 2 * o;
  throw InvalidArgument("projection is inconsistent with the algebra element");
}

Lift Cover::word(const std::vector<unsigned> &idx) const {
  Lift r = one;
  for (unsigned i : idx)
    r = r * gen(i);
  return r;
}

Lift Cover::lift(const Perm &p) const {
  // Sort the image list by adjacent swaps; each swap is s_i * (current).
  std::vector<permgrp::Point> img = p.images();
  std::vector<unsigned> letters;
  const unsigned n = this->n();
  for (unsigned pass = 0; pass < n; ++pass)
    for (unsigned i = 0; i + 1 < n; ++i)
      if (img[i] > img[i + 1]) {
        std::swap(img[i], img[i + 1]);
        letters.push_back(i + 1);
      }
  Lift r = word(letters);
  if (r.p != p)
    throw InvalidArgument("lift does not project to the permutation");
  return r;
}

Cover build_cover(unsigned n) {
  if (n < 3 || n > 14)
    throw RankOutOfRange("cover rank must be in 3..14, got " + std::to_string(n));
  Cover c;
  c.ctx = CliffordCtx::make(n);
  const auto &ctx = c.ctx;
  c.one = {CoverElement(ctx, 1), Perm(n)};
  c.z = {CoverElement(ctx, ctx->p() - 1), Perm(n)};
  for (unsigned i = 1; i < n; ++i) {
    const CoverElement u =
        CoverElement::monomial(ctx, 1u << (i - 1), ctx->inv_sqrt2()) +
        CoverElement::monomial(ctx, 1u << i, ctx->p() - ctx->inv_sqrt2());
    c.t.push_back({u, Perm::from_cycles(n, {{i, i + 1}})});
  }
  auto check = [&](bool ok, const std::string &what) {
    if (!ok)
      throw InvalidArgument("presentation relation fails: " + what);
  };
  check((c.z.u * c.z.u).is_one(), "z^2 = 1");
  for (unsigned i = 1; i < n; ++i) {
    check(c.gen(i).u * c.gen(i).u == c.z.u, "t_i^2 = z");
    for (unsigned j = i + 2; j < n; ++j) {
      const CoverElement tt = c.gen(i).u * c.gen(j).u;
      check(tt * tt == c.z.u, "(t_i t_j)^2 = z");
    }
    if (i + 1 < n)
      check(c.gen(i).u * c.gen(i + 1).u * c.gen(i).u ==
                c.gen(i + 1).u * c.gen(i).u * c.gen(i + 1).u,
            "braid relation");
  }
  return c;
}

std::uint64_t cover_order(const CoverElement &u, std::uint64_t bound) {
  if (bound == 0)
    bound = 4ULL * u.ctx()->rank();
  CoverElement w = u;
  for (std::uint64_t k = 1; k <= bound; ++k) {
    if (w.is_one())
      return k;
    w = w * u;
  }
  throw OrderExceedsBound("element order exceeds " + std::to_string(bound));
}

namespace {
std::vector<unsigned> span(unsigned lo, unsigned hi) {
  std::vector<unsigned> v;
  for (unsigned i = lo; i <= hi; ++i)
    v.push_back(i);
  return v;
}
} // namespace

Lift cover_x(const Cover &c) {
  auto idx = span(1, c.n() - 1);
  std::reverse(idx.begin(), idx.end());
  return c.word(idx);
}

Lift cover_y(const Cover &c) {
  const Lift g = c.word(span(2, c.n() - 1));
  return c.gen(1) * c.gen(1).conj(g) * c.z;
}

Order3Row order3_xsimz_suite(unsigned n) {
  if (n < 3 || n > 12)
    throw RankOutOfRange("order3 suite covers 3 <= n <= 12");
  const Cover c = build_cover(n);
  const Lift x = cover_x(c), y = cover_y(c);
  Order3Row row;
  row.n = n;
  row.order_y = cover_order(y.u);
  row.expected = n % 2 ? 3 : 6;
  row.xsimz = (x * y).u == x.conj(c.word(span(2, n - 1))).u;
  return row;
}

namespace {

CoverTriple make_triple(std::string label, const Lift &x, const Lift &y) {
  CoverTriple t;
  t.label = std::move(label);
  t.x = x;
  t.y = y;
  t.xy = x * y;
  t.type = {x.order(), y.order(), t.xy.order()};
  return t;
}

BigInt alt_order(unsigned n) {
  BigInt f = 1;
  for (unsigned i = 3; i <= n; ++i)
    f *= i;
  return f;
}

BigInt projected_order(const Lift &x, const Lift &y, unsigned n) {
  permgrp::SchreierSimsOptions o;
  o.known_order = alt_order(n);
  return permgrp::schreier_sims({x.p, y.p}, o).order();
}

/// Short words in x, y and their inverses; the first w with w^o(~w) = z.
std::string find_z_word(const Lift &x, const Lift &y) {
  const std::array<std::pair<const char *, Lift>, 4> letters = {
      {{"x", x}, {"y", y}, {"x^-1", x.inverse()}, {"y^-1", y.inverse()}}};
  std::vector<std::pair<std::string, Lift>> layer = {{"", Lift{}}};
  for (unsigned len = 1; len <= 4; ++len) {
    std::vector<std::pair<std::string, Lift>> next;
    for (const auto &[name, w] : layer)
      for (const auto &[ln, l] : letters) {
        Lift v = name.empty() ? l : w * l;
        const std::uint64_t o = v.p.order();
        const std::string vn = name + ln;
        if (v.u.pow(static_cast<long long>(o)).is_scalar(x.u.ctx()->p() - 1))
          return "(" + vn + ")^" + std::to_string(o);
        next.emplace_back(vn, std::move(v));
      }
    layer = std::move(next);
  }
  return {};
}

} // namespace

NoddResult nodd_triple(unsigned n) {
  if (n % 2 == 0 || n < 7 || n > 13)
    throw BadN("nodd_triple needs odd n with 7 <= n <= 13");
  const Cover c = build_cover(n);
  const Lift x = cover_x(c), y = cover_y(c), xz = x * c.z;
  CoverTriple a = make_triple("(x,y,xy)", x, y);
  CoverTriple b = make_triple("(xz,y,xyz)", xz, y);
  const std::vector<std::uint64_t> want = {n, 3, n};
  NoddResult r;
  r.n = n;
  if (a.type == want) {
    r.chosen = a;
    r.other = b;
  } else if (b.type == want) {
    r.chosen = b;
    r.other = a;
  } else {
    throw InvalidArgument("neither candidate triple has type (n,3,n)");
  }
  r.projected_order = projected_order(x, y, n);
  const std::string sn = std::to_string(n);
  const std::vector<std::pair<std::string, Lift>> words = {
      {"x^" + sn, x.pow(n)},          {"(xz)^" + sn, xz.pow(n)},
      {"y^3", y.pow(3)},              {"(xy)^" + sn, (x * y).pow(n)},
      {"(xyz)^" + sn, (x * y * c.z).pow(n)}};
  for (const auto &[name, w] : words)
    if (w.u == c.z.u) {
      r.z_word = name;
      break;
    }
  if (r.z_word.empty())
    throw ZNotExhibited("no listed word evaluates to z for n = " + sn);
  return r;
}

NevenResult neven_search(unsigned n, std::uint64_t seed, std::uint64_t budget) {
  if (n % 2 || n < 6 || n > 14)
    throw BadN("neven_search needs even n with 6 <= n <= 14");
  const Cover c = build_cover(n);
  NevenResult r;
  r.n = n;
  const BigInt target = alt_order(n);
  const std::vector<std::uint64_t> want = {5, n - 1, n - 1};

  auto odd_lift = [&](const Perm &p) {
    Lift l = c.lift(p);
    return l.order() % 2 ? l : l * c.z;
  };
  auto attempt = [&](const Perm &px, const Perm &py) {
    ++r.attempts;
    if ((px * py).cycle_type() != std::vector<std::size_t>{n - 1})
      return false;
    if (n == 6 && (px * py).cycle_type() != std::vector<std::size_t>{5})
      return false;
    const Lift x = odd_lift(px), y = odd_lift(py);
    CoverTriple t = make_triple("(x,y,xy)", x, y);
    if (t.type != want)
      return false;
    const BigInt ord = projected_order(x, y, n);
    if (ord != target)
      return false;
    const std::string zw = find_z_word(x, y);
    if (zw.empty())
      return false;
    r.found = true;
    r.triple = std::move(t);
    r.projected_order = ord;
    r.z_word = zw;
    return true;
  };

  const Perm px = Perm::from_cycles(n, {{1, 2, 3, 4, 5}});
  std::vector<permgrp::Point> cyc = {2, 3, 5, 4};
  for (unsigned i = 7; i <= n; ++i)
    cyc.push_back(i);
  cyc.push_back(6);
  const Perm py = Perm::from_cycles(n, {cyc});
  if (attempt(px, py)) {
    r.explicit_pair = true;
    return r;
  }
  auto rs = permgrp::make_random_source(permgrp::alt_generators(n), seed);
  while (r.attempts < budget) {
    const Perm g = permgrp::random_element(rs);
    if (attempt(px, py.conj(g)))
      return r;
  }
  return r;
}

} // namespace bv::covers
