#include "bv/ffield.hpp"

#include <map>
#include <memory>
#include <mutex>
#include <sstream>

#include "bv/error.hpp"

namespace bv::ffield {

namespace {

using Poly = std::vector<std::uint64_t>;

std::uint64_t mulmod(std::uint64_t a, std::uint64_t b, std::uint64_t p) {
  return static_cast<std::uint64_t>(static_cast<unsigned __int128>(a) * b % p);
}

std::uint64_t powmod(std::uint64_t b, std::uint64_t e, std::uint64_t p) {
  std::uint64_t r = 1 % p;
  b %= p;
  while (e) {
    if (e & 1)
      r = mulmod(r, b, p);
    b = mulmod(b, b, p);
    e >>= 1;
  }
  return r;
}

void trim(Poly &f) {
  while (!f.empty() && f.back() == 0)
    f.pop_back();
}

// Remainder of f modulo monic-or-not g over GF(p).
Poly poly_mod(Poly f, const Poly &g, std::uint64_t p) {
  trim(f);
  const std::size_t dg = g.size() - 1;
  const std::uint64_t lead_inv = powmod(g.back(), p - 2, p);
  while (f.size() >= g.size()) {
    const std::uint64_t c = mulmod(f.back(), lead_inv, p);
    const std::size_t shift = f.size() - 1 - dg;
    for (std::size_t i = 0; i <= dg; ++i)
      f[shift + i] = (f[shift + i] + p - mulmod(c, g[i], p)) % p;
    trim(f);
  }
  return f;
}

Poly poly_mulmod(const Poly &x, const Poly &y, const Poly &m, std::uint64_t p) {
  if (x.empty() || y.empty())
    return {};
  Poly r(x.size() + y.size() - 1, 0);
  for (std::size_t i = 0; i < x.size(); ++i)
    for (std::size_t j = 0; j < y.size(); ++j)
      r[i + j] = (r[i + j] + mulmod(x[i], y[j], p)) % p;
  return poly_mod(std::move(r), m, p);
}

Poly poly_powmod(Poly b, std::uint64_t e, const Poly &m, std::uint64_t p) {
  Poly r{1};
  b = poly_mod(std::move(b), m, p);
  while (e) {
    if (e & 1)
      r = poly_mulmod(r, b, m, p);
    b = poly_mulmod(b, b, m, p);
    e >>= 1;
  }
  return r;
}

Poly poly_gcd(Poly a, Poly b, std::uint64_t p) {
  trim(a);
  trim(b);
  while (!b.empty()) {
    Poly r = poly_mod(a, b, p);
    a = std::move(b);
    b = std::move(r);
  }
  return a;
}

Poly poly_sub(Poly a, const Poly &b, std::uint64_t p) {
  if (a.size() < b.size())
    a.resize(b.size(), 0);
  for (std::size_t i = 0; i < b.size(); ++i)
    a[i] = (a[i] + p - b[i]) % p;
  trim(a);
  return a;
}

} // namespace

bool is_irreducible(const std::vector<std::uint64_t> &f, std::uint64_t p) {
  const std::size_t n = f.size() - 1;
  if (n == 0)
    return false;
  if (n == 1)
    return true;
  const Poly x{0, 1};
  // x^(p^k) mod f for k = 1..n.
  std::vector<Poly> frob(n + 1);
  frob[0] = x;
  for (std::size_t k = 1; k <= n; ++k)
    frob[k] = poly_powmod(frob[k - 1], p, f, p);
  if (poly_sub(frob[n], x, p).size() != 0)
    return false;
  std::size_t m = n;
  for (std::size_t r = 2; r <= m; ++r) {
    if (m % r)
      continue;
    while (m % r == 0)
      m /= r;
    Poly g = poly_gcd(f, poly_sub(frob[n / r], x, p), p);
    if (g.size() != 1)
      return false;
  }
  return true;
}

const FieldCtx &FieldCtx::get(std::uint64_t p, unsigned degree) {
  static std::mutex mu;
  static std::map<std::pair<std::uint64_t, unsigned>, std::unique_ptr<FieldCtx>> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto key = std::make_pair(p, degree);
  auto it = cache.find(key);
  if (it == cache.end())
    it = cache.emplace(key, std::unique_ptr<FieldCtx>(new FieldCtx(p, degree))).first;
  return *it->second;
}

const FieldCtx &FieldCtx::of_order(std::uint64_t q) {
  if (q < 2)
    throw BadField("field order must be at least 2");
  auto f = numtheory::factorize(q);
  if (f.factors().size() != 1)
    throw BadField(std::to_string(q) + " is not a prime power");
  return get(f.factors()[0].prime.get_ui(), f.factors()[0].multiplicity);
}

FieldCtx::FieldCtx(std::uint64_t p, unsigned a) : p_(p), a_(a) {
  if (p < 2 || p > (1ull << 31) || !numtheory::is_prime(BigInt(static_cast<unsigned long>(p))))
    throw BadField("characteristic must be a prime below 2^31");
  if (a < 1 || a > 16)
    throw BadField("degree must lie in 1..16");
  q_ = 1;
  for (unsigned i = 0; i < a; ++i) {
    ppow_.push_back(q_);
    if (q_ > (1ull << 62) / p)
      throw BadField("field too large");
    q_ *= p;
  }
  if (a == 1) {
    modulus_ = {0, 1};
  } else {
    // Lex order with the constant coefficient most significant.
    for (std::uint64_t r = 0; r < q_; ++r) {
      Poly f(a + 1, 0);
      std::uint64_t t = r;
      for (unsigned i = 0; i < a; ++i) {
        f[a - 1 - i] = t % p;
        t /= p;
      }
      f[a] = 1;
      if (f[0] != 0 && is_irreducible(f, p)) {
        modulus_ = f;
        break;
      }
    }
  }
  unit_order_ = numtheory::factorize(q_ - 1);
  for (std::uint64_t r = 1; r < q_; ++r) {
    Code c = from_lex_rank(r);
    if (c != 0 && element_order(c) == q_ - 1) {
      gen_ = c;
      break;
    }
  }
  if (q_ <= (1u << 20)) {
    log_.assign(q_, 0);
    exp_.assign(2 * (q_ - 1), 0);
    Code x = 1;
    for (std::uint64_t i = 0; i < q_ - 1; ++i) {
      exp_[i] = exp_[i + q_ - 1] = static_cast<std::uint32_t>(x);
      log_[x] = static_cast<std::uint32_t>(i);
      x = mul_slow(x, gen_);
    }
    if (a_ > 1 && p_ != 2 && q_ <= 729) {
      add_.assign(q_ * q_, 0);
      for (Code i = 0; i < q_; ++i)
        for (Code j = 0; j < q_; ++j) {
          Code r = 0;
          for (unsigned k = 0; k < a_; ++k)
            r += ((i / ppow_[k] % p_ + j / ppow_[k] % p_) % p_) * ppow_[k];
          add_[i * q_ + j] = static_cast<std::uint32_t>(r);
        }
    }
  }
}

Code FieldCtx::add(Code x, Code y) const {
  if (p_ == 2)
    return x ^ y;
  if (a_ == 1) {
    Code r = x + y;
    return r >= p_ ? r - p_ : r;
  }
  if (!add_.empty())
    return add_[x * q_ + y];
  Code r = 0;
  for (unsigned k = 0; k < a_; ++k) {
    Code d = x % p_ + y % p_;
    if (d >= p_)
      d -= p_;
    r += d * ppow_[k];
    x /= p_;
    y /= p_;
  }
  return r;
}

Code FieldCtx::neg(Code x) const {
  if (p_ == 2)
    return x;
  if (a_ == 1)
    return x == 0 ? 0 : p_ - x;
  Code r = 0;
  for (unsigned k = 0; k < a_; ++k) {
    Code d = x % p_;
    r += (d == 0 ? 0 : p_ - d) * ppow_[k];
    x /= p_;
  }
  return r;
}

Code FieldCtx::sub(Code x, Code y) const { return add(x, neg(y)); }

Code FieldCtx::mul_slow(Code x, Code y) const {
  if (a_ == 1)
    return mulmod(x, y, p_);
  Poly px = coeffs(x), py = coeffs(y);
  Poly r = poly_mulmod(px, py, modulus_, p_);
  r.resize(a_, 0);
  return from_coeffs(r);
}

Code FieldCtx::mul(Code x, Code y) const {
  if (x == 0 || y == 0)
    return 0;
  if (!log_.empty())
    return exp_[log_[x] + log_[y]];
  return mul_slow(x, y);
}

Code FieldCtx::pow_slow(Code x, std::uint64_t e) const {
  Code r = 1;
  while (e) {
    if (e & 1)
      r = mul(r, x);
    x = mul(x, x);
    e >>= 1;
  }
  return r;
}

Code FieldCtx::pow(Code x, std::uint64_t e) const {
  if (e == 0)
    return 1;
  if (x == 0)
    return 0;
  e %= (q_ - 1);
  if (!log_.empty())
    return exp_[static_cast<std::uint64_t>(
        static_cast<unsigned __int128>(log_[x]) * e % (q_ - 1))];
  return pow_slow(x, e);
}

Code FieldCtx::pow(Code x, const BigInt &e) const {
  if (e == 0)
    return 1;
  if (x == 0)
    return 0;
  BigInt m = e % BigInt(static_cast<unsigned long>(q_ - 1));
  if (m < 0)
    m += static_cast<unsigned long>(q_ - 1);
  return pow(x, static_cast<std::uint64_t>(m.get_ui()));
}

Code FieldCtx::inv(Code x) const {
  if (x == 0)
    throw InvalidArgument("inverse of zero");
  if (!log_.empty())
    return exp_[(q_ - 1 - log_[x]) % (q_ - 1)];
  return pow_slow(x, q_ - 2);
}

Code FieldCtx::from_int(long long v) const {
  long long m = v % static_cast<long long>(p_);
  if (m < 0)
    m += static_cast<long long>(p_);
  return static_cast<Code>(m);
}

Code FieldCtx::from_coeffs(const std::vector<std::uint64_t> &c) const {
  if (c.size() > a_)
    throw InvalidArgument("too many coefficients");
  Code r = 0;
  for (std::size_t i = 0; i < c.size(); ++i) {
    if (c[i] >= p_)
      throw InvalidArgument("coefficient out of range");
    r += c[i] * ppow_[i];
  }
  return r;
}

std::vector<std::uint64_t> FieldCtx::coeffs(Code x) const {
  std::vector<std::uint64_t> c(a_);
  for (unsigned i = 0; i < a_; ++i) {
    c[i] = x % p_;
    x /= p_;
  }
  return c;
}

std::uint64_t FieldCtx::lex_rank(Code x) const {
  if (a_ == 1)
    return x;
  std::uint64_t r = 0;
  for (unsigned i = 0; i < a_; ++i) {
    r = r * p_ + x % p_;
    x /= p_;
  }
  return r;
}

Code FieldCtx::from_lex_rank(std::uint64_t r) const {
  if (a_ == 1)
    return r;
  Code x = 0;
  for (unsigned i = 0; i < a_; ++i) {
    x += (r % p_) * ppow_[a_ - 1 - i];
    r /= p_;
  }
  return x;
}

std::uint64_t FieldCtx::element_order(Code x) const {
  if (x == 0)
    throw InvalidArgument("order of zero");
  std::uint64_t m = q_ - 1;
  for (const auto &f : unit_order_.factors()) {
    const std::uint64_t r = f.prime.get_ui();
    for (unsigned i = 0; i < f.multiplicity; ++i) {
      if (pow_slow(x, m / r) != 1)
        break;
      m /= r;
    }
  }
  return m;
}

FieldElement FieldElement::pow(long long e) const {
  if (e < 0)
    return inverse().pow(static_cast<std::uint64_t>(-e));
  return pow(static_cast<std::uint64_t>(e));
}

std::string FieldElement::to_string() const {
  std::ostringstream os;
  auto c = coeffs();
  for (std::size_t i = 0; i < c.size(); ++i)
    os << (i ? "," : "") << c[i];
  return os.str();
}

FieldElement parse_element(const FieldCtx &ctx, const std::string &text) {
  std::vector<std::uint64_t> c;
  std::stringstream ss(text);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    std::size_t used = 0;
    unsigned long long v = 0;
    try {
      v = std::stoull(tok, &used);
    } catch (const std::exception &) {
      throw InvalidArgument("bad field coefficient '" + tok + "'");
    }
    if (used != tok.size() || v >= ctx.p())
      throw InvalidArgument("bad field coefficient '" + tok + "'");
    c.push_back(v);
  }
  if (c.empty() || c.size() > ctx.degree())
    throw InvalidArgument("expected 1.." + std::to_string(ctx.degree()) +
                          " coefficients in '" + text + "'");
  return {ctx, ctx.from_coeffs(c)};
}

std::vector<FieldElement> elements(const FieldCtx &ctx) {
  std::vector<FieldElement> out;
  out.reserve(ctx.order());
  for (std::uint64_t r = 0; r < ctx.order(); ++r)
    out.emplace_back(ctx, ctx.from_lex_rank(r));
  return out;
}

FieldElement frobenius(const FieldElement &x, unsigned k) {
  const FieldCtx &ctx = x.ctx();
  std::uint64_t e = 1;
  for (unsigned i = 0; i < k % ctx.degree(); ++i)
    e *= ctx.p();
  return x.pow(e);
}

FieldElement multiplicative_generator(const FieldCtx &ctx) {
  return {ctx, ctx.generator()};
}

FieldElement conj(const FieldElement &x) {
  if (x.ctx().degree() % 2)
    throw NotInSubfield("field has no index-2 subfield");
  return frobenius(x, x.ctx().degree() / 2);
}

FieldElement norm(const FieldElement &x) { return x * conj(x); }
FieldElement trace(const FieldElement &x) { return x + conj(x); }

bool in_subfield(const FieldElement &x, unsigned sub_degree) {
  if (sub_degree == 0 || x.ctx().degree() % sub_degree)
    return false;
  return frobenius(x, sub_degree) == x;
}

FieldElement solve_norm(const FieldCtx &ctx, const FieldElement &c) {
  if (ctx.degree() % 2 || !in_subfield(c, ctx.degree() / 2))
    throw NotInSubfield(c.to_string());
  if (c.is_zero())
    return c;
  for (std::uint64_t r = 1; r < ctx.order(); ++r) {
    FieldElement x(ctx, ctx.from_lex_rank(r));
    if (norm(x) == c)
      return x;
  }
  throw InvalidArgument("norm equation unsolvable");
}

FieldElement trace_zero_sample(const FieldCtx &ctx) {
  for (std::uint64_t r = 1; r < ctx.order(); ++r) {
    FieldElement e(ctx, ctx.from_lex_rank(r));
    if ((conj(e) + e).is_zero())
      return e;
  }
  throw InvalidArgument("no trace-zero element");
}

FieldElement sqrt_exhaustive(const FieldElement &x) {
  const FieldCtx &ctx = x.ctx();
  for (std::uint64_t r = 0; r < ctx.order(); ++r) {
    FieldElement y(ctx, ctx.from_lex_rank(r));
    if (y * y == x)
      return y;
  }
  throw InvalidArgument(x.to_string() + " is not a square");
}

Embedding::Embedding(const FieldCtx &small, const FieldCtx &big)
    : small_(&small), big_(&big) {
  if (small.p() != big.p() || big.degree() % small.degree())
    throw BadField("not a subfield");
  const auto &m = small.modulus();
  for (std::uint64_t r = 0; r < big.order(); ++r) {
    FieldElement t(big, big.from_lex_rank(r));
    FieldElement v = FieldElement::zero(big);
    for (std::size_t i = m.size(); i-- > 0;)
      v = v * t + FieldElement::from_int(big, static_cast<long long>(m[i]));
    if (v.is_zero()) {
      root_ = t;
      return;
    }
  }
  throw BadField("subfield modulus has no root");
}

FieldElement Embedding::operator()(const FieldElement &x) const {
  auto c = x.coeffs();
  FieldElement v = FieldElement::zero(*big_);
  for (std::size_t i = c.size(); i-- > 0;)
    v = v * root_ + FieldElement::from_int(*big_, static_cast<long long>(c[i]));
  return v;
}

} // namespace bv::ffield
