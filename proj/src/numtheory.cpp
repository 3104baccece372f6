#include "bv/numtheory.hpp"

#include <algorithm>
#include <cassert>
#include <map>
#include <numeric>
#include <sstream>

#include "bv/error.hpp"

namespace bv::numtheory {

namespace {

constexpr unsigned kTrialLimit = 1000000;

const std::vector<unsigned> &small_primes() {
  static const std::vector<unsigned> primes = [] {
    std::vector<bool> composite(kTrialLimit + 1, false);
    std::vector<unsigned> out;
    for (unsigned i = 2; i <= kTrialLimit; ++i) {
      if (composite[i])
        continue;
      out.push_back(i);
      for (unsigned long j = static_cast<unsigned long>(i) * i; j <= kTrialLimit; j += i)
        composite[j] = true;
    }
    return out;
  }();
  return primes;
}

BigInt powm(const BigInt &b, const BigInt &e, const BigInt &m) {
  BigInt r;
  mpz_powm(r.get_mpz_t(), b.get_mpz_t(), e.get_mpz_t(), m.get_mpz_t());
  return r;
}

bool miller_rabin(const BigInt &n, unsigned base) {
  BigInt d = n - 1;
  unsigned s = 0;
  while (mpz_even_p(d.get_mpz_t())) {
    d >>= 1;
    ++s;
  }
  BigInt x = powm(BigInt(base), d, n);
  if (x == 1 || x == n - 1)
    return true;
  for (unsigned i = 1; i < s; ++i) {
    x = x * x % n;
    if (x == n - 1)
      return true;
  }
  return false;
}

BigInt gcd(const BigInt &a, const BigInt &b) {
  BigInt g;
  mpz_gcd(g.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return g;
}

// Brent's variant of Pollard rho; c runs through 1, 2, 3, ... so the result is
// reproducible.
BigInt rho_split(const BigInt &n) {
  if (mpz_even_p(n.get_mpz_t()))
    return 2;
  for (unsigned long c = 1;; ++c) {
    BigInt y = 2, x, ys, q = 1, g = 1;
    unsigned long r = 1;
    constexpr unsigned long m = 128;
    while (g == 1) {
      x = y;
      for (unsigned long i = 0; i < r; ++i)
        y = (y * y + c) % n;
      unsigned long k = 0;
      while (k < r && g == 1) {
        ys = y;
        for (unsigned long i = 0; i < std::min(m, r - k); ++i) {
          y = (y * y + c) % n;
          q = q * abs(x - y) % n;
        }
        g = gcd(q, n);
        k += m;
      }
      r *= 2;
    }
    if (g == n) {
      do {
        ys = (ys * ys + c) % n;
        g = gcd(abs(x - ys), n);
      } while (g == 1);
    }
    if (g != n)
      return g;
  }
}

void add_factor(std::map<BigInt, unsigned, std::less<>> &acc, const BigInt &p,
                unsigned mult = 1) {
  acc[p] += mult;
}

} // namespace

Factorization::Factorization(BigInt value, std::vector<PrimePower> factors)
    : value_(std::move(value)), factors_(std::move(factors)) {}

std::vector<BigInt> Factorization::primes() const {
  std::vector<BigInt> out;
  for (const auto &f : factors_)
    out.push_back(f.prime);
  return out;
}

Factorization Factorization::operator*(const Factorization &other) const {
  std::map<BigInt, unsigned, std::less<>> acc;
  for (const auto &f : factors_)
    acc[f.prime] += f.multiplicity;
  for (const auto &f : other.factors_)
    acc[f.prime] += f.multiplicity;
  std::vector<PrimePower> out;
  for (auto &[p, m] : acc)
    out.push_back({p, m});
  return Factorization(value_ * other.value_, std::move(out));
}

Factorization Factorization::operator/(const Factorization &other) const {
  std::map<BigInt, int, std::less<>> acc;
  for (const auto &f : factors_)
    acc[f.prime] += static_cast<int>(f.multiplicity);
  for (const auto &f : other.factors_)
    acc[f.prime] -= static_cast<int>(f.multiplicity);
  std::vector<PrimePower> out;
  for (auto &[p, m] : acc) {
    if (m < 0)
      throw InvalidArgument("Factorization quotient is not integral");
    if (m > 0)
      out.push_back({p, static_cast<unsigned>(m)});
  }
  return Factorization(value_ / other.value_, std::move(out));
}

bool Factorization::valid() const {
  BigInt prod = 1;
  for (std::size_t i = 0; i < factors_.size(); ++i) {
    const auto &f = factors_[i];
    if (f.multiplicity == 0 || !is_prime(f.prime))
      return false;
    if (i > 0 && factors_[i - 1].prime >= f.prime)
      return false;
    prod *= ipow(f.prime, f.multiplicity);
  }
  return prod == value_;
}

std::string Factorization::to_string() const {
  if (factors_.empty())
    return "1";
  std::ostringstream os;
  for (std::size_t i = 0; i < factors_.size(); ++i) {
    if (i)
      os << " * ";
    os << factors_[i].prime.get_str();
    if (factors_[i].multiplicity > 1)
      os << "^" << factors_[i].multiplicity;
  }
  return os.str();
}

BigInt default_ceiling() { return BigInt(1) << 96; }

BigInt ipow(const BigInt &base, unsigned long exp) {
  BigInt r;
  mpz_pow_ui(r.get_mpz_t(), base.get_mpz_t(), exp);
  return r;
}

bool is_prime(const BigInt &n) {
  if (n < 2)
    return false;
  for (unsigned p : {2u, 3u, 5u, 7u, 11u, 13u, 17u, 19u, 23u, 29u, 31u, 37u, 41u}) {
    if (n == p)
      return true;
    if (mpz_divisible_ui_p(n.get_mpz_t(), p))
      return false;
  }
  // The first 13 prime bases are a proven witness set below this bound.
  static const BigInt mr_bound("3317044064679887385961981");
  if (n < mr_bound) {
    for (unsigned b : {2u, 3u, 5u, 7u, 11u, 13u, 17u, 19u, 23u, 29u, 31u, 37u, 41u})
      if (!miller_rabin(n, b))
        return false;
    return true;
  }
  // BPSW followed by fixed-seed Miller-Rabin rounds.
  return mpz_probab_prime_p(n.get_mpz_t(), 30) > 0;
}

Factorization factorize(const BigInt &n, const FactorOptions &opts) {
  if (n < 1)
    throw InvalidArgument("factorize expects a positive integer");
  std::map<BigInt, unsigned, std::less<>> acc;
  BigInt rem = n;
  for (unsigned p : small_primes()) {
    if (BigInt(p) * p > rem)
      break;
    while (mpz_divisible_ui_p(rem.get_mpz_t(), p)) {
      mpz_divexact_ui(rem.get_mpz_t(), rem.get_mpz_t(), p);
      add_factor(acc, BigInt(p));
    }
  }
  if (rem > 1) {
    std::vector<BigInt> stack{rem};
    while (!stack.empty()) {
      BigInt m = stack.back();
      stack.pop_back();
      if (m == 1)
        continue;
      if (is_prime(m)) {
        add_factor(acc, m);
        continue;
      }
      if (m > opts.ceiling)
        throw CeilingExceeded("composite cofactor " + m.get_str() +
                              " above ceiling");
      BigInt d = rho_split(m);
      stack.push_back(d);
      stack.push_back(m / d);
    }
  }
  std::vector<PrimePower> out;
  for (auto &[p, m] : acc)
    out.push_back({p, m});
  return Factorization(n, std::move(out));
}

Factorization factorize(std::uint64_t n) {
  BigInt v;
  mpz_import(v.get_mpz_t(), 1, 1, sizeof(n), 0, 0, &n);
  return factorize(v);
}

std::string to_string(ZsigmondyClass c) {
  switch (c) {
  case ZsigmondyClass::None:
    return "none";
  case ZsigmondyClass::Small:
    return "small";
  case ZsigmondyClass::Large:
    return "large";
  }
  return "?";
}

BigInt primitive_part(const BigInt &a, unsigned n) {
  if (a < 2 || n < 2)
    throw InvalidArgument("primitive_part needs a, n > 1");
  BigInt phi = cyclotomic_value(n, a);
  unsigned m = n;
  for (unsigned r = 2; r <= m; ++r) {
    if (m % r)
      continue;
    while (m % r == 0)
      m /= r;
    while (mpz_divisible_ui_p(phi.get_mpz_t(), r))
      mpz_divexact_ui(phi.get_mpz_t(), phi.get_mpz_t(), r);
  }
  return phi;
}

ZsigmondyClass zsigmondy_class(const BigInt &a, unsigned n) {
  BigInt p = primitive_part(a, n);
  if (p == 1)
    return (a == 2 && n == 6) ? ZsigmondyClass::Large : ZsigmondyClass::None;
  // Every primitive prime is 1 mod n, so the only possible small one is n+1.
  return p == n + 1 ? ZsigmondyClass::Small : ZsigmondyClass::Large;
}

ZsigmondyResult zsigmondy(const BigInt &a, unsigned n, const FactorOptions &opts) {
  ZsigmondyResult res;
  res.base = a;
  res.exponent = n;
  BigInt p = primitive_part(a, n);
  if (p == 1) {
    if (res.convention()) {
      res.lambda = BigInt(9);
      res.classification = ZsigmondyClass::Large;
    }
    return res;
  }
  Factorization f = factorize(p, opts);
  const PrimePower &top = f.factors().back();
  res.zeta = top.prime;
  res.lambda = ipow(top.prime, top.multiplicity);
  res.classification = (top.prime > n + 1 || top.multiplicity > 1)
                           ? ZsigmondyClass::Large
                           : ZsigmondyClass::Small;
  return res;
}

bool is_large_exception(const BigInt &a, unsigned n) {
  if (a < 2 || n < 2)
    throw InvalidArgument("is_large_exception needs a, n > 1");
  if (n == 2) {
    BigInt m = a + 1;
    if (mpz_divisible_ui_p(m.get_mpz_t(), 3))
      m /= 3;
    return mpz_popcount(m.get_mpz_t()) == 1;
  }
  if (a == 2)
    return n == 4 || n == 6 || n == 10 || n == 12 || n == 18;
  if (a == 3)
    return n == 4 || n == 6;
  return a == 5 && n == 6;
}

BigInt cyclotomic_value(unsigned k, const BigInt &q) {
  if (k == 0)
    throw InvalidArgument("cyclotomic_value needs k >= 1");
  std::map<unsigned, BigInt> memo;
  auto rec = [&](auto &&self, unsigned m) -> BigInt {
    auto it = memo.find(m);
    if (it != memo.end())
      return it->second;
    BigInt v = ipow(q, m) - 1;
    for (unsigned d = 1; d < m; ++d)
      if (m % d == 0)
        v /= self(self, d);
    memo.emplace(m, v);
    return v;
  };
  return rec(rec, k);
}

BigInt gcd_qpow(const BigInt &q, unsigned long a, unsigned long b) {
  unsigned long d = std::gcd(a, b);
  BigInt r = ipow(q, d) - 1;
  assert(r == gcd(ipow(q, a) - 1, ipow(q, b) - 1));
  return r;
}

BigInt order_mod(const BigInt &q, const BigInt &r) {
  if (r < 2)
    throw InvalidArgument("order_mod needs modulus > 1");
  if (gcd(q, r) != 1)
    throw NotCoprime(q.get_str() + " and " + r.get_str());
  if (!is_prime(r))
    throw InvalidArgument("order_mod needs a prime modulus");
  BigInt qm = q % r;
  if (qm < 0)
    qm += r;
  BigInt m = r - 1;
  const auto fr = factorize(r - 1);
  for (const auto &f : fr.factors()) {
    for (unsigned i = 0; i < f.multiplicity; ++i) {
      if (powm(qm, m / f.prime, r) != 1)
        break;
      m /= f.prime;
    }
  }
  return m;
}

BigInt lcm(const std::vector<BigInt> &values) {
  BigInt l = 1;
  for (const auto &v : values)
    mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), v.get_mpz_t());
  return l;
}

} // namespace bv::numtheory
