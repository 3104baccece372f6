#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <gmpxx.h>

namespace bv::numtheory {

using BigInt = mpz_class;

struct PrimePower {
  BigInt prime;
  unsigned multiplicity = 0;
  bool operator==(const PrimePower &) const = default;
};

/// A positive integer together with its prime factorization (primes ascending).
class Factorization {
public:
  Factorization() : value_(1) {}
  Factorization(BigInt value, std::vector<PrimePower> factors);

  const BigInt &value() const { return value_; }
  const std::vector<PrimePower> &factors() const { return factors_; }
  std::vector<BigInt> primes() const;

  Factorization operator*(const Factorization &other) const;
  /// Exact quotient; `other` must divide this.
  Factorization operator/(const Factorization &other) const;

  /// Checks product, ordering and primality of every listed prime.
  bool valid() const;
  std::string to_string() const;

private:
  BigInt value_;
  std::vector<PrimePower> factors_;
};

struct FactorOptions {
  /// Composite cofactors above this bound are not attacked.
  BigInt ceiling = BigInt(1) << 96;
};

BigInt default_ceiling();

bool is_prime(const BigInt &n);
Factorization factorize(const BigInt &n, const FactorOptions &opts = {});
Factorization factorize(std::uint64_t n);

BigInt ipow(const BigInt &base, unsigned long exp);

enum class ZsigmondyClass { None, Small, Large };
std::string to_string(ZsigmondyClass c);

struct ZsigmondyResult {
  BigInt base;
  unsigned exponent = 0;
  std::optional<BigInt> zeta;
  /// Present whenever zeta is, and for (2,6) where it is 9 by convention.
  std::optional<BigInt> lambda;
  ZsigmondyClass classification = ZsigmondyClass::None;

  bool convention() const { return base == 2 && exponent == 6; }
};

/// Phi_n(a) with every prime divisor of n removed: exactly the product of the
/// primitive prime powers of a^n - 1.
BigInt primitive_part(const BigInt &a, unsigned n);

ZsigmondyResult zsigmondy(const BigInt &a, unsigned n,
                          const FactorOptions &opts = {});
/// Classification without factoring; total for any a, n > 1.
ZsigmondyClass zsigmondy_class(const BigInt &a, unsigned n);

bool is_large_exception(const BigInt &a, unsigned n);

BigInt cyclotomic_value(unsigned k, const BigInt &q);
BigInt gcd_qpow(const BigInt &q, unsigned long a, unsigned long b);
BigInt order_mod(const BigInt &q, const BigInt &r);

/// lcm over a list.
BigInt lcm(const std::vector<BigInt> &values);

} // namespace bv::numtheory
