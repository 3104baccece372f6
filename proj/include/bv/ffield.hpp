#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "bv/numtheory.hpp"

namespace bv::ffield {

using Code = std::uint64_t;
using numtheory::BigInt;

/// GF(p^a) with the lexicographically least monic irreducible modulus.
///
/// Elements are packed as sum c_i p^i (c_0 is the constant coefficient).
/// "Least" elsewhere means least in coefficient-vector lex order, c_0 first.
class FieldCtx {
public:
  static const FieldCtx &get(std::uint64_t p, unsigned degree);
  /// Field of order q; q must be a prime power.
  static const FieldCtx &of_order(std::uint64_t q);

  FieldCtx(const FieldCtx &) = delete;
  FieldCtx &operator=(const FieldCtx &) = delete;

  std::uint64_t p() const { return p_; }
  unsigned degree() const { return a_; }
  std::uint64_t order() const { return q_; }
  const std::vector<std::uint64_t> &modulus() const { return modulus_; }

  Code add(Code x, Code y) const;
  Code sub(Code x, Code y) const;
  Code neg(Code x) const;
  Code mul(Code x, Code y) const;
  Code inv(Code x) const;
  Code pow(Code x, std::uint64_t e) const;
  Code pow(Code x, const BigInt &e) const;

  Code from_int(long long v) const;
  Code from_coeffs(const std::vector<std::uint64_t> &c) const;
  std::vector<std::uint64_t> coeffs(Code x) const;

  std::uint64_t lex_rank(Code x) const;
  Code from_lex_rank(std::uint64_t r) const;

  /// Least element of multiplicative order q-1.
  Code generator() const { return gen_; }
  /// Multiplicative order of a nonzero element.
  std::uint64_t element_order(Code x) const;

private:
  FieldCtx(std::uint64_t p, unsigned a);
  Code mul_slow(Code x, Code y) const;
  Code pow_slow(Code x, std::uint64_t e) const;

  std::uint64_t p_;
  unsigned a_;
  std::uint64_t q_;
  std::vector<std::uint64_t> modulus_;
  std::vector<std::uint64_t> ppow_;
  Code gen_ = 1;
  numtheory::Factorization unit_order_;
  std::vector<std::uint32_t> log_, exp_;
  std::vector<std::uint32_t> add_;
};

class FieldElement {
public:
  FieldElement() = default;
  FieldElement(const FieldCtx &ctx, Code code) : ctx_(&ctx), code_(code) {}
  static FieldElement from_int(const FieldCtx &ctx, long long v) {
    return {ctx, ctx.from_int(v)};
  }
  static FieldElement zero(const FieldCtx &ctx) { return {ctx, 0}; }
  static FieldElement one(const FieldCtx &ctx) { return {ctx, 1}; }

  const FieldCtx &ctx() const { return *ctx_; }
  Code code() const { return code_; }
  bool is_zero() const { return code_ == 0; }
  bool is_one() const { return code_ == 1; }

  FieldElement operator+(const FieldElement &o) const { return {*ctx_, ctx_->add(code_, o.code_)}; }
  FieldElement operator-(const FieldElement &o) const { return {*ctx_, ctx_->sub(code_, o.code_)}; }
  FieldElement operator-() const { return {*ctx_, ctx_->neg(code_)}; }
  FieldElement operator*(const FieldElement &o) const { return {*ctx_, ctx_->mul(code_, o.code_)}; }
  FieldElement operator/(const FieldElement &o) const {
    return {*ctx_, ctx_->mul(code_, ctx_->inv(o.code_))};
  }
  FieldElement &operator+=(const FieldElement &o) { return *this = *this + o; }
  FieldElement &operator-=(const FieldElement &o) { return *this = *this - o; }
  FieldElement &operator*=(const FieldElement &o) { return *this = *this * o; }
  FieldElement inverse() const { return {*ctx_, ctx_->inv(code_)}; }
  FieldElement pow(std::uint64_t e) const { return {*ctx_, ctx_->pow(code_, e)}; }
  FieldElement pow(long long e) const;
  FieldElement pow(const BigInt &e) const { return {*ctx_, ctx_->pow(code_, e)}; }

  bool operator==(const FieldElement &o) const { return code_ == o.code_; }
  bool operator!=(const FieldElement &o) const { return code_ != o.code_; }
  /// Lex order on coefficient vectors.
  bool operator<(const FieldElement &o) const {
    return ctx_->lex_rank(code_) < ctx_->lex_rank(o.code_);
  }

  std::vector<std::uint64_t> coeffs() const { return ctx_->coeffs(code_); }
  /// Comma-separated coefficients, low degree first.
  std::string to_string() const;

private:
  const FieldCtx *ctx_ = nullptr;
  Code code_ = 0;
};

FieldElement parse_element(const FieldCtx &ctx, const std::string &text);

/// Every element of the field in lex order.
std::vector<FieldElement> elements(const FieldCtx &ctx);

FieldElement frobenius(const FieldElement &x, unsigned k);
FieldElement multiplicative_generator(const FieldCtx &ctx);
/// Least x in GF(q^2) with x * x^q = c; c must lie in GF(q).
FieldElement solve_norm(const FieldCtx &ctx, const FieldElement &c);
/// Least nonzero e in GF(q^2) with e^q + e = 0.
FieldElement trace_zero_sample(const FieldCtx &ctx);
/// Least square root by exhaustive search; throws InvalidArgument if none.
FieldElement sqrt_exhaustive(const FieldElement &x);

/// x^q for the index-2 subfield of an even-degree field.
FieldElement conj(const FieldElement &x);
FieldElement norm(const FieldElement &x);
FieldElement trace(const FieldElement &x);
bool in_subfield(const FieldElement &x, unsigned sub_degree);

/// Embedding of a subfield context into a larger context.
class Embedding {
public:
  Embedding(const FieldCtx &small, const FieldCtx &big);
  FieldElement operator()(const FieldElement &x) const;
  const FieldCtx &small() const { return *small_; }
  const FieldCtx &big() const { return *big_; }

private:
  const FieldCtx *small_;
  const FieldCtx *big_;
  FieldElement root_;
};

/// Rabin irreducibility test over GF(p); f is monic, low degree first.
bool is_irreducible(const std::vector<std::uint64_t> &f, std::uint64_t p);

} // namespace bv::ffield
