#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "bv/permgrp.hpp"

namespace bv::covers {

using numtheory::BigInt;
using permgrp::Perm;

/// Clifford algebra over GF(p) on e_1..e_n with e_i^2 = -1. Monomials are
/// indexed by bitmasks (bit i-1 for e_i) in increasing index order.
class CliffordCtx {
public:
  /// Least prime p with 2 a square mod p is 7; the root used is the least one.
  static std::shared_ptr<const CliffordCtx> make(unsigned n, std::uint32_t p = 7);

  unsigned rank() const { return n_; }
  std::uint32_t p() const { return p_; }
  std::uint32_t sqrt2() const { return sqrt2_; }
  std::uint32_t inv_sqrt2() const { return inv_sqrt2_; }
  /// True when e_S e_T = -e_{S xor T}.
  bool negative(std::uint32_t s, std::uint32_t t) const;

private:
  CliffordCtx() = default;
  unsigned n_ = 0;
  std::uint32_t p_ = 0, sqrt2_ = 0, inv_sqrt2_ = 0;
  /// above_[S]: positions with an odd number of S-bits strictly above them.
  std::vector<std::uint32_t> above_;
};

/// Sparse algebra element; terms sorted by mask with nonzero coefficients.
class CoverElement {
public:
  CoverElement() = default;
  CoverElement(std::shared_ptr<const CliffordCtx> ctx, std::uint32_t scalar);
  static CoverElement monomial(std::shared_ptr<const CliffordCtx> ctx, std::uint32_t mask,
                               std::uint32_t coeff);

  const std::shared_ptr<const CliffordCtx> &ctx() const { return ctx_; }
  const std::vector<std::pair<std::uint32_t, std::uint32_t>> &terms() const { return terms_; }
  std::size_t size() const { return terms_.size(); }

  CoverElement operator*(const CoverElement &o) const;
  CoverElement operator+(const CoverElement &o) const;
  CoverElement operator-() const;
  CoverElement operator-(const CoverElement &o) const { return *this + (-o); }
  bool operator==(const CoverElement &o) const { return terms_ == o.terms_; }
  bool operator!=(const CoverElement &o) const { return terms_ != o.terms_; }

  bool is_scalar(std::uint32_t c) const;
  bool is_one() const { return is_scalar(1); }
  /// Inverse of a product of vectors v with v^2 = -1: sign times the reversal.
  CoverElement inverse() const;
  CoverElement pow(long long e) const;
  /// g^-1 * this * g.
  CoverElement conj(const CoverElement &g) const { return g.inverse() * (*this) * g; }
  std::size_t hash() const;
  std::string to_string() const;

private:
  std::shared_ptr<const CliffordCtx> ctx_;
  std::vector<std::pair<std::uint32_t, std::uint32_t>> terms_;
};

struct CoverElementHash {
  std::size_t operator()(const CoverElement &u) const { return u.hash(); }
};

/// An element of 2.Sym(n) with its image in Sym(n).
struct Lift {
  CoverElement u;
  Perm p;
  Lift operator*(const Lift &o) const { return {u * o.u, p * o.p}; }
  Lift inverse() const { return {u.inverse(), p.inverse()}; }
  Lift pow(long long e) const { return {u.pow(e), p.pow(e)}; }
  Lift conj(const Lift &g) const { return g.inverse() * (*this) * g; }
  bool operator==(const Lift &o) const { return u == o.u; }
  /// o(p) or 2 o(p), decided by u^o(p) = 1 or z.
  std::uint64_t order() const;
};

struct Cover {
  std::shared_ptr<const CliffordCtx> ctx;
  /// t[0] is t_1.
  std::vector<Lift> t;
  Lift z, one;
  unsigned n() const { return ctx->rank(); }
  /// t_i for 1-based i.
  const Lift &gen(unsigned i) const { return t.at(i - 1); }
  /// Product of t_i over a sequence of 1-based indices.
  Lift word(const std::vector<unsigned> &idx) const;
  /// A lift of p built from a reduced word in adjacent transpositions.
  Lift lift(const Perm &p) const;
};

/// Builds t_i = (e_i - e_{i+1})/sqrt2 and z = -1, checking every relation of
/// the presentation.
Cover build_cover(unsigned n);

/// Least k <= bound with u^k = 1; bound 0 means 4n.
std::uint64_t cover_order(const CoverElement &u, std::uint64_t bound = 0);

/// x = t_{n-1}...t_1 and y = t_1 t_1^(t_2...t_{n-1}) z.
Lift cover_x(const Cover &c);
Lift cover_y(const Cover &c);

struct Order3Row {
  unsigned n = 0;
  std::uint64_t order_y = 0, expected = 0;
  bool xsimz = false;
  bool ok() const { return order_y == expected && xsimz; }
};
/// o(y) and the identity xy = x^(t_2...t_{n-1}).
Order3Row order3_xsimz_suite(unsigned n);

struct CoverTriple {
  std::string label;
  Lift x, y, xy;
  std::vector<std::uint64_t> type;
};

struct NoddResult {
  unsigned n = 0;
  CoverTriple chosen, other;
  BigInt projected_order;
  /// Word whose value is z, e.g. "x^7".
  std::string z_word;
};
NoddResult nodd_triple(unsigned n);

struct NevenResult {
  unsigned n = 0;
  bool found = false;
  CoverTriple triple;
  BigInt projected_order;
  std::string z_word;
  std::uint64_t attempts = 0;
  bool explicit_pair = false;
};
/// Type (5, n-1, n-1) in 2.Alt(n) for even n: the explicit projected pair
/// first, then seeded random conjugates of the second element.
NevenResult neven_search(unsigned n, std::uint64_t seed, std::uint64_t budget);

} // namespace bv::covers
