#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <unordered_set>
#include <vector>

#include "bv/matgrp.hpp"
#include "bv/numtheory.hpp"

namespace bv::permgrp {

using numtheory::BigInt;
using Point = std::uint32_t;

/// Permutation on {0, ..., n-1}. Products act left to right: (a*b)(i) = b(a(i)).
class Perm {
public:
  Perm() = default;
  explicit Perm(std::size_t n);
  explicit Perm(std::vector<Point> images);
  /// Cycles given with 1-based points.
  static Perm from_cycles(std::size_t n, const std::vector<std::vector<Point>> &cycles);
  /// Parses "(1,2,3)(4,5)" with 1-based points; "()" is the identity.
  static Perm parse(std::size_t n, const std::string &text);

  std::size_t degree() const { return img_.size(); }
  Point operator[](Point i) const { return img_[i]; }
  const std::vector<Point> &images() const { return img_; }

  Perm operator*(const Perm &o) const;
  Perm inverse() const;
  Perm pow(long long e) const;
  /// g^-1 * this * g.
  Perm conj(const Perm &g) const;
  bool is_identity() const;

  bool operator==(const Perm &o) const { return img_ == o.img_; }
  bool operator!=(const Perm &o) const { return img_ != o.img_; }
  bool operator<(const Perm &o) const { return img_ < o.img_; }

  std::uint64_t order() const;
  /// Lengths of all cycles of length > 1, descending.
  std::vector<std::size_t> cycle_type() const;
  std::string to_cycle_string() const;
  std::size_t hash() const;

private:
  std::vector<Point> img_;
};

struct PermHash {
  std::size_t operator()(const Perm &p) const { return p.hash(); }
};

/// Uniform integers from a 64-bit Mersenne twister by rejection.
class Rng {
public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}
  std::uint64_t below(std::uint64_t n);
  std::uint64_t next() { return eng_(); }

private:
  std::mt19937_64 eng_;
};

/// Product replacement with an accumulator.
template <class T> class ProductReplacement {
public:
  ProductReplacement(std::vector<T> gens, T identity, std::uint64_t seed,
                     unsigned slots = 10, unsigned burn_in = 60)
      : rng_(seed), acc_(identity) {
    if (gens.empty())
      gens.push_back(identity);
    const std::size_t n = std::max<std::size_t>(slots, gens.size());
    for (std::size_t i = 0; i < n; ++i)
      slots_.push_back(gens[i % gens.size()]);
    for (unsigned i = 0; i < burn_in; ++i)
      next();
  }

  T next() {
    const std::size_t n = slots_.size();
    const std::size_t i = rng_.below(n);
    std::size_t j = rng_.below(n - 1);
    if (j >= i)
      ++j;
    if (rng_.below(2))
      slots_[i] = slots_[i] * slots_[j];
    else
      slots_[i] = slots_[j] * slots_[i];
    acc_ = acc_ * slots_[i];
    return acc_;
  }

private:
  Rng rng_;
  std::vector<T> slots_;
  T acc_;
};

using RandomSource = ProductReplacement<Perm>;
RandomSource make_random_source(const std::vector<Perm> &gens, std::uint64_t seed);
Perm random_element(RandomSource &rs);

struct SchreierSimsOptions {
  /// When the orbit-size product reaches this value the chain is complete.
  std::optional<BigInt> known_order;
  std::uint64_t seed = 0x5eed;
  /// Consecutive trivially-sifting random elements before stopping.
  unsigned random_sifts = 32;
  /// Run deterministic Schreier-generator verification when not certified.
  bool verify = true;
};

class Bsgs {
public:
  std::size_t degree() const { return degree_; }
  std::vector<Point> base() const;
  std::vector<Perm> strong_generators() const;
  BigInt order() const;
  /// Residue and the level at which sifting stopped (== base length on success).
  std::pair<Perm, std::size_t> sift(const Perm &g, std::size_t start = 0) const;
  bool contains(const Perm &g) const;
  /// True when the chain is certified complete.
  bool complete() const { return complete_; }
  std::vector<std::size_t> orbit_sizes() const;

private:
  friend Bsgs schreier_sims(const std::vector<Perm> &, const SchreierSimsOptions &);
  struct Level {
    Point base_point;
    std::vector<Perm> gens;
    std::vector<Point> orbit;
    std::vector<std::int32_t> pos;
    /// uinv[k] maps orbit[k] to the base point.
    std::vector<Perm> uinv;
  };
  void insert(const Perm &h, std::size_t level, std::size_t first);
  void extend_orbit(Level &lv, std::size_t first_gen);
  void verify_chain();

  std::size_t degree_ = 0;
  std::vector<Level> levels_;
  bool complete_ = false;
};

Bsgs schreier_sims(const std::vector<Perm> &gens, const SchreierSimsOptions &opts = {});

enum class Action { NonzeroVectors, ProjectivePoints };
std::string to_string(Action a);

/// Points of GF(q)^d in coordinate-lex order (projective representatives have
/// first nonzero coordinate 1) and the induced permutation of a matrix.
class MatrixAction {
public:
  MatrixAction(const ffield::FieldCtx &field, unsigned d, Action action,
               std::size_t max_points = 10000000);
  std::size_t size() const { return ranks_.size(); }
  Perm image(const matgrp::Matrix &m) const;
  std::vector<ffield::Code> point(std::size_t i) const;
  std::size_t index_of(std::vector<ffield::Code> v) const;
  Action action() const { return action_; }

private:
  std::uint64_t rank(const std::vector<ffield::Code> &v) const;
  const ffield::FieldCtx *f_;
  unsigned d_;
  Action action_;
  std::vector<std::uint64_t> ranks_;
};

struct PermImage {
  std::vector<Perm> gens;
  std::size_t points = 0;
};
PermImage matrix_to_perm(const matgrp::GroupSpec &spec, Action action,
                         std::size_t max_points = 10000000);

/// Number of scalar matrices lying in the family's group.
std::uint64_t scalar_count(const matgrp::GroupSpec &spec);

/// A matrix group together with a permutation image certified by BSGS order.
struct Realization {
  matgrp::GroupSpec spec;
  Action action = Action::NonzeroVectors;
  std::vector<Perm> perm_gens;
  /// Order of the permutation image: |G| or |G|/|scalars|.
  BigInt order;
  Bsgs bsgs;
};

/// Selects generators greedily from candidate_generators (or uses the
/// explicit matrix_gens) until the image reaches the expected order.
/// The projective action is only accepted for perfect groups, where
/// generating modulo scalars generates.
Realization realize(matgrp::GroupSpec spec, Action action,
                    std::size_t max_points = 10000000);

/// Orbit of a point and the generators restricted to it.
struct OrbitAction {
  std::vector<Point> orbit;
  std::vector<Perm> gens;
  Perm restrict(const Perm &g) const;
  std::vector<std::int32_t> pos;
};
OrbitAction restrict_to_orbit(const std::vector<Perm> &gens, Point start);

struct ConjugacyClass {
  std::vector<Perm> elements;
  std::unordered_set<Perm, PermHash> index;
  bool contains(const Perm &p) const { return index.count(p) > 0; }
  std::size_t size() const { return elements.size(); }
};

/// The class of g under <gens>, or nullopt if it has more than cap elements.
std::optional<ConjugacyClass> class_orbit(const Perm &g, const std::vector<Perm> &gens,
                                          std::size_t cap);

struct AltTriple {
  Perm x, y;
  std::vector<std::uint64_t> expected_type;
};
AltTriple alt_triple(unsigned n);

/// Standard generators of Alt(n): (1,2,3) and an (n-1)- or n-cycle.
std::vector<Perm> alt_generators(unsigned n);
std::vector<Perm> sym_generators(unsigned n);

/// "perm degree count" followed by count lines of 1-based images.
std::vector<Perm> parse_perm_file(const std::string &text);

} // namespace bv::permgrp
