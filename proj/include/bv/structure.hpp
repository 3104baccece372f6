#pragma once

#include <array>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "bv/permgrp.hpp"

namespace bv::structure {

using numtheory::BigInt;
using permgrp::Perm;
using Type = std::array<std::uint64_t, 3>;

std::string to_string(const Type &t);
/// 1/l + 1/m + 1/n < 1.
bool is_hyperbolic(const Type &t);
/// Equal as multisets.
bool same_type(const Type &a, const Type &b);

/// A finite group realized by permutations with a certified BSGS. Matrix
/// groups carry the action used to map matrices to permutations.
class GroupHandle {
public:
  /// Throws InvalidArgument when `order` is given and the generated group
  /// has a different order.
  static GroupHandle from_perms(std::string name, std::vector<Perm> gens,
                                std::optional<BigInt> order = std::nullopt);
  static GroupHandle from_realization(permgrp::Realization r, bool restrict_orbit = false);

  const std::string &name() const { return d_->name; }
  const std::vector<Perm> &gens() const { return d_->gens; }
  const BigInt &order() const { return d_->order; }
  const permgrp::Bsgs &bsgs() const { return d_->bsgs; }
  std::size_t degree() const { return d_->gens.front().degree(); }
  Perm identity() const { return Perm(degree()); }
  bool contains(const Perm &g) const { return d_->bsgs.contains(g); }
  std::uint64_t element_order(const Perm &g) const { return g.order(); }

  bool has_matrix_action() const { return d_->action != nullptr; }
  const matgrp::GroupSpec *spec() const { return d_->spec ? &*d_->spec : nullptr; }
  /// Image of a matrix; asserts agreement of matrix and permutation orders
  /// when the action is faithful.
  Perm from_matrix(const matgrp::Matrix &m) const;
  permgrp::RandomSource random_source(std::uint64_t seed) const;

private:
  struct Data {
    std::string name;
    std::vector<Perm> gens;
    BigInt order;
    permgrp::Bsgs bsgs;
    std::optional<matgrp::GroupSpec> spec;
    std::shared_ptr<const permgrp::MatrixAction> action;
    std::optional<permgrp::OrbitAction> orbit;
  };
  std::shared_ptr<const Data> d_;
};

struct HyperbolicTriple {
  Perm x, y, z;
  Type type{};
  BigInt subgroup_order;
};

enum class TripleFailure { None, NotInGroup, NotGenerating, NotHyperbolic };
std::string to_string(TripleFailure f);

struct TripleCheck {
  TripleFailure failure = TripleFailure::None;
  Type type{};
  BigInt subgroup_order;
  std::optional<HyperbolicTriple> triple;
  bool ok() const { return failure == TripleFailure::None; }
  std::string diagnosis() const;
};

TripleCheck verify_triple(const GroupHandle &g, const Perm &x, const Perm &y,
                          std::uint64_t bsgs_seed = 0x5eed);

enum class CertKind { CoprimeOrders, ClassChecked, Violation, Undecided };
std::string to_string(CertKind k);

struct PowerCheck {
  std::string first, second;
  std::uint64_t prime = 0;
  /// "cycle-type" or "class" for a verified non-conjugacy, "conjugate" or "cap".
  std::string verdict;
};

struct Condition3 {
  CertKind kind = CertKind::Undecided;
  std::vector<PowerCheck> checks;
  /// For Violation: a power of the first triple, a power of the second and
  /// g with a^g = b.
  std::optional<std::array<Perm, 3>> witness;
};

Condition3 condition_iii(const GroupHandle &g, const HyperbolicTriple &t1,
                         const HyperbolicTriple &t2, std::size_t cap = 200000);

struct SearchOptions {
  std::uint64_t seed = 1;
  std::uint64_t budget = 100000;
  unsigned workers = 1;
  bool require_generation = true;
};

/// Where a search succeeded. attempts counts the streams of workers 0..worker
/// up to the hit, so it does not depend on thread timing.
struct SearchLog {
  std::uint64_t seed = 0;
  unsigned worker = 0;
  std::uint64_t iteration = 0;
  std::uint64_t attempts = 0;
};

std::uint64_t worker_seed(std::uint64_t master, unsigned worker);

struct GowResult {
  bool found = false;
  Perm x, y, g;
  std::optional<HyperbolicTriple> triple;
  SearchLog log;
};

/// y = x0^g for seeded random g until x0*y has the target order (or lies in
/// the class of the target element).
GowResult gow_search(const GroupHandle &g, const Perm &x0,
                     const std::variant<std::uint64_t, Perm> &target,
                     const SearchOptions &opts = {});

struct TypeSearchResult {
  bool found = false;
  std::optional<HyperbolicTriple> triple;
  SearchLog log;
};

/// Random elements powered to orders l and m whose product has order n and
/// which generate G.
TypeSearchResult search_by_type(const GroupHandle &g, const Type &type,
                                const SearchOptions &opts = {});

/// Number of pairs (a, b) in c1^G x c2^G with ab = z.
std::uint64_t structure_constant(const GroupHandle &g, const Perm &c1, const Perm &c2,
                                 const Perm &z, std::size_t cap = 1000000);

/// Word over the generators a and b.
struct WordExpr {
  /// 0 for a, 1 for b, -1 for a parenthesized product.
  int gen = -1;
  std::vector<WordExpr> factors;
  long long exponent = 1;
  std::string to_string() const;
};

/// W := term+ ; term := atom ['^' exponent] ; atom := 'a' | 'b' | '(' W ')'.
/// Positions in ParseError are 0-based offsets into text.
WordExpr parse_word(const std::string &text);
Perm evaluate_word(const Perm &a, const Perm &b, const WordExpr &w);

/// Exhaustive search for a Beauville structure in a small group: all
/// generating hyperbolic pairs, compared through the classes of their powers.
struct ExhaustiveResult {
  std::uint64_t group_order = 0;
  std::uint64_t classes = 0;
  std::uint64_t hyperbolic_triples = 0;
  bool structure_exists = false;
};
ExhaustiveResult exhaustive_beauville(const GroupHandle &g, std::uint64_t max_order = 5000);

} // namespace bv::structure
