#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "bv/structure.hpp"

namespace bv::structure {

struct TripleRecipe {
  enum class Kind { Construction, Words, Search };
  Kind kind = Kind::Search;
  std::string text;
  std::string construction;
  WordExpr x, g;
  Type type{};
  std::uint64_t seed = 0;
};

/// One record of a catalog file:
///
///   [SL_3_2]
///   source = builtin:SL:3:2
///   triple1 = search:4,4,4:101
///   triple2 = search:3,3,7:102
///   expected = (4,4,4) (3,3,7)
///   tier = core
///
/// Other keys: action (vectors | projective), restrict (orbit), order (for
/// file sources), infeasible (reason; no triples needed).
struct CatalogEntry {
  std::string id;
  std::string source;
  std::string action = "vectors";
  bool restrict_orbit = false;
  std::optional<BigInt> order;
  std::array<TripleRecipe, 2> triples;
  std::array<Type, 2> expected{};
  std::string tier = "core";
  std::optional<std::string> infeasible;
  std::size_t line = 0;
};

std::vector<CatalogEntry> parse_catalog(const std::string &text);
TripleRecipe parse_recipe(const std::string &text);

enum class Status { Verified, TypeMismatch, Undecided, Skipped, Exhausted, Violation };
std::string to_string(Status s);

struct RunOptions {
  /// Added to every recipe seed.
  std::uint64_t master_seed = 0;
  std::uint64_t budget = 100000;
  std::size_t cap = 200000;
  unsigned search_workers = 1;
  unsigned entry_workers = 1;
  std::filesystem::path base_dir = ".";
  /// Only the entry with this id when non-empty.
  std::string only;
  bool include_extended = true;
  /// Re-verify verified rows with a second BSGS seed.
  bool recheck = true;
};

struct TripleReport {
  std::string recipe;
  std::optional<Type> type;
  Type expected{};
  BigInt subgroup_order = 0;
  std::string diagnosis;
  std::optional<SearchLog> search;
  std::optional<HyperbolicTriple> triple;
};

struct EntryReport {
  std::string id, group, tier, reason;
  Status status = Status::Skipped;
  BigInt order = 0;
  std::vector<TripleReport> triples;
  std::optional<Condition3> certificate;
  std::optional<bool> recheck;
  double elapsed_ms = 0;
};

struct Report {
  std::uint64_t master_seed = 0;
  std::uint64_t budget = 0;
  std::vector<EntryReport> entries;
  /// Timing fields are left out when canonical is set.
  nlohmann::json to_json(bool canonical = false) const;
  std::size_t count(Status s) const;
};

constexpr int kReportSchemaVersion = 1;

/// Builds the group named by a source string: builtin:FAMILY:d:q, builtin:Sz:q,
/// builtin:Alt:n, builtin:Sym:n or file:path (relative to base_dir).
GroupHandle build_group(const CatalogEntry &e, const std::filesystem::path &base_dir);

EntryReport run_entry(const CatalogEntry &e, const RunOptions &opts);
Report run_catalog(const std::vector<CatalogEntry> &entries, const RunOptions &opts);

} // namespace bv::structure
