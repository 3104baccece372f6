#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "bv/catalog.hpp"
#include "bv/covers.hpp"
#include "bv/error.hpp"
#include "bv/matgrp.hpp"
#include "bv/numtheory.hpp"
#include "bv/permgrp.hpp"
#include "bv/structure.hpp"

namespace {

namespace nt = bv::numtheory;
namespace mg = bv::matgrp;
namespace pg = bv::permgrp;
namespace st = bv::structure;
namespace cv = bv::covers;

constexpr int kOk = 0;
constexpr int kFailure = 1;
constexpr int kUsage = 2;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::uint64_t env_or(const char *name, std::uint64_t fallback) {
  const char *v = std::getenv(name);
  if (!v || !*v)
    return fallback;
  try {
    std::size_t used = 0;
    const auto x = std::stoull(v, &used);
    if (used != std::string(v).size())
      throw std::invalid_argument(v);
    return x;
  } catch (const std::exception &) {
    throw UsageError(std::string(name) + " is not an unsigned integer: " + v);
  }
}

st::Type parse_type(const std::string &s) {
  st::Type t{};
  std::stringstream ss(s);
  std::string part;
  std::size_t i = 0;
  while (std::getline(ss, part, ',')) {
    if (i == 3 || part.empty() || part.find_first_not_of("0123456789") != std::string::npos)
      throw UsageError("type must look like l,m,n: " + s);
    t[i++] = std::stoull(part);
  }
  if (i != 3)
    throw UsageError("type must look like l,m,n: " + s);
  return t;
}

std::string read_file(const std::string &path) {
  std::ifstream in(path);
  if (!in)
    throw UsageError("cannot read " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// --- zsigmondy ---------------------------------------------------------------

struct ZsigArgs {
  std::string base;
  unsigned exp = 0;
  bool json = false;
};

int cmd_zsigmondy(const ZsigArgs &a) {
  nt::BigInt base;
  if (base.set_str(a.base, 10) != 0)
    throw UsageError("base is not an integer: " + a.base);
  if (base < 2 || a.exp < 2)
    throw UsageError("need base >= 2 and exp >= 2");
  const auto r = nt::zsigmondy(base, a.exp);
  if (a.json) {
    nlohmann::json j;
    j["base"] = base.get_str();
    j["exp"] = a.exp;
    j["class"] = nt::to_string(r.classification);
    j["zeta"] = r.zeta ? nlohmann::json(r.zeta->get_str()) : nlohmann::json(nullptr);
    j["lambda"] = r.lambda ? nlohmann::json(r.lambda->get_str()) : nlohmann::json(nullptr);
    j["convention"] = r.convention();
    std::cout << j.dump(2) << "\n";
    return kOk;
  }
  std::cout << "base " << base << " exp " << a.exp << "\n";
  std::cout << "class " << nt::to_string(r.classification) << "\n";
  std::cout << "zeta " << (r.zeta ? r.zeta->get_str() : "none") << "\n";
  std::cout << "lambda " << (r.lambda ? r.lambda->get_str() : "none") << "\n";
  if (r.convention())
    std::cout << "note: 2^6 - 1 has no primitive prime divisor; lambda is 9 by convention\n";
  return kOk;
}

// --- catalog -----------------------------------------------------------------

struct CatalogArgs {
  std::string file = "data/catalog.txt";
  std::string only, out;
  std::uint64_t seed = 0;
  std::uint64_t budget = 0, cap = 0;
  unsigned workers = 1;
  bool strict = false, core_only = false, canonical = false;
};

int cmd_catalog(const CatalogArgs &a) {
  const std::string text = read_file(a.file);
  std::vector<st::CatalogEntry> entries;
  try {
    entries = st::parse_catalog(text);
  } catch (const bv::IngestError &e) {
    throw UsageError(a.file + ": " + e.what());
  }
  st::RunOptions o;
  o.master_seed = a.seed;
  o.budget = a.budget ? a.budget : env_or("BEAUVILLE_BUDGET", o.budget);
  o.cap = a.cap ? a.cap : env_or("BEAUVILLE_CAP", o.cap);
  o.entry_workers = a.workers;
  o.base_dir = std::filesystem::path(a.file).parent_path();
  o.only = a.only;
  o.include_extended = !a.core_only;
  if (!a.only.empty()) {
    bool known = false;
    for (const auto &e : entries)
      known = known || e.id == a.only;
    if (!known)
      throw UsageError("no catalog entry " + a.only);
  }
  const auto report = st::run_catalog(entries, o);
  const std::string doc = report.to_json(a.canonical).dump(2) + "\n";
  if (a.out.empty()) {
    std::cout << doc;
  } else {
    std::ofstream f(a.out);
    if (!f)
      throw UsageError("cannot write " + a.out);
    f << doc;
  }
  for (const auto &e : report.entries)
    std::cerr << e.id << ": " << st::to_string(e.status)
              << (e.reason.empty() ? "" : " (" + e.reason + ")") << "\n";
  if (report.count(st::Status::Violation) || report.count(st::Status::TypeMismatch))
    return kFailure;
  if (a.strict && (report.count(st::Status::Skipped) || report.count(st::Status::Exhausted) ||
                   report.count(st::Status::Undecided)))
    return kFailure;
  return kOk;
}

// --- search ------------------------------------------------------------------

struct SearchArgs {
  std::string family, type, action = "vectors";
  unsigned d = 0;
  std::uint64_t q = 0, seed = 1, budget = 0;
  unsigned workers = 1;
};

int cmd_search(const SearchArgs &a) {
  mg::Family fam;
  try {
    fam = mg::parse_family(a.family);
  } catch (const bv::Error &e) {
    throw UsageError(e.what());
  }
  const st::Type type = parse_type(a.type);
  pg::Action act;
  if (a.action == "vectors")
    act = pg::Action::NonzeroVectors;
  else if (a.action == "projective")
    act = pg::Action::ProjectivePoints;
  else
    throw UsageError("action must be vectors or projective");
  const auto spec = fam == mg::Family::SuzukiB2 ? mg::suzuki_generators(a.q) : mg::make_spec(fam, a.d, a.q);
  const auto g = st::GroupHandle::from_realization(pg::realize(spec, act), act == pg::Action::ProjectivePoints);
  st::SearchOptions so;
  so.seed = a.seed;
  so.budget = a.budget ? a.budget : env_or("BEAUVILLE_BUDGET", so.budget);
  so.workers = a.workers;
  const auto r = st::search_by_type(g, type, so);
  std::cout << "group " << g.name() << " order " << g.order() << " degree " << g.degree() << "\n";
  if (!r.found) {
    std::cout << "not found after " << r.log.attempts << " attempts\n";
    return kFailure;
  }
  std::cout << "found type " << st::to_string(r.triple->type) << " seed " << r.log.seed << " worker "
            << r.log.worker << " iteration " << r.log.iteration << "\n";
  std::cout << "x " << r.triple->x.to_cycle_string() << "\n";
  std::cout << "y " << r.triple->y.to_cycle_string() << "\n";
  return kOk;
}

// --- identities ----------------------------------------------------------------

struct IdentityArgs {
  std::string lemma;
  std::uint64_t qmax = 25, seed = 1;
  unsigned draws = 1000;
  bool typeset = false;
};

int cmd_identities(const IdentityArgs &a) {
  const auto rep = mg::identity_suite(a.lemma, a.qmax, a.draws, a.seed, a.typeset);
  for (const auto &row : rep.rows)
    std::cout << a.lemma << " q=" << row.q << " draws=" << row.draws << " mismatches=" << row.mismatches
              << "\n";
  std::cout << (rep.total_mismatches() == 0 ? "all pass" : "MISMATCH") << "\n";
  return rep.total_mismatches() == 0 ? kOk : kFailure;
}

// --- covers ----------------------------------------------------------------------

struct CoverArgs {
  unsigned nmax = 12;
  bool neven = false;
  std::uint64_t seed = 1, budget = 20000;
};

std::string type_string(const std::vector<std::uint64_t> &t) {
  std::string s = "(";
  for (std::size_t i = 0; i < t.size(); ++i)
    s += (i ? "," : "") + std::to_string(t[i]);
  return s + ")";
}

int cmd_covers(const CoverArgs &a) {
  if (a.nmax < 3 || a.nmax > 14)
    throw UsageError("nmax must lie in 3..14");
  bool ok = true;
  std::cout << "n  o(y)  expected  xy=x^w\n";
  for (unsigned n = 3; n <= a.nmax; ++n) {
    const auto row = cv::order3_xsimz_suite(n);
    std::cout << n << "  " << row.order_y << "  " << row.expected << "  " << (row.xsimz ? "yes" : "no")
              << "\n";
    ok = ok && row.ok();
  }
  for (unsigned n = 7; n <= std::min(a.nmax, 13u); n += 2) {
    const auto r = cv::nodd_triple(n);
    const bool good = r.chosen.type == std::vector<std::uint64_t>{n, 3, n};
    std::cout << "nodd n=" << n << " " << r.chosen.label << " type " << type_string(r.chosen.type)
              << " projected order " << r.projected_order << " z = " << r.z_word << "\n";
    ok = ok && good;
  }
  if (a.neven)
    for (unsigned n = 6; n <= a.nmax; n += 2) {
      const auto r = cv::neven_search(n, a.seed, a.budget);
      std::cout << "neven n=" << n << " "
                << (r.found ? "type " + type_string(r.triple.type) + " z = " + r.z_word
                            : std::string("not found"))
                << " attempts " << r.attempts << (r.explicit_pair ? " (explicit pair)" : "") << "\n";
      ok = ok && r.found;
    }
  return ok ? kOk : kFailure;
}

} // namespace

int main(int argc, char **argv) {
  CLI::App app{"Search and verification of Beauville structures on finite quasisimple groups"};
  app.require_subcommand(1);

  ZsigArgs za;
  auto *zs = app.add_subcommand("zsigmondy", "Primitive prime divisors of base^exp - 1");
  zs->add_option("--base", za.base, "Base a >= 2")->required();
  zs->add_option("--exp", za.exp, "Exponent n >= 2")->required();
  zs->add_flag("--json", za.json, "Structured output");

  CatalogArgs ca;
  auto *cat = app.add_subcommand("catalog", "Run a catalog of expected Beauville structures");
  cat->add_option("--file", ca.file, "Catalog file")->capture_default_str();
  cat->add_option("--seed", ca.seed, "Master seed added to every recipe seed");
  cat->add_option("--budget", ca.budget, "Search attempts per triple (default 100000, or BEAUVILLE_BUDGET)");
  cat->add_option("--cap", ca.cap, "Class size cap (default 200000, or BEAUVILLE_CAP)");
  cat->add_option("--only", ca.only, "Run a single entry");
  cat->add_option("--out", ca.out, "Write the report here instead of standard output");
  cat->add_option("--workers", ca.workers, "Entries run in parallel")->check(CLI::Range(1u, 256u));
  cat->add_flag("--strict", ca.strict, "Skipped, Exhausted and Undecided entries also fail");
  cat->add_flag("--core-only", ca.core_only, "Leave out extended-tier entries");
  cat->add_flag("--canonical", ca.canonical, "Omit timing fields");

  SearchArgs sa;
  auto *se = app.add_subcommand("search", "Seeded search for a generating hyperbolic triple of a given type");
  se->add_option("family,--family", sa.family, "SL, SU, Sp, OmegaPlus, OmegaMinus, OmegaOdd, Sz, ...")->required();
  se->add_option("d,--d", sa.d, "Dimension")->required();
  se->add_option("q,--q", sa.q, "Field order")->required();
  se->add_option("type,--type", sa.type, "l,m,n")->required();
  se->add_option("--seed", sa.seed)->capture_default_str();
  se->add_option("--budget", sa.budget, "Attempts (default 100000, or BEAUVILLE_BUDGET)");
  se->add_option("--action", sa.action, "vectors or projective")->capture_default_str();
  se->add_option("--workers", sa.workers)->check(CLI::Range(1u, 256u));

  IdentityArgs ia;
  auto *id = app.add_subcommand("identities", "Randomized characteristic polynomial identity suites");
  id->add_option("--lemma", ia.lemma)->required()->check(CLI::IsMember({"lineardim3", "u41", "u3", "sp42"}));
  id->add_option("--qmax", ia.qmax)->capture_default_str();
  id->add_option("--draws", ia.draws)->capture_default_str();
  id->add_option("--seed", ia.seed)->capture_default_str();
  id->add_flag("--typeset", ia.typeset, "Use the matrices exactly as typeset");

  CoverArgs cva;
  auto *co = app.add_subcommand("covers", "Order and conjugacy checks in the double covers 2.Alt(n)");
  co->add_option("--nmax", cva.nmax)->capture_default_str();
  co->add_flag("--neven", cva.neven, "Also search type (5,n-1,n-1) for even n");
  co->add_option("--seed", cva.seed)->capture_default_str();
  co->add_option("--budget", cva.budget)->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError &e) {
    const int rc = app.exit(e);
    return rc == 0 ? kOk : kUsage;
  }

  try {
    if (*zs)
      return cmd_zsigmondy(za);
    if (*cat)
      return cmd_catalog(ca);
    if (*se)
      return cmd_search(sa);
    if (*id)
      return cmd_identities(ia);
    if (*co)
      return cmd_covers(cva);
  } catch (const UsageError &e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const bv::IngestError &e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const bv::Error &e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  }
  return kUsage;
}
