#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <set>

#include "bv/catalog.hpp"
#include "bv/error.hpp"

using namespace bv::structure;
namespace fs = std::filesystem;

namespace {

fs::path scratch_dir() {
  const auto d = fs::temp_directory_path() / "bv_test_catalog";
  fs::create_directories(d);
  return d;
}

void expect_ingest_error(const std::string &text, std::size_t line, std::size_t col) {
  try {
    parse_catalog(text);
    FAIL("no error for:\n" << text);
  } catch (const bv::IngestError &e) {
    CHECK(e.line() == line);
    CHECK(e.column() == col);
  }
}

const char *kSmall = R"(# two small rows
[A7]
source = builtin:Alt:7
triple1 = construction:alt
triple2 = search:7,7,7:5
expected = (5,5,5) (7,7,7)

[SL_3_2]
source = builtin:SL:3:2
triple1 = search:4,4,4:101
triple2 = search:3,3,7:102
expected = (4,4,4) (3,3,7)
)";

} // namespace

TEST_CASE("recipes") {
  const auto c = parse_recipe("construction:alt");
  CHECK(c.kind == TripleRecipe::Kind::Construction);
  CHECK(c.construction == "alt");
  const auto w = parse_recipe("words: ab , (ab)^2b");
  CHECK(w.kind == TripleRecipe::Kind::Words);
  CHECK(w.x.to_string() == "ab");
  const auto s = parse_recipe("search:4,4,17:109");
  CHECK(s.kind == TripleRecipe::Kind::Search);
  CHECK(s.type == Type{4, 4, 17});
  CHECK(s.seed == 109);
  for (const char *bad : {"alt", "construction:foo", "words:ab", "search:4,4,4", "search:4,4:1",
                          "search:4,4,x:1", "magic:1", "words:ab,c"})
    CHECK_THROWS(parse_recipe(bad));
}

TEST_CASE("catalog parsing") {
  const auto es = parse_catalog(kSmall);
  REQUIRE(es.size() == 2);
  CHECK(es[0].id == "A7");
  CHECK(es[0].line == 2);
  CHECK(es[0].tier == "core");
  CHECK(es[1].expected[1] == Type{3, 3, 7});
  const auto inf = parse_catalog("[X]\nsource = builtin:SL:9:9\nexpected = (3,3,3) (5,5,5)\n"
                                 "infeasible = too big\n");
  REQUIRE(inf.size() == 1);
  CHECK(inf[0].infeasible == std::string("too big"));
}

TEST_CASE("catalog parse errors name line and column") {
  expect_ingest_error("[A]\nsource = builtin:Alt:7\n  bogus = 1\n", 3, 3);
  expect_ingest_error("[A\n", 1, 2);
  expect_ingest_error("source = builtin:Alt:7\n", 1, 1);
  expect_ingest_error("[A]\nno equals sign\n", 2, 1);
  expect_ingest_error("[A]\nsource = builtin:Alt:7\ntriple1 = search:1,2:3\n", 3, 11);
  expect_ingest_error("[A]\nexpected = (1,2,3)\n", 2, 12);
  expect_ingest_error("[A]\nsource = builtin:Alt:7\naction = sideways\n", 3, 10);
  expect_ingest_error(std::string(kSmall) + "[A7]\n", 13, 2);
  expect_ingest_error("[A]\nsource = builtin:Alt:7\ntriple1 = construction:alt\n"
                      "triple2 = construction:alt\n",
                      1, 1);
}

TEST_CASE("shipped catalog parses with unique ids and complete rows") {
  std::ifstream in(BV_DATA_DIR "/catalog.txt");
  REQUIRE(in);
  const std::string text((std::istreambuf_iterator<char>(in)), {});
  const auto es = parse_catalog(text);
  CHECK(es.size() > 60);
  std::set<std::string> ids;
  unsigned core = 0, infeasible = 0;
  for (const auto &e : es) {
    CHECK(ids.insert(e.id).second);
    core += e.tier == "core";
    infeasible += e.infeasible.has_value();
    if (e.infeasible)
      CHECK_FALSE(e.infeasible->empty());
    for (const auto &t : e.expected)
      CHECK(is_hyperbolic(t));
  }
  for (const char *id : {"SL_3_2", "SL_3_3", "SL_4_2", "SL_4_3", "SL_4_4", "SL_5_2", "Sp_4_3",
                         "OmegaMinus_8_2", "M11", "M23", "M24", "Sz_8"})
    CHECK(ids.count(id));
  CHECK(core >= 6);
  CHECK(infeasible > 0);
}

TEST_CASE("running entries") {
  RunOptions o;
  o.budget = 20000;
  const auto es = parse_catalog(kSmall);
  const auto r = run_entry(es[1], o);
  CHECK(r.status == Status::Verified);
  REQUIRE(r.certificate);
  CHECK(r.certificate->kind == CertKind::CoprimeOrders);
  CHECK(r.order == 168);
  CHECK(r.recheck == true);
  for (const auto &t : r.triples) {
    REQUIRE(t.type);
    CHECK(same_type(*t.type, t.expected));
    CHECK(t.subgroup_order == 168);
  }

  auto wrong = es[1];
  wrong.expected = {Type{4, 4, 4}, Type{7, 7, 7}};
  CHECK(run_entry(wrong, o).status == Status::TypeMismatch);

  auto missing = es[1];
  missing.source = "file:does/not/exist.txt";
  missing.order = BigInt(168);
  const auto rm = run_entry(missing, o);
  CHECK(rm.status == Status::Skipped);
  CHECK_FALSE(rm.reason.empty());

  auto none = es[1];
  none.triples[1] = parse_recipe("search:7,7,7:5");
  none.expected[1] = Type{7, 7, 7};
  o.budget = 50;
  const auto rn = run_entry(none, o);
  CHECK(rn.status == Status::Exhausted);

  const auto inf = parse_catalog("[X]\nsource = builtin:SL:9:9\nexpected = (3,3,3) (5,5,5)\n"
                                 "infeasible = too big\n");
  const auto ri = run_entry(inf[0], o);
  CHECK(ri.status == Status::Skipped);
  CHECK(ri.reason.find("too big") != std::string::npos);
}

TEST_CASE("file sources are read relative to the base directory") {
  const auto dir = scratch_dir();
  {
    std::ofstream f(dir / "a5.txt");
    f << "perm 5 2\n2 1 4 3 5\n3 2 5 4 1\n";
  }
  CatalogEntry e;
  e.id = "A5";
  e.source = "file:a5.txt";
  const auto g = build_group(e, dir);
  CHECK(g.order() == 60);
  e.order = BigInt(61);
  CHECK_THROWS(build_group(e, dir));
  e.source = "builtin:Sym:5";
  e.order.reset();
  CHECK(build_group(e, dir).order() == 120);
  e.source = "nowhere:5";
  CHECK_THROWS_AS(build_group(e, dir), bv::InvalidArgument);
}

TEST_CASE("reports are canonical and deterministic") {
  RunOptions o;
  o.budget = 20000;
  o.master_seed = 9;
  const auto es = parse_catalog(kSmall);
  const auto r1 = run_catalog(es, o);
  o.entry_workers = 2;
  const auto r2 = run_catalog(es, o);
  const auto j1 = r1.to_json(true), j2 = r2.to_json(true);
  CHECK(j1.dump() == j2.dump());
  CHECK(j1["schema_version"] == kReportSchemaVersion);
  CHECK(j1["entries"].size() == 2);
  CHECK(j1["entries"][0]["id"] == "A7");
  CHECK(j1.dump().find("elapsed") == std::string::npos);
  CHECK(r1.to_json(false)["entries"][0].contains("elapsed_ms"));
  CHECK(r1.count(Status::Verified) == 2);

  o.search_workers = 3;
  const auto j3 = run_catalog(es, o).to_json(true).dump();
  for (int i = 0; i < 5; ++i)
    CHECK(run_catalog(es, o).to_json(true).dump() == j3);

  o.only = "SL_3_2";
  const auto r3 = run_catalog(es, o);
  REQUIRE(r3.entries.size() == 1);
  CHECK(r3.entries[0].id == "SL_3_2");
}
