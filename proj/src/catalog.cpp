#include "bv/catalog.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <fstream>
#include <sstream>
#include <thread>

#include "bv/error.hpp"

namespace bv::structure {

namespace fs = std::filesystem;

std::string to_string(Status s) {
  switch (s) {
  case Status::Verified:
    return "Verified";
  case Status::TypeMismatch:
    return "TypeMismatch";
  case Status::Undecided:
    return "Undecided";
  case Status::Skipped:
    return "Skipped";
  case Status::Exhausted:
    return "Exhausted";
  case Status::Violation:
    return "Violation";
  }
  return "?";
}

namespace {

std::string trim(const std::string &s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos)
    return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string &s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream is(s);
  while (std::getline(is, cur, sep))
    out.push_back(trim(cur));
  return out;
}

std::uint64_t to_u64(const std::string &s, const char *what) {
  if (s.empty() || s.find_first_not_of("0123456789") != std::string::npos)
    throw InvalidArgument(std::string("expected ") + what + ", got '" + s + "'");
  return std::stoull(s);
}

Type parse_type(const std::string &s) {
  std::string t = trim(s);
  if (t.size() >= 2 && t.front() == '(' && t.back() == ')')
    t = t.substr(1, t.size() - 2);
  const auto parts = split(t, ',');
  if (parts.size() != 3)
    throw InvalidArgument("type needs three orders: '" + s + "'");
  return {to_u64(parts[0], "order"), to_u64(parts[1], "order"), to_u64(parts[2], "order")};
}

std::array<Type, 2> parse_expected(const std::string &s) {
  std::vector<Type> types;
  std::size_t i = 0;
  while (true) {
    const auto open = s.find('(', i);
    if (open == std::string::npos)
      break;
    const auto close = s.find(')', open);
    if (close == std::string::npos)
      throw InvalidArgument("unbalanced parenthesis in expected types");
    types.push_back(parse_type(s.substr(open, close - open + 1)));
    i = close + 1;
  }
  if (types.size() != 2)
    throw InvalidArgument("expected exactly two types");
  return {types[0], types[1]};
}

BigInt factorial_range(unsigned lo, unsigned hi) {
  BigInt f = 1;
  for (unsigned i = lo; i <= hi; ++i)
    f *= i;
  return f;
}

} // namespace

TripleRecipe parse_recipe(const std::string &text) {
  TripleRecipe r;
  r.text = trim(text);
  const auto colon = r.text.find(':');
  if (colon == std::string::npos)
    throw InvalidArgument("recipe needs a kind prefix: '" + r.text + "'");
  const std::string kind = r.text.substr(0, colon), rest = r.text.substr(colon + 1);
  if (kind == "construction") {
    r.kind = TripleRecipe::Kind::Construction;
    r.construction = trim(rest);
    static const std::vector<std::string> known = {"lineardim3", "u41", "u3", "sp42", "alt"};
    if (std::find(known.begin(), known.end(), r.construction) == known.end())
      throw InvalidArgument("unknown construction '" + r.construction + "'");
  } else if (kind == "words") {
    r.kind = TripleRecipe::Kind::Words;
    const auto parts = split(rest, ',');
    if (parts.size() != 2)
      throw InvalidArgument("words recipe needs x,g");
    r.x = parse_word(parts[0]);
    r.g = parse_word(parts[1]);
  } else if (kind == "search") {
    r.kind = TripleRecipe::Kind::Search;
    const auto c2 = rest.rfind(':');
    if (c2 == std::string::npos)
      throw InvalidArgument("search recipe needs l,m,n:seed");
    r.type = parse_type(rest.substr(0, c2));
    r.seed = to_u64(trim(rest.substr(c2 + 1)), "seed");
  } else {
    throw InvalidArgument("unknown recipe kind '" + kind + "'");
  }
  return r;
}

std::vector<CatalogEntry> parse_catalog(const std::string &text) {
  std::vector<CatalogEntry> out;
  std::istringstream is(text);
  std::string raw;
  std::size_t line = 0;
  CatalogEntry *cur = nullptr;
  std::array<bool, 2> have_triple{};
  bool have_expected = false, have_source = false;
  auto finish = [&](std::size_t at) {
    if (!cur)
      return;
    if (!have_source)
      throw IngestError(cur->line, 1, "entry " + cur->id + " has no source");
    if (!have_expected)
      throw IngestError(cur->line, 1, "entry " + cur->id + " has no expected types");
    if (!cur->infeasible && !(have_triple[0] && have_triple[1]))
      throw IngestError(at, 1, "entry " + cur->id + " needs triple1 and triple2");
  };
  while (std::getline(is, raw)) {
    ++line;
    std::string content = raw;
    if (const auto hash = content.find('#'); hash != std::string::npos)
      content = content.substr(0, hash);
    const std::string t = trim(content);
    if (t.empty())
      continue;
    const std::size_t col = raw.find_first_not_of(" \t") + 1;
    if (t.front() == '[') {
      if (t.back() != ']')
        throw IngestError(line, col + t.size() - 1, "expected ']'");
      finish(line);
      out.emplace_back();
      cur = &out.back();
      cur->id = trim(t.substr(1, t.size() - 2));
      cur->line = line;
      if (cur->id.empty())
        throw IngestError(line, col + 1, "empty entry id");
      for (std::size_t k = 0; k + 1 < out.size(); ++k)
        if (out[k].id == cur->id)
          throw IngestError(line, col + 1, "duplicate entry id " + cur->id);
      have_triple = {false, false};
      have_expected = have_source = false;
      continue;
    }
    const auto eq = t.find('=');
    if (eq == std::string::npos)
      throw IngestError(line, col, "expected key = value");
    if (!cur)
      throw IngestError(line, col, "field outside an entry");
    const std::string key = trim(t.substr(0, eq)), value = trim(t.substr(eq + 1));
    const std::size_t vcol = raw.find(value, raw.find('=')) + 1;
    try {
      if (key == "source") {
        cur->source = value;
        have_source = true;
      } else if (key == "action") {
        if (value != "vectors" && value != "projective")
          throw InvalidArgument("action must be vectors or projective");
        cur->action = value;
      } else if (key == "restrict") {
        if (value != "orbit")
          throw InvalidArgument("restrict must be orbit");
        cur->restrict_orbit = true;
      } else if (key == "order") {
        cur->order = BigInt(value);
      } else if (key == "triple1" || key == "triple2") {
        const int k = key.back() - '1';
        cur->triples[k] = parse_recipe(value);
        have_triple[k] = true;
      } else if (key == "expected") {
        cur->expected = parse_expected(value);
        have_expected = true;
      } else if (key == "tier") {
        if (value != "core" && value != "extended")
          throw InvalidArgument("tier must be core or extended");
        cur->tier = value;
      } else if (key == "infeasible") {
        cur->infeasible = value;
      } else {
        throw IngestError(line, col, "unknown key '" + key + "'");
      }
    } catch (const ParseError &e) {
      throw IngestError(line, vcol, e.what());
    } catch (const InvalidArgument &e) {
      throw IngestError(line, vcol, e.what());
    } catch (const std::invalid_argument &) {
      throw IngestError(line, vcol, "malformed value '" + value + "'");
    }
  }
  finish(line);
  return out;
}

GroupHandle build_group(const CatalogEntry &e, const fs::path &base_dir) {
  const auto parts = split(e.source, ':');
  if (parts.size() >= 2 && parts[0] == "file") {
    const fs::path path = base_dir / e.source.substr(5);
    std::ifstream in(path);
    if (!in)
      throw InvalidArgument("cannot read " + path.string());
    std::stringstream ss;
    ss << in.rdbuf();
    return GroupHandle::from_perms(e.id, permgrp::parse_perm_file(ss.str()), e.order);
  }
  if (parts.size() < 3 || parts[0] != "builtin")
    throw InvalidArgument("unknown source '" + e.source + "'");
  const std::string fam = parts[1];
  if (fam == "Alt" || fam == "Sym") {
    const unsigned n = static_cast<unsigned>(to_u64(parts[2], "degree"));
    if (fam == "Alt")
      return GroupHandle::from_perms("Alt(" + parts[2] + ")", permgrp::alt_generators(n),
                                     factorial_range(3, n));
    return GroupHandle::from_perms("Sym(" + parts[2] + ")", permgrp::sym_generators(n),
                                   factorial_range(2, n));
  }
  const auto action =
      e.action == "projective" ? permgrp::Action::ProjectivePoints : permgrp::Action::NonzeroVectors;
  matgrp::GroupSpec spec;
  if (fam == "Sz" || fam == "SuzukiB2") {
    spec = matgrp::suzuki_generators(to_u64(parts[2], "field order"));
  } else {
    if (parts.size() != 4)
      throw InvalidArgument("builtin matrix source needs FAMILY:d:q");
    spec = matgrp::make_spec(matgrp::parse_family(fam),
                             static_cast<unsigned>(to_u64(parts[2], "dimension")),
                             to_u64(parts[3], "field order"));
  }
  return GroupHandle::from_realization(permgrp::realize(std::move(spec), action),
                                       e.restrict_orbit);
}

namespace {

std::pair<Perm, Perm> construct(const GroupHandle &g, const std::string &name) {
  if (name == "alt") {
    const auto t = permgrp::alt_triple(static_cast<unsigned>(g.degree()));
    return {t.x, t.y};
  }
  const matgrp::GroupSpec *spec = g.spec();
  if (!spec)
    throw InvalidArgument("construction " + name + " needs a matrix group");
  const std::uint64_t q = spec->q();
  matgrp::Triple t = name == "lineardim3" ? matgrp::lineardim3_triple(q)
                     : name == "u41"      ? matgrp::u41_triple(q)
                     : name == "u3"       ? matgrp::u3_triple(q)
                                          : matgrp::sp42_triple(q);
  return {g.from_matrix(t.x), g.from_matrix(t.y)};
}

bool types_match(const Type &a, const Type &b, const std::array<Type, 2> &e) {
  return (same_type(a, e[0]) && same_type(b, e[1])) || (same_type(a, e[1]) && same_type(b, e[0]));
}

} // namespace

EntryReport run_entry(const CatalogEntry &e, const RunOptions &opts) {
  const auto t0 = std::chrono::steady_clock::now();
  EntryReport rep;
  rep.id = e.id;
  rep.group = e.id;
  rep.tier = e.tier;
  auto done = [&](Status s, std::string reason) {
    rep.status = s;
    rep.reason = std::move(reason);
    rep.elapsed_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
    return rep;
  };
  if (e.infeasible)
    return done(Status::Skipped, "infeasible: " + *e.infeasible);
  if (e.source.rfind("file:", 0) == 0 && !fs::exists(opts.base_dir / e.source.substr(5)))
    return done(Status::Skipped, "missing ingestion file " + e.source.substr(5));

  const GroupHandle g = build_group(e, opts.base_dir);
  rep.group = g.name();
  rep.order = g.order();

  std::array<std::optional<HyperbolicTriple>, 2> found;
  for (int k = 0; k < 2; ++k) {
    const TripleRecipe &r = e.triples[k];
    TripleReport tr;
    tr.recipe = r.text;
    tr.expected = e.expected[k];
    Perm x, y;
    if (r.kind == TripleRecipe::Kind::Search) {
      SearchOptions so;
      so.seed = r.seed + opts.master_seed;
      so.budget = opts.budget;
      so.workers = opts.search_workers;
      auto res = search_by_type(g, r.type, so);
      tr.search = res.log;
      if (!res.found) {
        tr.diagnosis = "exhausted after " + std::to_string(res.log.attempts) + " attempts";
        rep.triples.push_back(tr);
        return done(Status::Exhausted, "triple" + std::to_string(k + 1) + " search exhausted");
      }
      x = res.triple->x;
      y = res.triple->y;
    } else if (r.kind == TripleRecipe::Kind::Words) {
      if (g.gens().size() < 2)
        throw InvalidArgument("word recipes need two standard generators");
      x = evaluate_word(g.gens()[0], g.gens()[1], r.x);
      y = x.conj(evaluate_word(g.gens()[0], g.gens()[1], r.g));
    } else {
      std::tie(x, y) = construct(g, r.construction);
    }
    const TripleCheck chk = verify_triple(g, x, y);
    tr.type = chk.type;
    tr.subgroup_order = chk.subgroup_order;
    tr.diagnosis = chk.diagnosis();
    tr.triple = chk.triple;
    rep.triples.push_back(tr);
    if (!chk.ok())
      return done(Status::TypeMismatch, "triple" + std::to_string(k + 1) + ": " + chk.diagnosis());
    found[k] = chk.triple;
  }
  if (!types_match(found[0]->type, found[1]->type, e.expected))
    return done(Status::TypeMismatch, "types " + to_string(found[0]->type) + " " +
                                          to_string(found[1]->type) + " differ from expected");
  rep.certificate = condition_iii(g, *found[0], *found[1], opts.cap);
  switch (rep.certificate->kind) {
  case CertKind::Violation:
    return done(Status::Violation, "a power of the first triple is conjugate to one of the second");
  case CertKind::Undecided:
    return done(Status::Undecided, "class orbit cap reached");
  default:
    break;
  }
  if (opts.recheck) {
    bool same = true;
    std::array<HyperbolicTriple, 2> again;
    for (int k = 0; k < 2; ++k) {
      const auto chk = verify_triple(g, found[k]->x, found[k]->y, worker_seed(0xc0ffee, k));
      same = same && chk.ok() && chk.type == found[k]->type &&
             chk.subgroup_order == found[k]->subgroup_order;
      if (chk.ok())
        again[k] = *chk.triple;
    }
    if (same)
      same = condition_iii(g, again[0], again[1], opts.cap).kind == rep.certificate->kind;
    rep.recheck = same;
    if (!same)
      return done(Status::Undecided, "independent re-check disagreed");
  }
  return done(Status::Verified, "");
}

Report run_catalog(const std::vector<CatalogEntry> &entries, const RunOptions &opts) {
  std::vector<const CatalogEntry *> todo;
  for (const auto &e : entries) {
    if (!opts.only.empty() && e.id != opts.only)
      continue;
    if (!opts.include_extended && e.tier == "extended")
      continue;
    todo.push_back(&e);
  }
  Report rep;
  rep.master_seed = opts.master_seed;
  rep.budget = opts.budget;
  rep.entries.resize(todo.size());
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t i; (i = next.fetch_add(1)) < todo.size();)
      rep.entries[i] = run_entry(*todo[i], opts);
  };
  const unsigned w = std::max(1u, std::min<unsigned>(opts.entry_workers, todo.size()));
  if (w <= 1) {
    work();
  } else {
    std::vector<std::thread> ts;
    for (unsigned k = 0; k < w; ++k)
      ts.emplace_back(work);
    for (auto &t : ts)
      t.join();
  }
  return rep;
}

std::size_t Report::count(Status s) const {
  return std::count_if(entries.begin(), entries.end(),
                       [&](const EntryReport &e) { return e.status == s; });
}

nlohmann::json Report::to_json(bool canonical) const {
  using nlohmann::json;
  json j;
  j["schema_version"] = kReportSchemaVersion;
  j["master_seed"] = master_seed;
  j["budget"] = budget;
  json list = json::array();
  for (const auto &e : entries) {
    json je;
    je["id"] = e.id;
    je["group"] = e.group;
    je["tier"] = e.tier;
    je["status"] = to_string(e.status);
    if (!e.reason.empty())
      je["reason"] = e.reason;
    if (e.order != 0)
      je["order"] = e.order.get_str();
    json ts = json::array();
    for (const auto &t : e.triples) {
      json jt;
      jt["recipe"] = t.recipe;
      jt["expected"] = t.expected;
      if (t.type)
        jt["type"] = *t.type;
      if (t.subgroup_order != 0)
        jt["subgroup_order"] = t.subgroup_order.get_str();
      jt["diagnosis"] = t.diagnosis;
      if (t.search)
        jt["search"] = {{"seed", t.search->seed},
                        {"worker", t.search->worker},
                        {"iteration", t.search->iteration},
                        {"attempts", t.search->attempts}};
      if (t.triple) {
        jt["x"] = t.triple->x.to_cycle_string();
        jt["y"] = t.triple->y.to_cycle_string();
      }
      ts.push_back(jt);
    }
    je["triples"] = ts;
    if (e.certificate) {
      json checks = json::array();
      for (const auto &c : e.certificate->checks)
        checks.push_back({{"first", c.first}, {"second", c.second}, {"prime", c.prime},
                          {"verdict", c.verdict}});
      je["certificate"] = {{"kind", to_string(e.certificate->kind)}, {"checks", checks}};
    }
    if (e.recheck)
      je["recheck"] = *e.recheck;
    if (!canonical)
      je["elapsed_ms"] = e.elapsed_ms;
    list.push_back(je);
  }
  j["entries"] = list;
  json summary;
  for (Status s : {Status::Verified, Status::TypeMismatch, Status::Undecided, Status::Skipped,
                   Status::Exhausted, Status::Violation})
    summary[to_string(s)] = count(s);
  j["summary"] = summary;
  return j;
}

} // namespace bv::structure
