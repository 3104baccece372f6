#include <doctest.h>

#include <algorithm>
#include <map>
#include <unordered_set>

#include "bv/covers.hpp"
#include "bv/error.hpp"

using namespace bv::covers;
namespace permgrp = bv::permgrp;

namespace {

// Second model of 2.Sym(n): Clifford algebra over GF(3) with e_i^2 = +1 and
// t_i = e_i - e_{i+1}, so t_i^2 = 2 = -1. Signs by explicit swap counting.
struct Alt2 {
  std::map<std::uint32_t, int> c;

  static int norm(int v) { return ((v % 3) + 3) % 3; }

  static int swap_sign(std::uint32_t s, std::uint32_t t) {
    int swaps = 0;
    for (unsigned i = 0; i < 32; ++i)
      if (t >> i & 1)
        for (unsigned j = i + 1; j < 32; ++j)
          if (s >> j & 1)
            ++swaps;
    return swaps % 2 ? -1 : 1;
  }

  Alt2 operator*(const Alt2 &o) const {
    Alt2 r;
    for (auto [s, a] : c)
      for (auto [t, b] : o.c) {
        auto &v = r.c[s ^ t];
        v = norm(v + swap_sign(s, t) * a * b);
      }
    r.trim();
    return r;
  }
  void trim() {
    for (auto it = c.begin(); it != c.end();)
      it = it->second ? std::next(it) : c.erase(it);
  }
  bool operator==(const Alt2 &o) const { return c == o.c; }
  bool is_scalar(int v) const { return c.size() == 1 && c.count(0) && c.at(0) == norm(v); }
};

Alt2 scalar(int v) {
  Alt2 r;
  r.c[0] = Alt2::norm(v);
  r.trim();
  return r;
}

Alt2 t_alt(unsigned i) {
  Alt2 r;
  r.c[1u << (i - 1)] = 1;
  r.c[1u << i] = 2;
  return r;
}

// t_i^-1 = -t_i in both models
Alt2 word_alt(const std::vector<int> &w) {
  Alt2 r = scalar(1);
  for (int i : w) {
    r = r * t_alt(std::abs(i));
    if (i < 0)
      r = r * scalar(-1);
  }
  return r;
}

Lift word_lib(const Cover &c, const std::vector<int> &w) {
  Lift r = c.one;
  for (int i : w)
    r = r * (i > 0 ? c.gen(i) : c.gen(-i).inverse());
  return r;
}

std::uint64_t order_alt(const Alt2 &a, std::uint64_t bound) {
  Alt2 x = a;
  for (std::uint64_t k = 1; k <= bound; ++k, x = x * a)
    if (x.is_scalar(1))
      return k;
  return 0;
}

std::vector<int> x_word(unsigned n) {
  std::vector<int> w;
  for (unsigned i = n - 1; i >= 1; --i)
    w.push_back(i);
  return w;
}

// t_1 * g^-1 t_1 g * z with g = t_2 ... t_{n-1}
Alt2 y_alt(unsigned n) {
  std::vector<int> g, ginv;
  for (unsigned i = 2; i <= n - 1; ++i)
    g.push_back(i);
  for (unsigned i = n - 1; i >= 2; --i)
    ginv.push_back(-static_cast<int>(i));
  std::vector<int> w{1};
  w.insert(w.end(), ginv.begin(), ginv.end());
  w.push_back(1);
  w.insert(w.end(), g.begin(), g.end());
  return word_alt(w) * scalar(-1);
}

std::uint64_t factorial(unsigned n) { return n <= 1 ? 1 : n * factorial(n - 1); }

} // namespace

TEST_CASE("Clifford multiplication is associative and e_i e_j anticommute") {
  const auto ctx = CliffordCtx::make(6);
  CHECK(ctx->p() == 7);
  CHECK(ctx->sqrt2() * ctx->sqrt2() % 7 == 2);
  permgrp::Rng rng(4);
  auto random_el = [&] {
    CoverElement e(ctx, 0);
    for (int k = 0; k < 5; ++k)
      e = e + CoverElement::monomial(ctx, rng.below(64), 1 + rng.below(6));
    return e;
  };
  for (int i = 0; i < 300; ++i) {
    const auto a = random_el(), b = random_el(), c = random_el();
    CHECK((a * b) * c == a * (b * c));
    CHECK(a * (b + c) == a * b + a * c);
  }
  for (unsigned i = 0; i < 6; ++i) {
    const auto ei = CoverElement::monomial(ctx, 1u << i, 1);
    CHECK((ei * ei).is_scalar(6));
    for (unsigned j = 0; j < 6; ++j)
      if (i != j) {
        const auto ej = CoverElement::monomial(ctx, 1u << j, 1);
        CHECK(ei * ej == -(ej * ei));
      }
  }
}

TEST_CASE("presentation relations hold") {
  for (unsigned n = 3; n <= 10; ++n) {
    const auto c = build_cover(n);
    CHECK(c.z.u.is_scalar(6));
    for (unsigned i = 1; i < n; ++i) {
      CHECK((c.gen(i) * c.gen(i)).u == c.z.u);
      CHECK(c.gen(i).p == permgrp::Perm::from_cycles(n, {{i, i + 1}}));
      for (unsigned j = i + 2; j < n; ++j)
        CHECK((c.gen(i) * c.gen(j)).pow(2).u == c.z.u);
      if (i + 1 < n)
        CHECK((c.gen(i) * c.gen(i + 1) * c.gen(i)).u == (c.gen(i + 1) * c.gen(i) * c.gen(i + 1)).u);
    }
  }
}

TEST_CASE("closure of the generators has 2 n! elements") {
  for (unsigned n = 3; n <= 7; ++n) {
    const auto c = build_cover(n);
    std::unordered_set<CoverElement, CoverElementHash> seen{c.one.u};
    std::vector<CoverElement> queue{c.one.u};
    for (std::size_t i = 0; i < queue.size(); ++i)
      for (const auto &t : c.t) {
        auto v = queue[i] * t.u;
        if (seen.insert(v).second)
          queue.push_back(std::move(v));
      }
    CHECK(seen.size() == 2 * factorial(n));
  }
}

TEST_CASE("word orders agree with the second model") {
  permgrp::Rng rng(21);
  for (unsigned n = 4; n <= 9; ++n) {
    const auto c = build_cover(n);
    for (int k = 0; k < 60; ++k) {
      std::vector<int> w;
      const std::size_t len = 1 + rng.below(12);
      for (std::size_t i = 0; i < len; ++i) {
        const int g = 1 + static_cast<int>(rng.below(n - 1));
        w.push_back(rng.below(2) ? g : -g);
      }
      const auto lib = word_lib(c, w);
      const auto alt = word_alt(w);
      const auto o = cover_order(lib.u);
      CHECK(o == order_alt(alt, 4 * n));
      CHECK(lib.order() == o);
      CHECK(lib.u.is_one() == alt.is_scalar(1));
      CHECK((lib.u == c.z.u) == alt.is_scalar(-1));
    }
  }
}

TEST_CASE("lifting a projection differs by a power of z") {
  permgrp::Rng rng(22);
  for (unsigned n = 3; n <= 9; ++n) {
    const auto c = build_cover(n);
    for (int k = 0; k < 40; ++k) {
      std::vector<int> w;
      for (std::size_t i = 0; i < 1 + rng.below(10); ++i)
        w.push_back(1 + static_cast<int>(rng.below(n - 1)));
      const auto l = word_lib(c, w);
      const auto back = c.lift(l.p);
      CHECK(back.p == l.p);
      CHECK((back.u == l.u || back.u == (l * c.z).u));
    }
  }
}

TEST_CASE("order3 and xsimz for n = 3..12") {
  for (unsigned n = 3; n <= 12; ++n) {
    CAPTURE(n);
    const auto row = order3_xsimz_suite(n);
    CHECK(row.order_y == (n % 2 ? 3 : 6));
    CHECK(row.xsimz);
    CHECK(row.ok());
    const auto c = build_cover(n);
    const auto x = cover_x(c), y = cover_y(c);
    std::vector<permgrp::Point> ncycle;
    for (unsigned i = 1; i <= n; ++i)
      ncycle.push_back(i);
    CHECK(x.p == permgrp::Perm::from_cycles(n, {ncycle}));
    CHECK(y.p == permgrp::Perm::from_cycles(n, {{1, 2, n}}));
    // second model
    const Alt2 xa = word_alt(x_word(n)), ya = y_alt(n);
    CHECK(order_alt(ya, 12) == (n % 2 ? 3 : 6));
    std::vector<int> g, ginv;
    for (unsigned i = 2; i <= n - 1; ++i)
      g.push_back(i);
    for (unsigned i = n - 1; i >= 2; --i)
      ginv.push_back(-static_cast<int>(i));
    CHECK(xa * ya == word_alt(ginv) * xa * word_alt(g));
  }
}

TEST_CASE("nodd triples of type (n,3,n)") {
  for (unsigned n : {7u, 9u, 11u}) {
    CAPTURE(n);
    const auto r = nodd_triple(n);
    auto type = r.chosen.type;
    std::sort(type.begin(), type.end());
    CHECK(type == std::vector<std::uint64_t>{3, n, n});
    CHECK(r.chosen.xy.u == (r.chosen.x * r.chosen.y).u);
    CHECK(r.projected_order == factorial(n) / 2);
    CHECK_FALSE(r.z_word.empty());
    // second model picks the same candidate
    const Alt2 xa = word_alt(x_word(n));
    const bool x_has_order_n = order_alt(xa, 4 * n) == n;
    CHECK((r.chosen.label == "(x,y,xy)") == x_has_order_n);
  }
  CHECK_THROWS_AS(nodd_triple(8), bv::BadN);
}

TEST_CASE("neven search") {
  const auto r6 = neven_search(6, 1, 20000);
  REQUIRE(r6.found);
  auto t6 = r6.triple.type;
  std::sort(t6.begin(), t6.end());
  CHECK(t6 == std::vector<std::uint64_t>{5, 5, 5});
  CHECK(r6.projected_order == 360);
  const auto r8 = neven_search(8, 1, 20000);
  REQUIRE(r8.found);
  auto t8 = r8.triple.type;
  std::sort(t8.begin(), t8.end());
  CHECK(t8 == std::vector<std::uint64_t>{5, 7, 7});
  CHECK(r8.projected_order == 20160);
  const auto again = neven_search(8, 1, 20000);
  CHECK(again.attempts == r8.attempts);
  CHECK(again.triple.x.u == r8.triple.x.u);
  CHECK_THROWS_AS(neven_search(7, 1, 10), bv::BadN);
}
