#include <doctest.h>

#include <algorithm>
#include <random>
#include <set>

#include "bv/error.hpp"
#include "bv/ffield.hpp"

using namespace bv::ffield;

namespace {

using Coeffs = std::vector<std::uint64_t>;

// Schoolbook polynomial arithmetic over GF(p), independent of FieldCtx.
Coeffs poly_mod(Coeffs a, const Coeffs &m, std::uint64_t p) {
  const std::size_t dm = m.size() - 1;
  while (a.size() > dm) {
    const std::uint64_t lead = a.back() % p;
    const std::size_t shift = a.size() - 1 - dm;
    for (std::size_t i = 0; i <= dm; ++i)
      a[shift + i] = (a[shift + i] + (p - lead) * m[i]) % p;
    a.pop_back();
  }
  a.resize(dm, 0);
  return a;
}

Coeffs naive_mul(const Coeffs &x, const Coeffs &y, const Coeffs &m, std::uint64_t p) {
  Coeffs r(x.size() + y.size(), 0);
  for (std::size_t i = 0; i < x.size(); ++i)
    for (std::size_t j = 0; j < y.size(); ++j)
      r[i + j] = (r[i + j] + x[i] * y[j]) % p;
  return poly_mod(r, m, p);
}

bool has_monic_factor_of_degree(const Coeffs &f, std::uint64_t p, unsigned k) {
  std::uint64_t count = 1;
  for (unsigned i = 0; i < k; ++i)
    count *= p;
  for (std::uint64_t code = 0; code < count; ++code) {
    Coeffs g(k + 1, 0);
    g[k] = 1;
    for (unsigned i = 0, c = code; i < k; ++i, c /= p)
      g[i] = c % p;
    const Coeffs r = poly_mod(f, g, p);
    if (std::all_of(r.begin(), r.end(), [](auto v) { return v == 0; }))
      return true;
  }
  return false;
}

bool irreducible_oracle(const Coeffs &f, std::uint64_t p) {
  const unsigned d = f.size() - 1;
  for (unsigned k = 1; 2 * k <= d; ++k)
    if (has_monic_factor_of_degree(f, p, k))
      return false;
  return true;
}

const std::vector<std::pair<std::uint64_t, unsigned>> kFields = {
    {2, 1}, {3, 1}, {5, 1}, {7, 1}, {2, 2}, {3, 2}, {2, 3}, {5, 2}, {3, 3},
    {2, 4}, {7, 2}, {2, 5}, {3, 4}, {2, 6}, {5, 3}, {11, 2}, {2, 8}};

} // namespace

TEST_CASE("modulus is the lex-least monic irreducible") {
  for (auto [p, a] : kFields) {
    const auto &F = FieldCtx::get(p, a);
    const Coeffs &m = F.modulus();
    REQUIRE(m.size() == a + 1);
    CHECK(m[a] == 1);
    CHECK(irreducible_oracle(m, p));
    CHECK(is_irreducible(m, p));
    if (p * a > 20)
      continue;
    // every monic polynomial below m in (c_0, c_1, ...) lex order is reducible
    std::uint64_t count = 1;
    for (unsigned i = 0; i < a; ++i)
      count *= p;
    for (std::uint64_t code = 0; code < count; ++code) {
      Coeffs g(a + 1, 0);
      g[a] = 1;
      std::uint64_t c = code;
      for (unsigned i = a; i-- > 0; c /= p)
        g[i] = c % p;
      if (g == m)
        break;
      CHECK_FALSE(irreducible_oracle(g, p));
    }
  }
}

TEST_CASE("is_irreducible agrees with factor search") {
  for (std::uint64_t p : {2, 3, 5})
    for (unsigned d = 1; d <= 4; ++d) {
      std::uint64_t count = 1;
      for (unsigned i = 0; i < d; ++i)
        count *= p;
      for (std::uint64_t code = 0; code < count; ++code) {
        Coeffs g(d + 1, 0);
        g[d] = 1;
        for (unsigned i = 0, c = code; i < d; ++i, c /= p)
          g[i] = c % p;
        CHECK_MESSAGE(is_irreducible(g, p) == irreducible_oracle(g, p), "p=" << p);
      }
    }
}

TEST_CASE("multiplication matches schoolbook arithmetic") {
  std::mt19937_64 rng(11);
  for (auto [p, a] : kFields) {
    const auto &F = FieldCtx::get(p, a);
    for (int i = 0; i < 2000; ++i) {
      const Code x = rng() % F.order(), y = rng() % F.order();
      CHECK(F.coeffs(F.mul(x, y)) == naive_mul(F.coeffs(x), F.coeffs(y), F.modulus(), p));
      Coeffs s(a);
      for (unsigned k = 0; k < a; ++k)
        s[k] = (F.coeffs(x)[k] + F.coeffs(y)[k]) % p;
      CHECK(F.coeffs(F.add(x, y)) == s);
    }
  }
}

TEST_CASE("field axioms on random triples") {
  std::mt19937_64 rng(12);
  for (auto [p, a] : kFields) {
    const auto &F = FieldCtx::get(p, a);
    for (int i = 0; i < 10000; ++i) {
      const FieldElement x(F, rng() % F.order()), y(F, rng() % F.order()),
          z(F, rng() % F.order());
      CHECK((x * y) * z == x * (y * z));
      CHECK((x + y) + z == x + (y + z));
      CHECK(x * (y + z) == x * y + x * z);
      CHECK(x * y == y * x);
      CHECK(x - y + y == x);
      if (!x.is_zero())
        CHECK((x * x.inverse()).is_one());
    }
  }
}

TEST_CASE("elements are listed in coefficient lex order") {
  for (auto [p, a] : kFields) {
    const auto &F = FieldCtx::get(p, a);
    const auto els = elements(F);
    REQUIRE(els.size() == F.order());
    for (std::size_t i = 1; i < els.size(); ++i)
      CHECK(std::lexicographical_compare(els[i - 1].coeffs().begin(), els[i - 1].coeffs().end(),
                                         els[i].coeffs().begin(), els[i].coeffs().end()));
    for (std::uint64_t r = 0; r < F.order(); ++r)
      CHECK(F.lex_rank(F.from_lex_rank(r)) == r);
  }
}

TEST_CASE("multiplicative generator") {
  CHECK(multiplicative_generator(FieldCtx::get(2, 1)).is_one());
  CHECK(multiplicative_generator(FieldCtx::get(7, 1)) == FieldElement::from_int(FieldCtx::get(7, 1), 3));
  for (auto [p, a] : kFields) {
    const auto &F = FieldCtx::get(p, a);
    const auto g = multiplicative_generator(F);
    std::set<Code> seen;
    FieldElement x = FieldElement::one(F);
    for (std::uint64_t i = 0; i + 1 < F.order(); ++i) {
      seen.insert(x.code());
      x *= g;
    }
    CHECK(seen.size() == F.order() - 1);
    CHECK(F.element_order(g.code()) == F.order() - 1);
    // least with that order
    for (const auto &y : elements(F)) {
      if (y == g)
        break;
      if (!y.is_zero())
        CHECK(F.element_order(y.code()) < F.order() - 1);
    }
  }
}

TEST_CASE("element_order matches repeated multiplication") {
  for (auto [p, a] : kFields) {
    const auto &F = FieldCtx::get(p, a);
    if (F.order() > 300)
      continue;
    for (const auto &x : elements(F)) {
      if (x.is_zero())
        continue;
      std::uint64_t k = 1;
      for (auto y = x; !y.is_one(); y *= x)
        ++k;
      CHECK(F.element_order(x.code()) == k);
    }
  }
}

TEST_CASE("frobenius is an automorphism fixing exactly the prime field") {
  for (auto [p, a] : kFields) {
    const auto &F = FieldCtx::get(p, a);
    if (F.order() > 81)
      continue;
    const auto els = elements(F);
    std::set<Code> image;
    for (const auto &x : els) {
      const auto fx = frobenius(x, 1);
      image.insert(fx.code());
      CHECK(fx == x.pow(std::uint64_t(p)));
      CHECK((fx == x) == (x.coeffs() == F.coeffs(F.from_int(x.coeffs()[0]))));
      CHECK(frobenius(fx, a - 1) == x);
      for (const auto &y : els) {
        CHECK(frobenius(x * y, 1) == fx * frobenius(y, 1));
        CHECK(frobenius(x + y, 1) == fx + frobenius(y, 1));
      }
    }
    CHECK(image.size() == els.size());
  }
  const auto &F4 = FieldCtx::get(2, 2);
  const FieldElement w(F4, F4.from_coeffs({0, 1}));
  CHECK(frobenius(w, 1) == w + FieldElement::one(F4));
}

TEST_CASE("norm is onto the index-2 subfield") {
  for (auto [p, a] : kFields) {
    if (a % 2)
      continue;
    const auto &F = FieldCtx::get(p, a);
    if (F.order() > 81)
      continue;
    std::set<Code> image, sub;
    for (const auto &x : elements(F)) {
      image.insert(norm(x).code());
      if (in_subfield(x, a / 2))
        sub.insert(x.code());
      CHECK(in_subfield(trace(x), a / 2));
    }
    CHECK(image == sub);
    CHECK(sub.size() * sub.size() == F.order());
  }
}

TEST_CASE("solve_norm and trace_zero_sample") {
  const auto &F9 = FieldCtx::get(3, 2);
  const auto two = FieldElement::from_int(F9, 2);
  const auto x = solve_norm(F9, two);
  CHECK(x * x.pow(std::uint64_t(3)) == two);
  for (const auto &y : elements(F9)) {
    if (y == x)
      break;
    CHECK(norm(y) != two);
  }
  CHECK(norm(solve_norm(F9, FieldElement::one(F9))).is_one());
  CHECK(solve_norm(F9, FieldElement::zero(F9)).is_zero());
  CHECK_THROWS_AS(solve_norm(F9, FieldElement(F9, F9.from_coeffs({0, 1}))), bv::NotInSubfield);

  const auto &F4 = FieldCtx::get(2, 2);
  CHECK(trace_zero_sample(F4).is_one());
  const auto e = trace_zero_sample(F9);
  CHECK(e * e == FieldElement::from_int(F9, -1));
  for (auto [p, a] : kFields) {
    if (a != 2)
      continue;
    const auto &F = FieldCtx::get(p, a);
    const auto t = trace_zero_sample(F);
    CHECK_FALSE(t.is_zero());
    CHECK(t.pow(std::uint64_t(p)) == -t);
  }
}

TEST_CASE("embedding of GF(q) into GF(q^2) is a homomorphism") {
  for (auto [p, a] : std::vector<std::pair<std::uint64_t, unsigned>>{{2, 1}, {3, 1}, {2, 2}, {5, 1}, {2, 3}, {3, 2}}) {
    const auto &small = FieldCtx::get(p, a);
    const auto &big = FieldCtx::get(p, 2 * a);
    const Embedding emb(small, big);
    std::set<Code> image;
    for (const auto &x : elements(small)) {
      image.insert(emb(x).code());
      CHECK(in_subfield(emb(x), a));
      for (const auto &y : elements(small)) {
        CHECK(emb(x * y) == emb(x) * emb(y));
        CHECK(emb(x + y) == emb(x) + emb(y));
      }
    }
    CHECK(image.size() == small.order());
  }
}

TEST_CASE("sqrt_exhaustive") {
  const auto &F7 = FieldCtx::get(7, 1);
  const auto r = sqrt_exhaustive(FieldElement::from_int(F7, 2));
  CHECK(r == FieldElement::from_int(F7, 3));
  CHECK_THROWS_AS(sqrt_exhaustive(FieldElement::from_int(F7, 3)), bv::InvalidArgument);
}

TEST_CASE("parse_element and to_string round-trip") {
  const auto &F = FieldCtx::get(5, 3);
  for (const auto &x : elements(F))
    CHECK(parse_element(F, x.to_string()) == x);
  CHECK(parse_element(F, "3") == FieldElement::from_int(F, 3));
  CHECK_THROWS_AS(parse_element(F, "5"), bv::InvalidArgument);
  CHECK_THROWS_AS(parse_element(F, "1,2,3,4"), bv::InvalidArgument);
  CHECK_THROWS_AS(parse_element(F, "1,x"), bv::InvalidArgument);
  CHECK_THROWS_AS(parse_element(F, ""), bv::InvalidArgument);
}

TEST_CASE("contexts with equal parameters are shared") {
  CHECK(&FieldCtx::get(3, 2) == &FieldCtx::of_order(9));
  CHECK_THROWS(FieldCtx::of_order(12));
  CHECK_THROWS(FieldCtx::of_order(1));
}
