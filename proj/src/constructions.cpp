#include <algorithm>
#include <random>

#include "bv/error.hpp"
#include "bv/matgrp.hpp"

namespace bv::matgrp {

namespace {

FieldElement fe(const FieldCtx &f, long long v) { return FieldElement::from_int(f, v); }

// Field GF(q^2) for q = p^k given by order q.
const FieldCtx &quadratic_extension(std::uint64_t q) {
  const FieldCtx &base = FieldCtx::of_order(q);
  return FieldCtx::get(base.p(), 2 * base.degree());
}

// Companion matrix order test: C^n = I and no eigenvalue of order < n.
bool has_exact_regular_order(const Matrix &c, const BigInt &n, const Factorization &nf) {
  if (!c.pow(n).is_identity())
    return false;
  const Matrix id = Matrix::identity(c.field(), c.dim());
  for (const auto &pp : nf.factors())
    if ((c.pow(BigInt(n / pp.prime)) - id).det().is_zero())
      return false;
  return true;
}

void require(bool cond, const std::string &what) {
  if (!cond)
    throw Error("construction check failed: " + what);
}

} // namespace

Matrix lineardim3_x(const FieldElement &a, const FieldElement &b) {
  const FieldCtx &f = a.ctx();
  return Matrix::from_rows({{fe(f, 1), fe(f, 0), fe(f, 0)},
                            {a, fe(f, 1), fe(f, 0)},
                            {b, fe(f, 1), fe(f, 1)}});
}

Matrix lineardim3_y(const FieldCtx &f) {
  return Matrix::from_ints(f, {{1, 0, 1}, {0, 1, 0}, {0, 0, 1}});
}

Poly lineardim3_printed(const FieldElement &a, const FieldElement &b) {
  const FieldCtx &f = a.ctx();
  return {fe(f, 1), -(b + fe(f, 3) - a), fe(f, 3) + b, fe(f, -1)};
}

Triple lineardim3_triple(std::uint64_t q) {
  if (q <= 3)
    throw BadField("lineardim3 needs q > 3");
  const FieldCtx &f = FieldCtx::of_order(q);
  const FieldElement lam = multiplicative_generator(f);
  const FieldElement li = lam.inverse();
  std::vector<FieldElement> excluded;
  for (const auto &mu : ffield::elements(f))
    if (!mu.is_zero())
      excluded.push_back(mu + mu.inverse());

  struct Best {
    BigInt order = 0;
    bool nonzero = false;
    FieldElement m, a, b;
    Matrix z;
  } best;
  for (const auto &m : ffield::elements(f)) {
    if (std::find(excluded.begin(), excluded.end(), m) != excluded.end())
      continue;
    Matrix z = Matrix::from_rows({{fe(f, 0), -lam, fe(f, 0)},
                                  {lam, lam * m, fe(f, 0)},
                                  {fe(f, 0), fe(f, 0), li * li}});
    const FieldElement b = lam * m + li * li - fe(f, 3);
    const FieldElement a = lam * m + li * li - li * m - lam * lam;
    const BigInt o = order_of_matrix(z);
    const bool nz = !a.is_zero() && !b.is_zero();
    if (o > best.order || (o == best.order && nz && !best.nonzero))
      best = {o, nz, m, a, b, z};
  }
  require(best.order > 0, "admissible m exists");
  Triple t;
  t.x = lineardim3_x(best.a, best.b);
  t.y = lineardim3_y(f);
  const Matrix xy = t.x * t.y;
  require(poly_equal(charpoly(xy), charpoly(best.z)), "charpoly(xy) = charpoly(z)");
  require(order_of_matrix(xy) == best.order, "o(xy) = o(z)");
  t.z = xy.inverse();
  t.params = {{"lambda", lam}, {"m", best.m}, {"a", best.a}, {"b", best.b}};
  return t;
}

Matrix u41_x(const FieldElement &b, const FieldElement &c) {
  const FieldCtx &f = b.ctx();
  const FieldElement bq = ffield::conj(b), cq = ffield::conj(c);
  return Matrix::from_rows({{fe(f, 1), fe(f, 0), fe(f, 0), fe(f, 0)},
                            {fe(f, 1), fe(f, 1), fe(f, 0), fe(f, 0)},
                            {b + c, cq, fe(f, 1), fe(f, 0)},
                            {-bq - c + cq, -bq - cq + c, fe(f, -1), fe(f, 1)}});
}

Matrix u41_y(const FieldElement &e) {
  Matrix y = Matrix::identity(e.ctx(), 4);
  y.set(0, 3, e);
  return y;
}

Matrix u41_y_typeset(const FieldElement &e) {
  const FieldCtx &f = e.ctx();
  Matrix y = Matrix::from_ints(f, {{1, 0, 0, 0}, {1, 1, 0, 0}, {0, 0, 1, 0}, {0, 0, 1, 1}});
  y.set(0, 3, e);
  return y;
}

Poly u41_printed(const FieldElement &b, const FieldElement &c, const FieldElement &e) {
  const FieldCtx &f = b.ctx();
  const FieldElement bq = ffield::conj(b);
  return {fe(f, 1), fe(f, 2) * c * e - e * b - fe(f, 4),
          e * b - e * bq + fe(f, 6) - fe(f, 5) * c * e,
          fe(f, 2) * c * e + e * bq - fe(f, 4), fe(f, 1)};
}

Triple u41_triple(std::uint64_t q) {
  if (q <= 2)
    throw BadField("u41 needs q > 2");
  const FieldCtx &f = quadratic_extension(q);
  const FieldElement e = ffield::trace_zero_sample(f);
  const auto zs = numtheory::zsigmondy(BigInt(static_cast<unsigned long>(f.p())), 2 * f.degree());
  const BigInt n = *zs.lambda;
  const Factorization nf = numtheory::factorize(n);
  std::vector<FieldElement> f0;
  for (const auto &v : ffield::elements(f))
    if (ffield::in_subfield(v, f.degree() / 2))
      f0.push_back(v);
  for (const auto &t : ffield::elements(f)) {
    const FieldElement tq = ffield::conj(t);
    for (const auto &fv : f0) {
      const Poly target{fe(f, 1), tq, fv, t, fe(f, 1)};
      const FieldElement c = -(fv + t + tq + fe(f, 2)) / e;
      if (c.is_zero())
        continue;
      if (!has_exact_regular_order(companion(target), n, nf))
        continue;
      // b from matching the w^3 coefficient of the printed quartic.
      const FieldElement b = -(fe(f, 3) * tq + fe(f, 2) * t + fe(f, 2) * fv + fe(f, 8)) / e;
      const FieldElement b_printed =
          -(fe(f, 3) * tq - fe(f, 2) * t - fe(f, 2) * fv - fe(f, 8)) / e;
      Triple tr;
      tr.x = u41_x(b, c);
      tr.y = u41_y(e);
      const Matrix xy = tr.x * tr.y;
      require(poly_equal(charpoly(xy), target), "charpoly(xy) = target");
      require(order_of_matrix(xy) == n, "o(xy) = lambda");
      tr.z = xy.inverse();
      const bool printed_ok =
          poly_equal(charpoly(u41_x(b_printed, c) * tr.y), target);
      tr.params = {{"e", e}, {"t", t}, {"f", fv}, {"b", b}, {"c", c},
                   {"printed_b_matches", fe(f, printed_ok ? 1 : 0)}};
      return tr;
    }
  }
  throw Error("u41: no admissible target characteristic polynomial");
}

Matrix u3_x(const FieldElement &a, const FieldElement &b) {
  const FieldCtx &f = a.ctx();
  return Matrix::from_rows({{fe(f, 1), fe(f, 0), fe(f, 0)},
                            {a, fe(f, 1), fe(f, 0)},
                            {b, -ffield::conj(a), fe(f, 1)}});
}

Matrix u3_y(const FieldElement &e) {
  const FieldCtx &f = e.ctx();
  Matrix y = Matrix::identity(f, 3);
  y.set(0, 2, e);
  return y;
}

Poly u3_printed(const FieldElement &a, const FieldElement &b, const FieldElement &e) {
  const FieldCtx &f = a.ctx();
  return {fe(f, 1), -(fe(f, 3) + a * ffield::conj(a) * e + b * e), b * e + fe(f, 3),
          fe(f, -1)};
}

Triple u3_triple(std::uint64_t q) {
  if (q <= 2)
    throw BadField("u3 needs q > 2");
  const FieldCtx &f = quadratic_extension(q);
  const FieldElement lam = multiplicative_generator(f);
  const FieldElement e = ffield::trace_zero_sample(f);
  const FieldElement s = lam + lam.pow(static_cast<long long>(q - 1)) +
                         lam.pow(-static_cast<long long>(q));
  const FieldElement b = (s - fe(f, 3)) / e;
  const FieldElement bb = b + ffield::conj(b);
  const FieldElement factored = (fe(f, 1) - lam) *
                                (lam.pow(-static_cast<long long>(q)) - fe(f, 1)) *
                                (fe(f, 1) - lam.pow(static_cast<long long>(q - 1))) / e;
  require(bb == factored, "b + b^q factorization");
  require(!bb.is_zero(), "b + b^q != 0");
  const FieldElement a = ffield::solve_norm(f, -bb);
  require(!a.is_zero(), "a != 0");
  Triple t;
  t.x = u3_x(a, b);
  t.y = u3_y(e);
  const Matrix z = Matrix::diagonal(
      {lam, lam.pow(static_cast<long long>(q - 1)), lam.pow(-static_cast<long long>(q))});
  const Matrix xy = t.x * t.y;
  require(poly_equal(charpoly(xy), charpoly(z)), "charpoly(xy) = charpoly(z)");
  require(order_of_matrix(xy) == BigInt(static_cast<unsigned long>(q * q - 1)),
          "o(xy) = q^2 - 1");
  t.z = xy.inverse();
  t.params = {{"lambda", lam}, {"e", e}, {"a", a}, {"b", b}};
  return t;
}

Matrix sp42_x_odd(const FieldElement &a, const FieldElement &b) {
  const FieldCtx &f = a.ctx();
  return Matrix::from_rows({{fe(f, 1), fe(f, 0), fe(f, 0), fe(f, 0)},
                            {fe(f, 1), fe(f, 1), fe(f, 0), fe(f, 0)},
                            {fe(f, 0), b, fe(f, 1), fe(f, 0)},
                            {a, -b, fe(f, -1), fe(f, 1)}});
}

Matrix sp42_x_odd_typeset(const FieldElement &a, const FieldElement &b) {
  const FieldCtx &f = a.ctx();
  return Matrix::from_rows({{fe(f, 1), fe(f, 0), fe(f, 0), fe(f, 0)},
                            {fe(f, 1), fe(f, 1), fe(f, 0), fe(f, 0)},
                            {fe(f, 0), a, fe(f, 1), fe(f, 0)},
                            {b, -a, fe(f, 1), fe(f, 1)}});
}

Matrix sp42_y_odd(const FieldCtx &f) {
  return Matrix::from_ints(f, {{1, 0, 0, 1}, {0, 1, 0, 0}, {0, 0, 1, 0}, {0, 0, 0, 1}});
}

Matrix sp42_x_even(const FieldElement &a, const FieldElement &b) {
  const FieldCtx &f = a.ctx();
  return Matrix::from_rows({{fe(f, 1), fe(f, 0), fe(f, 0), fe(f, 0)},
                            {a, fe(f, 1), fe(f, 0), fe(f, 0)},
                            {fe(f, 0), b, fe(f, 1), fe(f, 0)},
                            {fe(f, 0), a * b, a, fe(f, 1)}});
}

Matrix sp42_y_even(const FieldElement &lambda) {
  const FieldCtx &f = lambda.ctx();
  Matrix y = Matrix::from_ints(f, {{1, 1, 1, 0}, {0, 1, 1, 0}, {0, 0, 1, 1}, {0, 0, 0, 1}});
  y.set(0, 3, lambda);
  return y;
}

Poly sp42_odd_printed(const FieldElement &a, const FieldElement &b) {
  const FieldCtx &f = a.ctx();
  return {fe(f, 1), fe(f, -4) - a, fe(f, 6) + b + fe(f, 2) * a, -(fe(f, 4) + a), fe(f, 1)};
}

Poly sp42_even_printed(const FieldElement &a, const FieldElement &b,
                       const FieldElement &lambda) {
  const FieldCtx &f = a.ctx();
  return {fe(f, 1), b, a * a * (b * lambda + fe(f, 1)), b, fe(f, 1)};
}

Triple sp42_triple(std::uint64_t q) {
  const FieldCtx &f = FieldCtx::of_order(q);
  if (q <= 3)
    throw BadField("sp42 needs q > 3");
  const bool even = f.p() == 2;
  const BigInt n = even ? BigInt(static_cast<unsigned long>(q * q + 1))
                        : BigInt(static_cast<unsigned long>((q * q + 1) / 2));
  const Factorization nf = numtheory::factorize(n);
  const auto els = ffield::elements(f);
  const FormSpec form = *standard_form(make_spec(Family::Sp, 4, q));
  for (const auto &t : els)
    for (const auto &fv : els) {
      const Poly target = even ? Poly{fe(f, 1), t, fv, t, fe(f, 1)}
                               : Poly{fe(f, 1), -t, fv, -t, fe(f, 1)};
      if (!has_exact_regular_order(companion(target), n, nf))
        continue;
      Triple tr;
      if (!even) {
        const FieldElement a = t - fe(f, 4);
        const FieldElement b = fv - fe(f, 6) - fe(f, 2) * a;
        tr.x = sp42_x_odd(a, b);
        tr.y = sp42_y_odd(f);
        tr.params = {{"t", t}, {"f", fv}, {"a", a}, {"b", b}};
      } else {
        const FieldElement b = t;
        std::vector<FieldElement> excluded;
        for (const auto &beta : els)
          excluded.push_back(beta * beta + beta);
        std::optional<FieldElement> lam;
        for (const auto &l : els)
          if (std::find(excluded.begin(), excluded.end(), l) == excluded.end() &&
              !(b * l).is_one()) {
            lam = l;
            break;
          }
        if (!lam)
          throw NoAdmissibleLambda("q = " + std::to_string(q));
        // Square roots in characteristic 2: v -> v^(q/2).
        const FieldElement a = (fv / (b * *lam + fe(f, 1))).pow(q / 2);
        require(!a.is_zero() && !b.is_zero(), "a, b nonzero");
        tr.x = sp42_x_even(a, b);
        tr.y = sp42_y_even(*lam);
        tr.params = {{"t", t}, {"f", fv}, {"lambda", *lam}, {"a", a}, {"b", b}};
      }
      require(form.preserves(tr.x) && form.preserves(tr.y), "symplectic form preserved");
      const Matrix xy = tr.x * tr.y;
      require(poly_equal(charpoly(xy), target), "charpoly(xy) = target");
      require(order_of_matrix(xy) == n, "o(xy) = target order");
      tr.z = xy.inverse();
      return tr;
    }
  throw Error("sp42: no admissible target characteristic polynomial");
}

GroupSpec suzuki_generators(std::uint64_t q) {
  GroupSpec spec = make_spec(Family::SuzukiB2, 4, q);
  const FieldCtx &f = spec.matrix_field();
  const unsigned m = (f.degree() - 1) / 2;
  const std::uint64_t theta = 1ull << (m + 1);
  auto th = [&](const FieldElement &x) { return x.pow(theta); };
  auto s = [&](const FieldElement &al, const FieldElement &be) {
    const FieldElement one = fe(f, 1), zero = fe(f, 0);
    return Matrix::from_rows(
        {{one, zero, zero, zero},
         {al, one, zero, zero},
         {al * th(al) + be, th(al), one, zero},
         {al * al * th(al) + al * be + th(be), be, al, one}});
  };
  const FieldElement k = multiplicative_generator(f);
  const std::uint64_t h = 1ull << m;
  const Matrix torus = Matrix::diagonal(
      {k.pow(static_cast<long long>(1 + h)), k.pow(static_cast<long long>(h)),
       k.pow(-static_cast<long long>(h)), k.pow(-static_cast<long long>(1 + h))});
  const Matrix t = Matrix::from_ints(f, {{0, 0, 0, 1}, {0, 0, 1, 0}, {0, 1, 0, 0}, {1, 0, 0, 0}});
  spec.matrix_gens = {s(fe(f, 1), fe(f, 0)), torus, t};
  return spec;
}

unsigned IdentityReport::total_mismatches() const {
  unsigned s = 0;
  for (const auto &r : rows)
    s += r.mismatches;
  return s;
}

IdentityReport identity_suite(const std::string &lemma, std::uint64_t qmax, unsigned draws,
                              std::uint64_t seed, bool typeset) {
  if (lemma != "lineardim3" && lemma != "u41" && lemma != "u3" && lemma != "sp42")
    throw InvalidArgument("unknown lemma '" + lemma + "'");
  IdentityReport rep;
  rep.lemma = lemma;
  std::mt19937_64 rng(seed);
  for (std::uint64_t q = 2; q <= qmax; ++q) {
    if (numtheory::factorize(q).factors().size() != 1)
      continue;
    const bool unitary = lemma == "u41" || lemma == "u3";
    const FieldCtx &f = unitary ? quadratic_extension(q) : FieldCtx::of_order(q);
    std::uniform_int_distribution<Code> any(0, f.order() - 1), nonzero(1, f.order() - 1);
    auto draw = [&] { return FieldElement(f, any(rng)); };
    auto draw_nz = [&] { return FieldElement(f, nonzero(rng)); };
    std::vector<FieldElement> f0;
    FieldElement e0, t1;
    if (unitary) {
      for (const auto &v : ffield::elements(f))
        if (ffield::in_subfield(v, f.degree() / 2))
          f0.push_back(v);
      e0 = ffield::trace_zero_sample(f);
      for (const auto &v : ffield::elements(f))
        if (ffield::trace(v).is_one()) {
          t1 = v;
          break;
        }
    }
    std::uniform_int_distribution<std::size_t> pick0(0, f0.empty() ? 0 : f0.size() - 1),
        pick0nz(1, f0.empty() ? 1 : f0.size() - 1);
    IdentityReport::Row row{q, draws, 0};
    for (unsigned i = 0; i < draws; ++i) {
      Poly printed, actual;
      if (lemma == "lineardim3") {
        const FieldElement a = draw_nz(), b = draw_nz();
        printed = lineardim3_printed(a, b);
        actual = charpoly(lineardim3_x(a, b) * lineardim3_y(f));
      } else if (lemma == "sp42") {
        if (f.p() != 2) {
          const FieldElement a = draw(), b = draw();
          printed = sp42_odd_printed(a, b);
          actual = charpoly((typeset ? sp42_x_odd_typeset(a, b) : sp42_x_odd(a, b)) *
                            sp42_y_odd(f));
        } else {
          const FieldElement a = draw_nz(), b = draw_nz(), l = draw();
          printed = sp42_even_printed(a, b, l);
          actual = charpoly(sp42_x_even(a, b) * sp42_y_even(l));
        }
      } else if (lemma == "u41") {
        // F_1 = e0 * GF(q).
        const FieldElement b = draw();
        const FieldElement c = e0 * f0[pick0(rng)];
        const FieldElement e = e0 * f0[pick0nz(rng)];
        printed = u41_printed(b, c, e);
        actual = charpoly(u41_x(b, c) * (typeset ? u41_y_typeset(e) : u41_y(e)));
      } else {
        const FieldElement a = draw();
        const FieldElement e = e0 * f0[pick0nz(rng)];
        // b + b^q = -a a^q: trace-one element scaled, plus an F_1 element.
        const FieldElement b = t1 * -(ffield::norm(a)) + e0 * f0[pick0(rng)];
        printed = u3_printed(a, b, e);
        actual = charpoly(u3_x(a, b) * u3_y(e));
      }
      if (!poly_equal_up_to_sign(actual, printed))
        ++row.mismatches;
    }
    rep.rows.push_back(row);
  }
  return rep;
}

namespace {

// Row-reduced basis with pivot columns; returns false if v was dependent.
struct Echelon {
  const FieldCtx *f;
  std::vector<std::vector<Code>> rows;
  std::vector<unsigned> pivots;

  std::vector<Code> reduce(std::vector<Code> v) const {
    for (std::size_t r = 0; r < rows.size(); ++r) {
      const Code c = v[pivots[r]];
      if (c == 0)
        continue;
      for (std::size_t j = 0; j < v.size(); ++j)
        v[j] = f->sub(v[j], f->mul(c, rows[r][j]));
    }
    return v;
  }
  bool insert(std::vector<Code> v) {
    v = reduce(std::move(v));
    unsigned piv = 0;
    while (piv < v.size() && v[piv] == 0)
      ++piv;
    if (piv == v.size())
      return false;
    const Code inv = f->inv(v[piv]);
    for (auto &c : v)
      c = f->mul(c, inv);
    for (auto &r : rows) {
      const Code c = r[piv];
      if (c)
        for (std::size_t j = 0; j < v.size(); ++j)
          r[j] = f->sub(r[j], f->mul(c, v[j]));
    }
    rows.push_back(std::move(v));
    pivots.push_back(piv);
    return true;
  }
};

// Left null space {v : v A = 0}.
std::vector<std::vector<Code>> left_nullspace(const Matrix &a) {
  const FieldCtx &f = a.field();
  const unsigned d = a.dim();
  // Solve A^T v^T = 0 by reducing A^T.
  Matrix t = a.transpose();
  std::vector<std::vector<Code>> m(d, std::vector<Code>(d));
  for (unsigned i = 0; i < d; ++i)
    for (unsigned j = 0; j < d; ++j)
      m[i][j] = t.code(i, j);
  std::vector<int> pivcol;
  unsigned r = 0;
  for (unsigned c = 0; c < d && r < d; ++c) {
    unsigned piv = r;
    while (piv < d && m[piv][c] == 0)
      ++piv;
    if (piv == d)
      continue;
    std::swap(m[piv], m[r]);
    const Code inv = f.inv(m[r][c]);
    for (auto &x : m[r])
      x = f.mul(x, inv);
    for (unsigned i = 0; i < d; ++i)
      if (i != r && m[i][c]) {
        const Code k = m[i][c];
        for (unsigned j = 0; j < d; ++j)
          m[i][j] = f.sub(m[i][j], f.mul(k, m[r][j]));
      }
    pivcol.push_back(static_cast<int>(c));
    ++r;
  }
  std::vector<std::vector<Code>> out;
  for (unsigned free = 0; free < d; ++free) {
    if (std::find(pivcol.begin(), pivcol.end(), static_cast<int>(free)) != pivcol.end())
      continue;
    std::vector<Code> v(d, 0);
    v[free] = 1;
    for (std::size_t i = 0; i < pivcol.size(); ++i)
      v[pivcol[i]] = f.neg(m[i][free]);
    out.push_back(v);
  }
  return out;
}

} // namespace

std::vector<std::vector<Code>> spin(const std::vector<Matrix> &gens,
                                    const std::vector<Code> &v) {
  Echelon ech{&gens.at(0).field(), {}, {}};
  std::vector<std::vector<Code>> queue;
  if (ech.insert(v))
    queue.push_back(v);
  for (std::size_t i = 0; i < queue.size(); ++i)
    for (const auto &g : gens) {
      auto w = g.apply(queue[i]);
      if (ech.insert(w))
        queue.push_back(w);
    }
  return ech.rows;
}

SpinResult spin_submodule_search(const std::vector<Matrix> &gens, unsigned budget,
                                 std::uint64_t seed) {
  SpinResult res;
  if (gens.empty())
    throw InvalidArgument("no generators");
  const FieldCtx &f = gens[0].field();
  const unsigned d = gens[0].dim();
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<Code> any(0, f.order() - 1);
  for (unsigned attempt = 0; attempt < budget; ++attempt) {
    ++res.attempts;
    std::vector<std::vector<Code>> trial;
    if (attempt % 2 == 0) {
      std::vector<Code> v(d);
      for (auto &c : v)
        c = any(rng);
      trial.push_back(v);
    } else {
      // Random element of the group algebra spanned by gens and short products.
      std::vector<Matrix> words = gens;
      std::uniform_int_distribution<std::size_t> pick(0, gens.size() - 1);
      for (unsigned k = 0; k < 3; ++k)
        words.push_back(words[pick(rng)] * gens[pick(rng)]);
      Matrix a(f, d);
      for (const auto &w : words)
        a = a + w.scaled(FieldElement(f, any(rng)));
      a = a + Matrix::identity(f, d).scaled(FieldElement(f, any(rng)));
      auto ns = left_nullspace(a);
      if (ns.size() > 3)
        ns.resize(3);
      trial = ns;
    }
    for (const auto &v : trial) {
      if (std::all_of(v.begin(), v.end(), [](Code c) { return c == 0; }))
        continue;
      auto sub = spin(gens, v);
      if (sub.size() < d) {
        res.subspace = sub;
        return res;
      }
    }
  }
  return res;
}

} // namespace bv::matgrp
