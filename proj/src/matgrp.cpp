#include "bv/matgrp.hpp"

#include <cassert>
#include <sstream>

#include "bv/error.hpp"
#include "bv/tokens.hpp"

namespace bv::matgrp {

using numtheory::ipow;

Poly poly_trim(Poly a) {
  while (!a.empty() && a.back().is_zero())
    a.pop_back();
  return a;
}

Poly poly_mul(const Poly &a, const Poly &b) {
  if (a.empty() || b.empty())
    return {};
  const FieldCtx &ctx = a[0].ctx();
  Poly r(a.size() + b.size() - 1, FieldElement::zero(ctx));
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j)
      r[i + j] += a[i] * b[j];
  return r;
}

bool poly_equal(const Poly &a, const Poly &b) { return poly_trim(a) == poly_trim(b); }

bool poly_equal_up_to_sign(const Poly &a, const Poly &b) {
  if (poly_equal(a, b))
    return true;
  Poly nb = b;
  for (auto &c : nb)
    c = -c;
  return poly_equal(a, nb);
}

std::string poly_to_string(const Poly &a) {
  std::ostringstream os;
  os << "[";
  for (std::size_t i = 0; i < a.size(); ++i)
    os << (i ? "; " : "") << a[i].to_string();
  os << "]";
  return os.str();
}

Poly make_poly(const FieldCtx &ctx, std::initializer_list<long long> coeffs) {
  Poly p;
  for (long long c : coeffs)
    p.push_back(FieldElement::from_int(ctx, c));
  return p;
}

Matrix::Matrix(const FieldCtx &ctx, unsigned d) : ctx_(&ctx), d_(d), e_(d * d, 0) {}

Matrix Matrix::identity(const FieldCtx &ctx, unsigned d) {
  Matrix m(ctx, d);
  for (unsigned i = 0; i < d; ++i)
    m.e_[i * d + i] = 1;
  return m;
}

Matrix Matrix::from_ints(const FieldCtx &ctx,
                         std::initializer_list<std::initializer_list<long long>> rows) {
  Matrix m(ctx, static_cast<unsigned>(rows.size()));
  unsigned i = 0;
  for (const auto &row : rows) {
    if (row.size() != m.d_)
      throw InvalidArgument("matrix is not square");
    unsigned j = 0;
    for (long long v : row)
      m.e_[i * m.d_ + j++] = ctx.from_int(v);
    ++i;
  }
  return m;
}

Matrix Matrix::from_rows(const std::vector<std::vector<FieldElement>> &rows) {
  if (rows.empty())
    throw InvalidArgument("empty matrix");
  Matrix m(rows[0][0].ctx(), static_cast<unsigned>(rows.size()));
  for (unsigned i = 0; i < m.d_; ++i) {
    if (rows[i].size() != m.d_)
      throw InvalidArgument("matrix is not square");
    for (unsigned j = 0; j < m.d_; ++j)
      m.e_[i * m.d_ + j] = rows[i][j].code();
  }
  return m;
}

Matrix Matrix::diagonal(const std::vector<FieldElement> &diag) {
  Matrix m(diag.at(0).ctx(), static_cast<unsigned>(diag.size()));
  for (unsigned i = 0; i < m.d_; ++i)
    m.e_[i * m.d_ + i] = diag[i].code();
  return m;
}

Matrix Matrix::operator*(const Matrix &o) const {
  Matrix r(*ctx_, d_);
  const FieldCtx &f = *ctx_;
  for (unsigned i = 0; i < d_; ++i)
    for (unsigned k = 0; k < d_; ++k) {
      const Code a = e_[i * d_ + k];
      if (a == 0)
        continue;
      for (unsigned j = 0; j < d_; ++j) {
        const Code b = o.e_[k * d_ + j];
        if (b)
          r.e_[i * d_ + j] = f.add(r.e_[i * d_ + j], f.mul(a, b));
      }
    }
  return r;
}

Matrix Matrix::operator+(const Matrix &o) const {
  Matrix r(*ctx_, d_);
  for (std::size_t i = 0; i < e_.size(); ++i)
    r.e_[i] = ctx_->add(e_[i], o.e_[i]);
  return r;
}

Matrix Matrix::operator-(const Matrix &o) const {
  Matrix r(*ctx_, d_);
  for (std::size_t i = 0; i < e_.size(); ++i)
    r.e_[i] = ctx_->sub(e_[i], o.e_[i]);
  return r;
}

Matrix Matrix::scaled(const FieldElement &s) const {
  Matrix r(*ctx_, d_);
  for (std::size_t i = 0; i < e_.size(); ++i)
    r.e_[i] = ctx_->mul(e_[i], s.code());
  return r;
}

Matrix Matrix::transpose() const {
  Matrix r(*ctx_, d_);
  for (unsigned i = 0; i < d_; ++i)
    for (unsigned j = 0; j < d_; ++j)
      r.e_[j * d_ + i] = e_[i * d_ + j];
  return r;
}

Matrix Matrix::frobenius(unsigned k) const {
  Matrix r(*ctx_, d_);
  std::uint64_t e = 1;
  for (unsigned i = 0; i < k % ctx_->degree(); ++i)
    e *= ctx_->p();
  for (std::size_t i = 0; i < e_.size(); ++i)
    r.e_[i] = ctx_->pow(e_[i], e);
  return r;
}

FieldElement Matrix::det() const {
  const FieldCtx &f = *ctx_;
  std::vector<Code> a = e_;
  Code det = 1;
  for (unsigned c = 0; c < d_; ++c) {
    unsigned piv = c;
    while (piv < d_ && a[piv * d_ + c] == 0)
      ++piv;
    if (piv == d_)
      return FieldElement::zero(f);
    if (piv != c) {
      for (unsigned j = 0; j < d_; ++j)
        std::swap(a[piv * d_ + j], a[c * d_ + j]);
      det = f.neg(det);
    }
    const Code pv = a[c * d_ + c];
    det = f.mul(det, pv);
    const Code pinv = f.inv(pv);
    for (unsigned i = c + 1; i < d_; ++i) {
      const Code t = f.mul(a[i * d_ + c], pinv);
      if (t == 0)
        continue;
      for (unsigned j = c; j < d_; ++j)
        a[i * d_ + j] = f.sub(a[i * d_ + j], f.mul(t, a[c * d_ + j]));
    }
  }
  return {f, det};
}

Matrix Matrix::inverse() const {
  const FieldCtx &f = *ctx_;
  std::vector<Code> a = e_;
  Matrix inv = identity(f, d_);
  auto &b = inv.e_;
  for (unsigned c = 0; c < d_; ++c) {
    unsigned piv = c;
    while (piv < d_ && a[piv * d_ + c] == 0)
      ++piv;
    if (piv == d_)
      throw InvalidArgument("singular matrix");
    if (piv != c)
      for (unsigned j = 0; j < d_; ++j) {
        std::swap(a[piv * d_ + j], a[c * d_ + j]);
        std::swap(b[piv * d_ + j], b[c * d_ + j]);
      }
    const Code pinv = f.inv(a[c * d_ + c]);
    for (unsigned j = 0; j < d_; ++j) {
      a[c * d_ + j] = f.mul(a[c * d_ + j], pinv);
      b[c * d_ + j] = f.mul(b[c * d_ + j], pinv);
    }
    for (unsigned i = 0; i < d_; ++i) {
      if (i == c)
        continue;
      const Code t = a[i * d_ + c];
      if (t == 0)
        continue;
      for (unsigned j = 0; j < d_; ++j) {
        a[i * d_ + j] = f.sub(a[i * d_ + j], f.mul(t, a[c * d_ + j]));
        b[i * d_ + j] = f.sub(b[i * d_ + j], f.mul(t, b[c * d_ + j]));
      }
    }
  }
  return inv;
}

Matrix Matrix::pow(const BigInt &e) const {
  if (e < 0)
    return inverse().pow(BigInt(-e));
  Matrix r = identity(*ctx_, d_), b = *this;
  const std::size_t bits = mpz_sizeinbase(e.get_mpz_t(), 2);
  for (std::size_t i = bits; i-- > 0;) {
    r = r * r;
    if (mpz_tstbit(e.get_mpz_t(), i))
      r = r * b;
  }
  return r;
}

Matrix Matrix::pow(long long e) const { return pow(BigInt(static_cast<long>(e))); }

bool Matrix::is_identity() const {
  for (unsigned i = 0; i < d_; ++i)
    for (unsigned j = 0; j < d_; ++j)
      if (e_[i * d_ + j] != (i == j ? 1u : 0u))
        return false;
  return true;
}

bool Matrix::is_scalar() const {
  for (unsigned i = 0; i < d_; ++i)
    for (unsigned j = 0; j < d_; ++j)
      if (i != j ? e_[i * d_ + j] != 0 : e_[i * d_ + j] != e_[0])
        return false;
  return true;
}

std::vector<Code> Matrix::apply(const std::vector<Code> &v) const {
  std::vector<Code> r(d_, 0);
  const FieldCtx &f = *ctx_;
  for (unsigned i = 0; i < d_; ++i) {
    if (v[i] == 0)
      continue;
    for (unsigned j = 0; j < d_; ++j)
      r[j] = f.add(r[j], f.mul(v[i], e_[i * d_ + j]));
  }
  return r;
}

std::string Matrix::to_string() const {
  std::ostringstream os;
  for (unsigned i = 0; i < d_; ++i) {
    for (unsigned j = 0; j < d_; ++j)
      os << (j ? " " : "") << (*this)(i, j).to_string();
    os << "\n";
  }
  return os.str();
}

Poly charpoly(const Matrix &m) {
  const FieldCtx &f = m.field();
  const unsigned n = m.dim();
  std::vector<std::vector<FieldElement>> h(n, std::vector<FieldElement>(n));
  for (unsigned i = 0; i < n; ++i)
    for (unsigned j = 0; j < n; ++j)
      h[i][j] = m(i, j);
  // Similarity reduction to upper Hessenberg form.
  for (unsigned c = 0; c + 2 < n; ++c) {
    unsigned piv = c + 1;
    while (piv < n && h[piv][c].is_zero())
      ++piv;
    if (piv == n)
      continue;
    if (piv != c + 1) {
      std::swap(h[piv], h[c + 1]);
      for (unsigned i = 0; i < n; ++i)
        std::swap(h[i][piv], h[i][c + 1]);
    }
    const FieldElement pinv = h[c + 1][c].inverse();
    for (unsigned i = c + 2; i < n; ++i) {
      const FieldElement t = h[i][c] * pinv;
      if (t.is_zero())
        continue;
      for (unsigned j = 0; j < n; ++j)
        h[i][j] -= t * h[c + 1][j];
      for (unsigned j = 0; j < n; ++j)
        h[j][c + 1] += t * h[j][i];
    }
  }
  const FieldElement one = FieldElement::one(f);
  std::vector<Poly> p(n + 1);
  p[0] = {one};
  for (unsigned k = 1; k <= n; ++k) {
    p[k] = poly_mul(Poly{-h[k - 1][k - 1], one}, p[k - 1]);
    FieldElement t = one;
    for (unsigned i = 1; i < k; ++i) {
      t *= h[k - i][k - i - 1];
      const FieldElement coef = t * h[k - i - 1][k - 1];
      const Poly &q = p[k - i - 1];
      for (std::size_t j = 0; j < q.size(); ++j)
        p[k][j] -= coef * q[j];
    }
  }
  return p[n];
}

Matrix companion(const Poly &fpoly) {
  Poly g = poly_trim(fpoly);
  const unsigned n = static_cast<unsigned>(g.size() - 1);
  const FieldCtx &f = g[0].ctx();
  const FieldElement lead_inv = g.back().inverse();
  Matrix c(f, n);
  for (unsigned i = 0; i + 1 < n; ++i)
    c.set_code(i, i + 1, 1);
  for (unsigned j = 0; j < n; ++j)
    c.set(n - 1, j, -(g[j] * lead_inv));
  return c;
}

BigInt order_of_matrix(const Matrix &m, const Factorization &exponent_multiple) {
  BigInt n = exponent_multiple.value();
  if (!m.pow(n).is_identity())
    throw NotUnipotentConsistent("M^N is not the identity");
  for (const auto &pp : exponent_multiple.factors())
    for (unsigned i = 0; i < pp.multiplicity; ++i) {
      if (!m.pow(BigInt(n / pp.prime)).is_identity())
        break;
      n /= pp.prime;
    }
  return n;
}

namespace {

Factorization gl_exponent(unsigned d, std::uint64_t q) {
  // lcm-friendly multiple: p^ceil(log_p d) * prod (q^i - 1).
  const FieldCtx &f = FieldCtx::of_order(q);
  Factorization acc = numtheory::factorize(BigInt(1));
  std::uint64_t pp = 1;
  while (pp < d)
    pp *= f.p();
  acc = acc * numtheory::factorize(pp);
  for (unsigned i = 1; i <= d; ++i)
    acc = acc * numtheory::factorize(ipow(BigInt(static_cast<unsigned long>(q)), i) - 1);
  return acc;
}

} // namespace

BigInt order_of_matrix(const Matrix &m) {
  return order_of_matrix(m, gl_exponent(m.dim(), m.field().order()));
}

bool FormSpec::preserves(const Matrix &g) const {
  Matrix gs = kind == FormKind::Hermitian ? g.frobenius(g.field().degree() / 2) : g;
  if (g * gram * gs.transpose() != gram)
    return false;
  if (quadratic) {
    const unsigned d = g.dim();
    for (unsigned i = 0; i < d; ++i) {
      std::vector<Code> e(d, 0), row(d);
      e[i] = 1;
      for (unsigned j = 0; j < d; ++j)
        row[j] = g.code(i, j);
      if (quadratic_value(row) != quadratic_value(e))
        return false;
    }
  }
  return true;
}

FieldElement FormSpec::bilinear(const std::vector<Code> &u, const std::vector<Code> &v) const {
  const FieldCtx &f = gram.field();
  std::vector<Code> vs = v;
  if (kind == FormKind::Hermitian) {
    std::uint64_t e = 1;
    for (unsigned i = 0; i < f.degree() / 2; ++i)
      e *= f.p();
    for (auto &c : vs)
      c = f.pow(c, e);
  }
  std::vector<Code> uj = gram.apply(u);
  Code s = 0;
  for (std::size_t i = 0; i < uj.size(); ++i)
    s = f.add(s, f.mul(uj[i], vs[i]));
  return {f, s};
}

FieldElement FormSpec::quadratic_value(const std::vector<Code> &v) const {
  const FieldCtx &f = gram.field();
  std::vector<Code> vq = quadratic->apply(v);
  Code s = 0;
  for (std::size_t i = 0; i < v.size(); ++i)
    s = f.add(s, f.mul(vq[i], v[i]));
  return {f, s};
}

std::string to_string(Family fam) {
  switch (fam) {
  case Family::GL: return "GL";
  case Family::SL: return "SL";
  case Family::GU: return "GU";
  case Family::SU: return "SU";
  case Family::Sp: return "Sp";
  case Family::OmegaPlus: return "OmegaPlus";
  case Family::OmegaMinus: return "OmegaMinus";
  case Family::OmegaOdd: return "OmegaOdd";
  case Family::SuzukiB2: return "Suzuki";
  case Family::Ingested: return "Ingested";
  }
  return "?";
}

Family parse_family(const std::string &s) {
  for (Family f : {Family::GL, Family::SL, Family::GU, Family::SU, Family::Sp,
                   Family::OmegaPlus, Family::OmegaMinus, Family::OmegaOdd,
                   Family::SuzukiB2, Family::Ingested})
    if (to_string(f) == s)
      return f;
  if (s == "SuzukiB2" || s == "Sz")
    return Family::SuzukiB2;
  throw UnsupportedFamily("unknown family '" + s + "'");
}

std::uint64_t GroupSpec::q() const {
  std::uint64_t r = 1;
  for (unsigned i = 0; i < a; ++i)
    r *= p;
  return r;
}

const FieldCtx &GroupSpec::matrix_field() const {
  const bool unitary = family == Family::GU || family == Family::SU;
  return FieldCtx::get(p, unitary ? 2 * a : a);
}

std::string GroupSpec::name() const {
  if (!label.empty())
    return label;
  const std::string qs = std::to_string(q());
  switch (family) {
  case Family::OmegaPlus:
    return "Omega+_" + std::to_string(d) + "(" + qs + ")";
  case Family::OmegaMinus:
    return "Omega-_" + std::to_string(d) + "(" + qs + ")";
  case Family::OmegaOdd:
    return "Omega_" + std::to_string(d) + "(" + qs + ")";
  case Family::SuzukiB2:
    return "Sz(" + qs + ")";
  case Family::Ingested:
    return "ingested";
  default:
    return to_string(family) + "_" + std::to_string(d) + "(" + qs + ")";
  }
}

GroupSpec make_spec(Family f, unsigned d, std::uint64_t q) {
  const FieldCtx &ctx = FieldCtx::of_order(q);
  GroupSpec s;
  s.family = f;
  s.d = d;
  s.p = ctx.p();
  s.a = ctx.degree();
  if (d < 1)
    throw InvalidArgument("dimension must be positive");
  if ((f == Family::Sp || f == Family::OmegaPlus || f == Family::OmegaMinus) && d % 2)
    throw InvalidArgument(to_string(f) + " needs even dimension");
  if (f == Family::OmegaOdd && (d % 2 == 0 || s.p == 2))
    throw InvalidArgument("OmegaOdd needs odd dimension and odd q");
  if (f == Family::SuzukiB2 && (d != 4 || s.p != 2 || s.a % 2 == 0 || s.a < 3))
    throw BadField("Suzuki groups need d = 4 and q = 2^(2m+1) >= 8");
  return s;
}

Factorization classical_order(const GroupSpec &spec) {
  const BigInt q = static_cast<unsigned long>(spec.q());
  const unsigned d = spec.d;
  auto fz = [](const BigInt &v) { return numtheory::factorize(v); };
  auto qpow = [&](unsigned long e) { return ipow(q, e); };
  Factorization r = fz(1);
  switch (spec.family) {
  case Family::GL:
  case Family::SL:
    r = fz(qpow(d * (d - 1) / 2));
    for (unsigned i = 1; i <= d; ++i)
      r = r * fz(qpow(i) - 1);
    if (spec.family == Family::SL)
      r = r / fz(q - 1);
    return r;
  case Family::GU:
  case Family::SU:
    r = fz(qpow(d * (d - 1) / 2));
    for (unsigned i = 1; i <= d; ++i)
      r = r * fz(i % 2 ? BigInt(qpow(i) + 1) : BigInt(qpow(i) - 1));
    if (spec.family == Family::SU)
      r = r / fz(q + 1);
    return r;
  case Family::Sp: {
    const unsigned m = d / 2;
    r = fz(qpow(m * m));
    for (unsigned i = 1; i <= m; ++i)
      r = r * fz(qpow(2 * i) - 1);
    return r;
  }
  case Family::OmegaPlus:
  case Family::OmegaMinus: {
    const unsigned m = d / 2;
    r = fz(qpow(m * (m - 1)));
    r = r * fz(spec.family == Family::OmegaPlus ? BigInt(qpow(m) - 1) : BigInt(qpow(m) + 1));
    for (unsigned i = 1; i < m; ++i)
      r = r * fz(qpow(2 * i) - 1);
    if (spec.p != 2)
      r = r / fz(2);
    return r;
  }
  case Family::OmegaOdd: {
    const unsigned m = (d - 1) / 2;
    r = fz(qpow(m * m));
    for (unsigned i = 1; i <= m; ++i)
      r = r * fz(qpow(2 * i) - 1);
    return r / fz(2);
  }
  case Family::SuzukiB2:
    return fz(q * q) * fz(q * q + 1) * fz(q - 1);
  case Family::Ingested:
    break;
  }
  throw UnsupportedFamily(to_string(spec.family));
}

BigInt singer_order(const GroupSpec &spec) {
  const BigInt q = static_cast<unsigned long>(spec.q());
  switch (spec.family) {
  case Family::SL:
    return (ipow(q, spec.d) - 1) / (q - 1);
  case Family::SU:
    if (spec.d % 2)
      return (ipow(q, spec.d) + 1) / (q + 1);
    break;
  case Family::Sp:
    return ipow(q, spec.d / 2) + 1;
  case Family::OmegaMinus:
    return (ipow(q, spec.d / 2) + 1) / (spec.p == 2 ? 1 : 2);
  default:
    break;
  }
  throw UnsupportedFamily("no Singer order for " + spec.name());
}

FieldElement anisotropic_parameter(const FieldCtx &ctx) {
  for (const auto &nu : ffield::elements(ctx)) {
    bool root = false;
    for (const auto &t : ffield::elements(ctx))
      if ((t * t + t + nu).is_zero()) {
        root = true;
        break;
      }
    if (!root)
      return nu;
  }
  throw BadField("no anisotropic parameter");
}

std::optional<FormSpec> standard_form(const GroupSpec &spec) {
  const FieldCtx &f = spec.matrix_field();
  const unsigned d = spec.d;
  const FieldElement one = FieldElement::one(f);
  switch (spec.family) {
  case Family::Sp: {
    Matrix j(f, d);
    for (unsigned i = 0; i < d; ++i)
      j.set(i, d - 1 - i, i < d / 2 ? one : -one);
    return FormSpec{FormKind::Symplectic, j, std::nullopt};
  }
  case Family::GU:
  case Family::SU: {
    Matrix j(f, d);
    for (unsigned i = 0; i < d; ++i)
      j.set(i, d - 1 - i, one);
    return FormSpec{FormKind::Hermitian, j, std::nullopt};
  }
  case Family::OmegaPlus:
  case Family::OmegaMinus:
  case Family::OmegaOdd: {
    Matrix qm(f, d);
    const unsigned m = d / 2;
    for (unsigned i = 0; i < m; ++i)
      qm.set(i, d - 1 - i, one);
    if (spec.family == Family::OmegaOdd) {
      qm.set(m, m, one);
    } else if (spec.family == Family::OmegaMinus) {
      // Replace the middle hyperbolic pair by an anisotropic plane.
      qm.set(m - 1, m, one);
      qm.set(m - 1, m - 1, one);
      qm.set(m, m, anisotropic_parameter(f));
    }
    return FormSpec{FormKind::SymmetricBilinear, qm + qm.transpose(), qm};
  }
  default:
    return std::nullopt;
  }
}

bool is_member(const GroupSpec &spec, const Matrix &g) {
  const FieldElement det = g.det();
  switch (spec.family) {
  case Family::GL:
    return !det.is_zero();
  case Family::GU:
    if (ffield::norm(det) != FieldElement::one(det.ctx()))
      return false;
    break;
  case Family::Ingested:
    throw UnsupportedFamily("membership in ingested groups is by permutation image");
  default:
    if (!det.is_one())
      return false;
  }
  auto form = standard_form(spec);
  return !form || form->preserves(g);
}

namespace {

// Additive GF(p)-basis of the subfield of order p^k inside f.
std::vector<FieldElement> additive_basis(const FieldCtx &f, unsigned k) {
  FieldElement g = multiplicative_generator(f);
  // Generator of the subfield's multiplicative group.
  const BigInt sub_units = ipow(BigInt(static_cast<unsigned long>(f.p())), k) - 1;
  FieldElement s = g.pow((f.order() - 1) / sub_units.get_ui());
  std::vector<FieldElement> out;
  FieldElement t = FieldElement::one(f);
  for (unsigned i = 0; i < k; ++i) {
    out.push_back(t);
    t *= s;
  }
  return out;
}

// Vectors with entries in {0, 1, xi}, support 1..3, in a fixed order.
std::vector<std::vector<Code>> candidate_vectors(const FieldCtx &f, unsigned d) {
  const Code xi = f.generator();
  std::vector<Code> vals{1};
  if (xi != 1)
    vals.push_back(xi);
  std::vector<std::vector<Code>> out;
  for (unsigned support = 1; support <= std::min(3u, d); ++support) {
    std::vector<unsigned> idx(support);
    for (unsigned i = 0; i < support; ++i)
      idx[i] = i;
    while (true) {
      const std::size_t combos = [&] {
        std::size_t c = 1;
        for (unsigned i = 0; i < support; ++i)
          c *= vals.size();
        return c;
      }();
      for (std::size_t c = 0; c < combos; ++c) {
        std::vector<Code> v(d, 0);
        std::size_t t = c;
        for (unsigned i = 0; i < support; ++i) {
          v[idx[i]] = vals[t % vals.size()];
          t /= vals.size();
        }
        if (v[idx[0]] == 1)
          out.push_back(v);
      }
      int i = static_cast<int>(support) - 1;
      while (i >= 0 && idx[i] == d - support + i)
        --i;
      if (i < 0)
        break;
      ++idx[i];
      for (unsigned j = i + 1; j < support; ++j)
        idx[j] = idx[j - 1] + 1;
    }
  }
  return out;
}

// I + c * (col) (row): the map x -> x + c (x . col) row.
Matrix rank_one_update(const FieldCtx &f, const std::vector<Code> &col,
                       const std::vector<Code> &row, const FieldElement &c) {
  const unsigned d = static_cast<unsigned>(col.size());
  Matrix m = Matrix::identity(f, d);
  for (unsigned i = 0; i < d; ++i)
    for (unsigned j = 0; j < d; ++j)
      m.set_code(i, j, f.add(m.code(i, j), f.mul(c.code(), f.mul(col[i], row[j]))));
  return m;
}

} // namespace

std::vector<Matrix> candidate_generators(const GroupSpec &spec) {
  const FieldCtx &f = spec.matrix_field();
  const unsigned d = spec.d;
  std::vector<Matrix> out;
  switch (spec.family) {
  case Family::GL:
  case Family::SL: {
    if (spec.family == Family::GL) {
      Matrix g = Matrix::identity(f, d);
      g.set_code(0, 0, f.generator());
      out.push_back(g);
    }
    const auto basis = additive_basis(f, f.degree());
    for (const auto &c : basis)
      for (unsigned i = 0; i + 1 < d; ++i)
        for (int dir = 0; dir < 2; ++dir) {
          Matrix t = Matrix::identity(f, d);
          t.set(dir ? i + 1 : i, dir ? i : i + 1, c);
          out.push_back(t);
        }
    for (const auto &c : basis)
      for (unsigned i = 0; i < d; ++i)
        for (unsigned j = 0; j < d; ++j)
          if (j > i + 1 || i > j + 1) {
            Matrix t = Matrix::identity(f, d);
            t.set(i, j, c);
            out.push_back(t);
          }
    return out;
  }
  case Family::Sp:
  case Family::GU:
  case Family::SU: {
    const FormSpec form = *standard_form(spec);
    const bool unitary = spec.family != Family::Sp;
    std::vector<FieldElement> scalars;
    if (unitary) {
      const FieldElement e = ffield::trace_zero_sample(f);
      for (const auto &s : additive_basis(f, f.degree() / 2))
        scalars.push_back(e * s);
    } else {
      scalars = additive_basis(f, f.degree());
    }
    if (spec.family == Family::GU) {
      // A determinant-generating torus element diag(w, 1, ..., 1, w^-q).
      const FieldElement w = multiplicative_generator(f);
      std::vector<FieldElement> diag(d, FieldElement::one(f));
      diag[0] = w;
      diag[d - 1] = ffield::conj(w).inverse();
      out.push_back(Matrix::diagonal(diag));
    }
    for (const auto &v : candidate_vectors(f, d)) {
      if (unitary && !form.bilinear(v, v).is_zero())
        continue;
      // x -> x + c B(x, v) v with B(x, v) = x J (v^sigma)^T.
      std::vector<Code> vs = v;
      if (unitary)
        for (auto &c : vs)
          c = ffield::conj(FieldElement(f, c)).code();
      std::vector<Code> col(d, 0);
      for (unsigned i = 0; i < d; ++i)
        for (unsigned j = 0; j < d; ++j)
          col[i] = f.add(col[i], f.mul(form.gram.code(i, j), vs[j]));
      for (const auto &c : scalars)
        out.push_back(rank_one_update(f, col, v, c));
    }
    return out;
  }
  case Family::OmegaPlus:
  case Family::OmegaMinus:
  case Family::OmegaOdd: {
    const FormSpec form = *standard_form(spec);
    auto reflection = [&](const std::vector<Code> &u) {
      // x -> x - (B(x,u)/Q(u)) u.
      const FieldElement qu = form.quadratic_value(u);
      std::vector<Code> col(d, 0);
      for (unsigned i = 0; i < d; ++i)
        for (unsigned j = 0; j < d; ++j)
          col[i] = f.add(col[i], f.mul(form.gram.code(i, j), u[j]));
      return rank_one_update(f, col, u, -(qu.inverse()));
    };
    auto is_square = [&](const FieldElement &x) {
      return x.pow((f.order() - 1) / 2).is_one();
    };
    std::vector<std::vector<Code>> nonsingular;
    for (const auto &u : candidate_vectors(f, d))
      if (!form.quadratic_value(u).is_zero())
        nonsingular.push_back(u);
    if (nonsingular.empty())
      throw BadField("no nonsingular candidate vectors");
    // One base vector per square class (a single class when q is even).
    std::vector<std::vector<Code>> bases;
    for (const auto &u : nonsingular) {
      const bool sq = f.p() == 2 || is_square(form.quadratic_value(u));
      bool seen = false;
      for (const auto &b : bases)
        seen |= (f.p() == 2 || is_square(form.quadratic_value(b))) == sq;
      if (!seen)
        bases.push_back(u);
    }
    std::vector<Matrix> base_refl;
    for (const auto &b : bases)
      base_refl.push_back(reflection(b));
    for (const auto &u : nonsingular) {
      const FieldElement qu = form.quadratic_value(u);
      for (std::size_t k = 0; k < bases.size(); ++k) {
        const FieldElement qb = form.quadratic_value(bases[k]);
        if (f.p() != 2 && !is_square(qu * qb))
          continue;
        if (u == bases[k])
          continue;
        out.push_back(base_refl[k] * reflection(u));
      }
    }
    return out;
  }
  case Family::SuzukiB2:
    return suzuki_generators(spec.q()).matrix_gens;
  case Family::Ingested:
    return spec.matrix_gens;
  }
  return out;
}

GroupSpec parse_matrix_file(const std::string &text, const std::string &label) {
  const auto toks = tokenize(text);
  std::size_t pos = 0;
  auto need = [&](const char *what) -> const Token & {
    if (pos >= toks.size()) {
      const Token last = toks.empty() ? Token{} : toks.back();
      throw IngestError(last.line, last.column + last.text.size(),
                        std::string("unexpected end of file, expected ") + what);
    }
    return toks[pos++];
  };
  auto number = [&](const char *what) {
    const Token &t = need(what);
    try {
      std::size_t used = 0;
      unsigned long long v = std::stoull(t.text, &used);
      if (used != t.text.size())
        throw std::invalid_argument("");
      return v;
    } catch (const std::exception &) {
      throw IngestError(t.line, t.column, std::string("expected ") + what);
    }
  };
  const Token &head = need("'mat'");
  if (head.text != "mat")
    throw IngestError(head.line, head.column, "expected header 'mat'");
  const auto d = number("dimension");
  const auto p = number("characteristic");
  const auto a = number("degree");
  const auto count = number("generator count");
  const FieldCtx *ctx = nullptr;
  try {
    ctx = &FieldCtx::get(p, static_cast<unsigned>(a));
  } catch (const Error &e) {
    throw IngestError(head.line, head.column, e.what());
  }
  GroupSpec spec;
  spec.family = Family::Ingested;
  spec.d = static_cast<unsigned>(d);
  spec.p = p;
  spec.a = static_cast<unsigned>(a);
  spec.label = label;
  for (unsigned long long g = 0; g < count; ++g) {
    Matrix m(*ctx, spec.d);
    for (unsigned i = 0; i < d; ++i)
      for (unsigned j = 0; j < d; ++j) {
        const Token &t = need("field element");
        try {
          m.set(i, j, ffield::parse_element(*ctx, t.text));
        } catch (const Error &e) {
          throw IngestError(t.line, t.column, e.what());
        }
      }
    if (m.det().is_zero())
      throw IngestError(toks[pos - 1].line, toks[pos - 1].column,
                        "generator " + std::to_string(g + 1) + " is singular");
    spec.matrix_gens.push_back(m);
  }
  if (pos != toks.size())
    throw IngestError(toks[pos].line, toks[pos].column, "trailing data");
  return spec;
}

} // namespace bv::matgrp
