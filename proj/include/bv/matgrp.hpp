#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "bv/ffield.hpp"
#include "bv/numtheory.hpp"

namespace bv::matgrp {

using ffield::Code;
using ffield::FieldCtx;
using ffield::FieldElement;
using numtheory::BigInt;
using numtheory::Factorization;

/// Polynomial over a field, low degree first.
using Poly = std::vector<FieldElement>;

Poly poly_mul(const Poly &a, const Poly &b);
Poly poly_trim(Poly a);
bool poly_equal(const Poly &a, const Poly &b);
/// Equality up to multiplication by -1.
bool poly_equal_up_to_sign(const Poly &a, const Poly &b);
std::string poly_to_string(const Poly &a);
/// Poly from integer-like coefficients given as field elements, low degree first.
Poly make_poly(const FieldCtx &ctx, std::initializer_list<long long> coeffs);

class Matrix {
public:
  Matrix() = default;
  Matrix(const FieldCtx &ctx, unsigned d);
  static Matrix identity(const FieldCtx &ctx, unsigned d);
  static Matrix from_ints(const FieldCtx &ctx,
                          std::initializer_list<std::initializer_list<long long>> rows);
  static Matrix from_rows(const std::vector<std::vector<FieldElement>> &rows);
  static Matrix diagonal(const std::vector<FieldElement> &diag);

  const FieldCtx &field() const { return *ctx_; }
  unsigned dim() const { return d_; }
  FieldElement operator()(unsigned i, unsigned j) const {
    return {*ctx_, e_[i * d_ + j]};
  }
  Code code(unsigned i, unsigned j) const { return e_[i * d_ + j]; }
  void set(unsigned i, unsigned j, const FieldElement &v) { e_[i * d_ + j] = v.code(); }
  void set_code(unsigned i, unsigned j, Code c) { e_[i * d_ + j] = c; }

  Matrix operator*(const Matrix &o) const;
  Matrix operator+(const Matrix &o) const;
  Matrix operator-(const Matrix &o) const;
  Matrix scaled(const FieldElement &s) const;
  Matrix inverse() const;
  FieldElement det() const;
  Matrix transpose() const;
  /// Entrywise x -> x^(p^k).
  Matrix frobenius(unsigned k) const;
  Matrix pow(const BigInt &e) const;
  Matrix pow(long long e) const;
  bool is_identity() const;
  bool is_scalar() const;
  /// Row vector times matrix.
  std::vector<Code> apply(const std::vector<Code> &v) const;

  bool operator==(const Matrix &o) const { return d_ == o.d_ && e_ == o.e_; }
  bool operator!=(const Matrix &o) const { return !(*this == o); }
  const std::vector<Code> &codes() const { return e_; }

  std::string to_string() const;

private:
  const FieldCtx *ctx_ = nullptr;
  unsigned d_ = 0;
  std::vector<Code> e_;
};

/// det(wI - M), monic.
Poly charpoly(const Matrix &m);
Matrix companion(const Poly &f);

/// Exact order of M given a multiple N of it.
BigInt order_of_matrix(const Matrix &m, const Factorization &exponent_multiple);
/// Order using |GL_d(q)| as the multiple.
BigInt order_of_matrix(const Matrix &m);

enum class FormKind { Symplectic, Hermitian, SymmetricBilinear };

struct FormSpec {
  FormKind kind;
  Matrix gram;
  /// Upper triangular Q with Q(v) = v Q v^T, for orthogonal groups.
  std::optional<Matrix> quadratic;

  bool preserves(const Matrix &g) const;
  /// B(u, v) = u J (v^sigma)^T.
  FieldElement bilinear(const std::vector<Code> &u, const std::vector<Code> &v) const;
  FieldElement quadratic_value(const std::vector<Code> &v) const;
};

enum class Family { GL, SL, GU, SU, Sp, OmegaPlus, OmegaMinus, OmegaOdd, SuzukiB2, Ingested };
std::string to_string(Family f);
Family parse_family(const std::string &s);

struct GroupSpec {
  Family family = Family::SL;
  unsigned d = 2;
  std::uint64_t p = 2;
  unsigned a = 1;
  /// Explicit generators (Ingested, or filled in by standard_generators).
  std::vector<Matrix> matrix_gens;
  /// Permutation generators as 0-based image lists (Ingested only).
  std::vector<std::vector<std::uint32_t>> perm_gens;
  std::optional<BigInt> declared_order;
  std::string label;

  std::uint64_t q() const;
  /// GF(q^2) for unitary families, GF(q) otherwise.
  const FieldCtx &matrix_field() const;
  std::string name() const;
};

GroupSpec make_spec(Family f, unsigned d, std::uint64_t q);

Factorization classical_order(const GroupSpec &spec);
BigInt singer_order(const GroupSpec &spec);
/// Invariant form for the family, or nullopt for GL/SL.
std::optional<FormSpec> standard_form(const GroupSpec &spec);
/// True when g lies in the family's group (determinant and form checks).
bool is_member(const GroupSpec &spec, const Matrix &g);

/// Deterministic, ordered list of group elements from which generating sets
/// are selected: root elements for SL/Sp/SU, reflection products for Omega,
/// the standard four for Suzuki groups.
std::vector<Matrix> candidate_generators(const GroupSpec &spec);

/// Least nu with t^2 + t + nu irreducible over GF(q).
FieldElement anisotropic_parameter(const FieldCtx &ctx);

struct Triple {
  Matrix x, y, z;
  /// Parameters chosen during construction, for reporting.
  std::vector<std::pair<std::string, FieldElement>> params;
};

Triple lineardim3_triple(std::uint64_t q);
Triple u41_triple(std::uint64_t q);
Triple u3_triple(std::uint64_t q);
Triple sp42_triple(std::uint64_t q);

/// Printed x and y for each lemma, as free functions of their parameters.
Matrix lineardim3_x(const FieldElement &a, const FieldElement &b);
Matrix lineardim3_y(const FieldCtx &ctx);
Matrix u41_x(const FieldElement &b, const FieldElement &c);
/// The transvection I + e E_14.
Matrix u41_y(const FieldElement &e);
/// Variant with extra entries at (2,1) and (4,3); does not preserve the form.
Matrix u41_y_typeset(const FieldElement &e);
Matrix u3_x(const FieldElement &a, const FieldElement &b);
Matrix u3_y(const FieldElement &e);
/// Symplectic for the standard form; printed polynomial holds with these names.
Matrix sp42_x_odd(const FieldElement &a, const FieldElement &b);
/// Variant with a and b interchanged and entry (4,3) = +1; not symplectic for odd q.
Matrix sp42_x_odd_typeset(const FieldElement &a, const FieldElement &b);
Matrix sp42_y_odd(const FieldCtx &ctx);
Matrix sp42_x_even(const FieldElement &a, const FieldElement &b);
Matrix sp42_y_even(const FieldElement &lambda);

/// Printed characteristic/minimal polynomials, low degree first.
Poly lineardim3_printed(const FieldElement &a, const FieldElement &b);
Poly u41_printed(const FieldElement &b, const FieldElement &c, const FieldElement &e);
Poly u3_printed(const FieldElement &a, const FieldElement &b, const FieldElement &e);
Poly sp42_odd_printed(const FieldElement &a, const FieldElement &b);
Poly sp42_even_printed(const FieldElement &a, const FieldElement &b,
                       const FieldElement &lambda);

GroupSpec suzuki_generators(std::uint64_t q);

struct IdentityReport {
  std::string lemma;
  struct Row {
    std::uint64_t q;
    unsigned draws;
    unsigned mismatches;
  };
  std::vector<Row> rows;
  unsigned total_mismatches() const;
};

/// Randomized check of a printed polynomial against charpoly(x*y).
/// lemma is one of lineardim3, u41, u3, sp42.
/// With typeset = true the u41 and sp42 suites use the *_typeset variants,
/// which do not lie in their groups.
IdentityReport identity_suite(const std::string &lemma, std::uint64_t qmax,
                              unsigned draws, std::uint64_t seed, bool typeset = false);

struct SpinResult {
  /// Row-reduced basis of a proper invariant subspace, if one was found.
  std::optional<std::vector<std::vector<Code>>> subspace;
  unsigned attempts = 0;
};

/// Randomized search for a proper invariant subspace. An empty result does
/// not prove irreducibility.
SpinResult spin_submodule_search(const std::vector<Matrix> &gens, unsigned budget,
                                 std::uint64_t seed);

/// Smallest subspace containing v and invariant under gens (row-reduced basis).
std::vector<std::vector<Code>> spin(const std::vector<Matrix> &gens,
                                    const std::vector<Code> &v);

/// Matrix file: "mat d p a count", then count blocks of d rows.
GroupSpec parse_matrix_file(const std::string &text, const std::string &label);

} // namespace bv::matgrp
