// Sparse multivariate polynomials over Z (arbitrary precision) and over Z_p,
// the monomial families used by the constructions, the finite-difference
// operator, and the polynomial identities that the isomorphism proofs rely on.
//
// Variables are 0-indexed in code (x_1 of the printed form is index 0).
// Terms are kept in lexicographic order of exponent vectors.

#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "cayleyci/gfp.hpp"
#include "cayleyci/verdict.hpp"

namespace cayleyci {

using BigInt = boost::multiprecision::cpp_int;

class Monomial {
 public:
  Monomial() = default;
  explicit Monomial(std::vector<std::uint16_t> exps) : exps_(std::move(exps)) {}
  Monomial(std::initializer_list<std::uint16_t> exps) : exps_(exps) {}

  static Monomial one(std::size_t nvars) { return Monomial(std::vector<std::uint16_t>(nvars, 0)); }
  static Monomial variable(std::size_t nvars, std::size_t i, std::uint16_t power = 1);
  // Multilinear monomial prod_{i in support} x_i.
  static Monomial from_support(std::size_t nvars, std::span<const std::size_t> support);

  std::size_t nvars() const noexcept { return exps_.size(); }
  std::uint16_t operator[](std::size_t i) const { return exps_[i]; }
  std::span<const std::uint16_t> exps() const noexcept { return exps_; }

  unsigned degree() const noexcept;
  // Number of variables that occur (positive exponents).
  unsigned support() const noexcept;
  bool is_multilinear() const noexcept;
  std::vector<std::size_t> support_indices() const;

  Monomial operator*(const Monomial& o) const;

  // x1^2*x3, or "1" for the empty product.
  std::string str() const;

  friend bool operator==(const Monomial&, const Monomial&) = default;
  friend std::strong_ordering operator<=>(const Monomial& a, const Monomial& b) {
    return a.exps_ <=> b.exps_;
  }

 private:
  std::vector<std::uint16_t> exps_;
};

struct IntRing {
  using value_type = BigInt;
  value_type from_int(std::int64_t v) const { return v; }
  value_type from_big(const BigInt& v) const { return v; }
  bool is_zero(const value_type& v) const { return v == 0; }
  value_type add(const value_type& a, const value_type& b) const { return a + b; }
  value_type sub(const value_type& a, const value_type& b) const { return a - b; }
  value_type mul(const value_type& a, const value_type& b) const { return a * b; }
  std::string str(const value_type& v) const { return v.str(); }
  friend bool operator==(IntRing, IntRing) { return true; }
};

struct FpRing {
  Modulus mod;
  using value_type = std::uint32_t;
  value_type from_int(std::int64_t v) const { return mod.reduce(v); }
  value_type from_big(const BigInt& v) const;
  bool is_zero(value_type v) const { return v == 0; }
  value_type add(value_type a, value_type b) const { return mod.add(a, b); }
  value_type sub(value_type a, value_type b) const { return mod.sub(a, b); }
  value_type mul(value_type a, value_type b) const { return mod.mul(a, b); }
  std::string str(value_type v) const { return std::to_string(v); }
  friend bool operator==(FpRing a, FpRing b) { return a.mod == b.mod; }
};

template <class Ring>
class Poly {
 public:
  using coeff_type = typename Ring::value_type;
  using term_map = std::map<Monomial, coeff_type>;

  Poly(std::size_t nvars, Ring ring) : nvars_(nvars), ring_(std::move(ring)) {}

  static Poly constant(std::size_t nvars, Ring ring, const coeff_type& c);
  static Poly variable(std::size_t nvars, std::size_t i, Ring ring);
  static Poly term(const Monomial& m, const coeff_type& c, Ring ring);

  std::size_t nvars() const noexcept { return nvars_; }
  const Ring& ring() const noexcept { return ring_; }
  const term_map& terms() const noexcept { return terms_; }
  std::size_t size() const noexcept { return terms_.size(); }
  bool is_zero() const noexcept { return terms_.empty(); }
  // True for the zero polynomial as well.
  bool is_constant() const;
  coeff_type constant_term() const;
  coeff_type coeff(const Monomial& m) const;

  // Adds c * m, dropping the term if it cancels.
  void add_term(const Monomial& m, const coeff_type& c);

  Poly& operator+=(const Poly& o);
  Poly& operator-=(const Poly& o);
  Poly operator+(const Poly& o) const { Poly r = *this; return r += o; }
  Poly operator-(const Poly& o) const { Poly r = *this; return r -= o; }
  Poly operator-() const;
  Poly operator*(const Poly& o) const;
  Poly scaled(const coeff_type& c) const;
  Poly pow(unsigned e) const;

  std::string str() const;

  friend bool operator==(const Poly& a, const Poly& b) {
    return a.nvars_ == b.nvars_ && a.ring_ == b.ring_ && a.terms_ == b.terms_;
  }

 private:
  void require_compatible(const Poly& o) const;

  std::size_t nvars_;
  Ring ring_;
  term_map terms_;
};

using IntPoly = Poly<IntRing>;
using FpPoly = Poly<FpRing>;

extern template class Poly<IntRing>;
extern template class Poly<FpRing>;

FpPoly reduce_mod(const IntPoly& f, Modulus mod);

// Divides every coefficient by d. Returns the first monomial whose
// coefficient is not divisible by d instead of truncating.
struct ExactDivision {
  std::optional<IntPoly> quotient;
  std::optional<Monomial> failing;
};
ExactDivision divide_exact(const IntPoly& f, const BigInt& d);

// Finite difference f(x + alpha) - f(x), expanded and collected.
FpPoly delta(const FpPoly& f, const FpVec& alpha);
IntPoly delta(const IntPoly& f, std::span<const std::int64_t> alpha);

FpScalar eval(const FpPoly& f, const FpVec& x);
BigInt eval(const IntPoly& f, std::span<const std::int64_t> x);

// ---- combinatorics ----

BigInt factorial(unsigned n);
BigInt binomial(unsigned n, unsigned k);

// All k-subsets of {0, ..., n-1} in lexicographic order.
std::vector<std::vector<std::size_t>> k_subsets(std::size_t n, std::size_t k);

// Degree-d exponent vectors in nvars variables, lexicographic order.
std::vector<Monomial> monomials_of_degree(std::size_t nvars, unsigned d);

// Multilinear degree-d monomials in nvars variables, lexicographic order.
std::vector<Monomial> multilinear_monomials(std::size_t nvars, unsigned d);

// ---- the rank 2p+3 polynomials ----

// Degree-p monomials in p+1 variables involving at least two variables.
std::vector<Monomial> monomials_M(std::int64_t p);

// Split of a monomial list by whether variable i occurs:
// first = {n_i = 0}, second = {n_i > 0}.
std::pair<std::vector<Monomial>, std::vector<Monomial>> split_by_variable(
    std::span<const Monomial> monomials, std::size_t i);

// (p-1)! / prod n_i!, defined for degree-p monomials with support >= 2.
BigInt multinomial_c(const Monomial& n, std::int64_t p);

// [r_0, r_1, ..., r_{p+1}] over Z_p in p+1 variables.
std::vector<FpPoly> build_r(std::int64_t p);

// [l_1, ..., l_{2p-1}] over Z_p in 2p-1 variables: l_i sums the multilinear
// degree-p monomials that avoid x_i.
std::vector<FpPoly> build_l(std::int64_t p);

// ---- identity checks ----

// s^p = sum x_j^p + sum_M p c_n x^n, and the same for s_i = s - x_i over M_i^0.
Verdict check_lemma1(std::int64_t p);
// sum_j r_j = (p s^p - sum_j s_j^p) / p = sum_M (k - 1) c_n x^n over Z_p.
Verdict check_lemma2(std::int64_t p);
// Closed form of the difference of a multilinear monomial along a 0/1 vector.
Verdict check_lemma5(std::int64_t p, const Monomial& n, std::span<const std::uint8_t> m);
// The three difference identities for the l_i and the binomial facts behind them.
Verdict check_lemma6(std::int64_t p);
// (t + p)^p - t^p has every coefficient divisible by p^2.
Verdict check_power_congruence(std::int64_t p);

}  // namespace cayleyci
