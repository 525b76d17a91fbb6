// Exact arithmetic over the prime field Z_p: scalars, vectors, dense
// matrices, the standard bilinear form and linear-system solving.
//
// All values are kept in the canonical range [0, p-1]. Negative inputs are
// reduced on construction, so equality is structural.

#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <iosfwd>
#include <span>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace cayleyci {

// Raised on malformed input: dimension mismatch, non-prime modulus, p out of
// range for a construction and so on. The CLI maps it to exit code 64.
class usage_error : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Raised when an internal invariant that the mathematics guarantees is found
// broken at runtime.
class invariant_error : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

bool is_prime(std::int64_t n);

// A validated prime modulus. Any prime is accepted here; the constructions
// additionally require p odd (see require_odd_prime).
class Modulus {
 public:
  explicit Modulus(std::int64_t p);

  std::uint32_t value() const noexcept { return p_; }

  std::uint32_t reduce(std::int64_t x) const noexcept {
    auto r = x % static_cast<std::int64_t>(p_);
    return static_cast<std::uint32_t>(r < 0 ? r + p_ : r);
  }
  std::uint32_t add(std::uint32_t a, std::uint32_t b) const noexcept {
    auto s = a + b;
    return s >= p_ ? s - p_ : s;
  }
  std::uint32_t sub(std::uint32_t a, std::uint32_t b) const noexcept {
    return a >= b ? a - b : a + p_ - b;
  }
  std::uint32_t neg(std::uint32_t a) const noexcept { return a == 0 ? 0 : p_ - a; }
  std::uint32_t mul(std::uint32_t a, std::uint32_t b) const noexcept {
    return static_cast<std::uint32_t>((static_cast<std::uint64_t>(a) * b) % p_);
  }
  std::uint32_t pow(std::uint32_t a, std::uint64_t e) const noexcept;
  // Multiplicative inverse; a must be nonzero.
  std::uint32_t inv(std::uint32_t a) const;

  friend bool operator==(Modulus, Modulus) = default;

 private:
  std::uint32_t p_;
};

// Throws usage_error unless p is an odd prime.
Modulus require_odd_prime(std::int64_t p);

class FpScalar {
 public:
  FpScalar(std::int64_t value, Modulus mod) : mod_(mod), value_(mod.reduce(value)) {}

  std::uint32_t value() const noexcept { return value_; }
  Modulus modulus() const noexcept { return mod_; }
  bool is_zero() const noexcept { return value_ == 0; }

  FpScalar operator+(FpScalar o) const;
  FpScalar operator-(FpScalar o) const;
  FpScalar operator*(FpScalar o) const;
  FpScalar operator-() const { return {mod_.neg(value_), mod_}; }

  friend bool operator==(const FpScalar&, const FpScalar&) = default;

 private:
  Modulus mod_;
  std::uint32_t value_;
};

class FpVec {
 public:
  FpVec(std::size_t dim, Modulus mod) : mod_(mod), coords_(dim, 0) {}
  FpVec(std::span<const std::int64_t> values, Modulus mod);
  FpVec(std::initializer_list<std::int64_t> values, Modulus mod);

  static FpVec unit(std::size_t dim, std::size_t index, Modulus mod);
  static FpVec ones(std::size_t dim, Modulus mod);

  std::size_t dim() const noexcept { return coords_.size(); }
  Modulus modulus() const noexcept { return mod_; }
  std::uint32_t operator[](std::size_t i) const { return coords_[i]; }
  void set(std::size_t i, std::int64_t value) { coords_[i] = mod_.reduce(value); }
  std::span<const std::uint32_t> coords() const noexcept { return coords_; }

  bool is_zero() const noexcept;

  FpVec& operator+=(const FpVec& o);
  FpVec& operator-=(const FpVec& o);
  FpVec operator+(const FpVec& o) const { FpVec r = *this; return r += o; }
  FpVec operator-(const FpVec& o) const { FpVec r = *this; return r -= o; }
  FpVec operator-() const;
  FpVec scaled(std::uint32_t c) const;

  std::vector<std::int64_t> to_ints() const;
  std::string str() const;

  friend bool operator==(const FpVec& a, const FpVec& b) {
    return a.mod_ == b.mod_ && a.coords_ == b.coords_;
  }
  friend std::strong_ordering operator<=>(const FpVec& a, const FpVec& b) {
    return a.coords_ <=> b.coords_;
  }

 private:
  Modulus mod_;
  std::vector<std::uint32_t> coords_;
};

std::ostream& operator<<(std::ostream& os, const FpVec& v);

// <a, b> = sum a_i b_i (mod p).
FpScalar fp_dot(const FpVec& a, const FpVec& b);

class FpMat {
 public:
  FpMat(std::size_t rows, std::size_t cols, Modulus mod)
      : mod_(mod), rows_(rows), cols_(cols), entries_(rows * cols, 0) {}

  static FpMat identity(std::size_t n, Modulus mod);
  static FpMat from_rows(std::span<const FpVec> rows, std::size_t cols, Modulus mod);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  Modulus modulus() const noexcept { return mod_; }

  std::uint32_t at(std::size_t r, std::size_t c) const { return entries_[r * cols_ + c]; }
  void set(std::size_t r, std::size_t c, std::int64_t v) { entries_[r * cols_ + c] = mod_.reduce(v); }

  FpVec row(std::size_t r) const;
  FpVec operator*(const FpVec& x) const;
  // lambda^T A
  FpVec left_multiply(const FpVec& lambda) const;
  FpMat operator*(const FpMat& o) const;

  // Top-left block of the given size, or any other rectangular block.
  FpMat block(std::size_t r0, std::size_t c0, std::size_t nr, std::size_t nc) const;

  friend bool operator==(const FpMat&, const FpMat&) = default;

 private:
  Modulus mod_;
  std::size_t rows_;
  std::size_t cols_;
  std::vector<std::uint32_t> entries_;
};

struct Solution {
  FpVec x;
};

// Row combination proving A x = b has no solution: lambda^T A = 0 and
// lambda^T b = 1.
struct Infeasible {
  FpVec lambda;
};

using LinearResult = std::variant<Solution, Infeasible>;

// Gauss-Jordan elimination with first-nonzero pivoting. Free variables are
// set to zero in the returned solution. The returned witness is checked
// before returning; a bad witness raises invariant_error.
LinearResult solve_linear(const FpMat& a, const FpVec& b);

std::size_t mat_rank(const FpMat& a);

// Basis of {x : A x = 0}, one vector per free column, in column order.
std::vector<FpVec> nullspace_basis(const FpMat& a);

// Basis of the hyperplane {v : <v, w> = 0}; w must be nonzero.
std::vector<FpVec> hyperplane_basis(const FpVec& w);

}  // namespace cayleyci
