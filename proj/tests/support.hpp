// Hand-rolled generators shared by the unit and property tests.

#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "cayleyci/gfp.hpp"
#include "cayleyci/polyring.hpp"

namespace testing_support {

using namespace cayleyci;

inline FpVec random_vec(std::mt19937_64& rng, std::size_t dim, Modulus mod) {
  std::uniform_int_distribution<std::int64_t> d(0, mod.value() - 1);
  FpVec v(dim, mod);
  for (std::size_t i = 0; i < dim; ++i) v.set(i, d(rng));
  return v;
}

inline FpVec random_nonzero_vec(std::mt19937_64& rng, std::size_t dim, Modulus mod) {
  for (;;) {
    auto v = random_vec(rng, dim, mod);
    if (!v.is_zero()) return v;
  }
}

inline FpMat random_mat(std::mt19937_64& rng, std::size_t rows, std::size_t cols, Modulus mod) {
  std::uniform_int_distribution<std::int64_t> d(0, mod.value() - 1);
  FpMat m(rows, cols, mod);
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < cols; ++c) m.set(r, c, d(rng));
  }
  return m;
}

// Up to `terms` random terms of total degree <= max_deg.
inline FpPoly random_poly(std::mt19937_64& rng, std::size_t nvars, Modulus mod, unsigned max_deg = 4,
                          std::size_t terms = 6) {
  FpPoly f(nvars, FpRing{mod});
  std::uniform_int_distribution<std::int64_t> coeff(1, mod.value() - 1);
  std::uniform_int_distribution<std::size_t> var(0, nvars - 1);
  std::uniform_int_distribution<unsigned> deg(0, max_deg);
  for (std::size_t t = 0; t < terms; ++t) {
    std::vector<std::uint16_t> e(nvars, 0);
    const auto d = deg(rng);
    for (unsigned k = 0; k < d; ++k) ++e[var(rng)];
    f.add_term(Monomial(e), mod.reduce(coeff(rng)));
  }
  return f;
}

inline std::vector<std::int64_t> lift(const FpVec& v) { return v.to_ints(); }

}  // namespace testing_support
