#include <gtest/gtest.h>

#include <set>

#include "cayleyci/gfp.hpp"
#include "support.hpp"

using namespace cayleyci;
using testing_support::random_mat;
using testing_support::random_vec;

namespace {

const Modulus p3(3);
const Modulus p5(5);

// Number of distinct vectors spanned by the rows, by brute enumeration of
// all coefficient tuples.
std::size_t span_size(const std::vector<FpVec>& rows, Modulus mod) {
  std::set<FpVec> seen;
  const std::size_t n = rows.size();
  std::vector<std::uint32_t> c(n, 0);
  for (;;) {
    FpVec acc(rows.front().dim(), mod);
    for (std::size_t i = 0; i < n; ++i) acc += rows[i].scaled(c[i]);
    seen.insert(acc);
    std::size_t i = 0;
    while (i < n && ++c[i] == mod.value()) c[i++] = 0;
    if (i == n) break;
  }
  return seen.size();
}

bool brute_feasible(const FpMat& a, const FpVec& b) {
  const auto mod = a.modulus();
  std::vector<std::uint32_t> x(a.cols(), 0);
  for (;;) {
    FpVec xv(a.cols(), mod);
    for (std::size_t i = 0; i < x.size(); ++i) xv.set(i, x[i]);
    if (a * xv == b) return true;
    std::size_t i = 0;
    while (i < x.size() && ++x[i] == mod.value()) x[i++] = 0;
    if (i == x.size()) return false;
  }
}

}  // namespace

TEST(Modulus, RejectsNonPrimes) {
  EXPECT_THROW(Modulus(1), usage_error);
  EXPECT_THROW(Modulus(9), usage_error);
  EXPECT_THROW(Modulus(-3), usage_error);
  EXPECT_NO_THROW(Modulus(2));
  EXPECT_THROW(require_odd_prime(2), usage_error);
  EXPECT_THROW(require_odd_prime(15), usage_error);
  EXPECT_EQ(require_odd_prime(7).value(), 7U);
}

TEST(Modulus, InverseAndPow) {
  const Modulus m(7);
  for (std::uint32_t a = 1; a < 7; ++a) EXPECT_EQ(m.mul(a, m.inv(a)), 1U);
  EXPECT_EQ(m.pow(3, 6), 1U);
  EXPECT_THROW(m.inv(0), std::domain_error);
}

TEST(FpScalar, CanonicalRepresentatives) {
  EXPECT_EQ(FpScalar(-1, p3).value(), 2U);
  EXPECT_EQ(FpScalar(7, p3).value(), 1U);
  EXPECT_EQ((FpScalar(2, p3) + FpScalar(2, p3)).value(), 1U);
  EXPECT_EQ((-FpScalar(1, p5)).value(), 4U);
  EXPECT_EQ(FpScalar(4, p3), FpScalar(1, p3));
}

TEST(FpDot, Examples) {
  EXPECT_EQ(fp_dot(FpVec({1, 2}, p3), FpVec({2, 2}, p3)).value(), 0U);
  EXPECT_EQ(fp_dot(FpVec({1, 2, 1}, p3), FpVec(3, p3)).value(), 0U);
  EXPECT_EQ(fp_dot(FpVec({1, 0, 0, 0, 0}, p3), FpVec({1, 1, 0, 0, 0}, p3)).value(), 1U);
  EXPECT_THROW(fp_dot(FpVec({1, 2}, p3), FpVec({1, 2, 0}, p3)), usage_error);
  EXPECT_THROW(fp_dot(FpVec({1, 2}, p3), FpVec({1, 2}, p5)), usage_error);
}

TEST(FpDot, SymmetricAndBilinear) {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 300; ++trial) {
    const auto a = random_vec(rng, 6, p5);
    const auto b = random_vec(rng, 6, p5);
    const auto c = random_vec(rng, 6, p5);
    EXPECT_EQ(fp_dot(a, b), fp_dot(b, a));
    EXPECT_EQ(fp_dot(a + b, c), fp_dot(a, c) + fp_dot(b, c));
    EXPECT_EQ(fp_dot(a.scaled(3), c), FpScalar(3, p5) * fp_dot(a, c));
  }
}

TEST(SolveLinear, Identity) {
  const auto r = solve_linear(FpMat::identity(2, p3), FpVec({1, 2}, p3));
  ASSERT_TRUE(std::holds_alternative<Solution>(r));
  EXPECT_EQ(std::get<Solution>(r).x, FpVec({1, 2}, p3));
}

TEST(SolveLinear, ZeroSystemIsInfeasible) {
  const auto r = solve_linear(FpMat(1, 1, p3), FpVec({1}, p3));
  ASSERT_TRUE(std::holds_alternative<Infeasible>(r));
  EXPECT_EQ(std::get<Infeasible>(r).lambda, FpVec({1}, p3));
}

TEST(SolveLinear, DimensionMismatch) {
  EXPECT_THROW(solve_linear(FpMat(2, 2, p3), FpVec({1}, p3)), usage_error);
}

TEST(SolveLinear, AgreesWithBruteForce) {
  std::mt19937_64 rng(5);
  int infeasible = 0;
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t rows = 1 + rng() % 4;
    const std::size_t cols = 1 + rng() % 3;
    auto a = random_mat(rng, rows, cols, p3);
    // low-rank systems make inconsistency common
    if (trial % 2 == 0 && rows > 1) {
      for (std::size_t c = 0; c < cols; ++c) a.set(rows - 1, c, 2 * static_cast<std::int64_t>(a.at(0, c)));
    }
    const auto b = random_vec(rng, rows, p3);
    const auto r = solve_linear(a, b);
    EXPECT_EQ(std::holds_alternative<Solution>(r), brute_feasible(a, b));
    if (const auto* s = std::get_if<Solution>(&r)) {
      EXPECT_EQ(a * s->x, b);
    } else {
      ++infeasible;
      const auto& lambda = std::get<Infeasible>(r).lambda;
      EXPECT_TRUE(a.left_multiply(lambda).is_zero());
      EXPECT_EQ(fp_dot(lambda, b).value(), 1U);
    }
  }
  EXPECT_GT(infeasible, 20);
}

TEST(MatRank, Examples) {
  EXPECT_EQ(mat_rank(FpMat::identity(4, p5)), 4U);
  EXPECT_EQ(mat_rank(FpMat(3, 4, p5)), 0U);
}

TEST(MatRank, ConstructionNormalsAtThree) {
  // f_0 + f_i and f_i + sum_j f_j, i = 1..4, in Z_3^5
  std::vector<FpVec> rows;
  for (std::size_t i = 1; i <= 4; ++i) {
    auto a = FpVec::unit(5, 0, p3);
    a += FpVec::unit(5, i, p3);
    rows.push_back(a);
  }
  for (std::size_t i = 1; i <= 4; ++i) {
    auto b = FpVec::ones(5, p3);
    b += FpVec::unit(5, i, p3);
    rows.push_back(b);
  }
  const auto rank = mat_rank(FpMat::from_rows(rows, 5, p3));
  // span size 3^rank by enumerating all 3^8 combinations
  std::size_t expected = 1;
  const auto size = span_size(rows, p3);
  std::size_t r = 0;
  while (expected < size) {
    expected *= 3;
    ++r;
  }
  ASSERT_EQ(expected, size);
  EXPECT_EQ(rank, r);
  EXPECT_EQ(rank, 5U);
}

TEST(Nullspace, BasisIsKernel) {
  std::mt19937_64 rng(9);
  for (int trial = 0; trial < 100; ++trial) {
    const auto a = random_mat(rng, 1 + rng() % 4, 1 + rng() % 5, p5);
    const auto basis = nullspace_basis(a);
    EXPECT_EQ(basis.size(), a.cols() - mat_rank(a));
    for (const auto& v : basis) EXPECT_TRUE((a * v).is_zero());
    if (!basis.empty()) {
      EXPECT_EQ(mat_rank(FpMat::from_rows(basis, a.cols(), p5)), basis.size());
    }
  }
}

TEST(Hyperplane, Basis) {
  const FpVec w({1, 1, 0, 2}, p3);
  const auto basis = hyperplane_basis(w);
  EXPECT_EQ(basis.size(), 3U);
  for (const auto& v : basis) EXPECT_TRUE(fp_dot(v, w).is_zero());
  EXPECT_THROW(hyperplane_basis(FpVec(3, p3)), usage_error);
}

TEST(FpMat, BlocksAndProducts) {
  std::mt19937_64 rng(2);
  const auto a = random_mat(rng, 3, 4, p5);
  const auto b = random_mat(rng, 4, 2, p5);
  const auto x = random_vec(rng, 2, p5);
  EXPECT_EQ((a * b) * x, a * (b * x));
  const auto blk = a.block(1, 2, 2, 2);
  EXPECT_EQ(blk.at(0, 0), a.at(1, 2));
  EXPECT_EQ(blk.at(1, 1), a.at(2, 3));
  const auto lambda = random_vec(rng, 3, p5);
  for (std::size_t c = 0; c < 4; ++c) {
    FpScalar s(0, p5);
    for (std::size_t r = 0; r < 3; ++r) s = s + FpScalar(lambda[r], p5) * FpScalar(a.at(r, c), p5);
    EXPECT_EQ(a.left_multiply(lambda)[c], s.value());
  }
}

TEST(FpVec, ArithmeticStaysCanonical) {
  std::mt19937_64 rng(4);
  for (int trial = 0; trial < 200; ++trial) {
    const auto a = random_vec(rng, 5, p5);
    const auto b = random_vec(rng, 5, p5);
    for (const auto& v : {a + b, a - b, -a, a.scaled(4)}) {
      for (auto c : v.coords()) EXPECT_LT(c, 5U);
    }
    EXPECT_EQ(a - b + b, a);
    EXPECT_TRUE((a + (-a)).is_zero());
  }
}
