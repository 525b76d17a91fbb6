#include <gtest/gtest.h>

#include <set>

#include "cayleyci/families.hpp"
#include "support.hpp"

using namespace cayleyci;
using testing_support::random_vec;

namespace {

const Modulus p3(3);

// Every v in Z_p^dv with <v, w> = c.
std::vector<FpVec> hyperplane_points(const FpVec& w, std::uint32_t c) {
  std::vector<FpVec> out;
  const auto mod = w.modulus();
  const auto total = vector_count(mod, w.dim());
  for (std::uint64_t i = 0; i < total; ++i) {
    auto v = decode_vector(i, w.dim(), mod);
    if (fp_dot(v, w).value() == c) out.push_back(std::move(v));
  }
  return out;
}

}  // namespace

TEST(BuildFamily, Rank2p3Shape) {
  const auto f = build_family(Family::rank2p3, 3);
  EXPECT_EQ(f.S.du(), 4U);
  EXPECT_EQ(f.S.dv(), 5U);
  EXPECT_EQ(f.S.classes().size(), 9U);
  EXPECT_EQ(f.S.cardinality(), 729);
  EXPECT_EQ(f.T.cardinality(), 729);
  EXPECT_EQ(build_family(Family::rank2p3, 5).S.cardinality(), 13 * 15625);
  EXPECT_EQ(f.phi.components.size(), 5U);
}

TEST(BuildFamily, Rank4p2Shape) {
  const auto f = build_family(Family::rank4p2, 3);
  EXPECT_EQ(f.S.du(), 5U);
  EXPECT_EQ(f.S.dv(), 5U);
  EXPECT_EQ(f.S.classes().size(), 11U);
  const auto& c1 = f.T.classes().back();
  EXPECT_EQ(c1.label, "C'_1");
  EXPECT_EQ(c1.rhs.value(), 2U);
}

TEST(BuildFamily, RankBinomShape) {
  const auto f = build_family(Family::rankbinom, 3);
  EXPECT_EQ(f.S.du(), 5U);
  EXPECT_EQ(f.S.dv(), 10U);
  EXPECT_EQ(f.S.classes().size(), 16U);
  EXPECT_EQ(f.S.du() + f.S.dv(), 15U);
  EXPECT_EQ(build_family(Family::rankbinom, 5).S.dv(), 126U);
  EXPECT_THROW(build_family(Family::rankbinom, 5, 100), usage_error);
}

TEST(BuildFamily, RejectsBadPrimes) {
  EXPECT_THROW(build_family(Family::rank2p3, 2), usage_error);
  EXPECT_THROW(build_family(Family::rank4p2, 4), usage_error);
  EXPECT_THROW(parse_family("rank9"), usage_error);
  EXPECT_EQ(parse_family("rankbinom"), Family::rankbinom);
}

TEST(BuildFamily, SAndTDifferInOneRhs) {
  for (auto fam : {Family::rank2p3, Family::rank4p2, Family::rankbinom}) {
    for (std::int64_t p : {3, 5}) {
      const auto f = build_family(fam, p);
      ASSERT_EQ(f.S.classes().size(), f.T.classes().size());
      EXPECT_EQ(f.S.cardinality(), f.T.cardinality());
      int differing = 0;
      for (std::size_t i = 0; i < f.S.classes().size(); ++i) {
        const auto& a = f.S.classes()[i];
        const auto& b = f.T.classes()[i];
        EXPECT_EQ(a.offset, b.offset);
        EXPECT_EQ(a.functional, b.functional);
        if (!(a.rhs == b.rhs)) ++differing;
      }
      EXPECT_EQ(differing, 1) << to_string(fam) << " p=" << p;
    }
  }
}

TEST(BPartners, ThreeSubsets) {
  const auto parts = b_partners({0, 1, 2}, 3);
  const std::vector<std::vector<std::size_t>> want{{0, 3, 4}, {1, 3, 4}, {2, 3, 4}};
  EXPECT_EQ(parts, want);
}

TEST(BPartners, CountAndComplement) {
  for (std::int64_t p : {3, 5}) {
    const auto ground = static_cast<std::size_t>(2 * p - 1);
    for (const auto& k : k_subsets(ground, static_cast<std::size_t>(p))) {
      const auto parts = b_partners(k, p);
      EXPECT_EQ(parts.size(), static_cast<std::size_t>(p));
      std::set<std::size_t> in_k(k.begin(), k.end());
      for (const auto& kp : parts) {
        std::size_t common = 0;
        for (auto x : kp) common += in_k.contains(x);
        EXPECT_EQ(common, 1U);
        for (std::size_t x = 0; x < ground; ++x) {
          if (!in_k.contains(x)) {
            EXPECT_NE(std::find(kp.begin(), kp.end(), x), kp.end());
          }
        }
      }
    }
  }
}

TEST(Closure, Rank2p3AtThree) {
  const auto f = build_family(Family::rank2p3, 3);
  const auto bar = undirected_closure(f.S);
  EXPECT_EQ(bar.classes().size(), 18U);
  EXPECT_EQ(bar.cardinality(), 1458);
  EXPECT_TRUE(bar.is_symmetric());
  EXPECT_FALSE(f.S.is_symmetric());
  const auto neg_a1 = f.S.classes().front().negated();
  EXPECT_EQ(neg_a1.offset, -FpVec::unit(4, 0, p3));
  EXPECT_EQ(neg_a1.functional, f.S.classes().front().functional);
  EXPECT_EQ(neg_a1.rhs.value(), 0U);
  const auto twice = undirected_closure(bar);
  EXPECT_EQ(twice.classes().size(), bar.classes().size());
  for (const auto& c : twice.classes()) EXPECT_TRUE(bar.find_class(c).has_value());
}

TEST(Closure, NegatedRhs) {
  const auto f = build_family(Family::rank2p3, 3);
  const auto& c1 = f.T.classes().back();
  const auto n = c1.negated();
  EXPECT_EQ(n.rhs.value(), 2U);
  EXPECT_EQ(n.offset, -c1.offset);
}

TEST(Contains, Examples) {
  const auto f = build_family(Family::rank2p3, 3);
  EXPECT_TRUE(contains(f.S, {FpVec::unit(4, 0, p3), FpVec(5, p3)}));
  std::mt19937_64 rng(3);
  for (int i = 0; i < 20; ++i) {
    EXPECT_FALSE(contains(f.S, {FpVec(4, p3), random_vec(rng, 5, p3)}));
  }
  // <v, sum f_j> = 1
  const GroupElement g{FpVec::ones(4, p3), FpVec({1, 0, 0, 0, 0}, p3)};
  EXPECT_TRUE(contains(f.T, g));
  EXPECT_FALSE(contains(f.S, g));
}

TEST(Disjointness, EveryMemberInExactlyOneClass) {
  const auto f = build_family(Family::rank2p3, 3);
  std::size_t members = 0;
  for (const auto& c : f.S.classes()) {
    for (const auto& v : hyperplane_points(c.functional, c.rhs.value())) {
      const GroupElement g{c.offset, v};
      std::size_t hits = 0;
      for (const auto& d : f.S.classes()) hits += d.contains(g);
      EXPECT_EQ(hits, 1U);
      ++members;
    }
  }
  EXPECT_EQ(members, 729U);
}

TEST(Membership, DependsOnlyOnOffsetAndPairing) {
  const auto f = build_family(Family::rank4p2, 3);
  std::mt19937_64 rng(8);
  for (int trial = 0; trial < 300; ++trial) {
    const auto& c = f.S.classes()[rng() % f.S.classes().size()];
    const auto v = random_vec(rng, 5, p3);
    // any v' with the same pairing against the functional agrees
    auto dir = hyperplane_basis(c.functional);
    const auto v2 = v + dir[rng() % dir.size()];
    EXPECT_EQ(c.contains({c.offset, v}), c.contains({c.offset, v2}));
    EXPECT_EQ(f.S.contains({c.offset, v}), f.S.contains({c.offset, v2}));
  }
}

TEST(ConnectionSet, RejectsOverlapAndZero) {
  const FpVec u({1, 0}, p3);
  const AffineClass a{"a", u, FpVec({1, 0}, p3), FpScalar(0, p3)};
  const AffineClass b{"b", u, FpVec({0, 1}, p3), FpScalar(0, p3)};
  EXPECT_THROW(ConnectionSet("x", "X", p3, 2, 2, {a, b}), invariant_error);
  const AffineClass z{"z", FpVec(2, p3), FpVec({1, 0}, p3), FpScalar(0, p3)};
  EXPECT_THROW(ConnectionSet("x", "X", p3, 2, 2, {z}), invariant_error);
  const AffineClass c{"c", u, FpVec({2, 0}, p3), FpScalar(1, p3)};
  EXPECT_NO_THROW(ConnectionSet("x", "X", p3, 2, 2, {a, c}));
}

TEST(VectorIndex, RoundTrip) {
  const Modulus m(5);
  for (std::uint64_t i = 0; i < 625; ++i) EXPECT_EQ(encode_vector(decode_vector(i, 4, m)), i);
  EXPECT_EQ(decode_vector(1, 3, m), FpVec({0, 0, 1}, m));
  EXPECT_THROW(vector_count(m, 40), usage_error);
}
