#include <gtest/gtest.h>

#include "cayleyci/isomap.hpp"
#include "support.hpp"

using namespace cayleyci;
using testing_support::random_vec;

namespace {

const Family kAll[] = {Family::rank2p3, Family::rank4p2, Family::rankbinom};

ConnectionSet with_class(const ConnectionSet& s, std::size_t i, AffineClass c) {
  auto classes = s.classes();
  classes[i] = std::move(c);
  return ConnectionSet(s.family(), s.name(), s.modulus(), s.du(), s.dv(), classes, s.v_labels());
}

// Every member of S, by walking each class's hyperplane.
std::vector<GroupElement> members(const ConnectionSet& s) {
  std::vector<GroupElement> out;
  const auto total = vector_count(s.modulus(), s.dv());
  for (const auto& c : s.classes()) {
    for (std::uint64_t i = 0; i < total; ++i) {
      auto v = decode_vector(i, s.dv(), s.modulus());
      if (fp_dot(v, c.functional) == c.rhs) out.push_back({c.offset, std::move(v)});
    }
  }
  return out;
}

}  // namespace

TEST(ApplyPolymap, Examples) {
  const auto f = build_family(Family::rank2p3, 3);
  const Modulus m(3);
  const GroupElement zero{FpVec(4, m), FpVec(5, m)};
  EXPECT_EQ(apply_polymap(f.phi, zero), zero);
  const GroupElement g{FpVec::ones(4, m), FpVec({0, 1, 2, 0, 1}, m)};
  const auto h = apply_polymap(f.phi, g);
  EXPECT_EQ(h.u, g.u);
  EXPECT_EQ(h.v, g.v + polymap_translation(f.phi, g.u));
}

TEST(MatchClasses, PairsCByFunctional) {
  const auto f = build_family(Family::rank2p3, 3);
  const auto m = match_classes(f.S, f.T);
  ASSERT_EQ(m.size(), 9U);
  for (const auto& [i, j] : m) EXPECT_EQ(f.S.classes()[i].offset, f.T.classes()[j].offset);
}

TEST(VerifySymbolic, AllFamiliesPass) {
  for (auto fam : kAll) {
    for (std::int64_t p : {3, 5}) {
      const auto f = build_family(fam, p);
      const auto rep = verify_polymap_symbolic(f.S, f.T, f.phi);
      EXPECT_TRUE(rep.pass) << to_string(fam) << " p=" << p << " " << rep.witness;
      EXPECT_EQ(rep.entries.size(), f.S.classes().size());
      for (const auto& e : rep.entries) EXPECT_TRUE(e.constant);
    }
  }
}

TEST(VerifySymbolic, DifferencesAtThree) {
  const std::pair<Family, const char*> want[] = {
      {Family::rank2p3, "1"}, {Family::rank4p2, "2"}, {Family::rankbinom, "1"}};
  for (const auto& [fam, c_diff] : want) {
    const auto f = build_family(fam, 3);
    const auto rep = verify_polymap_symbolic(f.S, f.T, f.phi);
    EXPECT_EQ(rep.entries.back().difference, c_diff) << to_string(fam);
    EXPECT_EQ(rep.entries.front().difference, "0") << to_string(fam);
    for (std::size_t i = 0; i + 1 < rep.entries.size(); ++i) EXPECT_EQ(rep.entries[i].target, 0U);
  }
}

TEST(VerifyPointwise, ExhaustiveAtThree) {
  const std::pair<Family, std::size_t> want[] = {
      {Family::rank2p3, 81}, {Family::rank4p2, 243}, {Family::rankbinom, 243}};
  for (const auto& [fam, base] : want) {
    const auto f = build_family(fam, 3);
    const auto rep = verify_polymap_pointwise(f.S, f.T, f.phi, {});
    EXPECT_TRUE(rep.pass) << to_string(fam) << " " << rep.witness;
    EXPECT_TRUE(rep.exhaustive);
    EXPECT_EQ(rep.base_points, base);
    for (const auto& e : rep.entries) EXPECT_GE(e.points_checked, base);
  }
}

TEST(VerifyPointwise, SampledAtFiveIsDeterministic) {
  const auto f = build_family(Family::rank2p3, 5);
  PointwiseBudget b{.exhaustive = false, .samples = 200, .seed = 7, .threads = 1};
  const auto one = verify_polymap_pointwise(f.S, f.T, f.phi, b);
  b.threads = 2;
  const auto two = verify_polymap_pointwise(f.S, f.T, f.phi, b);
  EXPECT_TRUE(one.pass);
  EXPECT_TRUE(two.pass);
  EXPECT_EQ(one.base_points, 200U);
  ASSERT_EQ(one.entries.size(), two.entries.size());
  for (std::size_t i = 0; i < one.entries.size(); ++i) {
    EXPECT_EQ(one.entries[i].points_checked, two.entries[i].points_checked);
  }
}

TEST(VerifyPointwise, ExhaustiveRefusedWhenTooLarge) {
  const auto f = build_family(Family::rank2p3, 11);
  EXPECT_THROW(verify_polymap_pointwise(f.S, f.T, f.phi, {}), usage_error);
}

TEST(NegativeControl, CorruptedRhs) {
  const auto f = build_family(Family::rank2p3, 3);
  auto c = f.T.classes().front();
  c.rhs = c.rhs + FpScalar(1, f.T.modulus());
  const auto bad = with_class(f.T, 0, c);
  EXPECT_FALSE(verify_polymap_symbolic(f.S, bad, f.phi).pass);
  const auto rep = verify_polymap_pointwise(f.S, bad, f.phi, {});
  EXPECT_FALSE(rep.pass);
  EXPECT_FALSE(rep.witness.empty());
}

TEST(NegativeControl, PerturbedFunctional) {
  const auto f = build_family(Family::rank4p2, 3);
  const Modulus m(3);
  auto c = f.S.classes()[1];
  c.functional = c.functional + FpVec::unit(5, 0, m);
  if (c.functional.is_zero()) c.functional = FpVec::unit(5, 1, m);
  const auto bad_s = with_class(f.S, 1, c);
  const auto bad_t = with_class(f.T, 1, c);
  EXPECT_FALSE(verify_polymap_symbolic(bad_s, bad_t, f.phi).pass);
}

TEST(NegativeControl, WrongMap) {
  const auto f = build_family(Family::rank2p3, 3);
  auto phi = f.phi;
  phi.components[0] = FpPoly(phi.du, FpRing{phi.mod});
  EXPECT_FALSE(verify_polymap_symbolic(f.S, f.T, phi).pass);
  EXPECT_FALSE(verify_polymap_pointwise(f.S, f.T, phi, {}).pass);
}

// Independent check of the isomorphism property: for sampled g and every s
// in S, phi(g + s) - phi(g) lies in T.
TEST(IsoOracle, EdgesMapToEdges) {
  for (auto fam : {Family::rank2p3, Family::rank4p2}) {
    const auto f = build_family(fam, 3);
    const auto all = members(f.S);
    ASSERT_EQ(BigInt(all.size()), f.S.cardinality());
    std::mt19937_64 rng(21);
    const auto mod = f.S.modulus();
    for (int trial = 0; trial < 40; ++trial) {
      const GroupElement g{random_vec(rng, f.S.du(), mod), random_vec(rng, f.S.dv(), mod)};
      const auto pg = apply_polymap(f.phi, g);
      for (const auto& s : all) {
        ASSERT_TRUE(f.T.contains(apply_polymap(f.phi, g + s) - pg)) << to_string(fam);
      }
    }
  }
}

TEST(SolveOnHyperplane, LandsOnHyperplane) {
  const Modulus m(5);
  std::mt19937_64 rng(13);
  for (int trial = 0; trial < 200; ++trial) {
    const auto w = testing_support::random_nonzero_vec(rng, 6, m);
    const FpScalar c(static_cast<std::int64_t>(rng() % 5), m);
    const auto x = solve_on_hyperplane(random_vec(rng, 6, m), w, c);
    EXPECT_EQ(fp_dot(x, w), c);
  }
}
