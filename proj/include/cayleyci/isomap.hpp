// Checks that a PolyMap is a graph isomorphism Cay(G, S) -> Cay(G, T).
//
// For a pair b - a in the S-class (delta, w, c), phi(b) - phi(a) differs from
// b - a only in V, by the difference of the translation vector along delta.
// It lands in the T-class (delta, w, c') iff
//   Delta_delta ( sum_j w_j q_j ) = c' - c
// identically, which the symbolic mode checks as a polynomial identity and
// the pointwise mode checks on concrete group elements.

#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "cayleyci/families.hpp"

namespace cayleyci {

GroupElement apply_polymap(const PolyMap& phi, const GroupElement& g);

// (q_0(u), ..., q_{dv-1}(u))
FpVec polymap_translation(const PolyMap& phi, const FpVec& u);

// Pairs (S-class index, T-class index): equal offsets, and among several
// T-classes on the same offset the one with the same functional. Throws
// invariant_error if no bijection results.
std::vector<std::pair<std::size_t, std::size_t>> match_classes(const ConnectionSet& s, const ConnectionSet& t);

enum class IsoMode { symbolic, pointwise };

struct IsoEntry {
  std::string s_label;
  std::string t_label;
  // symbolic: Delta_delta(sum w_j q_j) printed; pointwise: empty
  std::string difference;
  std::uint32_t target = 0;  // rhs_T - rhs_S
  bool constant = true;
  std::size_t points_checked = 0;
  bool pass = true;
};

struct IsoReport {
  std::string family;
  std::uint32_t p = 0;
  IsoMode mode = IsoMode::symbolic;
  bool exhaustive = false;
  std::size_t base_points = 0;
  std::vector<IsoEntry> entries;
  bool pass = true;
  std::string witness;
};

IsoReport verify_polymap_symbolic(const ConnectionSet& s, const ConnectionSet& t, const PolyMap& phi);

struct PointwiseBudget {
  // Enumerate all of Z_p^du (allowed only when p^du <= 10^6), else sample.
  bool exhaustive = true;
  std::size_t samples = 1000;
  std::uint64_t seed = 1;
  unsigned threads = 1;
};

inline constexpr std::uint64_t kMaxExhaustiveBasePoints = 1'000'000;

IsoReport verify_polymap_pointwise(const ConnectionSet& s, const ConnectionSet& t, const PolyMap& phi,
                                   const PointwiseBudget& budget);

// Point on {v : <v, w> = c} with all coordinates except the first pivot of w
// taken from `free`.
FpVec solve_on_hyperplane(FpVec free, const FpVec& w, FpScalar c);

}  // namespace cayleyci
