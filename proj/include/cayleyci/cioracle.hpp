// Brute-force Cayley isomorphism checks on tiny elementary abelian groups.
//
// Elements of Z_p^n are indexed in mixed radix (coordinate 0 most
// significant). A connection set is a bitmask over the nonzero elements:
// bit i stands for element i + 1. Arcs run g -> h iff h - g is in S.

#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "cayleyci/gfp.hpp"

namespace cayleyci {

inline constexpr std::size_t kMaxCanonVertices = 12;

class SmallDigraph {
 public:
  // Throws usage_error for n > 12.
  explicit SmallDigraph(std::size_t n);

  std::size_t size() const noexcept { return n_; }
  // Self-loops are rejected with usage_error.
  void add_arc(std::size_t from, std::size_t to);
  bool has_arc(std::size_t from, std::size_t to) const { return (out_[from] >> to) & 1U; }
  std::size_t out_degree(std::size_t v) const;
  std::size_t in_degree(std::size_t v) const;

  // Relabels vertex v as perm[v].
  SmallDigraph permuted(const std::vector<std::size_t>& perm) const;

  friend bool operator==(const SmallDigraph&, const SmallDigraph&) = default;

 private:
  std::size_t n_;
  std::vector<std::uint16_t> out_;
};

// Canonical form: degree profile followed by the lexicographically least
// adjacency encoding over all relabelings that sort vertices by
// (out-degree, in-degree). Two digraphs are isomorphic iff their forms agree.
std::string digraph_canon(const SmallDigraph& d);

// |GL(n, p)| = prod_{i<n} (p^n - p^i)
std::uint64_t gl_order(std::size_t n, Modulus mod);

inline constexpr std::uint64_t kMaxGlOrder = 1'000'000;

// All invertible n x n matrices, in lexicographic order of their row-major
// entries. Throws usage_error when |GL(n, p)| exceeds the cap.
std::vector<FpMat> gl_enumerate(std::size_t n, Modulus mod, std::uint64_t cap = kMaxGlOrder);

inline constexpr std::uint64_t kMaxOracleVertices = 10;

SmallDigraph cayley_digraph(std::size_t n, Modulus mod, std::uint32_t subset);

struct CiCounterexample {
  std::uint32_t first;
  std::uint32_t second;
};

struct CiScanReport {
  std::size_t n = 0;
  std::uint32_t p = 0;
  std::size_t vertices = 0;
  std::size_t subsets = 0;
  std::uint64_t gl_size = 0;
  std::size_t orbits = 0;
  std::size_t graph_classes = 0;
  // (S, sigma) pairs for which sigma was checked to be a graph map
  // Cay(S) -> Cay(sigma S)
  std::uint64_t cayley_checks = 0;
  std::size_t definitional_failures = 0;
  std::string definitional_witness;
  // Orbit representatives with isomorphic graphs but different orbits.
  std::vector<CiCounterexample> counterexamples;
  bool pass = true;
};

// Throws usage_error when p^n exceeds the vertex cap or |GL| exceeds its cap.
CiScanReport ci_scan(std::size_t n, Modulus mod, unsigned threads = 1,
                     std::uint64_t vertex_cap = kMaxOracleVertices);

// "{(0,1),(1,2)}"
std::string describe_subset(std::size_t n, Modulus mod, std::uint32_t subset);

}  // namespace cayleyci
