// Writers for Cay(G, S) in plain edge-list, digraph6, graph6 and DIMACS form.
//
// Vertex g = (u, v) has index encode(u) * p^dv + encode(v), coordinate 0 most
// significant within each part. Arcs run g -> h for h - g in S; for each g the
// targets are emitted in increasing order.

#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>

#include "cayleyci/families.hpp"

namespace cayleyci {

enum class ExportFormat { edges, digraph6, graph6, dimacs };

std::string to_string(ExportFormat f);
ExportFormat parse_export_format(std::string_view name);

inline constexpr std::uint64_t kDefaultEdgeCap = 20'000'000;

struct ExportStats {
  std::uint64_t vertices = 0;
  // arcs for directed output, edges for graph6 and symmetric DIMACS
  std::uint64_t edges = 0;
  bool undirected = false;
};

// Size check only; throws usage_error with the count when over the cap, or
// when graph6 is requested for a non-symmetric set.
ExportStats export_size(const ConnectionSet& s, ExportFormat format, std::uint64_t edge_cap = kDefaultEdgeCap);

ExportStats export_graph(const ConnectionSet& s, ExportFormat format, std::ostream& out,
                         std::uint64_t edge_cap = kDefaultEdgeCap);

// The N(n) size prefix shared by graph6 and digraph6.
std::string graph6_size_prefix(std::uint64_t n);

}  // namespace cayleyci
