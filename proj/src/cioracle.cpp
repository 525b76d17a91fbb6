#include "cayleyci/cioracle.hpp"

#include <algorithm>
#include <bit>
#include <map>

#include "cayleyci/families.hpp"
#include "cayleyci/parallel.hpp"

namespace cayleyci {

SmallDigraph::SmallDigraph(std::size_t n) : n_(n), out_(n, 0) {
  if (n > kMaxCanonVertices) {
    throw usage_error("digraph has " + std::to_string(n) + " vertices, at most 12 are supported");
  }
}

void SmallDigraph::add_arc(std::size_t from, std::size_t to) {
  if (from >= n_ || to >= n_) {
    throw usage_error("arc endpoint out of range");
  }
  if (from == to) {
    throw usage_error("self-loops are not allowed");
  }
  out_[from] |= static_cast<std::uint16_t>(1U << to);
}

std::size_t SmallDigraph::out_degree(std::size_t v) const { return std::popcount(out_[v]); }

std::size_t SmallDigraph::in_degree(std::size_t v) const {
  std::size_t d = 0;
  for (std::size_t u = 0; u < n_; ++u) {
    d += has_arc(u, v);
  }
  return d;
}

SmallDigraph SmallDigraph::permuted(const std::vector<std::size_t>& perm) const {
  if (perm.size() != n_) {
    throw usage_error("permutation has wrong length");
  }
  SmallDigraph out(n_);
  for (std::size_t u = 0; u < n_; ++u) {
    for (std::size_t v = 0; v < n_; ++v) {
      if (has_arc(u, v)) out.add_arc(perm[u], perm[v]);
    }
  }
  return out;
}

namespace {

using Key = std::pair<std::size_t, std::size_t>;

// Depth-first search over relabelings, position by position. Position k adds
// the bits A[k][j], A[j][k] for j < k, so a prefix of the code is fixed once
// the first positions are, and branches whose prefix exceeds the best code
// are cut.
class CanonSearch {
 public:
  explicit CanonSearch(const SmallDigraph& d) : d_(d), n_(d.size()) {
    keys_.resize(n_);
    for (std::size_t v = 0; v < n_; ++v) {
      keys_[v] = {d.out_degree(v), d.in_degree(v)};
    }
    slot_key_ = keys_;
    std::sort(slot_key_.begin(), slot_key_.end());
    at_.assign(n_, 0);
    cur_.assign(n_ * (n_ > 0 ? n_ - 1 : 0), 0);
  }

  std::string run() {
    dfs(0, 0, true);
    std::string out = std::to_string(n_) + ":";
    for (const auto& [o, i] : slot_key_) {
      out += std::to_string(o) + "," + std::to_string(i) + ";";
    }
    out += "|";
    for (auto b : best_) out += static_cast<char>('0' + b);
    return out;
  }

 private:
  void dfs(std::size_t k, std::uint32_t used, bool below_best) {
    if (k == n_) {
      best_ = cur_;
      have_best_ = true;
      ++version_;
      return;
    }
    const std::size_t off = k * (k - (k > 0 ? 1 : 0));
    for (std::size_t v = 0; v < n_; ++v) {
      if ((used >> v & 1U) || keys_[v] != slot_key_[k]) continue;
      at_[k] = v;
      for (std::size_t j = 0; j < k; ++j) {
        cur_[off + 2 * j] = d_.has_arc(v, at_[j]);
        cur_[off + 2 * j + 1] = d_.has_arc(at_[j], v);
      }
      bool child_below = below_best || !have_best_;
      if (!child_below) {
        const auto first = cur_.begin() + static_cast<std::ptrdiff_t>(off);
        const auto last = first + static_cast<std::ptrdiff_t>(2 * k);
        const auto cmp = std::lexicographical_compare_three_way(first, last, best_.begin() + static_cast<std::ptrdiff_t>(off),
                                                                best_.begin() + static_cast<std::ptrdiff_t>(off + 2 * k));
        if (cmp > 0) continue;
        child_below = cmp < 0;
      }
      const auto before = version_;
      dfs(k + 1, used | (1U << v), child_below);
      // A new best found below shares this prefix exactly.
      if (version_ != before) below_best = false;
    }
  }

  const SmallDigraph& d_;
  std::size_t n_;
  std::vector<Key> keys_;
  std::vector<Key> slot_key_;
  std::vector<std::size_t> at_;
  std::vector<std::uint8_t> cur_;
  std::vector<std::uint8_t> best_;
  bool have_best_ = false;
  std::uint64_t version_ = 0;
};

}  // namespace

std::string digraph_canon(const SmallDigraph& d) { return CanonSearch(d).run(); }

std::uint64_t gl_order(std::size_t n, Modulus mod) {
  const auto q = vector_count(mod, n);
  std::uint64_t order = 1;
  std::uint64_t pi = 1;
  for (std::size_t i = 0; i < n; ++i) {
    const auto factor = q - pi;
    if (order > UINT64_MAX / factor) return UINT64_MAX;
    order *= factor;
    pi *= mod.value();
  }
  return order;
}

std::vector<FpMat> gl_enumerate(std::size_t n, Modulus mod, std::uint64_t cap) {
  const auto order = gl_order(n, mod);
  if (order > cap) {
    throw usage_error("|GL(" + std::to_string(n) + "," + std::to_string(mod.value()) + ")| = " + std::to_string(order) +
                      " exceeds the cap " + std::to_string(cap));
  }
  std::vector<FpMat> out;
  out.reserve(order);
  const auto total = vector_count(mod, n * n);
  for (std::uint64_t idx = 0; idx < total; ++idx) {
    const auto entries = decode_vector(idx, n * n, mod);
    FpMat m(n, n, mod);
    for (std::size_t r = 0; r < n; ++r) {
      for (std::size_t c = 0; c < n; ++c) m.set(r, c, entries[r * n + c]);
    }
    if (mat_rank(m) == n) out.push_back(std::move(m));
  }
  if (out.size() != order) {
    throw invariant_error("GL enumeration found " + std::to_string(out.size()) + " matrices, expected " +
                          std::to_string(order));
  }
  return out;
}

namespace {

struct SmallGroup {
  std::size_t n;
  Modulus mod;
  std::size_t order;
  std::vector<FpVec> elems;
  std::vector<std::size_t> add;  // add[g * order + h]

  SmallGroup(std::size_t n_, Modulus mod_) : n(n_), mod(mod_), order(vector_count(mod_, n_)) {
    for (std::size_t g = 0; g < order; ++g) elems.push_back(decode_vector(g, n, mod));
    add.resize(order * order);
    for (std::size_t g = 0; g < order; ++g) {
      for (std::size_t h = 0; h < order; ++h) add[g * order + h] = encode_vector(elems[g] + elems[h]);
    }
  }
};

SmallDigraph cayley_of(const SmallGroup& grp, std::uint32_t subset) {
  SmallDigraph d(grp.order);
  for (std::size_t g = 0; g < grp.order; ++g) {
    for (std::size_t s = 1; s < grp.order; ++s) {
      if (subset >> (s - 1) & 1U) d.add_arc(g, grp.add[g * grp.order + s]);
    }
  }
  return d;
}

std::uint32_t image(std::uint32_t subset, const std::vector<std::size_t>& perm) {
  std::uint32_t out = 0;
  for (std::size_t s = 1; s < perm.size(); ++s) {
    if (subset >> (s - 1) & 1U) out |= 1U << (perm[s] - 1);
  }
  return out;
}

}  // namespace

SmallDigraph cayley_digraph(std::size_t n, Modulus mod, std::uint32_t subset) {
  return cayley_of(SmallGroup(n, mod), subset);
}

std::string describe_subset(std::size_t n, Modulus mod, std::uint32_t subset) {
  const auto order = vector_count(mod, n);
  std::string out = "{";
  bool first = true;
  for (std::size_t s = 1; s < order; ++s) {
    if (!(subset >> (s - 1) & 1U)) continue;
    if (!first) out += ",";
    first = false;
    const auto x = decode_vector(s, n, mod);
    out += "(";
    for (std::size_t i = 0; i < n; ++i) {
      if (i) out += ",";
      out += std::to_string(x[i]);
    }
    out += ")";
  }
  return out + "}";
}

CiScanReport ci_scan(std::size_t n, Modulus mod, unsigned threads, std::uint64_t vertex_cap) {
  const auto order = vector_count(mod, n);
  if (order > vertex_cap) {
    throw usage_error("Z_" + std::to_string(mod.value()) + "^" + std::to_string(n) + " has " + std::to_string(order) +
                      " vertices, the oracle cap is " + std::to_string(vertex_cap));
  }
  if (order > kMaxCanonVertices) {
    throw usage_error("the oracle handles at most 12 vertices");
  }
  const SmallGroup grp(n, mod);
  const auto gl = gl_enumerate(n, mod);

  std::vector<std::vector<std::size_t>> perms;
  perms.reserve(gl.size());
  for (const auto& m : gl) {
    std::vector<std::size_t> perm(order);
    for (std::size_t g = 0; g < order; ++g) perm[g] = encode_vector(m * grp.elems[g]);
    perms.push_back(std::move(perm));
  }

  CiScanReport rep{.n = n, .p = mod.value(), .vertices = order, .gl_size = gl.size()};
  const std::uint32_t subsets = 1U << (order - 1);
  rep.subsets = subsets;

  std::vector<SmallDigraph> graphs;
  graphs.reserve(subsets);
  for (std::uint32_t s = 0; s < subsets; ++s) graphs.push_back(cayley_of(grp, s));

  // Orbit representatives by minimal image, and the sigma-as-graph-map check
  // for every (S, sigma).
  std::vector<std::uint32_t> orbit_min(subsets);
  std::vector<std::uint32_t> orbit_max(subsets);
  for (std::uint32_t s = 0; s < subsets; ++s) {
    std::uint32_t lo = s;
    std::uint32_t hi = s;
    for (const auto& perm : perms) {
      const auto t = image(s, perm);
      lo = std::min(lo, t);
      hi = std::max(hi, t);
      const auto& gs = graphs[s];
      const auto& gt = graphs[t];
      bool ok = true;
      for (std::size_t g = 0; g < order && ok; ++g) {
        for (std::size_t h = 0; h < order && ok; ++h) {
          if (gs.has_arc(g, h) && !gt.has_arc(perm[g], perm[h])) ok = false;
        }
      }
      ++rep.cayley_checks;
      if (!ok) {
        if (rep.definitional_failures == 0) {
          rep.definitional_witness = "an automorphism fails to map Cay(S) onto Cay(sigma S) for S = " +
                                     describe_subset(n, mod, s);
        }
        ++rep.definitional_failures;
      }
    }
    orbit_min[s] = lo;
    orbit_max[s] = hi;
  }

  std::vector<std::uint32_t> reps;
  for (std::uint32_t s = 0; s < subsets; ++s) {
    if (orbit_min[s] == s) reps.push_back(s);
  }
  rep.orbits = reps.size();

  std::vector<std::string> canon(reps.size());
  std::vector<std::uint8_t> consistent(reps.size(), 1);
  parallel_chunks(reps.size(), threads, [&](std::size_t, std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      canon[i] = digraph_canon(graphs[reps[i]]);
      // another orbit member must give the same form
      consistent[i] = digraph_canon(graphs[orbit_max[reps[i]]]) == canon[i];
    }
  });
  for (std::size_t i = 0; i < reps.size(); ++i) {
    if (!consistent[i]) {
      if (rep.definitional_failures == 0) {
        rep.definitional_witness = "orbit of " + describe_subset(n, mod, reps[i]) + " has two canonical forms";
      }
      ++rep.definitional_failures;
    }
  }

  std::map<std::string, std::vector<std::uint32_t>> by_canon;
  for (std::size_t i = 0; i < reps.size(); ++i) by_canon[canon[i]].push_back(reps[i]);
  rep.graph_classes = by_canon.size();
  for (const auto& [form, members] : by_canon) {
    for (std::size_t i = 1; i < members.size(); ++i) {
      rep.counterexamples.push_back({members.front(), members[i]});
    }
  }
  std::sort(rep.counterexamples.begin(), rep.counterexamples.end(),
            [](const auto& a, const auto& b) { return std::pair(a.first, a.second) < std::pair(b.first, b.second); });
  rep.pass = rep.counterexamples.empty() && rep.definitional_failures == 0;
  return rep;
}

}  // namespace cayleyci
