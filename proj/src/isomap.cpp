#include "cayleyci/isomap.hpp"

#include <random>

#include "cayleyci/parallel.hpp"

namespace cayleyci {

FpVec polymap_translation(const PolyMap& phi, const FpVec& u) {
  if (u.dim() != phi.du) {
    throw usage_error("polymap: u-part has wrong dimension");
  }
  FpVec t(phi.dv, phi.mod);
  for (std::size_t j = 0; j < phi.dv; ++j) {
    t.set(j, eval(phi.components[j], u).value());
  }
  return t;
}

GroupElement apply_polymap(const PolyMap& phi, const GroupElement& g) {
  if (g.v.dim() != phi.dv) {
    throw usage_error("polymap: v-part has wrong dimension");
  }
  return {g.u, g.v + polymap_translation(phi, g.u)};
}

std::vector<std::pair<std::size_t, std::size_t>> match_classes(const ConnectionSet& s, const ConnectionSet& t) {
  if (s.du() != t.du() || s.dv() != t.dv() || !(s.modulus() == t.modulus())) {
    throw usage_error("S and T live on different groups");
  }
  if (s.classes().size() != t.classes().size()) {
    throw invariant_error("S and T have different class counts");
  }
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  std::vector<bool> used(t.classes().size(), false);
  for (std::size_t i = 0; i < s.classes().size(); ++i) {
    const auto& sc = s.classes()[i];
    std::vector<std::size_t> same_offset;
    for (std::size_t j = 0; j < t.classes().size(); ++j) {
      if (t.classes()[j].offset == sc.offset) {
        same_offset.push_back(j);
      }
    }
    std::optional<std::size_t> pick;
    if (same_offset.size() == 1) {
      pick = same_offset.front();
    } else {
      for (auto j : same_offset) {
        if (t.classes()[j].functional == sc.functional) {
          if (pick) {
            throw invariant_error("class " + sc.label + " matches several T-classes");
          }
          pick = j;
        }
      }
    }
    if (!pick) {
      throw invariant_error("class " + sc.label + " has no matching T-class");
    }
    if (used[*pick]) {
      throw invariant_error("T-class " + t.classes()[*pick].label + " matched twice");
    }
    used[*pick] = true;
    pairs.emplace_back(i, *pick);
  }
  return pairs;
}

namespace {

constexpr std::size_t kMaxPrintedTerms = 12;

std::string digest(const FpPoly& f) {
  if (f.size() <= kMaxPrintedTerms) {
    return f.str();
  }
  return "<" + std::to_string(f.size()) + " terms, leading " + f.terms().rbegin()->first.str() + ">";
}

}  // namespace

IsoReport verify_polymap_symbolic(const ConnectionSet& s, const ConnectionSet& t, const PolyMap& phi) {
  if (phi.du != s.du() || phi.dv != s.dv() || phi.components.size() != s.dv()) {
    throw usage_error("polymap does not match the connection set dimensions");
  }
  const auto mod = s.modulus();
  const FpRing ring{mod};
  IsoReport report{.family = s.family(), .p = mod.value(), .mode = IsoMode::symbolic};

  for (const auto& [si, ti] : match_classes(s, t)) {
    const auto& sc = s.classes()[si];
    const auto& tc = t.classes()[ti];
    if (!(sc.functional == tc.functional)) {
      // Only equal functionals make the condition a single scalar identity.
      report.pass = false;
      report.witness = sc.label + ": matched T-class " + tc.label + " has a different functional";
      report.entries.push_back({sc.label, tc.label, "", 0, false, 0, false});
      continue;
    }
    FpPoly combined(s.du(), ring);
    for (std::size_t j = 0; j < s.dv(); ++j) {
      if (sc.functional[j] != 0) {
        combined += phi.components[j].scaled(sc.functional[j]);
      }
    }
    const auto diff = delta(combined, sc.offset);
    IsoEntry e{.s_label = sc.label,
               .t_label = tc.label,
               .difference = digest(diff),
               .target = (tc.rhs - sc.rhs).value(),
               .constant = diff.is_constant(),
               .points_checked = 0};
    e.pass = e.constant && diff.constant_term() == e.target;
    if (!e.pass && report.pass) {
      report.witness = sc.label + ": difference " + e.difference + " != " + std::to_string(e.target);
    }
    report.pass = report.pass && e.pass;
    report.entries.push_back(std::move(e));
  }
  return report;
}

FpVec solve_on_hyperplane(FpVec free, const FpVec& w, FpScalar c) {
  const auto mod = w.modulus();
  std::size_t pivot = 0;
  while (pivot < w.dim() && w[pivot] == 0) {
    ++pivot;
  }
  if (pivot == w.dim()) {
    throw usage_error("hyperplane functional must be nonzero");
  }
  free.set(pivot, 0);
  const auto rest = fp_dot(free, w);
  free.set(pivot, mod.mul(mod.sub(c.value(), rest.value()), mod.inv(w[pivot])));
  return free;
}

namespace {

FpVec random_vector(std::size_t dim, Modulus mod, std::mt19937_64& rng) {
  std::uniform_int_distribution<std::uint32_t> dist(0, mod.value() - 1);
  FpVec v(dim, mod);
  for (std::size_t i = 0; i < dim; ++i) {
    v.set(i, dist(rng));
  }
  return v;
}

std::uint64_t mix(std::uint64_t seed, std::uint64_t index) {
  // splitmix64 finaliser
  std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (index + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

struct ChunkResult {
  std::vector<std::size_t> checked;
  std::vector<std::size_t> failed;
  std::optional<std::string> first_failure;
};

}  // namespace

IsoReport verify_polymap_pointwise(const ConnectionSet& s, const ConnectionSet& t, const PolyMap& phi,
                                   const PointwiseBudget& budget) {
  if (phi.du != s.du() || phi.dv != s.dv() || phi.components.size() != s.dv()) {
    throw usage_error("polymap does not match the connection set dimensions");
  }
  const auto mod = s.modulus();
  const auto pairs = match_classes(s, t);
  const auto& classes = s.classes();

  std::uint64_t space = 0;
  std::size_t npoints = budget.samples;
  if (budget.exhaustive) {
    space = vector_count(mod, s.du());
    if (space > kMaxExhaustiveBasePoints) {
      throw usage_error("exhaustive pointwise check needs p^du <= 10^6, got " + std::to_string(space));
    }
    npoints = static_cast<std::size_t>(space);
  }

  // Exhaustive runs tabulate the translation once per u.
  std::vector<FpVec> table;
  if (budget.exhaustive) {
    table.reserve(npoints);
    for (std::uint64_t idx = 0; idx < space; ++idx) {
      table.push_back(polymap_translation(phi, decode_vector(idx, s.du(), mod)));
    }
  }
  auto translation = [&](const FpVec& u) {
    return budget.exhaustive ? table[encode_vector(u)] : polymap_translation(phi, u);
  };

  const unsigned workers = resolve_threads(budget.threads);
  std::vector<ChunkResult> results(workers);
  parallel_chunks(npoints, workers, [&](std::size_t chunk, std::size_t begin, std::size_t end) {
    auto& res = results[chunk];
    res.checked.assign(classes.size(), 0);
    res.failed.assign(classes.size(), 0);
    for (std::size_t pt = begin; pt < end; ++pt) {
      std::mt19937_64 rng(mix(budget.seed, pt));
      const auto x = budget.exhaustive ? decode_vector(pt, s.du(), mod) : random_vector(s.du(), mod, rng);
      const GroupElement a{x, random_vector(s.dv(), mod, rng)};
      const auto phi_a = GroupElement{a.u, a.v + translation(a.u)};
      for (std::size_t ci = 0; ci < classes.size(); ++ci) {
        const auto& c = classes[ci];
        // two v-parts per point: the outcome must not depend on the choice
        for (int rep = 0; rep < 2; ++rep) {
          const GroupElement step{c.offset, solve_on_hyperplane(random_vector(s.dv(), mod, rng), c.functional, c.rhs)};
          const auto b = a + step;
          const GroupElement phi_b{b.u, b.v + translation(b.u)};
          ++res.checked[ci];
          if (!t.contains(phi_b - phi_a)) {
            ++res.failed[ci];
            if (!res.first_failure) {
              res.first_failure = "x=" + x.str() + " class " + c.label;
            }
          }
        }
      }
    }
  });

  IsoReport report{.family = s.family(),
                   .p = mod.value(),
                   .mode = IsoMode::pointwise,
                   .exhaustive = budget.exhaustive,
                   .base_points = npoints};
  for (const auto& [si, ti] : pairs) {
    IsoEntry e{.s_label = classes[si].label,
               .t_label = t.classes()[ti].label,
               .target = (t.classes()[ti].rhs - classes[si].rhs).value()};
    std::size_t failed = 0;
    for (const auto& r : results) {
      if (!r.checked.empty()) {
        e.points_checked += r.checked[si];
        failed += r.failed[si];
      }
    }
    e.pass = failed == 0;
    report.pass = report.pass && e.pass;
    report.entries.push_back(std::move(e));
  }
  for (const auto& r : results) {
    if (r.first_failure) {
      report.witness = *r.first_failure;
      break;
    }
  }
  return report;
}

}  // namespace cayleyci
