#include "cayleyci/families.hpp"

#include <algorithm>
#include <map>

namespace cayleyci {

std::string to_string(Family f) {
  switch (f) {
    case Family::rank2p3:
      return "rank2p3";
    case Family::rank4p2:
      return "rank4p2";
    case Family::rankbinom:
      return "rankbinom";
  }
  return "?";
}

Family parse_family(std::string_view name) {
  if (name == "rank2p3") return Family::rank2p3;
  if (name == "rank4p2") return Family::rank4p2;
  if (name == "rankbinom") return Family::rankbinom;
  throw usage_error("unknown family '" + std::string(name) + "' (expected rank2p3, rank4p2 or rankbinom)");
}

AffineClass AffineClass::negated() const {
  std::string neg_label = label.starts_with('-') ? label.substr(1) : "-" + label;
  return {std::move(neg_label), -offset, functional, -rhs};
}

namespace {

// lambda with b = lambda * a, if one exists (a, b nonzero).
std::optional<std::uint32_t> proportionality(const FpVec& a, const FpVec& b) {
  const auto mod = a.modulus();
  std::optional<std::uint32_t> lambda;
  for (std::size_t i = 0; i < a.dim(); ++i) {
    if (a[i] == 0) {
      if (b[i] != 0) return std::nullopt;
      continue;
    }
    const auto ratio = mod.mul(b[i], mod.inv(a[i]));
    if (lambda && *lambda != ratio) return std::nullopt;
    lambda = ratio;
  }
  return lambda;
}

}  // namespace

bool AffineClass::same_set(const AffineClass& o) const {
  if (!(offset == o.offset)) return false;
  auto lambda = proportionality(functional, o.functional);
  return lambda && *lambda != 0 && functional.modulus().mul(*lambda, rhs.value()) == o.rhs.value();
}

bool AffineClass::disjoint(const AffineClass& o) const {
  if (!(offset == o.offset)) return true;
  auto lambda = proportionality(functional, o.functional);
  // parallel hyperplanes with different levels
  return lambda && *lambda != 0 && functional.modulus().mul(*lambda, rhs.value()) != o.rhs.value();
}

ConnectionSet::ConnectionSet(std::string family, std::string name, Modulus mod, std::size_t du,
                             std::size_t dv, std::vector<AffineClass> classes,
                             std::vector<std::vector<std::size_t>> v_labels)
    : family_(std::move(family)),
      name_(std::move(name)),
      mod_(mod),
      du_(du),
      dv_(dv),
      classes_(std::move(classes)),
      v_labels_(std::move(v_labels)) {
  if (!v_labels_.empty() && v_labels_.size() != dv_) {
    throw invariant_error("v_labels must label every V basis vector");
  }
  std::map<FpVec, std::vector<std::size_t>> by_offset;
  for (std::size_t i = 0; i < classes_.size(); ++i) {
    const auto& c = classes_[i];
    if (c.offset.dim() != du_ || c.functional.dim() != dv_ || !(c.offset.modulus() == mod_) ||
        !(c.functional.modulus() == mod_) || !(c.rhs.modulus() == mod_)) {
      throw invariant_error("class " + c.label + " does not match the group dimensions");
    }
    if (c.offset.is_zero()) {
      throw invariant_error("class " + c.label + " has zero offset; the identity would be in the set");
    }
    if (c.functional.is_zero()) {
      throw invariant_error("class " + c.label + " has zero functional");
    }
    for (auto j : by_offset[c.offset]) {
      if (!classes_[j].disjoint(c)) {
        throw invariant_error("classes " + classes_[j].label + " and " + c.label + " overlap");
      }
    }
    by_offset[c.offset].push_back(i);
  }
}

BigInt ConnectionSet::cardinality() const {
  return BigInt(classes_.size()) * boost::multiprecision::pow(BigInt(mod_.value()), static_cast<unsigned>(dv_ - 1));
}

std::optional<std::size_t> ConnectionSet::class_of(const GroupElement& g) const {
  for (std::size_t i = 0; i < classes_.size(); ++i) {
    if (classes_[i].contains(g)) {
      return i;
    }
  }
  return std::nullopt;
}

bool ConnectionSet::contains(const GroupElement& g) const {
  return class_of(g).has_value();
}

std::optional<std::size_t> ConnectionSet::find_class(const AffineClass& c) const {
  for (std::size_t i = 0; i < classes_.size(); ++i) {
    if (classes_[i].same_set(c)) {
      return i;
    }
  }
  return std::nullopt;
}

bool ConnectionSet::is_symmetric() const {
  return std::all_of(classes_.begin(), classes_.end(),
                     [this](const AffineClass& c) { return find_class(c.negated()).has_value(); });
}

ConnectionSet ConnectionSet::renamed(std::string name) const {
  ConnectionSet r = *this;
  r.name_ = std::move(name);
  return r;
}

namespace {

std::string subset_label(const std::vector<std::size_t>& k) {
  std::string s = "{";
  for (std::size_t i = 0; i < k.size(); ++i) {
    s += (i ? "," : "") + std::to_string(k[i] + 1);
  }
  return s + "}";
}

FamilyInstance build_rank2p3(std::int64_t p) {
  const auto mod = require_odd_prime(p);
  const auto du = static_cast<std::size_t>(p + 1);
  const auto dv = static_cast<std::size_t>(p + 2);  // f_0, f_1, ..., f_{p+1}
  const auto all_f = FpVec::ones(dv, mod);
  const auto all_e = FpVec::ones(du, mod);
  const FpScalar zero(0, mod);

  std::vector<AffineClass> shared;
  for (std::size_t i = 1; i <= du; ++i) {
    auto w = FpVec::unit(dv, 0, mod) + FpVec::unit(dv, i, mod);
    shared.push_back({"A_" + std::to_string(i), FpVec::unit(du, i - 1, mod), w, zero});
  }
  for (std::size_t i = 1; i <= du; ++i) {
    auto w = FpVec::unit(dv, i, mod) + all_f;
    shared.push_back({"B_" + std::to_string(i), all_e - FpVec::unit(du, i - 1, mod), w, zero});
  }

  std::vector<std::vector<std::size_t>> labels(dv);
  for (std::size_t i = 1; i < dv; ++i) {
    labels[i] = {i - 1};
  }

  auto s_classes = shared;
  s_classes.push_back({"C_0", all_e, all_f, zero});
  auto t_classes = shared;
  t_classes.push_back({"C_1", all_e, all_f, FpScalar(1, mod)});

  return {ConnectionSet("rank2p3", "S", mod, du, dv, std::move(s_classes), labels),
          ConnectionSet("rank2p3", "T", mod, du, dv, std::move(t_classes), labels),
          PolyMap{mod, du, dv, build_r(p)}};
}

FamilyInstance build_rank4p2(std::int64_t p) {
  const auto mod = require_odd_prime(p);
  const auto d = static_cast<std::size_t>(2 * p - 1);
  const auto all_f = FpVec::ones(d, mod);
  const auto all_e = FpVec::ones(d, mod);
  const FpScalar zero(0, mod);

  std::vector<AffineClass> shared;
  for (std::size_t i = 1; i <= d; ++i) {
    shared.push_back({"A'_" + std::to_string(i), FpVec::unit(d, i - 1, mod), FpVec::unit(d, i - 1, mod), zero});
  }
  for (std::size_t i = 1; i <= d; ++i) {
    shared.push_back({"B'_" + std::to_string(i), all_e - FpVec::unit(d, i - 1, mod),
                      FpVec::unit(d, i - 1, mod) + all_f, zero});
  }

  std::vector<std::vector<std::size_t>> labels(d);
  for (std::size_t i = 0; i < d; ++i) {
    labels[i] = {i};
  }

  auto s_classes = shared;
  s_classes.push_back({"C'_0", all_e, all_f, zero});
  auto t_classes = shared;
  t_classes.push_back({"C'_1", all_e, all_f, FpScalar(-1, mod)});

  return {ConnectionSet("rank4p2", "S", mod, d, d, std::move(s_classes), labels),
          ConnectionSet("rank4p2", "T", mod, d, d, std::move(t_classes), labels),
          PolyMap{mod, d, d, build_l(p)}};
}

FamilyInstance build_rankbinom(std::int64_t p, std::size_t dv_cap) {
  const auto mod = require_odd_prime(p);
  const auto du = static_cast<std::size_t>(2 * p - 1);
  const auto dv_big = binomial(static_cast<unsigned>(du), static_cast<unsigned>(p));
  if (dv_big > dv_cap) {
    throw usage_error("rankbinom at p=" + std::to_string(p) + " needs dim V = " + dv_big.str() +
                      ", above the cap of " + std::to_string(dv_cap));
  }
  const auto subsets = k_subsets(du, static_cast<std::size_t>(p));
  const auto dv = subsets.size();
  std::map<std::vector<std::size_t>, std::size_t> index_of;
  for (std::size_t j = 0; j < dv; ++j) {
    index_of[subsets[j]] = j;
  }
  const FpScalar zero(0, mod);
  const auto all_e = FpVec::ones(du, mod);
  const auto all_f = FpVec::ones(dv, mod);

  std::vector<AffineClass> shared;
  for (std::size_t i = 0; i < du; ++i) {
    FpVec w(dv, mod);
    for (std::size_t j = 0; j < dv; ++j) {
      if (!std::binary_search(subsets[j].begin(), subsets[j].end(), i)) {
        w.set(j, 1);
      }
    }
    shared.push_back({"A''_" + std::to_string(i + 1), FpVec::unit(du, i, mod), std::move(w), zero});
  }
  for (const auto& k : subsets) {
    FpVec offset(du, mod);
    for (auto j : k) {
      offset.set(j, 1);
    }
    FpVec w(dv, mod);
    for (const auto& partner : b_partners(k, p)) {
      w.set(index_of.at(partner), 1);
    }
    shared.push_back({"B_k" + subset_label(k), std::move(offset), std::move(w), zero});
  }

  std::vector<FpPoly> components;
  const FpRing ring{mod};
  for (const auto& k : subsets) {
    components.push_back(FpPoly::term(Monomial::from_support(du, k), 1, ring));
  }

  auto s_classes = shared;
  s_classes.push_back({"C''_0", all_e, all_f, zero});
  auto t_classes = shared;
  t_classes.push_back({"C''_1", all_e, all_f, FpScalar(1, mod)});

  return {ConnectionSet("rankbinom", "S", mod, du, dv, std::move(s_classes), subsets),
          ConnectionSet("rankbinom", "T", mod, du, dv, std::move(t_classes), subsets),
          PolyMap{mod, du, dv, std::move(components)}};
}

}  // namespace

FamilyInstance build_family(Family family, std::int64_t p, std::size_t dv_cap) {
  switch (family) {
    case Family::rank2p3:
      return build_rank2p3(p);
    case Family::rank4p2:
      return build_rank4p2(p);
    case Family::rankbinom:
      return build_rankbinom(p, dv_cap);
  }
  throw usage_error("unsupported family");
}

std::vector<std::vector<std::size_t>> b_partners(const std::vector<std::size_t>& k, std::int64_t p) {
  require_odd_prime(p);
  const auto ground = static_cast<std::size_t>(2 * p - 1);
  auto sorted = k;
  std::sort(sorted.begin(), sorted.end());
  if (sorted.size() != static_cast<std::size_t>(p) || std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end() ||
      sorted.back() >= ground) {
    throw usage_error("b_partners: k must be a p-subset of {1..2p-1}");
  }
  std::vector<std::vector<std::size_t>> out;
  for (const auto& cand : k_subsets(ground, static_cast<std::size_t>(p))) {
    std::vector<std::size_t> common;
    std::set_intersection(sorted.begin(), sorted.end(), cand.begin(), cand.end(), std::back_inserter(common));
    if (common.size() == 1) {
      out.push_back(cand);
    }
  }
  if (out.size() != static_cast<std::size_t>(p)) {
    throw invariant_error("b_partners: found " + std::to_string(out.size()) + " partners, expected p");
  }
  return out;
}

ConnectionSet undirected_closure(const ConnectionSet& s) {
  auto classes = s.classes();
  for (const auto& c : s.classes()) {
    auto neg = c.negated();
    bool duplicate = false;
    for (const auto& existing : classes) {
      if (existing.same_set(neg)) {
        duplicate = true;
        break;
      }
      if (!existing.disjoint(neg)) {
        throw invariant_error("closure: -" + c.label + " partially overlaps " + existing.label);
      }
    }
    if (!duplicate) {
      classes.push_back(std::move(neg));
    }
  }
  const auto& n = s.name();
  std::string name = n.ends_with("bar") ? n : n + "bar";
  return ConnectionSet(s.family(), std::move(name), s.modulus(), s.du(), s.dv(), std::move(classes), s.v_labels());
}

ConnectionSet negated(const ConnectionSet& s) {
  std::vector<AffineClass> classes;
  for (const auto& c : s.classes()) {
    classes.push_back(c.negated());
  }
  return ConnectionSet(s.family(), "-" + s.name(), s.modulus(), s.du(), s.dv(), std::move(classes), s.v_labels());
}

std::uint64_t vector_count(Modulus mod, std::size_t dim) {
  const BigInt count = boost::multiprecision::pow(BigInt(mod.value()), static_cast<unsigned>(dim));
  if (count > (BigInt(1) << 62)) {
    throw usage_error("Z_" + std::to_string(mod.value()) + "^" + std::to_string(dim) + " is too large to index");
  }
  return count.convert_to<std::uint64_t>();
}

std::uint64_t encode_vector(const FpVec& x) {
  std::uint64_t idx = 0;
  const std::uint64_t p = x.modulus().value();
  for (auto c : x.coords()) {
    idx = idx * p + c;
  }
  return idx;
}

FpVec decode_vector(std::uint64_t index, std::size_t dim, Modulus mod) {
  FpVec x(dim, mod);
  const std::uint64_t p = mod.value();
  for (std::size_t i = dim; i-- > 0;) {
    x.set(i, static_cast<std::int64_t>(index % p));
    index /= p;
  }
  return x;
}

}  // namespace cayleyci
