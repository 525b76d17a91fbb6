#include "cayleyci/refuter.hpp"

#include <algorithm>
#include <map>
#include <set>

namespace cayleyci {

using nlohmann::json;

std::string to_string(StepVerdict v) {
  switch (v) {
    case StepVerdict::pass:
      return "pass";
    case StepVerdict::fail:
      return "fail";
    case StepVerdict::inapplicable:
      return "inapplicable";
    case StepVerdict::skipped:
      return "skipped";
  }
  return "?";
}

std::string to_string(Conclusion c) {
  switch (c) {
    case Conclusion::refuted:
      return "refuted";
    case Conclusion::inconclusive:
      return "inconclusive";
    case Conclusion::failed:
      return "failed";
  }
  return "?";
}

namespace {

json vec_json(const FpVec& v) { return v.to_ints(); }

std::map<FpVec, std::vector<std::size_t>> classes_by_offset(const ConnectionSet& s) {
  std::map<FpVec, std::vector<std::size_t>> out;
  for (std::size_t i = 0; i < s.classes().size(); ++i) {
    out[s.classes()[i].offset].push_back(i);
  }
  return out;
}

// Decides whether a in class i, b in class j exist with 2a - b in class k.
std::optional<std::pair<FpVec, FpVec>> v_level_witness(const ConnectionSet& s, std::size_t i, std::size_t j,
                                                       std::size_t k) {
  const auto mod = s.modulus();
  const auto dv = s.dv();
  const auto& ci = s.classes()[i];
  const auto& cj = s.classes()[j];
  const auto& ck = s.classes()[k];
  FpMat a(3, 2 * dv, mod);
  FpVec b(3, mod);
  for (std::size_t c = 0; c < dv; ++c) {
    a.set(0, c, ci.functional[c]);
    a.set(1, dv + c, cj.functional[c]);
    a.set(2, c, 2 * static_cast<std::int64_t>(ck.functional[c]));
    a.set(2, dv + c, -static_cast<std::int64_t>(ck.functional[c]));
  }
  b.set(0, ci.rhs.value());
  b.set(1, cj.rhs.value());
  b.set(2, ck.rhs.value());
  const auto result = solve_linear(a, b);
  if (const auto* sol = std::get_if<Solution>(&result)) {
    FpVec va(dv, mod);
    FpVec vb(dv, mod);
    for (std::size_t c = 0; c < dv; ++c) {
      va.set(c, sol->x[c]);
      vb.set(c, sol->x[dv + c]);
    }
    return std::make_pair(va, vb);
  }
  return std::nullopt;
}

bool is_signed_unit_basis(const std::vector<FpVec>& h, std::size_t du, int& sign) {
  if (h.size() != du) return false;
  const auto mod = h.front().modulus();
  std::set<std::size_t> coords;
  std::optional<int> common;
  for (const auto& x : h) {
    std::optional<std::size_t> where;
    for (std::size_t c = 0; c < x.dim(); ++c) {
      if (x[c] == 0) continue;
      if (where) return false;
      where = c;
    }
    if (!where) return false;
    int s = 0;
    if (x[*where] == 1) {
      s = 1;
    } else if (x[*where] == mod.neg(1)) {
      s = -1;
    } else {
      return false;
    }
    if (common && *common != s) return false;
    common = s;
    coords.insert(*where);
  }
  sign = *common;
  return coords.size() == du;
}

}  // namespace

StepResult separation_check(const ConnectionSet& s) {
  StepResult step{.name = "separation",
                  .claim = "for classes S_i != S_j, a in S_i and b in S_j give 2a - b not in " + s.name()};
  const auto by_offset = classes_by_offset(s);
  const auto& cls = s.classes();
  std::size_t pairs = 0;
  json collisions = json::array();
  for (std::size_t i = 0; i < cls.size(); ++i) {
    for (std::size_t j = 0; j < cls.size(); ++j) {
      if (i == j) continue;
      ++pairs;
      const auto y = cls[i].offset.scaled(2) - cls[j].offset;
      auto it = by_offset.find(y);
      if (it == by_offset.end()) continue;
      for (auto k : it->second) {
        json entry = {{"a", cls[i].label}, {"b", cls[j].label}, {"lands_in", cls[k].label}};
        if (auto w = v_level_witness(s, i, j, k)) {
          entry["v_level"] = "witness";
          entry["a_v"] = vec_json(w->first);
          entry["b_v"] = vec_json(w->second);
          if (step.verdict == StepVerdict::pass) {
            step.message = "2a - b lands in " + cls[k].label + " for a in " + cls[i].label + ", b in " + cls[j].label;
          }
          step.verdict = StepVerdict::fail;
        } else {
          entry["v_level"] = "infeasible";
        }
        collisions.push_back(std::move(entry));
      }
    }
  }
  step.evidence = {{"set", s.name()}, {"ordered_pairs", pairs}, {"offset_collisions", collisions}};
  return step;
}

StepResult span_check(const ConnectionSet& s) {
  StepResult step{.name = "span", .claim = "differences inside the first classes of " + s.name() + " span V"};
  const auto count = std::min<std::size_t>(s.p() + 1, s.classes().size());
  std::vector<FpVec> rows;
  json used = json::array();
  for (std::size_t i = 0; i < count; ++i) {
    const auto& c = s.classes()[i];
    used.push_back(c.label);
    for (auto& v : hyperplane_basis(c.functional)) {
      rows.push_back(std::move(v));
    }
  }
  std::size_t rank = 0;
  if (!rows.empty()) {
    rank = mat_rank(FpMat::from_rows(rows, s.dv(), s.modulus()));
  }
  step.evidence = {{"classes", used}, {"rank", rank}, {"dim_v", s.dv()}};
  if (rank != s.dv()) {
    step.verdict = StepVerdict::fail;
    step.message = "rank " + std::to_string(rank) + " < dim V = " + std::to_string(s.dv());
  }
  return step;
}

HatData analyze_hat(const ConnectionSet& s) {
  HatData data;
  std::set<FpVec> offsets;
  for (const auto& c : s.classes()) {
    offsets.insert(c.offset);
  }
  for (const auto& z : offsets) {
    for (const auto& x : offsets) {
      if (x == z) continue;
      const auto y = z - x;
      if (y == z || y == x || !offsets.contains(y)) continue;
      data.sum_candidates.push_back(z);
      break;
    }
  }
  if (data.sum_candidates.size() != 1) {
    data.problem = std::to_string(data.sum_candidates.size()) + " offsets are sums of two others";
    return data;
  }
  const auto e = data.sum_candidates.front();
  data.sum_element = e;

  std::set<FpVec> paired;
  for (const auto& x : offsets) {
    if (x == e || paired.contains(x)) continue;
    const auto partner = e - x;
    if (partner == x || partner == e || !offsets.contains(partner)) {
      data.problem = "offset " + x.str() + " has no partner summing to " + e.str();
      return data;
    }
    paired.insert(x);
    paired.insert(partner);
    auto weight = [](const FpVec& v) { return std::count_if(v.coords().begin(), v.coords().end(), [](auto c) { return c != 0; }); };
    if (weight(partner) < weight(x)) {
      data.pairs.emplace_back(partner, x);
    } else {
      data.pairs.emplace_back(x, partner);
    }
  }
  std::sort(data.pairs.begin(), data.pairs.end());
  if (data.pairs.size() > 24) {
    data.problem = "too many pairs to enumerate selections";
    return data;
  }
  data.selections = std::size_t{1} << data.pairs.size();
  for (std::size_t mask = 0; mask < data.selections; ++mask) {
    FpVec sum(s.du(), s.modulus());
    std::vector<FpVec> h;
    for (std::size_t b = 0; b < data.pairs.size(); ++b) {
      const auto& pick = (mask >> b & 1U) ? data.pairs[b].second : data.pairs[b].first;
      sum += pick;
      h.push_back(pick);
    }
    if (sum == e) {
      data.survivors.push_back(std::move(h));
    }
  }
  return data;
}

namespace {

json hat_json(const HatData& d) {
  json pairs = json::array();
  for (const auto& [x, y] : d.pairs) {
    pairs.push_back({vec_json(x), vec_json(y)});
  }
  json survivors = json::array();
  for (const auto& h : d.survivors) {
    json hj = json::array();
    for (const auto& x : h) {
      hj.push_back(vec_json(x));
    }
    survivors.push_back(std::move(hj));
  }
  json out = {{"sum_candidates", d.sum_candidates.size()},
              {"pairs", pairs},
              {"selections", d.selections},
              {"survivors", survivors}};
  out["sum_element"] = d.sum_element ? vec_json(*d.sum_element) : json(nullptr);
  if (!d.problem.empty()) {
    out["problem"] = d.problem;
  }
  return out;
}

// Sign of the unique surviving selection when it is +-(unit basis); else nullopt.
std::optional<int> hat_sign(const HatData& d, std::size_t du, std::string& why) {
  if (!d.problem.empty()) {
    why = d.problem;
    return std::nullopt;
  }
  if (d.survivors.size() != 1) {
    why = std::to_string(d.survivors.size()) + " of " + std::to_string(d.selections) +
          " pair selections sum to the distinguished offset";
    return std::nullopt;
  }
  int sign = 0;
  if (!is_signed_unit_basis(d.survivors.front(), du, sign)) {
    why = "the surviving selection is not a signed coordinate basis";
    return std::nullopt;
  }
  return sign;
}

StepResult hat_step(const ConnectionSet& s, const ConnectionSet* t, int* sign_out) {
  StepResult step{.name = "hat",
                  .claim = "sigma fixes the distinguished offset and M_11 is a signed permutation matrix"};
  if (s.p() == 2) {
    step.verdict = StepVerdict::inapplicable;
    step.message = "the pairing argument needs p odd";
    return step;
  }
  const auto hs = analyze_hat(s);
  step.evidence["source"] = hat_json(hs);
  std::string why;
  auto sign_s = hat_sign(hs, s.du(), why);
  if (!sign_s) {
    step.verdict = StepVerdict::inapplicable;
    step.message = s.name() + ": " + why;
    return step;
  }
  int sign = *sign_s;
  if (t) {
    const auto ht = analyze_hat(*t);
    step.evidence["target"] = hat_json(ht);
    auto sign_t = hat_sign(ht, t->du(), why);
    if (!sign_t) {
      step.verdict = StepVerdict::inapplicable;
      step.message = t->name() + ": " + why;
      return step;
    }
    sign *= *sign_t;
  }
  step.evidence["sign"] = sign;
  if (sign_out) {
    *sign_out = sign;
  }
  return step;
}

}  // namespace

StepResult hat_analysis(const ConnectionSet& s) { return hat_step(s, nullptr, nullptr); }

StepResult normalization_check(const ConnectionSet& s) {
  StepResult step{.name = "normalization",
                  .claim = "permuting e-indices and the matching f-indices maps " + s.name() + " onto itself"};
  const auto& labels = s.v_labels();
  if (labels.empty()) {
    step.verdict = StepVerdict::inapplicable;
    step.message = "the set carries no V-basis labelling";
    return step;
  }
  std::map<std::vector<std::size_t>, std::size_t> v_index;
  for (std::size_t j = 0; j < labels.size(); ++j) {
    v_index[labels[j]] = j;
  }
  json swaps = json::array();
  for (std::size_t i = 0; i + 1 < s.du(); ++i) {
    auto pi = [i](std::size_t c) { return c == i ? i + 1 : (c == i + 1 ? i : c); };
    std::vector<std::size_t> v_perm(labels.size());
    bool bijective = true;
    for (std::size_t j = 0; j < labels.size(); ++j) {
      std::vector<std::size_t> image;
      for (auto c : labels[j]) image.push_back(pi(c));
      std::sort(image.begin(), image.end());
      auto it = v_index.find(image);
      if (it == v_index.end()) {
        bijective = false;
        break;
      }
      v_perm[j] = it->second;
    }
    json mapping = json::object();
    if (bijective) {
      for (const auto& c : s.classes()) {
        FpVec u(s.du(), s.modulus());
        for (std::size_t k = 0; k < s.du(); ++k) u.set(pi(k), c.offset[k]);
        FpVec w(s.dv(), s.modulus());
        for (std::size_t j = 0; j < s.dv(); ++j) w.set(v_perm[j], c.functional[j]);
        auto found = s.find_class(AffineClass{c.label, u, w, c.rhs});
        if (!found) {
          step.verdict = StepVerdict::fail;
          step.message = "swap(" + std::to_string(i + 1) + "," + std::to_string(i + 2) + ") moves " + c.label +
                         " outside the set";
          break;
        }
        mapping[c.label] = s.classes()[*found].label;
      }
    } else {
      step.verdict = StepVerdict::fail;
      step.message = "V labelling is not closed under swap(" + std::to_string(i + 1) + "," + std::to_string(i + 2) + ")";
    }
    swaps.push_back({{"swap", {i + 1, i + 2}}, {"classes", mapping}});
    if (step.verdict != StepVerdict::pass) break;
  }
  step.evidence = {{"transpositions", swaps}};
  return step;
}

StepResult linear_infeasibility(const ConnectionSet& s, const ConnectionSet& t, int sign) {
  StepResult step{.name = "infeasibility",
                  .claim = "no M_21 satisfies the conditions forced on sigma with M_11 = " +
                           std::string(sign > 0 ? "I" : "-I") + ", M_12 = 0"};
  const auto mod = s.modulus();
  const auto du = s.du();
  const auto dv = s.dv();
  const auto t_by_offset = classes_by_offset(t);

  std::vector<FpVec> rows;
  std::vector<std::int64_t> rhs;
  json equations = json::array();
  json skipped = json::array();
  std::vector<FpVec> row_offsets;
  for (const auto& c : s.classes()) {
    if (!c.rhs.is_zero()) {
      skipped.push_back(c.label);
      continue;
    }
    const auto target = sign > 0 ? c.offset : -c.offset;
    auto it = t_by_offset.find(target);
    if (it == t_by_offset.end() || it->second.size() != 1) {
      skipped.push_back(c.label);
      continue;
    }
    const auto& tc = t.classes()[it->second.front()];
    FpVec row(dv * du, mod);
    for (std::size_t r = 0; r < dv; ++r) {
      for (std::size_t col = 0; col < du; ++col) {
        row.set(r * du + col, mod.mul(tc.functional[r], c.offset[col]));
      }
    }
    rows.push_back(std::move(row));
    rhs.push_back(tc.rhs.value());
    row_offsets.push_back(c.offset);
    equations.push_back({{"from", c.label}, {"to", tc.label}});
  }
  step.evidence["unknowns"] = dv * du;
  step.evidence["unknown_layout"] = "row-major M_21, index r*du + c";
  step.evidence["equations"] = equations;
  step.evidence["skipped_classes"] = skipped;
  if (rows.empty()) {
    step.verdict = StepVerdict::inapplicable;
    step.message = "no usable equations";
    return step;
  }
  const auto a = FpMat::from_rows(rows, dv * du, mod);
  const FpVec b(rhs, mod);
  json a_json = json::array();
  for (const auto& r : rows) a_json.push_back(vec_json(r));
  step.evidence["A"] = a_json;
  step.evidence["b"] = vec_json(b);

  const auto result = solve_linear(a, b);
  if (const auto* sol = std::get_if<Solution>(&result)) {
    step.verdict = StepVerdict::fail;
    step.message = "the system is consistent; a map with M_11 = " + std::string(sign > 0 ? "I" : "-I") + " is not excluded";
    step.evidence["solution"] = vec_json(sol->x);
    return step;
  }
  const auto& lambda = std::get<Infeasible>(result).lambda;
  step.evidence["lambda"] = vec_json(lambda);

  // The hand proof sums the equations of every class except the one on the
  // distinguished offset and compares with that last equation.
  const auto hat = analyze_hat(s);
  json combination = nullptr;
  if (hat.sum_element) {
    std::optional<std::size_t> distinguished;
    for (std::size_t r = 0; r < row_offsets.size(); ++r) {
      if (row_offsets[r] == *hat.sum_element) distinguished = r;
    }
    if (distinguished) {
      FpVec summed(dv * du, mod);
      for (std::size_t r = 0; r < rows.size(); ++r) {
        if (r != *distinguished) summed += rows[r];
      }
      const auto& last = rows[*distinguished];
      // summed = mu * last
      std::optional<std::uint32_t> mu;
      bool proportional = true;
      for (std::size_t c = 0; c < last.dim() && proportional; ++c) {
        if (last[c] == 0) {
          proportional = summed[c] == 0;
          continue;
        }
        const auto ratio = mod.mul(summed[c], mod.inv(last[c]));
        if (mu && *mu != ratio) proportional = false;
        mu = ratio;
      }
      if (proportional && mu) {
        FpVec combo = FpVec::ones(rows.size(), mod);
        combo.set(*distinguished, mod.neg(*mu));
        const auto lhs_zero = a.left_multiply(combo).is_zero();
        const auto value = fp_dot(combo, b);
        combination = {{"summed_equations", rows.size() - 1},
                 {"distinguished_equation", *distinguished},
                 {"multiplier", *mu},
                 {"lambda", vec_json(combo)},
                 {"lambda_dot_b", value.value()},
                 {"annihilates_A", lhs_zero}};
        if (!value.is_zero()) {
          combination["normalized_lambda"] = vec_json(combo.scaled(mod.inv(value.value())));
          combination["matches_solver"] = combo.scaled(mod.inv(value.value())) == lambda;
        }
      }
    }
  }
  step.evidence["summed_combination"] = combination;
  step.message = "inconsistent: lambda^T A = 0, lambda^T b = 1";
  return step;
}

namespace {

Conclusion conclude(const std::vector<StepResult>& steps) {
  bool incomplete = false;
  for (const auto& s : steps) {
    if (s.verdict == StepVerdict::fail) return Conclusion::failed;
    if (s.verdict != StepVerdict::pass) incomplete = true;
  }
  return incomplete ? Conclusion::inconclusive : Conclusion::refuted;
}

StepResult merge_steps(std::string name, std::string claim, StepResult source, StepResult target) {
  StepResult out{.name = std::move(name), .claim = std::move(claim)};
  std::pair<const char*, StepResult*> parts[] = {{"source", &source}, {"target", &target}};
  for (auto& [key, part] : parts) {
    out.evidence[key] = part->evidence;
    if (part->verdict != StepVerdict::pass && out.verdict == StepVerdict::pass) {
      out.verdict = part->verdict;
      out.message = part->message;
    }
  }
  return out;
}

}  // namespace

RefutationCertificate refute_directed(const ConnectionSet& s, const ConnectionSet& t) {
  if (s.du() != t.du() || s.dv() != t.dv() || !(s.modulus() == t.modulus())) {
    throw usage_error("S and T live on different groups");
  }
  RefutationCertificate cert{
      .family = s.family(), .p = s.p(), .mode = "directed", .source = s.name(), .target = t.name()};

  cert.steps.push_back(merge_steps("separation", "classes are maximal affine pieces of S and of T",
                                   separation_check(s), separation_check(t)));
  cert.steps.push_back(span_check(s));
  int sign = 1;
  cert.steps.push_back(hat_step(s, &t, &sign));
  cert.steps.push_back(normalization_check(s));

  const bool ready = std::all_of(cert.steps.begin(), cert.steps.end(),
                                 [](const StepResult& st) { return st.verdict == StepVerdict::pass; });
  if (ready) {
    cert.steps.push_back(linear_infeasibility(s, t, sign));
  } else {
    cert.steps.push_back(StepResult{.name = "infeasibility",
                                    .claim = "no M_21 satisfies the forced conditions",
                                    .verdict = StepVerdict::skipped,
                                    .message = "earlier steps did not establish M_11 = +-I"});
  }
  cert.conclusion = conclude(cert.steps);
  for (const auto& st : cert.steps) {
    if (st.verdict != StepVerdict::pass) {
      cert.message = st.name + ": " + st.message;
      break;
    }
  }
  if (cert.conclusion == Conclusion::refuted) {
    cert.message = "no linear map sends " + s.name() + " onto " + t.name();
  }
  return cert;
}

DegreeProfile offset_graph_degrees(const ConnectionSet& s) {
  std::set<FpVec> vertices;
  for (const auto& c : s.classes()) {
    vertices.insert(c.offset);
    vertices.insert(-c.offset);
  }
  DegreeProfile out;
  for (const auto& x : vertices) {
    std::size_t deg = 0;
    for (const auto& y : vertices) {
      if (!(x == y) && vertices.contains(x - y)) ++deg;
    }
    out.vertices.push_back(x);
    out.degrees.push_back(deg);
  }
  return out;
}

RefutationCertificate refute_undirected(const ConnectionSet& sbar, const ConnectionSet& tbar,
                                        const ConnectionSet& s, const ConnectionSet& t) {
  RefutationCertificate cert{
      .family = s.family(), .p = s.p(), .mode = "undirected", .source = sbar.name(), .target = tbar.name()};
  const auto p = s.p();

  StepResult hyp{.name = "hypothesis", .claim = "p > 3"};
  if (p <= 3) {
    hyp.verdict = StepVerdict::inapplicable;
    hyp.message = "the undirected argument is stated for p > 3; at p = " + std::to_string(p) +
                  " the closure is not separated (2a - b can fall back into S u -S)";
    cert.steps.push_back(std::move(hyp));
    cert.conclusion = Conclusion::inconclusive;
    cert.message = cert.steps.back().message;
    return cert;
  }
  cert.steps.push_back(std::move(hyp));

  std::set<FpVec> hat;
  for (const auto& c : s.classes()) hat.insert(c.offset);

  {
    StepResult st{.name = "offset disjointness", .claim = "offsets of S and of -S are disjoint"};
    json shared = json::array();
    for (const auto& x : hat) {
      if (hat.contains(-x)) shared.push_back(vec_json(x));
    }
    st.evidence = {{"offsets", hat.size()}, {"shared", shared}};
    if (!shared.empty()) {
      st.verdict = StepVerdict::fail;
      st.message = "some offset x has -x also an offset";
    }
    cert.steps.push_back(std::move(st));
  }

  cert.steps.push_back(merge_steps("closure separation", "classes are maximal affine pieces of Sbar and of Tbar",
                                   separation_check(sbar), separation_check(tbar)));
  cert.steps.push_back(span_check(sbar));

  const auto hs = analyze_hat(s);
  {
    StepResult st{.name = "degree profile",
                  .claim = "in the graph on the offsets of Sbar, e and -e have degree 2p+2 and all others degree 2"};
    const auto prof = offset_graph_degrees(s);
    json table = json::array();
    std::map<std::size_t, std::size_t> histogram;
    for (std::size_t i = 0; i < prof.vertices.size(); ++i) {
      table.push_back({{"vertex", vec_json(prof.vertices[i])}, {"degree", prof.degrees[i]}});
      ++histogram[prof.degrees[i]];
    }
    json hist = json::object();
    for (const auto& [d, n] : histogram) hist[std::to_string(d)] = n;
    st.evidence = {{"table", table}, {"profile", hist}};
    if (!hs.sum_element) {
      st.verdict = StepVerdict::inapplicable;
      st.message = "S has no distinguished sum element";
    } else {
      st.evidence["e"] = vec_json(*hs.sum_element);
      for (std::size_t i = 0; i < prof.vertices.size(); ++i) {
        const auto& x = prof.vertices[i];
        const bool special = x == *hs.sum_element || x == -*hs.sum_element;
        const std::size_t want = special ? 2 * p + 2 : 2;
        if (prof.degrees[i] != want) {
          st.verdict = StepVerdict::fail;
          st.message = "vertex " + x.str() + " has degree " + std::to_string(prof.degrees[i]) + ", expected " +
                       std::to_string(want);
          break;
        }
      }
    }
    cert.steps.push_back(std::move(st));
  }

  // -T as recorded in the closure: the classes of Tbar on negated offsets.
  std::vector<AffineClass> minus_t_classes;
  {
    StepResult st{.name = "class matching",
                  .claim = "Sbar = S u -S, and the classes of Tbar on offsets of S (of -S) are those of T (of -T)"};
    auto same_classes = [](const std::vector<AffineClass>& a, const std::vector<AffineClass>& b) {
      if (a.size() != b.size()) return false;
      return std::all_of(a.begin(), a.end(), [&](const AffineClass& x) {
        return std::any_of(b.begin(), b.end(), [&](const AffineClass& y) { return x.same_set(y); });
      });
    };
    std::vector<AffineClass> t_on_hat;
    std::vector<AffineClass> expected_minus_t;
    for (const auto& c : tbar.classes()) {
      if (hat.contains(c.offset)) t_on_hat.push_back(c);
      if (hat.contains(-c.offset)) minus_t_classes.push_back(c);
    }
    for (const auto& c : t.classes()) expected_minus_t.push_back(c.negated());
    std::vector<AffineClass> expected_sbar = s.classes();
    for (const auto& c : s.classes()) expected_sbar.push_back(c.negated());

    const bool sbar_ok = same_classes(sbar.classes(), expected_sbar);
    const bool t_ok = same_classes(t_on_hat, t.classes());
    const bool minus_ok = same_classes(minus_t_classes, expected_minus_t);
    st.evidence = {{"sbar_is_closure", sbar_ok}, {"tbar_on_offsets_is_T", t_ok}, {"tbar_on_negated_offsets_is_minus_T", minus_ok}};
    if (!(sbar_ok && t_ok && minus_ok)) {
      st.verdict = StepVerdict::fail;
      st.message = "closure bookkeeping does not match";
    }
    cert.steps.push_back(std::move(st));
  }

  const bool ready = std::all_of(cert.steps.begin(), cert.steps.end(),
                                 [](const StepResult& st) { return st.verdict == StepVerdict::pass; });
  if (ready) {
    const ConnectionSet minus_t(t.family(), "-T", t.modulus(), t.du(), t.dv(), minus_t_classes, t.v_labels());
    cert.reductions.push_back(refute_directed(s, t));
    cert.reductions.push_back(refute_directed(s, minus_t));
  }

  cert.conclusion = conclude(cert.steps);
  if (cert.conclusion == Conclusion::refuted) {
    if (cert.reductions.size() != 2) {
      cert.conclusion = Conclusion::inconclusive;
    }
    for (const auto& r : cert.reductions) {
      if (r.conclusion == Conclusion::failed) {
        cert.conclusion = Conclusion::failed;
      } else if (r.conclusion == Conclusion::inconclusive && cert.conclusion == Conclusion::refuted) {
        cert.conclusion = Conclusion::inconclusive;
      }
    }
  }
  for (const auto& st : cert.steps) {
    if (st.verdict != StepVerdict::pass) {
      cert.message = st.name + ": " + st.message;
      break;
    }
  }
  if (cert.message.empty()) {
    for (const auto& r : cert.reductions) {
      if (r.conclusion != Conclusion::refuted) {
        cert.message = "reduction to " + r.target + ": " + r.message;
        break;
      }
    }
  }
  if (cert.conclusion == Conclusion::refuted) {
    cert.message = "sigma(e) = e and sigma(e) = -e both lead to a linear map " + s.name() +
                   " -> +-T, and neither exists";
  }
  return cert;
}

}  // namespace cayleyci
