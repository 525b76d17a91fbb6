#include "cayleyci/certificate.hpp"

#include <algorithm>
#include <chrono>
#include <ctime>
#include <limits>
#include <map>
#include <set>

namespace cayleyci {

using nlohmann::json;

json to_json(const ConnectionSet& s) {
  json classes = json::array();
  for (const auto& c : s.classes()) {
    classes.push_back({{"label", c.label},
                       {"offset", c.offset.to_ints()},
                       {"functional", c.functional.to_ints()},
                       {"rhs", c.rhs.value()}});
  }
  const auto size = s.cardinality();
  json j = {{"family", s.family()}, {"name", s.name()},   {"p", s.p()},
            {"du", s.du()},         {"dv", s.dv()},       {"classes", classes},
            {"v_labels", s.v_labels()}};
  // exact decimal string once the count outgrows 64 bits
  j["size"] = size <= std::numeric_limits<std::uint64_t>::max() ? json(size.convert_to<std::uint64_t>()) : json(size.str());
  return j;
}

ConnectionSet connection_set_from_json(const json& j) {
  try {
    const Modulus mod(j.at("p").get<std::int64_t>());
    const auto du = j.at("du").get<std::size_t>();
    const auto dv = j.at("dv").get<std::size_t>();
    std::vector<AffineClass> classes;
    for (const auto& c : j.at("classes")) {
      const auto off = c.at("offset").get<std::vector<std::int64_t>>();
      const auto fun = c.at("functional").get<std::vector<std::int64_t>>();
      classes.push_back(AffineClass{c.at("label").get<std::string>(), FpVec(off, mod), FpVec(fun, mod),
                                    FpScalar(c.at("rhs").get<std::int64_t>(), mod)});
    }
    std::vector<std::vector<std::size_t>> labels;
    if (j.contains("v_labels")) labels = j["v_labels"].get<std::vector<std::vector<std::size_t>>>();
    return ConnectionSet(j.at("family").get<std::string>(), j.at("name").get<std::string>(), mod, du, dv,
                         std::move(classes), std::move(labels));
  } catch (const json::exception& e) {
    throw usage_error(std::string("malformed connection set: ") + e.what());
  } catch (const invariant_error& e) {
    throw usage_error(std::string("invalid connection set: ") + e.what());
  }
}

json to_json(const PolyMap& phi) {
  json comps = json::array();
  for (const auto& q : phi.components) {
    json terms = json::array();
    for (const auto& [m, c] : q.terms()) {
      terms.push_back({{"monomial", std::vector<int>(m.exps().begin(), m.exps().end())}, {"coeff", c}});
    }
    comps.push_back(std::move(terms));
  }
  return {{"p", phi.mod.value()}, {"du", phi.du}, {"dv", phi.dv}, {"components", comps}};
}

PolyMap polymap_from_json(const json& j) {
  try {
    const Modulus mod(j.at("p").get<std::int64_t>());
    PolyMap phi{mod, j.at("du").get<std::size_t>(), j.at("dv").get<std::size_t>(), {}};
    const FpRing ring{mod};
    for (const auto& comp : j.at("components")) {
      FpPoly q(phi.du, ring);
      for (const auto& t : comp) {
        const Monomial m(t.at("monomial").get<std::vector<std::uint16_t>>());
        if (m.nvars() != phi.du) throw usage_error("monomial has wrong number of variables");
        q.add_term(m, mod.reduce(t.at("coeff").get<std::int64_t>()));
      }
      phi.components.push_back(std::move(q));
    }
    if (phi.components.size() != phi.dv) throw usage_error("polymap has wrong number of components");
    return phi;
  } catch (const json::exception& e) {
    throw usage_error(std::string("malformed polymap: ") + e.what());
  }
}

json to_json(const Verdict& v) {
  json j = {{"check", v.check}, {"pass", v.pass}, {"items_checked", v.items_checked}};
  if (!v.detail.empty()) j["detail"] = v.detail;
  if (!v.witness.empty()) j["witness"] = v.witness;
  if (!v.parts.empty()) {
    j["parts"] = json::array();
    for (const auto& p : v.parts) j["parts"].push_back(to_json(p));
  }
  return j;
}

json to_json(const IsoReport& r) {
  json entries = json::array();
  for (const auto& e : r.entries) {
    json je = {{"s_class", e.s_label}, {"t_class", e.t_label}, {"target", e.target}, {"pass", e.pass}};
    if (r.mode == IsoMode::symbolic) {
      je["difference"] = e.difference;
      je["constant"] = e.constant;
    } else {
      je["points_checked"] = e.points_checked;
    }
    entries.push_back(std::move(je));
  }
  json j = {{"family", r.family},
            {"p", r.p},
            {"mode", r.mode == IsoMode::symbolic ? "symbolic" : "pointwise"},
            {"entries", entries},
            {"pass", r.pass}};
  if (r.mode == IsoMode::pointwise) {
    j["exhaustive"] = r.exhaustive;
    j["base_points"] = r.base_points;
  }
  if (!r.witness.empty()) j["witness"] = r.witness;
  return j;
}

json to_json(const StepResult& s) {
  return {{"name", s.name},
          {"claim", s.claim},
          {"verdict", to_string(s.verdict)},
          {"message", s.message},
          {"evidence", s.evidence}};
}

json to_json(const RefutationCertificate& c) {
  json steps = json::array();
  for (const auto& s : c.steps) steps.push_back(to_json(s));
  json reductions = json::array();
  for (const auto& r : c.reductions) reductions.push_back(to_json(r));
  return {{"family", c.family}, {"p", c.p},          {"mode", c.mode},
          {"source", c.source}, {"target", c.target}, {"steps", steps},
          {"reductions", reductions}, {"conclusion", to_string(c.conclusion)}, {"message", c.message}};
}

json to_json(const CiScanReport& r) {
  json ce = json::array();
  const Modulus mod(r.p);
  for (const auto& c : r.counterexamples) {
    ce.push_back({describe_subset(r.n, mod, c.first), describe_subset(r.n, mod, c.second)});
  }
  json j = {{"n", r.n},
            {"p", r.p},
            {"vertices", r.vertices},
            {"subsets", r.subsets},
            {"gl_order", r.gl_size},
            {"orbits", r.orbits},
            {"graph_classes", r.graph_classes},
            {"cayley_checks", r.cayley_checks},
            {"definitional_failures", r.definitional_failures},
            {"counterexamples", ce},
            {"pass", r.pass}};
  if (!r.definitional_witness.empty()) j["definitional_witness"] = r.definitional_witness;
  return j;
}

std::string utc_timestamp() {
  const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

json to_json(const RunCertificate& c) {
  return {{"schema", kCertificateSchema},
          {"tool", kToolName},
          {"version", kToolVersion},
          {"command", c.command},
          {"p", c.p},
          {"family", c.family},
          {"timestamp", c.timestamp.empty() ? utc_timestamp() : c.timestamp},
          {"overall", c.overall},
          {"payload", c.payload}};
}

// ---- re-check ----

namespace {

using Vec = std::vector<std::int64_t>;

std::int64_t md(std::int64_t x, std::int64_t p) { return ((x % p) + p) % p; }

Vec vsub(const Vec& a, const Vec& b, std::int64_t p) {
  Vec r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = md(a[i] - b[i], p);
  return r;
}

Vec vneg(const Vec& a, std::int64_t p) {
  Vec r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = md(-a[i], p);
  return r;
}

class Rechecker {
 public:
  explicit Rechecker(const json& sets) {
    if (sets.is_object()) {
      for (const auto& [name, s] : sets.items()) sets_[s.value("name", name)] = s;
    }
  }

  RecheckResult result;

  void problem(const std::string& what) {
    result.pass = false;
    result.problems.push_back(what);
  }

  // Returns the recomputed conclusion string.
  std::string refutation(const json& c) {
    const std::int64_t p = c.at("p").get<std::int64_t>();
    const std::string where = c.at("mode").get<std::string>() + " " + c.at("source").get<std::string>() + " -> " +
                              c.at("target").get<std::string>();
    bool any_fail = false;
    bool incomplete = false;
    int sign = 1;
    for (const auto& st : c.at("steps")) {
      const auto verdict = st.at("verdict").get<std::string>();
      any_fail = any_fail || verdict == "fail";
      incomplete = incomplete || (verdict != "pass" && verdict != "fail");
      const auto name = st.at("name").get<std::string>();
      const auto& ev = st.at("evidence");
      if (name == "hat") {
        for (const char* side : {"source", "target"}) {
          if (ev.contains(side)) hat(ev[side], p, where);
        }
        if (ev.contains("sign")) sign = ev["sign"].get<int>();
      } else if (name == "infeasibility" && verdict == "pass") {
        infeasibility(ev, p, sign, c.at("source").get<std::string>(), c.at("target").get<std::string>(), where);
      } else if (name == "degree profile" && ev.contains("table")) {
        degrees(ev, p, where);
      }
    }
    std::string concl = any_fail ? "failed" : (incomplete ? "inconclusive" : "refuted");
    if (c.at("mode") == "undirected" && concl == "refuted") {
      const auto& reds = c.at("reductions");
      if (reds.size() != 2) concl = "inconclusive";
      for (const auto& r : reds) {
        const auto sub = refutation(r);
        if (sub == "failed") {
          concl = "failed";
        } else if (sub == "inconclusive" && concl == "refuted") {
          concl = "inconclusive";
        }
      }
    } else {
      for (const auto& r : c.at("reductions")) refutation(r);
    }
    ++result.items;
    if (concl != c.at("conclusion").get<std::string>()) {
      problem(where + ": steps imply '" + concl + "' but the certificate says '" +
              c.at("conclusion").get<std::string>() + "'");
    }
    return concl;
  }

 private:
  std::map<std::string, json> sets_;

  void hat(const json& h, std::int64_t p, const std::string& where) {
    if (h.at("sum_element").is_null()) return;
    const auto e = h["sum_element"].get<Vec>();
    const auto& pairs = h.at("pairs");
    if (pairs.size() > 24) return;
    std::size_t count = 0;
    std::set<std::vector<Vec>> found;
    for (std::size_t mask = 0; mask < (std::size_t{1} << pairs.size()); ++mask) {
      Vec sum(e.size(), 0);
      std::vector<Vec> pick;
      for (std::size_t b = 0; b < pairs.size(); ++b) {
        const auto x = pairs[b][(mask >> b) & 1U].get<Vec>();
        for (std::size_t i = 0; i < sum.size(); ++i) sum[i] = md(sum[i] + x[i], p);
        pick.push_back(x);
      }
      if (sum == e) {
        ++count;
        std::sort(pick.begin(), pick.end());
        found.insert(pick);
      }
    }
    ++result.items;
    if (count != h.at("survivors").size()) {
      problem(where + ": " + std::to_string(count) + " selections sum to e, certificate lists " +
              std::to_string(h["survivors"].size()));
      return;
    }
    for (const auto& s : h["survivors"]) {
      auto v = s.get<std::vector<Vec>>();
      std::sort(v.begin(), v.end());
      if (!found.contains(v)) problem(where + ": a listed survivor does not sum to e");
    }
  }

  // Rebuilds the system from the embedded sets when they are available.
  void rebuild(const json& ev, std::int64_t p, int sign, const std::string& source, const std::string& target,
               const std::string& where) {
    auto si = sets_.find(source);
    auto ti = sets_.find(target);
    if (si == sets_.end() || ti == sets_.end()) return;
    std::map<std::string, json> s_classes;
    std::map<std::string, json> t_classes;
    for (const auto& c : si->second.at("classes")) s_classes[c.at("label")] = c;
    for (const auto& c : ti->second.at("classes")) t_classes[c.at("label")] = c;
    const auto du = si->second.at("du").get<std::size_t>();
    const auto dv = si->second.at("dv").get<std::size_t>();
    const auto& eqs = ev.at("equations");
    for (std::size_t r = 0; r < eqs.size(); ++r) {
      const auto& sc = s_classes.at(eqs[r].at("from").get<std::string>());
      const auto& tc = t_classes.at(eqs[r].at("to").get<std::string>());
      const auto u = sc.at("offset").get<Vec>();
      const auto tu = tc.at("offset").get<Vec>();
      const auto w = tc.at("functional").get<Vec>();
      const auto want_u = sign > 0 ? u : vneg(u, p);
      if (vsub(tu, want_u, p) != Vec(du, 0) || sc.at("rhs").get<std::int64_t>() != 0) {
        problem(where + ": equation " + std::to_string(r) + " pairs classes that do not correspond");
      }
      Vec row(du * dv);
      for (std::size_t i = 0; i < dv; ++i) {
        for (std::size_t j = 0; j < du; ++j) row[i * du + j] = md(w[i] * u[j], p);
      }
      if (row != ev.at("A")[r].get<Vec>() || tc.at("rhs").get<std::int64_t>() != ev.at("b")[r].get<std::int64_t>()) {
        problem(where + ": recorded row " + std::to_string(r) + " differs from the one rebuilt from the sets");
      }
    }
    ++result.items;
  }

  void combination(const json& a, const Vec& b, const Vec& lambda, std::int64_t p, const std::string& what,
                   bool want_one) {
    if (lambda.size() != a.size()) {
      problem(what + " has the wrong length");
      return;
    }
    const auto cols = a.empty() ? 0 : a[0].size();
    for (std::size_t c = 0; c < cols; ++c) {
      std::int64_t s = 0;
      for (std::size_t r = 0; r < a.size(); ++r) s = md(s + lambda[r] * a[r][c].get<std::int64_t>(), p);
      if (s != 0) {
        problem(what + ": lambda^T A is nonzero in column " + std::to_string(c));
        return;
      }
    }
    std::int64_t s = 0;
    for (std::size_t r = 0; r < b.size(); ++r) s = md(s + lambda[r] * b[r], p);
    if (want_one ? s != 1 : s == 0) {
      problem(what + ": lambda^T b = " + std::to_string(s));
    }
    ++result.items;
  }

  void infeasibility(const json& ev, std::int64_t p, int sign, const std::string& source, const std::string& target,
                     const std::string& where) {
    const auto& a = ev.at("A");
    const auto b = ev.at("b").get<Vec>();
    combination(a, b, ev.at("lambda").get<Vec>(), p, where + " lambda", true);
    const auto& sc = ev.at("summed_combination");
    if (!sc.is_null()) {
      combination(a, b, sc.at("lambda").get<Vec>(), p, where + " summed combination", false);
      if (sc.contains("normalized_lambda")) {
        combination(a, b, sc["normalized_lambda"].get<Vec>(), p, where + " normalized summed combination", true);
      }
    }
    rebuild(ev, p, sign, source, target, where);
  }

  void degrees(const json& ev, std::int64_t p, const std::string& where) {
    std::set<Vec> verts;
    for (const auto& row : ev["table"]) verts.insert(row.at("vertex").get<Vec>());
    std::map<std::string, std::size_t> hist;
    for (const auto& row : ev["table"]) {
      const auto x = row.at("vertex").get<Vec>();
      std::size_t deg = 0;
      for (const auto& y : verts) {
        if (y != x && verts.contains(vsub(x, y, p))) ++deg;
      }
      ++hist[std::to_string(deg)];
      if (deg != row.at("degree").get<std::size_t>()) {
        problem(where + ": degree table entry disagrees with recomputation");
      }
    }
    if (json(hist) != ev.at("profile")) problem(where + ": degree profile disagrees with recomputation");
    ++result.items;
  }
};

bool verdict_consistent(const json& v) {
  if (!v.contains("parts")) return true;
  bool all = true;
  for (const auto& p : v["parts"]) {
    if (!verdict_consistent(p)) return false;
    all = all && p.at("pass").get<bool>();
  }
  return all == v.at("pass").get<bool>();
}

}  // namespace

RecheckResult recheck_certificate(const json& cert) {
  Rechecker rc(cert.contains("payload") && cert["payload"].contains("sets") ? cert["payload"]["sets"] : json());
  try {
    if (cert.value("schema", 0) != kCertificateSchema) {
      rc.problem("unsupported certificate schema");
      return rc.result;
    }
    const auto& payload = cert.at("payload");
    const auto overall = cert.at("overall").get<std::string>();
    std::string implied = overall;

    if (payload.contains("lemmas")) {
      bool all = true;
      for (const auto& v : payload["lemmas"]) {
        ++rc.result.items;
        if (!verdict_consistent(v)) rc.problem("verdict " + v.at("check").get<std::string>() + " disagrees with its parts");
        all = all && v.at("pass").get<bool>();
      }
      implied = all ? "pass" : "fail";
    }
    if (payload.contains("iso")) {
      bool all = true;
      for (const auto& r : payload["iso"]) {
        bool entries = true;
        for (const auto& e : r.at("entries")) entries = entries && e.at("pass").get<bool>();
        ++rc.result.items;
        if (entries != r.at("pass").get<bool>()) rc.problem("iso report pass flag disagrees with its entries");
        all = all && entries;
      }
      implied = all ? "pass" : "fail";
    }
    if (payload.contains("refutation")) {
      const auto concl = rc.refutation(payload["refutation"]);
      implied = concl == "refuted" ? "pass" : (concl == "inconclusive" ? "inconclusive" : "fail");
    }
    if (payload.contains("oracle")) {
      const auto& o = payload["oracle"];
      const bool ok = o.at("counterexamples").empty() && o.at("definitional_failures").get<std::size_t>() == 0;
      ++rc.result.items;
      if (ok != o.at("pass").get<bool>()) rc.problem("oracle pass flag disagrees with its counts");
      implied = ok ? "pass" : "fail";
    }
    if (implied != overall) {
      rc.problem("payload implies '" + implied + "' but overall is '" + overall + "'");
    }
  } catch (const json::exception& e) {
    rc.problem(std::string("malformed certificate: ") + e.what());
  } catch (const std::out_of_range& e) {
    rc.problem(std::string("certificate refers to a missing class: ") + e.what());
  }
  return rc.result;
}

}  // namespace cayleyci
