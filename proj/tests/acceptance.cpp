// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any
// failure. Expects the CLI path in CAYLEYCI_CLI.

#include <sys/wait.h>

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "cayleyci/certificate.hpp"
#include "cayleyci/cioracle.hpp"
#include "cayleyci/families.hpp"
#include "cayleyci/isomap.hpp"
#include "cayleyci/polyring.hpp"
#include "cayleyci/refuter.hpp"

#ifndef CAYLEYCI_CLI
#error "CAYLEYCI_CLI must name the cayleyci executable"
#endif

namespace fs = std::filesystem;
using namespace cayleyci;
using nlohmann::json;

namespace {

struct Check {
  bool ok = true;
  std::vector<std::string> notes;

  void require(bool cond, const std::string& what) {
    if (!cond) {
      ok = false;
      notes.push_back("FAILED " + what);
    }
  }
  void note(const std::string& s) { notes.push_back(s); }
};

struct Run {
  int code = -1;
  std::string out;
  std::string err;
};

std::string slurp(const fs::path& p) {
  std::ifstream f(p);
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

fs::path scratch_dir() {
  auto dir = fs::temp_directory_path() / ("cayleyci_accept_" + std::to_string(::getpid()));
  fs::create_directories(dir);
  return dir;
}

Run run_cli(const std::string& args) {
  const auto dir = scratch_dir();
  const auto out = dir / "stdout";
  const auto err = dir / "stderr";
  const std::string cmd = std::string("\"") + CAYLEYCI_CLI + "\" " + args + " >\"" + out.string() + "\" 2>\"" +
                          err.string() + "\"";
  const int status = std::system(cmd.c_str());
  Run r;
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  r.out = slurp(out);
  r.err = slurp(err);
  return r;
}

// Equations <M u, w_T> = c_T rebuilt from the sets in plain integers.
struct System {
  std::vector<std::vector<std::int64_t>> a;
  std::vector<std::int64_t> b;
};

System rebuild(const ConnectionSet& s, const ConnectionSet& t) {
  const std::int64_t p = s.p();
  System sys;
  for (const auto& c : s.classes()) {
    if (c.rhs.value() != 0) continue;
    const AffineClass* hit = nullptr;
    for (const auto& d : t.classes()) {
      if (d.offset == c.offset && (hit == nullptr || d.functional == c.functional)) hit = &d;
    }
    if (hit == nullptr) continue;
    std::vector<std::int64_t> row(s.dv() * s.du());
    for (std::size_t r = 0; r < s.dv(); ++r) {
      for (std::size_t k = 0; k < s.du(); ++k) row[r * s.du() + k] = hit->functional[r] * c.offset[k] % p;
    }
    sys.a.push_back(std::move(row));
    sys.b.push_back(hit->rhs.value());
  }
  return sys;
}

std::int64_t reduce(std::int64_t x, std::int64_t p) { return ((x % p) + p) % p; }

bool annihilates(const System& sys, const std::vector<std::int64_t>& lambda, std::int64_t p) {
  if (lambda.size() != sys.a.size()) return false;
  for (std::size_t col = 0; col < sys.a.front().size(); ++col) {
    std::int64_t acc = 0;
    for (std::size_t r = 0; r < sys.a.size(); ++r) acc += lambda[r] * sys.a[r][col];
    if (reduce(acc, p) != 0) return false;
  }
  return true;
}

std::int64_t dot_b(const System& sys, const std::vector<std::int64_t>& lambda, std::int64_t p) {
  std::int64_t acc = 0;
  for (std::size_t r = 0; r < sys.b.size(); ++r) acc += lambda[r] * sys.b[r];
  return reduce(acc, p);
}

std::string join(const std::vector<std::int64_t>& v) {
  std::string s = "(";
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + std::to_string(v[i]);
  return s + ")";
}

// ---- criteria ----

void sizes(Check& c) {
  for (std::int64_t p : {3, 5}) {
    const auto f = build_family(Family::rank2p3, p);
    BigInt want = 2 * p + 3;
    for (std::int64_t i = 0; i < p + 1; ++i) want *= p;
    c.require(f.S.cardinality() == want && f.T.cardinality() == want,
              "|S| = |T| = " + want.str() + " at p=" + std::to_string(p));
    c.note("p=" + std::to_string(p) + ": |S| = |T| = " + f.S.cardinality().str());
  }
  c.require(build_family(Family::rank2p3, 3).S.cardinality() == 729, "729 at p=3");
  c.require(build_family(Family::rank2p3, 5).S.cardinality() == 203125, "203125 at p=5");
}

void lemmas(Check& c) {
  for (std::int64_t p : {3, 5, 7}) {
    for (const auto& v : {check_lemma1(p), check_lemma2(p), check_power_congruence(p)}) {
      c.require(v.pass, v.check + " at p=" + std::to_string(p) + " " + v.witness);
    }
  }
  for (std::int64_t p : {3, 5}) {
    const auto v = check_lemma6(p);
    c.require(v.pass, "lemma6 at p=" + std::to_string(p) + " " + v.witness);
    const auto nvars = static_cast<std::size_t>(2 * p - 1);
    std::mt19937_64 rng(static_cast<std::uint64_t>(p));
    std::size_t good = 0;
    for (int i = 0; i < 500; ++i) {
      std::vector<std::size_t> idx(nvars);
      for (std::size_t j = 0; j < nvars; ++j) idx[j] = j;
      std::shuffle(idx.begin(), idx.end(), rng);
      idx.resize(static_cast<std::size_t>(p));
      std::sort(idx.begin(), idx.end());
      std::vector<std::uint8_t> m(nvars);
      for (auto& b : m) b = static_cast<std::uint8_t>(rng() & 1U);
      const auto r = check_lemma5(p, Monomial::from_support(nvars, idx), m);
      good += r.pass;
      if (!r.pass) c.require(false, "lemma5 at p=" + std::to_string(p) + " " + r.witness);
    }
    c.note("lemma5 p=" + std::to_string(p) + ": " + std::to_string(good) + "/500");
  }
}

void isomorphism(Check& c) {
  const std::tuple<Family, std::int64_t> symbolic[] = {{Family::rank2p3, 3}, {Family::rank4p2, 3},
                                                       {Family::rankbinom, 3}, {Family::rank2p3, 5},
                                                       {Family::rank4p2, 5}};
  for (const auto& [fam, p] : symbolic) {
    const auto f = build_family(fam, p);
    const auto rep = verify_polymap_symbolic(f.S, f.T, f.phi);
    const auto tag = to_string(fam) + " p=" + std::to_string(p);
    c.require(rep.pass, "symbolic " + tag + " " + rep.witness);
    // C-class constant: +1 for rank2p3 and rankbinom, -1 for rank4p2
    const std::int64_t sign = fam == Family::rank4p2 ? -1 : 1;
    const auto want = static_cast<std::uint32_t>(reduce(sign, p));
    const auto& last = rep.entries.back();
    c.require(last.constant && last.target == want && last.difference == std::to_string(want),
              "C-class constant " + tag + " is " + last.difference);
  }
  c.note("C-class constants +1, -1, +1");
  const std::pair<Family, std::size_t> pointwise[] = {
      {Family::rank2p3, 81}, {Family::rank4p2, 243}, {Family::rankbinom, 243}};
  for (const auto& [fam, base] : pointwise) {
    const auto f = build_family(fam, 3);
    const auto rep = verify_polymap_pointwise(f.S, f.T, f.phi, {});
    c.require(rep.pass && rep.exhaustive && rep.base_points == base,
              "pointwise " + to_string(fam) + " base points " + std::to_string(rep.base_points));
  }
  c.note("pointwise base points 81, 243, 243");
}

void refutation(Check& c) {
  for (std::int64_t p : {3, 5}) {
    const auto f = build_family(Family::rank2p3, p);
    const auto cert = refute_directed(f.S, f.T);
    const auto tag = "p=" + std::to_string(p);
    c.require(cert.conclusion == Conclusion::refuted, "refute_directed " + tag + " concludes refuted");
    const auto& ev = cert.steps.back().evidence;
    const auto sys = rebuild(f.S, f.T);
    c.require(ev.contains("A") && ev["A"].get<std::vector<std::vector<std::int64_t>>>() == sys.a &&
                  ev["b"].get<std::vector<std::int64_t>>() == sys.b,
              "recorded system matches the sets " + tag);
    const auto lambda = ev.value("lambda", std::vector<std::int64_t>{});
    c.require(annihilates(sys, lambda, p) && dot_b(sys, lambda, p) == 1,
              "lambda^T A = 0, lambda^T b = 1 " + tag);
    // The combination behind it: every A/B equation summed, minus the C one.
    std::vector<std::int64_t> summed(sys.a.size(), 1);
    summed.back() = -1;
    c.require(annihilates(sys, summed, p) && dot_b(sys, summed, p) == p - 1, "summed combination " + tag);
    std::vector<std::int64_t> normalized(summed.size(), p - 1);
    normalized.back() = 1;
    c.require(lambda == normalized, "lambda is the summed combination scaled to lambda^T b = 1 " + tag);
    const std::vector<std::int64_t> ones(sys.a.size(), 1);
    c.note(tag + ": lambda " + join(lambda) + " = -(1,...,1,-1); plain all-ones " +
           (annihilates(sys, ones, p) ? "also annihilates A" : "does not annihilate A"));

    RunCertificate run{.command = "refute", .p = static_cast<std::uint32_t>(p), .family = "rank2p3",
                       .overall = "pass"};
    run.payload["refutation"] = to_json(cert);
    run.payload["sets"] = {{"S", to_json(f.S)}, {"T", to_json(f.T)}};
    const auto re = recheck_certificate(to_json(run));
    c.require(re.pass, "certificate re-check " + tag + (re.problems.empty() ? "" : ": " + re.problems.front()));
  }
}

void undirected(Check& c) {
  const auto f = build_family(Family::rank2p3, 5);
  const auto sbar = undirected_closure(f.S);
  const auto prof = offset_graph_degrees(sbar);
  std::map<std::size_t, std::size_t> hist;
  std::vector<FpVec> high;
  for (std::size_t i = 0; i < prof.degrees.size(); ++i) {
    ++hist[prof.degrees[i]];
    if (prof.degrees[i] == 12) high.push_back(prof.vertices[i]);
  }
  c.require(hist == std::map<std::size_t, std::size_t>{{12, 2}, {2, 24}}, "degree profile {12: 2, 2: 24}");
  const auto e = FpVec::ones(6, Modulus(5));
  c.require(high.size() == 2 && ((high[0] == e && high[1] == -e) || (high[0] == -e && high[1] == e)),
            "degree-12 vertices are e and -e");
  const auto cert = refute_undirected(sbar, undirected_closure(f.T), f.S, f.T);
  c.require(cert.conclusion == Conclusion::refuted, "refute_undirected p=5 concludes refuted");

  const auto r5 = run_cli("refute --family rank2p3 --p 5 --direction undirected");
  c.require(r5.code == 0, "CLI p=5 undirected exits 0 (got " + std::to_string(r5.code) + ")");
  const auto r3 = run_cli("refute --family rank2p3 --p 3 --direction undirected");
  c.require(r3.code == 2, "CLI p=3 undirected exits 2 (got " + std::to_string(r3.code) + ")");
  c.require(r3.err.find("p > 3") != std::string::npos, "p=3 message cites the p > 3 hypothesis");
  c.note("p=5 profile {12: 2, 2: 24}; p=3 exit " + std::to_string(r3.code));
}

void binom_structure(Check& c) {
  const auto subsets = k_subsets(5, 3);
  c.require(subsets.size() == 10, "10 subsets of size 3");
  for (const auto& k : subsets) c.require(b_partners(k, 3).size() == 3, "3 partners");
  const auto f = build_family(Family::rankbinom, 3);
  const auto want = static_cast<std::size_t>(2 * 3 - 1 + binomial(5, 3));
  c.require(f.S.du() + f.S.dv() == want && want == 15, "rank 5 + 10 = 15");
  c.note("rank " + std::to_string(f.S.du()) + " + " + std::to_string(f.S.dv()));
}

void oracle(Check& c) {
  const auto a = ci_scan(2, Modulus(3));
  const auto b = ci_scan(3, Modulus(2));
  c.require(a.subsets == 256 && a.counterexamples.empty() && a.definitional_failures == 0 && a.pass,
            "Z_3^2 scan");
  c.require(b.subsets == 128 && b.counterexamples.empty() && b.definitional_failures == 0 && b.pass,
            "Z_2^3 scan");
  c.note("Z_3^2: " + std::to_string(a.subsets) + " loop-free sets (2^8; 512 would include 0), " +
         std::to_string(a.orbits) + " orbits; Z_2^3: " + std::to_string(b.subsets) + " sets, " +
         std::to_string(b.orbits) + " orbits; 0 counterexamples");
}

void negative_controls(Check& c) {
  const auto f = build_family(Family::rank2p3, 3);
  auto classes = f.T.classes();
  classes.front().rhs = classes.front().rhs + FpScalar(1, f.T.modulus());
  const ConnectionSet bad(f.T.family(), "T", f.T.modulus(), f.T.du(), f.T.dv(), classes, f.T.v_labels());
  const auto sym = verify_polymap_symbolic(f.S, bad, f.phi);
  const auto pw = verify_polymap_pointwise(f.S, bad, f.phi, {});
  c.require(!sym.pass && !sym.witness.empty(), "symbolic check fails on corrupted rhs with a witness");
  c.require(!pw.pass && !pw.witness.empty(), "pointwise check fails on corrupted rhs with a witness");
  const auto self = refute_directed(f.S, f.S.renamed("S'"));
  c.require(self.conclusion != Conclusion::refuted, "refute_directed(S, S) is not refuted");
  c.note("refute_directed(S, S): " + to_string(self.conclusion));
}

void export_count(Check& c) {
  const auto file = scratch_dir() / "rank2p3_p3.edges";
  const auto r = run_cli("export --family rank2p3 --p 3 --which S --format edges --out \"" + file.string() + "\"");
  c.require(r.code == 0, "export exits 0 (got " + std::to_string(r.code) + ")");
  std::ifstream in(file);
  std::string line;
  std::uint64_t lines = 0;
  bool well_formed = true;
  while (std::getline(in, line)) {
    ++lines;
    std::uint64_t a = 0, b = 0;
    if (std::sscanf(line.c_str(), "%lu %lu", &a, &b) != 2 || a >= 19683 || b >= 19683 || a == b) well_formed = false;
  }
  in.close();
  std::error_code ec;
  fs::remove(file, ec);
  c.require(lines == 14'348'907, "line count " + std::to_string(lines));
  c.require(well_formed, "every line is an arc between distinct vertices");
  c.note(std::to_string(lines) + " lines");
}

}  // namespace

int main() {
  struct Criterion {
    const char* name;
    double budget_s;
    std::function<void(Check&)> body;
  };
  const Criterion criteria[] = {
      {"connection-set size (729 at p=3, 203125 at p=5)", 1, sizes},
      {"lemma suite at p in {3,5,7}, lemma5 x500 at p in {3,5}", 30, lemmas},
      {"polynomial isomorphism, symbolic and exhaustive pointwise", 120, isomorphism},
      {"directed refutation of rank2p3 at p in {3,5} with re-checked certificate", 10, refutation},
      {"undirected case: degree profile, refutation at p=5, exit 2 at p=3", 10, undirected},
      {"rankbinom partners and rank 15", 1, binom_structure},
      {"CI oracle ground truth on Z_3^2 and Z_2^3", 300, oracle},
      {"negative controls", 60, negative_controls},
      {"edge-list export of rank2p3 at p=3 re-counted", 120, export_count},
  };
  int failures = 0;
  int n = 0;
  for (const auto& cr : criteria) {
    ++n;
    Check c;
    const auto t0 = std::chrono::steady_clock::now();
    try {
      cr.body(c);
    } catch (const std::exception& e) {
      c.require(false, std::string("exception: ") + e.what());
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (secs > cr.budget_s) c.require(false, "took " + std::to_string(secs) + " s");
    failures += !c.ok;
    char timing[32];
    std::snprintf(timing, sizeof timing, "%.2fs", secs);
    std::cout << (c.ok ? "[PASS]" : "[FAIL]") << " criterion " << n << ": " << cr.name << " (" << timing << ")";
    for (const auto& s : c.notes) std::cout << "\n         " << s;
    std::cout << std::endl;
  }
  std::error_code ec;
  fs::remove_all(scratch_dir(), ec);
  std::cout << (failures == 0 ? "all criteria passed" : std::to_string(failures) + " criteria failed") << "\n";
  return failures == 0 ? 0 : 1;
}
