// cayleyci: build the connection-set families, verify the polynomial
// isomorphisms, refute linear isomorphisms, export graphs and run the small
// CI oracle. Exit codes: 0 pass, 1 check failed, 2 inconclusive, 64 usage.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>

#include "CLI11.hpp"
#include "json.hpp"

#include "cayleyci/certificate.hpp"
#include "cayleyci/cioracle.hpp"
#include "cayleyci/families.hpp"
#include "cayleyci/graph_export.hpp"
#include "cayleyci/isomap.hpp"
#include "cayleyci/polyring.hpp"
#include "cayleyci/refuter.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace cayleyci;

namespace {

constexpr int kExitPass = 0;
constexpr int kExitFail = 1;
constexpr int kExitInconclusive = 2;
constexpr int kExitUsage = 64;

struct Options {
  std::int64_t p = 0;
  std::string family = "rank2p3";
  std::string mode = "both";
  std::string direction = "directed";
  std::string which = "S";
  std::string format = "edges";
  std::string out;
  unsigned threads = 1;
  std::uint64_t seed = 1;
  std::size_t samples = 1000;
  std::size_t lemma5_samples = 100;
  std::size_t n = 0;
  std::uint64_t edge_cap = kDefaultEdgeCap;
  std::size_t dv_cap = kDefaultDvCap;
  std::string cert_file;
};

int exit_for(const std::string& overall) {
  if (overall == "pass") return kExitPass;
  if (overall == "inconclusive") return kExitInconclusive;
  return kExitFail;
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open " + path.string() + " for writing");
  f << text;
  if (!f) throw std::runtime_error("write to " + path.string() + " failed");
}

// Writes the certificate to --out, or to stdout when --out is not given.
int emit(const Options& o, RunCertificate cert) {
  const auto text = to_json(cert).dump(2) + "\n";
  if (o.out.empty()) {
    std::cout << text;
  } else {
    write_text(o.out, text);
  }
  std::cerr << cert.command << ": " << cert.overall << "\n";
  return exit_for(cert.overall);
}

std::string flag_line(const std::string& cmd, std::initializer_list<std::pair<const char*, std::string>> flags) {
  std::string out = cmd;
  for (const auto& [k, v] : flags) out += std::string(" --") + k + " " + v;
  return out;
}

int cmd_lemmas(const Options& o) {
  require_odd_prime(o.p);
  if (o.p > 13) throw usage_error("lemmas supports p <= 13");
  std::vector<Verdict> verdicts;
  verdicts.push_back(check_lemma1(o.p));
  verdicts.push_back(check_lemma2(o.p));
  verdicts.push_back(check_power_congruence(o.p));
  verdicts.push_back(check_lemma6(o.p));

  Verdict l5{.check = "lemma5", .detail = std::to_string(o.lemma5_samples) + " random (n, m) pairs"};
  const auto nvars = static_cast<std::size_t>(2 * o.p - 1);
  std::mt19937_64 rng(o.seed);
  for (std::size_t i = 0; i < o.lemma5_samples; ++i) {
    std::vector<std::size_t> idx(nvars);
    for (std::size_t j = 0; j < nvars; ++j) idx[j] = j;
    std::shuffle(idx.begin(), idx.end(), rng);
    idx.resize(static_cast<std::size_t>(o.p));
    std::sort(idx.begin(), idx.end());
    std::vector<std::uint8_t> m(nvars);
    for (auto& b : m) b = static_cast<std::uint8_t>(rng() & 1U);
    auto v = check_lemma5(o.p, Monomial::from_support(nvars, idx), m);
    if (!v.pass) l5.fail(v.check + ": " + v.witness);
    l5.items_checked += v.items_checked;
  }
  verdicts.push_back(std::move(l5));

  json list = json::array();
  bool all = true;
  for (const auto& v : verdicts) {
    std::cerr << (v.pass ? "pass " : "FAIL ") << v.check << (v.pass ? "" : "  " + v.witness) << "\n";
    all = all && v.pass;
    list.push_back(to_json(v));
  }
  RunCertificate cert{.command = flag_line("lemmas", {{"p", std::to_string(o.p)},
                                                      {"seed", std::to_string(o.seed)},
                                                      {"lemma5-samples", std::to_string(o.lemma5_samples)}}),
                      .p = static_cast<std::uint32_t>(o.p),
                      .overall = all ? "pass" : "fail"};
  cert.payload["lemmas"] = list;
  return emit(o, std::move(cert));
}

int cmd_build(const Options& o) {
  const auto inst = build_family(parse_family(o.family), o.p, o.dv_cap);
  const fs::path dir = o.out.empty() ? fs::path(".") : fs::path(o.out);
  fs::create_directories(dir);
  write_text(dir / "S.json", to_json(inst.S).dump(2) + "\n");
  write_text(dir / "T.json", to_json(inst.T).dump(2) + "\n");
  write_text(dir / "phi.json", to_json(inst.phi).dump(2) + "\n");
  std::cout << o.family << " p=" << o.p << ": " << inst.S.classes().size() << " classes, du=" << inst.S.du()
            << ", dv=" << inst.S.dv() << ", |S|=" << inst.S.cardinality().str() << "\n"
            << "wrote " << (dir / "S.json").string() << ", " << (dir / "T.json").string() << ", "
            << (dir / "phi.json").string() << "\n";
  return kExitPass;
}

int cmd_verify_iso(const Options& o) {
  if (o.mode != "symbolic" && o.mode != "pointwise" && o.mode != "both") {
    throw usage_error("--mode must be symbolic, pointwise or both");
  }
  const auto inst = build_family(parse_family(o.family), o.p, o.dv_cap);
  std::vector<IsoReport> reports;
  if (o.mode != "pointwise") reports.push_back(verify_polymap_symbolic(inst.S, inst.T, inst.phi));
  if (o.mode != "symbolic") {
    PointwiseBudget budget{.exhaustive = vector_count(inst.S.modulus(), inst.S.du()) <= kMaxExhaustiveBasePoints,
                           .samples = o.samples,
                           .seed = o.seed,
                           .threads = o.threads};
    reports.push_back(verify_polymap_pointwise(inst.S, inst.T, inst.phi, budget));
  }
  json list = json::array();
  bool all = true;
  for (const auto& r : reports) {
    const char* mode = r.mode == IsoMode::symbolic ? "symbolic" : "pointwise";
    std::cerr << (r.pass ? "pass " : "FAIL ") << mode << (r.pass ? "" : "  " + r.witness) << "\n";
    all = all && r.pass;
    list.push_back(to_json(r));
  }
  RunCertificate cert{.command = flag_line("verify-iso", {{"family", o.family},
                                                          {"p", std::to_string(o.p)},
                                                          {"mode", o.mode},
                                                          {"seed", std::to_string(o.seed)}}),
                      .p = static_cast<std::uint32_t>(o.p),
                      .family = o.family,
                      .overall = all ? "pass" : "fail"};
  cert.payload["iso"] = list;
  return emit(o, std::move(cert));
}

int cmd_refute(const Options& o) {
  if (o.direction != "directed" && o.direction != "undirected") {
    throw usage_error("--direction must be directed or undirected");
  }
  const auto inst = build_family(parse_family(o.family), o.p, o.dv_cap);
  json sets = {{"S", to_json(inst.S)}, {"T", to_json(inst.T)}};
  RefutationCertificate rc;
  if (o.direction == "directed") {
    rc = refute_directed(inst.S, inst.T);
  } else {
    const auto sbar = undirected_closure(inst.S);
    const auto tbar = undirected_closure(inst.T);
    sets["-T"] = to_json(negated(inst.T));
    sets["Sbar"] = to_json(sbar);
    sets["Tbar"] = to_json(tbar);
    rc = refute_undirected(sbar, tbar, inst.S, inst.T);
  }
  for (const auto& st : rc.steps) {
    std::cerr << to_string(st.verdict) << " " << st.name << (st.message.empty() ? "" : "  " + st.message) << "\n";
  }
  for (const auto& r : rc.reductions) {
    std::cerr << "reduction " << r.source << " -> " << r.target << ": " << to_string(r.conclusion) << "\n";
  }
  std::cerr << to_string(rc.conclusion) << ": " << rc.message << "\n";
  const std::string overall = rc.conclusion == Conclusion::refuted
                                  ? "pass"
                                  : (rc.conclusion == Conclusion::inconclusive ? "inconclusive" : "fail");
  RunCertificate cert{.command = flag_line("refute", {{"family", o.family},
                                                      {"p", std::to_string(o.p)},
                                                      {"direction", o.direction}}),
                      .p = static_cast<std::uint32_t>(o.p),
                      .family = o.family,
                      .overall = overall};
  cert.payload["refutation"] = to_json(rc);
  cert.payload["sets"] = sets;
  return emit(o, std::move(cert));
}

int cmd_export(const Options& o) {
  const auto format = parse_export_format(o.format);
  const auto inst = build_family(parse_family(o.family), o.p, o.dv_cap);
  std::optional<ConnectionSet> set;
  if (o.which == "S") {
    set = inst.S;
  } else if (o.which == "T") {
    set = inst.T;
  } else if (o.which == "Sbar") {
    set = undirected_closure(inst.S);
  } else if (o.which == "Tbar") {
    set = undirected_closure(inst.T);
  } else {
    throw usage_error("--which must be S, T, Sbar or Tbar");
  }
  // reject before touching the output file
  export_size(*set, format, o.edge_cap);
  ExportStats stats;
  if (o.out.empty() || o.out == "-") {
    stats = export_graph(*set, format, std::cout, o.edge_cap);
    std::cout.flush();
  } else {
    std::ofstream f(o.out, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open " + o.out + " for writing");
    stats = export_graph(*set, format, f, o.edge_cap);
    f.close();
    if (!f) throw std::runtime_error("write to " + o.out + " failed");
  }
  std::cerr << o.which << " " << o.format << ": " << stats.vertices << " vertices, " << stats.edges
            << (stats.undirected ? " edges" : " arcs") << "\n";
  return kExitPass;
}

int cmd_oracle(const Options& o) {
  const Modulus mod(o.p);
  const auto rep = ci_scan(o.n, mod, o.threads);
  std::cerr << "Z_" << o.p << "^" << o.n << ": " << rep.subsets << " subsets, " << rep.orbits << " orbits, "
            << rep.graph_classes << " graph classes, " << rep.counterexamples.size() << " counterexamples, "
            << rep.definitional_failures << " definitional failures\n";
  RunCertificate cert{.command = flag_line("oracle", {{"n", std::to_string(o.n)}, {"p", std::to_string(o.p)}}),
                      .p = static_cast<std::uint32_t>(o.p),
                      .overall = rep.pass ? "pass" : "fail"};
  cert.payload["oracle"] = to_json(rep);
  return emit(o, std::move(cert));
}

int cmd_check_cert(const Options& o) {
  std::ifstream f(o.cert_file);
  if (!f) throw usage_error("cannot read " + o.cert_file);
  json cert;
  try {
    cert = json::parse(f);
  } catch (const json::parse_error& e) {
    throw usage_error(std::string("not a JSON file: ") + e.what());
  }
  const auto res = recheck_certificate(cert);
  for (const auto& pr : res.problems) std::cerr << "problem: " << pr << "\n";
  std::cout << (res.pass ? "ok" : "FAILED") << ": " << res.items << " items re-checked, overall "
            << cert.value("overall", "?") << "\n";
  return res.pass ? kExitPass : kExitFail;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Cayley connection-set families: isomorphism and refutation certificates"};
  app.require_subcommand(1);
  Options o;

  auto add_common = [&](CLI::App* sub, bool family) {
    sub->add_option("--p", o.p, "odd prime")->required();
    if (family) {
      sub->add_option("--family", o.family, "rank2p3 | rank4p2 | rankbinom");
      sub->add_option("--dv-cap", o.dv_cap, "largest V dimension the binomial family may build");
    }
    sub->add_option("--threads", o.threads, "worker threads, 0 = all cores");
    sub->add_option("--seed", o.seed, "sampling seed");
  };

  auto* lemmas = app.add_subcommand("lemmas", "check the polynomial identities");
  add_common(lemmas, false);
  lemmas->add_option("--lemma5-samples", o.lemma5_samples, "random (n, m) pairs for the multilinear difference");
  lemmas->add_option("--out", o.out, "certificate file (default stdout)");

  auto* build = app.add_subcommand("build", "write S.json, T.json and phi.json");
  add_common(build, true);
  build->add_option("--out", o.out, "output directory");

  auto* iso = app.add_subcommand("verify-iso", "check that phi maps Cay(S) onto Cay(T)");
  add_common(iso, true);
  iso->add_option("--mode", o.mode, "symbolic | pointwise | both");
  iso->add_option("--samples", o.samples, "base points when the exhaustive check is too large");
  iso->add_option("--out", o.out, "certificate file (default stdout)");

  auto* refute = app.add_subcommand("refute", "certify that no linear map sends S onto T");
  add_common(refute, true);
  refute->add_option("--direction", o.direction, "directed | undirected");
  refute->add_option("--out", o.out, "certificate file (default stdout)");

  auto* exp = app.add_subcommand("export", "write Cay(G, X) for X in S, T, Sbar, Tbar");
  add_common(exp, true);
  exp->add_option("--which", o.which, "S | T | Sbar | Tbar");
  exp->add_option("--format", o.format, "edges | digraph6 | graph6 | dimacs");
  exp->add_option("--edge-cap", o.edge_cap, "refuse exports with more edges than this");
  exp->add_option("--out", o.out, "output file (default stdout)");

  auto* oracle = app.add_subcommand("oracle", "brute-force CI check on Z_p^n");
  add_common(oracle, false);
  oracle->add_option("--n", o.n, "rank")->required();
  oracle->add_option("--out", o.out, "certificate file (default stdout)");

  auto* check = app.add_subcommand("check-cert", "re-check the evidence in a certificate");
  check->add_option("file", o.cert_file, "certificate JSON")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (*lemmas) return cmd_lemmas(o);
    if (*build) return cmd_build(o);
    if (*iso) return cmd_verify_iso(o);
    if (*refute) return cmd_refute(o);
    if (*exp) return cmd_export(o);
    if (*oracle) return cmd_oracle(o);
    if (*check) return cmd_check_cert(o);
  } catch (const usage_error& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const invariant_error& e) {
    std::cerr << "internal check failed: " << e.what() << "\n";
    return kExitFail;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitFail;
  }
  return kExitUsage;
}
