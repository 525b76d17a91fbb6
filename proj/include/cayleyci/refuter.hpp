// Certificates that no invertible linear map of U (+) V sends S onto T.
//
// The directed pipeline runs five steps in order:
//   separation     every sigma maps each class of S into a single class of T
//   span           hence sigma(V) = V, i.e. the block M_12 vanishes
//   hat            sigma permutes the class offsets, fixes their distinguished
//                  sum element and is a signed permutation on U
//   normalization  coordinate permutations are automorphisms of S, so M_11
//                  may be taken to be +-I
//   infeasibility  the remaining linear conditions on M_21 are inconsistent
// The undirected pipeline adds the checks on S u -S and reduces to the
// directed one for both signs of sigma(e).

#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "cayleyci/families.hpp"

namespace cayleyci {

enum class StepVerdict { pass, fail, inapplicable, skipped };
enum class Conclusion { refuted, inconclusive, failed };

std::string to_string(StepVerdict v);
std::string to_string(Conclusion c);

struct StepResult {
  std::string name;
  std::string claim;
  StepVerdict verdict = StepVerdict::pass;
  std::string message;
  nlohmann::json evidence = nlohmann::json::object();
};

struct RefutationCertificate {
  std::string family;
  std::uint32_t p = 0;
  std::string mode;  // directed | undirected
  std::string source;
  std::string target;
  std::vector<StepResult> steps;
  std::vector<RefutationCertificate> reductions;
  Conclusion conclusion = Conclusion::inconclusive;
  std::string message;
};

// Offsets u_i != u_j with 2u_i - u_j an offset are collisions; each is
// settled by deciding whether the v-parts admit 2a - b in S exactly.
StepResult separation_check(const ConnectionSet& s);

// Rank of the direction spaces of the first min(p+1, #classes) classes.
StepResult span_check(const ConnectionSet& s);

struct HatData {
  std::optional<FpVec> sum_element;
  std::vector<FpVec> sum_candidates;
  // (x, e - x) pairs, x being the weight-one member when there is one
  std::vector<std::pair<FpVec, FpVec>> pairs;
  std::size_t selections = 0;
  std::vector<std::vector<FpVec>> survivors;
  std::string problem;  // nonempty when the offset set lacks the structure
};

HatData analyze_hat(const ConnectionSet& s);
StepResult hat_analysis(const ConnectionSet& s);

StepResult normalization_check(const ConnectionSet& s);

// M_11 = sign * I. Builds one equation <M_21 u, w_T> = c_T per class of S
// with rhs 0, where w_T, c_T describe the T-class on offset sign * u.
StepResult linear_infeasibility(const ConnectionSet& s, const ConnectionSet& t, int sign = 1);

RefutationCertificate refute_directed(const ConnectionSet& s, const ConnectionSet& t);

struct DegreeProfile {
  std::vector<FpVec> vertices;
  std::vector<std::size_t> degrees;
};

// Induced graph on the offsets of S u -S, x ~ y iff x - y is an offset.
DegreeProfile offset_graph_degrees(const ConnectionSet& s);

RefutationCertificate refute_undirected(const ConnectionSet& sbar, const ConnectionSet& tbar,
                                        const ConnectionSet& s, const ConnectionSet& t);

}  // namespace cayleyci
