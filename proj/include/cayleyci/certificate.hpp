// JSON forms of sets, maps and reports, the run certificate envelope, and an
// independent re-check of the evidence a certificate carries.

#pragma once

#include <string>
#include <vector>

#include "json.hpp"

#include "cayleyci/cioracle.hpp"
#include "cayleyci/families.hpp"
#include "cayleyci/isomap.hpp"
#include "cayleyci/refuter.hpp"
#include "cayleyci/verdict.hpp"

namespace cayleyci {

inline constexpr int kCertificateSchema = 1;
inline constexpr const char* kToolName = "cayleyci";
inline constexpr const char* kToolVersion = "1.0.0";

nlohmann::json to_json(const ConnectionSet& s);
// Throws usage_error on malformed input; the set invariants are re-validated.
ConnectionSet connection_set_from_json(const nlohmann::json& j);

// components: one list of {"monomial": [exponents], "coeff": c} per V-coordinate
nlohmann::json to_json(const PolyMap& phi);
PolyMap polymap_from_json(const nlohmann::json& j);

nlohmann::json to_json(const Verdict& v);
nlohmann::json to_json(const IsoReport& r);
nlohmann::json to_json(const StepResult& s);
nlohmann::json to_json(const RefutationCertificate& c);
nlohmann::json to_json(const CiScanReport& r);

// overall: "pass" | "fail" | "inconclusive"
struct RunCertificate {
  std::string command;
  std::uint32_t p = 0;
  std::string family;
  std::string overall;
  nlohmann::json payload = nlohmann::json::object();
  std::string timestamp;  // filled by to_json when empty
};

nlohmann::json to_json(const RunCertificate& c);

// UTC, ISO 8601, seconds resolution.
std::string utc_timestamp();

struct RecheckResult {
  bool pass = true;
  std::size_t items = 0;
  std::vector<std::string> problems;
};

// Recomputes what the payload asserts with plain integer arithmetic:
// infeasibility combinations against the recorded system (and the system
// against embedded sets when present), hat-selection counts, degree tables,
// step-to-conclusion consistency and the overall verdict.
RecheckResult recheck_certificate(const nlohmann::json& cert);

}  // namespace cayleyci
