#pragma once

// Replayable JSON certificates for every command of the shadiv tool.
//
// A certificate is a list of steps {op, args, claim, evidence, status}. Each
// step is produced by one function of (op, args), so replay recomputes every
// non-axiom step from its arguments and compares evidence and status. All
// numbers are decimal strings; object keys are sorted.

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "shadiv/cyclic_covers.hpp"
#include "shadiv/divisibility.hpp"

namespace shadiv {

using Json = nlohmann::json;

inline constexpr const char* kCertificateSchema = "shadiv-certificate/1";

/// Process exit codes of the command line tool.
enum ExitCode : int { kExitVerified = 0, kExitRefuted = 1, kExitUndecided = 2, kExitUsage = 3 };

struct Report {
  Json certificate;
  int exit_code = kExitVerified;
};

/// Recomputes one step from its op and args. Throws SchemaError on an unknown op.
Json run_step(const std::string& op, const Json& args);

Report report_verify_4div(const CurveE2& E, const CertifyOptions& opts = {});
Report report_classify_sha(const CurveE2& E, std::uint64_t witness_bound = 10000);
Report report_selmer(const CurveE2& E, const PointSearchOptions& opts = {});
/// Each entry is a quartic in the syntax of QuarticCover::parse.
Report report_quartic_els(const std::vector<std::string>& quartics);
Report report_cyclic_verify(std::uint64_t p, std::uint64_t q, std::uint64_t bound);
Report report_cyclic_search(std::uint64_t p, std::uint64_t q, std::uint64_t bound);
Report report_search_4div(const SearchOptions& opts);

/// Rebuilds the report of a certificate from its command and inputs.
Report regenerate(const Json& certificate);

/// Throws SchemaError when required fields are missing or mistyped.
void validate_certificate(const Json& certificate);

struct ReplayResult {
  bool reproduced = false;
  std::size_t steps_checked = 0;
  std::size_t axioms_skipped = 0;
  std::vector<std::string> mismatches;
};

/// Re-executes every non-axiom step and regenerates the certificate from its
/// inputs; timing is ignored. Throws SchemaError.
ReplayResult replay(const Json& certificate);

/// Two-space indented JSON with a trailing newline.
std::string dump_certificate(const Json& certificate);

}  // namespace shadiv
