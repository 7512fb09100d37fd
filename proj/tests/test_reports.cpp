#include "doctest.h"

#include "shadiv/errors.hpp"
#include "shadiv/reports.hpp"

using namespace shadiv;

namespace {

const CurveE2& curve_80_205() {
  static const CurveE2 E = CurveE2::parse("80 205");
  return E;
}

// First step with the given op, or nullptr.
Json* find_step(Json& cert, const std::string& op) {
  for (auto& s : cert["steps"])
    if (s["op"] == op) return &s;
  return nullptr;
}

}  // namespace

TEST_CASE("certificates are byte-identical across runs") {
  CHECK(dump_certificate(report_verify_4div(curve_80_205()).certificate) ==
        dump_certificate(report_verify_4div(curve_80_205()).certificate));
  CHECK(dump_certificate(report_cyclic_search(3, 19, 200).certificate) ==
        dump_certificate(report_cyclic_search(3, 19, 200).certificate));
  SearchOptions grid;
  grid.amax = 40;
  grid.bmax = 40;
  grid.threads = 1;
  const std::string serial = dump_certificate(report_search_4div(grid).certificate);
  grid.threads = 4;
  CHECK(serial == dump_certificate(report_search_4div(grid).certificate));
}

TEST_CASE("verify-4div certificate for 80 205") {
  const Report r = report_verify_4div(curve_80_205());
  CHECK(r.exit_code == kExitVerified);
  const Json& c = r.certificate;
  CHECK(c["schema"] == kCertificateSchema);
  CHECK(c["verdict"] == "VERIFIED");
  CHECK(c["xi"] == "(1,5)");
  CHECK(c["patterns"].size() == 8);
  CHECK(c["bad_places"].size() == 4);
  for (const auto& p : c["patterns"]) {
    CHECK(p["in_kernel"] == true);
    CHECK(p["witness_realizes_signs"] == true);
    CHECK(p["witness_prime"].is_string());
  }
  // Every number is a decimal string.
  CHECK(c["l_value"]["terms"] == "4000");
  CHECK(c["selmer"]["dimension"].is_string());
  CHECK_NOTHROW(validate_certificate(c));
}

TEST_CASE("fresh certificates replay") {
  for (const Report& r : {report_verify_4div(curve_80_205()), report_classify_sha(curve_80_205()),
                          report_selmer(curve_80_205()),
                          report_quartic_els({"(11x^2-67x+31)*(-x^2-3x-1)"}), report_cyclic_verify(2, 17, 200),
                          report_cyclic_search(5, 101, 300)}) {
    const ReplayResult rr = replay(r.certificate);
    CHECK(rr.reproduced);
    CHECK(rr.mismatches.empty());
    CHECK(rr.steps_checked > 0);
  }
}

TEST_CASE("replay ignores timing") {
  Json c = report_cyclic_search(2, 17, 50).certificate;
  c["timing"] = Json{{"seconds", "1.234"}};
  CHECK(replay(c).reproduced);
}

TEST_CASE("tampered witnesses fail replay") {
  SUBCASE("pattern witness prime") {
    Json c = report_verify_4div(curve_80_205()).certificate;
    Json* s = find_step(c, "pattern");
    REQUIRE(s != nullptr);
    const std::string w = (*s)["evidence"]["witness_prime"].get<std::string>();
    (*s)["evidence"]["witness_prime"] = w == "3" ? "7" : "3";
    const ReplayResult rr = replay(c);
    CHECK_FALSE(rr.reproduced);
    CHECK_FALSE(rr.mismatches.empty());
  }
  SUBCASE("obstruction split root") {
    Json c = report_cyclic_search(3, 19, 200).certificate;
    Json* s = find_step(c, "obstruction");
    REQUIRE(s != nullptr);
    (*s)["evidence"]["split_root"] = "[0]";
    CHECK_FALSE(replay(c).reproduced);
  }
  SUBCASE("flipped status") {
    Json c = report_quartic_els({"(11x^2-34x+19)*(x^2+6x+4)"}).certificate;
    Json* s = find_step(c, "quartic_els");
    REQUIRE(s != nullptr);
    (*s)["status"] = "refuted";
    CHECK_FALSE(replay(c).reproduced);
  }
  SUBCASE("changed verdict") {
    Json c = report_cyclic_verify(2, 17, 100).certificate;
    c["verdict"] = "REFUTED";
    CHECK_FALSE(replay(c).reproduced);
  }
  SUBCASE("dropped step") {
    Json c = report_cyclic_verify(2, 17, 100).certificate;
    c["steps"].erase(c["steps"].size() - 1);
    CHECK_FALSE(replay(c).reproduced);
  }
}

TEST_CASE("malformed certificates are schema errors") {
  auto schema_error = [](const Json& c) {
    try {
      replay(c);
    } catch (const Error& e) {
      return e.code() == ErrorCode::SchemaError;
    }
    return false;
  };
  const Json good = report_cyclic_search(2, 17, 30).certificate;
  CHECK(schema_error(Json::array()));
  Json c = good;
  c["schema"] = "other/1";
  CHECK(schema_error(c));
  c = good;
  c.erase("steps");
  CHECK(schema_error(c));
  c = good;
  c["steps"][0]["status"] = "maybe";
  CHECK(schema_error(c));
  c = good;
  c["steps"][0]["op"] = "no_such_op";
  CHECK(schema_error(c));
  c = good;
  c["command"] = "no-such-command";
  CHECK(schema_error(c));
  c = good;
  c["inputs"]["bound"] = 30;
  CHECK(schema_error(c));
}

TEST_CASE("exit codes of the reports") {
  CHECK(report_verify_4div(curve_80_205()).exit_code == kExitVerified);
  const Report none = report_verify_4div(CurveE2::parse("1 2"));
  CHECK(none.exit_code == kExitRefuted);
  CHECK(none.certificate["failed_step"] == "NoWitnessClass");
  CHECK(replay(none.certificate).reproduced);
  CHECK(report_cyclic_verify(2, 7, 100).exit_code == kExitRefuted);
  CHECK(report_cyclic_search(2, 7, 100).exit_code == kExitRefuted);
  // No obstruction prime below 3 for q = 17.
  CHECK(report_cyclic_search(2, 17, 2).exit_code == kExitUndecided);
  CHECK(report_quartic_els({"[1,0,0,0,-2]"}).exit_code == kExitVerified);
  CHECK(report_quartic_els({"[-1,0,0,0,-1]"}).exit_code == kExitRefuted);
  CHECK(report_classify_sha(curve_80_205()).exit_code == kExitVerified);
}

TEST_CASE("run_step rejects unknown ops and bad arguments") {
  CHECK_THROWS_AS(run_step("nope", Json::object()), Error);
  CHECK_THROWS_AS(run_step("genus", Json::object()), Error);
  CHECK(run_step("genus", Json{{"p", "5"}})["evidence"]["genus"] == "56");
}
