// Command line front end: runs one verification or search and writes its
// certificate as JSON.
//
// Exit codes: 0 verified or complete, 1 refuted, 2 undecided or bound
// exhausted, 3 usage error.

#include <chrono>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "shadiv/errors.hpp"
#include "shadiv/reports.hpp"

using namespace shadiv;

namespace {

int exit_for(const Error& e) {
  switch (e.code()) {
    case ErrorCode::InvalidArgument:
    case ErrorCode::ParseError:
    case ErrorCode::NonPrime:
    case ErrorCode::DegenerateCurve:
    case ErrorCode::ZeroInput:
    case ErrorCode::ExcludedPrime:
    case ErrorCode::SchemaError:
      return kExitUsage;
    case ErrorCode::NoWitnessClass:
      return kExitRefuted;
    default:
      return kExitUndecided;
  }
}

Json read_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::SchemaError, "cannot open " + path);
  try {
    return Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw Error(ErrorCode::SchemaError, std::string("not valid JSON: ") + e.what());
  }
}

void write_output(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::InvalidArgument, "cannot write " + path);
  out << text;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Certificates for non-divisible Tate-Shafarevich elements and cyclic-cover obstructions"};
  app.require_subcommand(1);
  std::string out_path;
  bool timing = false, quiet = false;
  app.add_option("-o,--out", out_path, "write the certificate here instead of stdout");
  app.add_flag("--timing", timing, "record wall-clock time in the certificate");
  app.add_flag("-q,--quiet", quiet, "no summary line on stderr");

  std::string curve;
  CertifyOptions certify;
  auto* verify = app.add_subcommand("verify-4div", "certify Sha(E) not contained in 4H^1(E)");
  verify->add_option("--curve", curve, "\"a b\" for y^2 = x(x+a)(x+b), or \"e1 e2 e3\"")->required();
  verify->add_option("--witness-bound", certify.witness_bound, "largest witness prime for sign patterns");
  verify->add_option("--l-terms", certify.l_terms, "terms of the L-series");
  verify->add_option("--numerator-bound", certify.search.numerator_bound, "point search |a| for x = a/c^2");
  verify->add_option("--denominator-bound", certify.search.denominator_bound, "point search c for x = a/c^2");

  SearchOptions grid;
  auto* search = app.add_subcommand("search-4div", "grid search over y^2 = x(x+a)(x+b)");
  search->add_option("--amin", grid.amin, "smallest a")->check(CLI::PositiveNumber);
  search->add_option("--amax", grid.amax, "largest a")->check(CLI::PositiveNumber);
  search->add_option("--bmax", grid.bmax, "largest b")->check(CLI::PositiveNumber);
  search->add_option("--threads", grid.threads, "worker threads (0: all cores)");
  search->add_option("--l-terms-min", grid.l_terms_min, "minimum L-series terms");
  search->add_option("--l-threshold", grid.l_threshold, "smallest accepted |L(E,1)|");

  std::uint64_t lift_bound = 10000;
  auto* classify = app.add_subcommand("classify-sha", "lift classification of the Sha[2] cosets");
  classify->add_option("--curve", curve, "curve")->required();
  classify->add_option("--witness-bound", lift_bound, "largest witness prime");

  PointSearchOptions points;
  auto* selmer = app.add_subcommand("selmer", "2-Selmer group with local images");
  selmer->add_option("--curve", curve, "curve")->required();
  selmer->add_option("--numerator-bound", points.numerator_bound, "point search |a|");
  selmer->add_option("--denominator-bound", points.denominator_bound, "point search c");

  std::vector<std::string> quartics;
  auto* els = app.add_subcommand("quartic-els", "everywhere local solvability of y^2 = g(x)");
  els->add_option("--quartic", quartics, "g as \"[a4,a3,a2,a1,a0]\" or a product like \"(x^2+1)*(2x^2-3)\"")
      ->required()
      ->allow_extra_args(false);  // keep "[a4,...,a0]" whole instead of splitting it as a list

  std::uint64_t p = 0, q = 0, bound = 0;
  auto* cyclic = app.add_subcommand("cyclic", "cyclic covers y^p = c f(x)");
  cyclic->require_subcommand(1);
  auto* cverify = cyclic->add_subcommand("verify", "local linear factors of f at every place");
  auto* csearch = cyclic->add_subcommand("search-c", "obstruction primes c = r");
  for (auto* sub : {cverify, csearch}) {
    sub->add_option("--p", p, "prime p")->required();
    sub->add_option("--q", q, "prime q = 1 mod p^2 (mod 8 for p = 2)")->required();
    sub->add_option("--bound", bound, "largest prime examined")->required();
  }

  std::string replay_path;
  auto* rep = app.add_subcommand("replay", "re-execute every step of a certificate");
  rep->add_option("file", replay_path, "certificate JSON")->required();

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
    if (rep->parsed()) {
      const ReplayResult r = replay(read_json(replay_path));
      for (const auto& m : r.mismatches) std::cerr << "mismatch: " << m << "\n";
      if (!quiet) {
        std::cerr << "replay: " << (r.reproduced ? "REPRODUCED" : "NOT REPRODUCED") << " (" << r.steps_checked
                  << " steps, " << r.axioms_skipped << " axioms)\n";
      }
      return r.reproduced ? kExitVerified : kExitRefuted;
    }

    const auto start = std::chrono::steady_clock::now();
    Report report;
    if (verify->parsed()) {
      report = report_verify_4div(CurveE2::parse(curve), certify);
    } else if (search->parsed()) {
      report = report_search_4div(grid);
    } else if (classify->parsed()) {
      report = report_classify_sha(CurveE2::parse(curve), lift_bound);
    } else if (selmer->parsed()) {
      report = report_selmer(CurveE2::parse(curve), points);
    } else if (els->parsed()) {
      report = report_quartic_els(quartics);
    } else if (cverify->parsed()) {
      report = report_cyclic_verify(p, q, bound);
    } else {
      report = report_cyclic_search(p, q, bound);
    }
    if (timing) {
      const double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
      char buf[32];
      std::snprintf(buf, sizeof buf, "%.3f", s);
      report.certificate["timing"] = Json{{"seconds", buf}};
    }
    write_output(out_path, dump_certificate(report.certificate));
    if (!quiet) {
      std::cerr << report.certificate["command"].get<std::string>() << ": "
                << report.certificate["verdict"].get<std::string>();
      if (report.certificate.contains("failed_step")) {
        std::cerr << " (" << report.certificate["failed_step"].get<std::string>() << ")";
      }
      std::cerr << "\n";
    }
    return report.exit_code;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_for(e);
  }
}
