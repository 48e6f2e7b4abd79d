// Command-line front end; links only the C API.
#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <string>

#include "reslab.h"

namespace {

struct SessionDeleter {
  void operator()(reslab_session* s) const { reslab_session_free(s); }
};
using Session = std::unique_ptr<reslab_session, SessionDeleter>;

struct BufFree {
  void operator()(char* p) const { reslab_free(p); }
};
using Buf = std::unique_ptr<char, BufFree>;

bool write_file(const std::string& path, const char* text) {
  std::ofstream out(path);
  if (!out) return false;
  out << text;
  return static_cast<bool>(out);
}

int map_exit(int status) {
  switch (status) {
    case RESLAB_OK:
      return 0;
    case RESLAB_E_FAILURES:
      return 1;
    default:
      return 2;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"reslab: residue calculus for weighted trace cochains"};
  app.require_subcommand(1);

  std::string scenario_path, report_path, csv_path, suite;
  bool with_terms = false;
  int threads = 0;
  double tol_scale = 1.0;

  auto* eval = app.add_subcommand("eval", "run a scenario file");
  eval->add_option("scenario", scenario_path, "scenario JSON path")
      ->required();
  eval->add_option("--report", report_path, "write the JSON report here");
  eval->add_option("--csv", csv_path, "write a CSV report here");
  eval->add_flag("--terms", with_terms, "emit per-term residue tables");
  eval->add_option("--threads", threads, "worker thread count");

  auto* verify = app.add_subcommand("verify", "run a verification suite");
  verify->add_option("suite", suite, "suite name (see list-suites)")
      ->required();
  verify->add_option("--tol-scale", tol_scale, "scale float tolerances");
  verify->add_option("--threads", threads, "worker thread count");

  app.add_subcommand("list-suites", "print the registered suites");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  Session session(reslab_session_new());
  reslab_session_set_threads(session.get(), threads);
  reslab_session_set_terms(session.get(), with_terms ? 1 : 0);

  if (eval->parsed()) {
    char* report = nullptr;
    int status = reslab_eval_file(session.get(), scenario_path.c_str(),
                                  &report);
    Buf guard(report);
    if (!report) {
      std::cerr << "error: " << reslab_last_error(session.get()) << "\n";
      return map_exit(status);
    }
    if (!report_path.empty()) {
      if (!write_file(report_path, report)) {
        std::cerr << "error: cannot write " << report_path << "\n";
        return 2;
      }
    } else {
      std::cout << report << "\n";
    }
    if (!csv_path.empty()) {
      char* csv = nullptr;
      if (reslab_report_csv(session.get(), report, &csv) != RESLAB_OK) {
        std::cerr << "error: " << reslab_last_error(session.get()) << "\n";
        return 2;
      }
      Buf csv_guard(csv);
      if (!write_file(csv_path, csv)) {
        std::cerr << "error: cannot write " << csv_path << "\n";
        return 2;
      }
    }
    if (status == RESLAB_E_FAILURES)
      std::cerr << "some tasks failed; see the report\n";
    else if (status != RESLAB_OK)
      std::cerr << "error: " << reslab_last_error(session.get()) << "\n";
    return map_exit(status);
  }

  if (verify->parsed()) {
    int failures = 0;
    char* summary = nullptr;
    int status = reslab_verify(session.get(), suite.c_str(), tol_scale,
                               &failures, &summary);
    Buf guard(summary);
    if (status != RESLAB_OK && status != RESLAB_E_FAILURES) {
      std::cerr << "error: " << reslab_last_error(session.get()) << "\n";
      return map_exit(status);
    }
    std::cout << summary << "\n";
    if (failures > 0) {
      std::cerr << failures << " criteria failed\n";
      return failures;
    }
    return 0;
  }

  // list-suites
  char* names = nullptr;
  int status = reslab_list_suites(session.get(), &names);
  Buf guard(names);
  if (status != RESLAB_OK) {
    std::cerr << "error: " << reslab_last_error(session.get()) << "\n";
    return 2;
  }
  std::cout << names << "\n";
  return 0;
}
