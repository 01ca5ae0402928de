// Command-line front end. Talks to the library exclusively through the C API
// so the shared-library surface gets exercised on every invocation.

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "keyaudit.h"

namespace {

constexpr int kExitInput = 2;
constexpr int kExitRuntime = 3;

struct Options {
  std::string input;
  std::string attack;
  std::string sweep;
  std::string output;
  std::string format = "json";
  bool quiet = false;
};

[[noreturn]] void die(ka_status status, const std::string& context) {
  std::cerr << "error: " << context << ": " << ka_last_error() << "\n";
  std::exit(status == KA_EINVAL ? kExitInput : kExitRuntime);
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    std::cerr << "error: cannot open " << path << "\n";
    std::exit(kExitInput);
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void emit(const Options& opt, const std::string& text) {
  if (!opt.output.empty()) {
    std::ofstream out(opt.output, std::ios::binary);
    if (!out) {
      std::cerr << "error: cannot write " << opt.output << "\n";
      std::exit(kExitRuntime);
    }
    out << text;
  } else if (!opt.quiet) {
    std::cout << text;
  }
}

std::string take(char* owned) {
  std::string s(owned);
  ka_string_free(owned);
  return s;
}

int run_criteria(const Options& opt) {
  char* out = nullptr;
  ka_status st = ka_criteria_report(slurp(opt.input).c_str(), &out);
  if (st != KA_OK) die(st, "criteria");
  emit(opt, take(out) + "\n");
  return 0;
}

int run_audit(const Options& opt) {
  char* out = nullptr;
  ka_status st = ka_audit_report(slurp(opt.input).c_str(), &out);
  if (st != KA_OK) die(st, "audit");
  emit(opt, take(out) + "\n");
  return 0;
}

int run_simulate(const Options& opt) {
  std::string grid = opt.sweep.empty() ? "" : slurp(opt.sweep);
  char* out = nullptr;
  ka_status st = ka_simulate(slurp(opt.input).c_str(),
                             slurp(opt.attack).c_str(),
                             grid.empty() ? nullptr : grid.c_str(), &out);
  if (st != KA_OK) die(st, "simulate");
  std::string report = take(out);
  if (opt.format == "csv") {
    emit(opt, nlohmann::json::parse(report)["csv"].get<std::string>());
  } else {
    emit(opt, report + "\n");
  }
  return 0;
}

int run_report(const Options& opt) {
  char* out = nullptr;
  ka_status st = ka_table_report(slurp(opt.input).c_str(), &out);
  if (st != KA_OK) die(st, "report");
  std::string report = take(out);
  if (opt.format == "md") {
    char* text = nullptr;
    st = ka_table_report_markdown(report.c_str(), &text);
    if (st != KA_OK) die(st, "report");
    emit(opt, take(text));
  } else if (opt.format == "csv") {
    char* text = nullptr;
    st = ka_table_report_csv(report.c_str(), &text);
    if (st != KA_OK) die(st, "report");
    emit(opt, take(text));
  } else {
    emit(opt, report + "\n");
  }
  return 0;
}

void add_common(CLI::App* cmd, Options& opt, bool formats) {
  cmd->add_option("--input", opt.input, "input JSON file")->required();
  cmd->add_option("--output", opt.output, "write result to file");
  if (formats) {
    cmd->add_option("--format", opt.format, "output format")
        ->check(CLI::IsMember({"json", "csv", "md"}));
  }
  cmd->add_flag("--quiet", opt.quiet, "suppress stdout");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"quantitative audits of QKD security criteria"};
  app.require_subcommand(1);

  Options opt;
  auto* criteria =
      app.add_subcommand("criteria", "security functionals of a distribution");
  add_common(criteria, opt, false);

  auto* audit = app.add_subcommand(
      "audit", "worst-case attacker consistent with a claimed bound");
  add_common(audit, opt, false);

  auto* simulate =
      app.add_subcommand("simulate", "lossy-channel protocol simulation");
  add_common(simulate, opt, true);
  simulate->add_option("--attack", opt.attack, "attack JSON file")->required();
  simulate->add_option("--sweep", opt.sweep,
                       "JSON array of transmittance values");

  auto* report =
      app.add_subcommand("report", "perceived-vs-real table for an instance");
  add_common(report, opt, true);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : kExitInput;
  }

  if (criteria->parsed()) return run_criteria(opt);
  if (audit->parsed()) return run_audit(opt);
  if (simulate->parsed()) return run_simulate(opt);
  return run_report(opt);
}
