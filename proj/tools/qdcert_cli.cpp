// Command-line front end. Talks to the library through the C interface only.
#include <chrono>
#include <cstdint>
#include <cstdio>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "qdcert/qdcert.h"

namespace {

int exit_code(qdcert_status st) {
  switch (st) {
    case QDCERT_OK: return 0;
    case QDCERT_ERR_ARG:
    case QDCERT_ERR_CONFIG: return 2;
    case QDCERT_ERR_CAP: return 3;
    case QDCERT_ERR_INVARIANT: return 4;
    default: return 1;
  }
}

int fail(qdcert_status st) {
  std::cerr << "qdcert: " << qdcert_last_error() << '\n';
  return exit_code(st);
}

struct ConfigHandle {
  qdcert_config* p = nullptr;
  ~ConfigHandle() { qdcert_config_free(p); }
};

struct ReportHandle {
  qdcert_report* p = nullptr;
  ~ReportHandle() { qdcert_report_free(p); }
};

void print_owned(char* s) {
  std::cout << s << '\n';
  qdcert_string_free(s);
}

int run_certify(const std::string& config, const std::vector<std::int64_t>& ns,
                std::string out_json, std::string out_csv, const std::int64_t* seed) {
  ConfigHandle cfg;
  if (auto st = qdcert_config_load(config.c_str(), &cfg.p)) return fail(st);
  if (!ns.empty())
    if (auto st = qdcert_config_set_n_list(cfg.p, ns.data(), ns.size())) return fail(st);
  if (seed)
    if (auto st = qdcert_config_set_seed(cfg.p, static_cast<std::uint64_t>(*seed))) return fail(st);
  if (out_json.empty()) out_json = qdcert_config_out_json(cfg.p);
  if (out_csv.empty()) out_csv = qdcert_config_out_csv(cfg.p);

  const auto start = std::chrono::steady_clock::now();
  ReportHandle report;
  if (auto st = qdcert_certify(cfg.p, &report.p)) return fail(st);
  const std::chrono::duration<double> took = std::chrono::steady_clock::now() - start;
  std::cerr << "certified " << qdcert_report_record_count(report.p) << " n values in "
            << took.count() << " s\n";

  if (!out_json.empty()) {
    if (auto st = qdcert_report_write_json(report.p, out_json.c_str())) return fail(st);
  }
  if (!out_csv.empty()) {
    if (auto st = qdcert_report_write_csv(report.p, out_csv.c_str())) return fail(st);
  }
  if (out_json.empty() && out_csv.empty()) {
    char* text = nullptr;
    if (auto st = qdcert_report_json(report.p, &text)) return fail(st);
    print_owned(text);
  }
  if (auto v = qdcert_report_violations(report.p)) {
    std::cerr << "qdcert: " << v << " invariant violation(s) recorded in the report\n";
    return 4;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Quasidiagonality certificates for central characters of unitriangular groups"};
  app.set_version_flag("--version", std::string(qdcert_version()));
  app.require_subcommand(1);

  std::string config;
  std::vector<std::int64_t> ns;
  std::string out_json, out_csv;
  std::int64_t seed = 0;
  auto* certify = app.add_subcommand("certify", "Run a certificate from a config file");
  certify->add_option("--config", config, "CertificateConfig JSON")->required();
  certify->add_option("--n", ns, "Explicit n values (overrides the config policy)")
      ->check(CLI::Range(std::int64_t{2}, INT64_MAX));
  certify->add_option("--out-json", out_json, "Write the JSON report here");
  certify->add_option("--out-csv", out_csv, "Write the CSV report here");
  auto* seed_opt = certify->add_option("--seed", seed, "Override the config seed")
                       ->check(CLI::NonNegativeNumber);

  int fd_d = 3;
  std::int64_t fd_n = 0;
  auto* folner = app.add_subcommand("folner", "Print the Folner set summary for (d, n)");
  folner->add_option("--d", fd_d, "Matrix size")->required();
  folner->add_option("--n", fd_n, "Level")->required();

  std::string norms_config;
  std::int64_t norms_n = 0;
  auto* norms = app.add_subcommand("norms", "Every commutator norm at a single n");
  norms->add_option("--config", norms_config, "CertificateConfig JSON")->required();
  norms->add_option("--n", norms_n, "Level")->required();

  auto* selftest = app.add_subcommand("selftest", "Run the built-in invariant checks");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  if (*certify) return run_certify(config, ns, out_json, out_csv, *seed_opt ? &seed : nullptr);

  if (*folner) {
    char* text = nullptr;
    if (auto st = qdcert_folner_summary(fd_d, fd_n, &text)) return fail(st);
    print_owned(text);
    return 0;
  }

  if (*norms) {
    ConfigHandle cfg;
    if (auto st = qdcert_config_load(norms_config.c_str(), &cfg.p)) return fail(st);
    char* text = nullptr;
    if (auto st = qdcert_norms(cfg.p, norms_n, &text)) return fail(st);
    print_owned(text);
    return 0;
  }

  if (*selftest) {
    char* text = nullptr;
    int failures = 0;
    if (auto st = qdcert_selftest(&text, &failures)) return fail(st);
    print_owned(text);
    if (failures) {
      std::cerr << "qdcert: " << failures << " check(s) failed\n";
      return 4;
    }
    return 0;
  }
  return 1;
}
