#include "qdcert/qdcert.h"

#include <cstdlib>
#include <cstring>
#include <new>
#include <string>

#include "qdcert/certifier.hpp"
#include "qdcert/checks.hpp"
#include "qdcert/errors.hpp"

struct qdcert_config {
  qdcert::CertificateConfig cfg;
};

struct qdcert_report {
  qdcert::CertificateReport report;
};

namespace {

thread_local std::string g_last_error;

char* dup_string(const std::string& s) {
  char* p = static_cast<char*>(std::malloc(s.size() + 1));
  if (!p) throw std::bad_alloc();
  std::memcpy(p, s.c_str(), s.size() + 1);
  return p;
}

template <class F>
qdcert_status guarded(F&& body) {
  g_last_error.clear();
  try {
    body();
    return QDCERT_OK;
  } catch (const qdcert::ConfigError& e) {
    g_last_error = e.what();
    return QDCERT_ERR_CONFIG;
  } catch (const qdcert::CapExceeded& e) {
    g_last_error = e.what();
    return QDCERT_ERR_CAP;
  } catch (const qdcert::InvariantViolation& e) {
    g_last_error = e.what();
    return QDCERT_ERR_INVARIANT;
  } catch (const nlohmann::json::exception& e) {
    g_last_error = e.what();
    return QDCERT_ERR_CONFIG;
  } catch (const std::ios_base::failure& e) {
    g_last_error = e.what();
    return QDCERT_ERR_IO;
  } catch (const std::runtime_error& e) {
    g_last_error = e.what();
    return QDCERT_ERR_IO;
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return QDCERT_ERR_INTERNAL;
  } catch (...) {
    g_last_error = "unknown error";
    return QDCERT_ERR_INTERNAL;
  }
}

qdcert_status bad_arg(const char* what) {
  g_last_error = what;
  return QDCERT_ERR_ARG;
}

}  // namespace

extern "C" {

const char* qdcert_version(void) { return qdcert::kVersion; }
const char* qdcert_last_error(void) { return g_last_error.c_str(); }
void qdcert_string_free(char* s) { std::free(s); }

qdcert_status qdcert_config_load(const char* path, qdcert_config** out) {
  if (!path || !out) return bad_arg("null argument");
  return guarded([&] { *out = new qdcert_config{qdcert::load_config(path)}; });
}

qdcert_status qdcert_config_parse(const char* json_text, qdcert_config** out) {
  if (!json_text || !out) return bad_arg("null argument");
  return guarded([&] {
    *out = new qdcert_config{qdcert::config_from_json(qdcert::Json::parse(json_text))};
  });
}

void qdcert_config_free(qdcert_config* cfg) { delete cfg; }

qdcert_status qdcert_config_set_n_list(qdcert_config* cfg, const int64_t* ns, size_t count) {
  if (!cfg || (!ns && count)) return bad_arg("null argument");
  if (count == 0) return bad_arg("empty n list");
  for (size_t i = 0; i < count; ++i)
    if (ns[i] < 2) return bad_arg("n must be >= 2");
  cfg->cfg.n_list.assign(ns, ns + count);
  cfg->cfg.auto_n = false;
  return QDCERT_OK;
}

qdcert_status qdcert_config_set_seed(qdcert_config* cfg, uint64_t seed) {
  if (!cfg) return bad_arg("null argument");
  cfg->cfg.seed = seed;
  return QDCERT_OK;
}

const char* qdcert_config_out_json(const qdcert_config* cfg) {
  return cfg ? cfg->cfg.out_json.c_str() : "";
}

const char* qdcert_config_out_csv(const qdcert_config* cfg) {
  return cfg ? cfg->cfg.out_csv.c_str() : "";
}

qdcert_status qdcert_certify(const qdcert_config* cfg, qdcert_report** out) {
  if (!cfg || !out) return bad_arg("null argument");
  return guarded([&] { *out = new qdcert_report{qdcert::run_certificate(cfg->cfg)}; });
}

void qdcert_report_free(qdcert_report* report) { delete report; }

qdcert_status qdcert_report_json(const qdcert_report* report, char** out) {
  if (!report || !out) return bad_arg("null argument");
  return guarded([&] { *out = dup_string(qdcert::canonical_dump(qdcert::report_to_json(report->report))); });
}

qdcert_status qdcert_report_csv(const qdcert_report* report, char** out) {
  if (!report || !out) return bad_arg("null argument");
  return guarded([&] { *out = dup_string(qdcert::report_to_csv(report->report)); });
}

qdcert_status qdcert_report_write_json(const qdcert_report* report, const char* path) {
  if (!report || !path) return bad_arg("null argument");
  return guarded([&] {
    qdcert::write_text_file(path, qdcert::canonical_dump(qdcert::report_to_json(report->report)) + "\n");
  });
}

qdcert_status qdcert_report_write_csv(const qdcert_report* report, const char* path) {
  if (!report || !path) return bad_arg("null argument");
  return guarded([&] { qdcert::write_text_file(path, qdcert::report_to_csv(report->report)); });
}

size_t qdcert_report_record_count(const qdcert_report* report) {
  return report ? report->report.records.size() : 0;
}

size_t qdcert_report_violations(const qdcert_report* report) {
  return report ? report->report.violations.size() : 0;
}

qdcert_status qdcert_folner_summary(int d, int64_t n, char** out_json) {
  if (!out_json) return bad_arg("null argument");
  if (d < 2) return bad_arg("d must be >= 2");
  if (n < 2) return bad_arg("n must be >= 2");
  return guarded([&] {
    *out_json = dup_string(qdcert::canonical_dump(qdcert::folner_summary(qdcert::build_folner(n, d))));
  });
}

qdcert_status qdcert_norms(const qdcert_config* cfg, int64_t n, char** out_json) {
  if (!cfg || !out_json) return bad_arg("null argument");
  if (n < 2) return bad_arg("n must be >= 2");
  return guarded([&] { *out_json = dup_string(qdcert::canonical_dump(qdcert::norms_report(cfg->cfg, n))); });
}

qdcert_status qdcert_selftest(char** out_json, int* failures) {
  if (!out_json || !failures) return bad_arg("null argument");
  return guarded([&] {
    qdcert::Json arr = qdcert::Json::array();
    int failed = 0;
    for (const auto& r : qdcert::selftest()) {
      if (!r.passed) ++failed;
      arr.push_back({{"name", r.name}, {"passed", r.passed}, {"detail", r.detail}});
    }
    *failures = failed;
    *out_json = dup_string(arr.dump());
  });
}

}  // extern "C"
