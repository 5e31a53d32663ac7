#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "qdcert/json_io.hpp"
#include "qdcert/orfanos.hpp"

namespace qdcert {

inline constexpr const char* kReportSchema = "qdcert/1";
inline constexpr const char* kVersion = "0.1.0";

struct Caps {
  std::uint64_t max_basis = 100'000;
  std::size_t dense_cap = 2000;
  std::uint64_t enum_cap = kDefaultEnumCap;
  std::int64_t n_cap = kDefaultNCap;
};

struct CertificateConfig {
  int d = 3;
  ThetaSpec theta;
  std::vector<UniTri> generators;
  double epsilon = 1.0;
  // used when auto_n is false; may be empty
  std::vector<std::int64_t> n_list;
  bool auto_n = true;
  Caps caps;
  std::uint64_t seed = 0;
  NormMethod norm_method = NormMethod::power;
  // extra pointwise-defect probes on top of the defaults
  std::vector<UniTri> probes;
  std::string out_json;
  std::string out_csv;

  // largest absolute entry over the generators
  Int p() const;
};

CertificateConfig config_from_json(const Json& j);
CertificateConfig load_config(const std::string& path);
// Output paths are not echoed, so reports do not depend on where they are written.
Json to_json(const CertificateConfig& cfg);

struct GeneratorRecord {
  std::size_t index = 0;
  UniTri element{2};
  double lambda_comm_norm = 0.0;
  double D_comm_norm = 0.0;
  double twisted_comm_norm = 0.0;
  bool norms_converged = true;
  double folner_ratio = 0.0;
};

struct ProbeRecord {
  std::string label;
  UniTri element{2};
  double defect = 0.0;
};

struct NRecord {
  std::int64_t n = 0;
  std::uint64_t size_kn = 0;
  std::uint64_t size_fn = 0;
  std::int64_t m = 0;
  bool property4_verified = false;
  std::uint64_t support_size = 0;
  double delta_n = 0.0;
  std::size_t witness_generator = 0;
  UniTri witness_alpha{2};
  UniTri witness_y{2};
  double analytic_bound = 0.0;
  double dist_theta_n = 0.0;
  bool qualifies = false;
  bool bound_satisfied = false;
  std::vector<GeneratorRecord> generators;
  std::vector<ProbeRecord> probes;
};

struct CertificateReport {
  CertificateConfig config;
  std::optional<NSelection> selection;
  std::vector<NRecord> records;
  std::vector<std::string> violations;
};

// The n values a run will certify, in increasing order.
std::vector<std::int64_t> plan_n_values(const CertificateConfig& cfg,
                                        std::optional<NSelection>* selection = nullptr);

NRecord certify_n(const CertificateConfig& cfg, const Theta& theta, std::int64_t n,
                  std::vector<std::string>& violations);
CertificateReport run_certificate(const CertificateConfig& cfg);

// Single-n deep dive: every norm by every feasible method plus the per-vector
// diagonal estimates.
Json norms_report(const CertificateConfig& cfg, std::int64_t n);

Json report_to_json(const CertificateReport& report);
CertificateReport report_from_json(const Json& j);
std::string report_to_csv(const CertificateReport& report);

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
};
CsvTable parse_csv(const std::string& text);

void write_text_file(const std::string& path, const std::string& text);
std::string read_text_file(const std::string& path);

}  // namespace qdcert
