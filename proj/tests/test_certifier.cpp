#include <cmath>
#include <filesystem>

#include "doctest.h"
#include "qdcert/certifier.hpp"
#include "qdcert/errors.hpp"

using namespace qdcert;

namespace {

const char* kGolden = R"({
  "d": 3,
  "theta": {"kind": "quadratic", "a": -1, "b": 1, "D": 5, "c": 2},
  "generators": [
    {"d": 3, "entries": [{"i": 1, "j": 2, "v": 1}]},
    {"d": 3, "entries": [{"i": 1, "j": 2, "v": -1}]},
    {"d": 3, "entries": [{"i": 2, "j": 3, "v": 1}]},
    {"d": 3, "entries": [{"i": 2, "j": 3, "v": -1}]}
  ],
  "epsilon": 10.0,
  "n_policy": [5, 13, 34, 89],
  "seed": 7
})";

CertificateConfig golden_config() { return config_from_json(Json::parse(kGolden)); }

CertificateConfig with(const std::function<void(Json&)>& edit) {
  Json j = Json::parse(kGolden);
  edit(j);
  return config_from_json(j);
}

std::filesystem::path temp_path(const std::string& name) {
  return std::filesystem::temp_directory_path() / ("qdcert_test_" + name);
}

}  // namespace

TEST_CASE("config parsing") {
  const CertificateConfig cfg = golden_config();
  CHECK(cfg.d == 3);
  CHECK(cfg.generators.size() == 4);
  CHECK(cfg.p() == 1);
  CHECK_FALSE(cfg.auto_n);
  CHECK(cfg.n_list == std::vector<std::int64_t>{5, 13, 34, 89});
  CHECK(cfg.seed == 7);
  CHECK(cfg.norm_method == NormMethod::power);

  CHECK(with([](Json& j) { j.erase("n_policy"); }).auto_n);
  CHECK(with([](Json& j) { j["generators"][0]["entries"][0]["v"] = -17; }).p() == 17);

  CHECK_THROWS_AS(with([](Json& j) { j["generators"] = Json::array(); }), ConfigError);
  CHECK_THROWS_AS(with([](Json& j) { j["epsilon"] = 0.0; }), ConfigError);
  CHECK_THROWS_AS(with([](Json& j) { j["epsilon"] = "big"; }), ConfigError);
  CHECK_THROWS_AS(with([](Json& j) { j["n_policy"] = "sometimes"; }), ConfigError);
  CHECK_THROWS_AS(with([](Json& j) { j["n_policy"] = {5, 1}; }), ConfigError);
  CHECK_THROWS_AS(with([](Json& j) { j["norm_method"] = "lanczos"; }), ConfigError);
  CHECK_THROWS_AS(with([](Json& j) { j["generators"][0]["d"] = 4; }), ConfigError);
  CHECK_THROWS_AS(with([](Json& j) { j["generators"][0]["entries"][0]["i"] = 3; }), ConfigError);
  CHECK_THROWS_AS(with([](Json& j) { j["theta"] = {{"kind", "rational"}, {"p", 3}, {"q", 2}}; }),
                  ConfigError);
  CHECK_THROWS_AS(with([](Json& j) { j.erase("d"); }), ConfigError);
  CHECK_THROWS_AS(load_config(temp_path("missing.json").string()), ConfigError);
}

TEST_CASE("group elements and theta round-trip through JSON") {
  UniTri a(4);
  a.at(1, 2) = 3;
  a.at(2, 4) = -5;
  a.at(1, 4) = Int("123456789012345678901234567890");
  const Json j = to_json(a);
  CHECK(j.at("entries").size() == 3);
  CHECK(unitri_from_json(j) == a);
  CHECK(j.at("entries")[1].at("v").is_string());

  for (const ThetaSpec& t : {ThetaSpec::golden(), ThetaSpec::rational(1, 3), ThetaSpec::decimal_literal("0.7390851332")})
    CHECK(canonical_dump(to_json(theta_from_json(to_json(t)))) == canonical_dump(to_json(t)));
}

TEST_CASE("canonical number formatting") {
  CHECK(format_double(1.0) == "1.0");
  CHECK(format_double(0.1) == "0.10000000000000001");
  CHECK(format_double(1e-20) == "9.9999999999999995e-21");
  CHECK_THROWS_AS(format_double(std::nan("")), InvariantViolation);
  CHECK(canonical_dump(Json{{"b", 2.0}, {"a", {1, 2.5}}}) == R"({"a":[1,2.5],"b":2.0})");
}

TEST_CASE("golden instance report") {
  const CertificateReport report = run_certificate(golden_config());
  REQUIRE(report.records.size() == 4);
  CHECK(report.violations.empty());
  const Theta theta(golden_config().theta);
  double previous = 10.0;
  for (const auto& r : report.records) {
    CAPTURE(r.n);
    CHECK(r.delta_n <= previous);
    previous = r.delta_n;
    CHECK(r.qualifies);
    CHECK(r.bound_satisfied == (r.delta_n <= r.analytic_bound));
    CHECK(r.property4_verified);
    REQUIRE(r.generators.size() == 4);
    for (const auto& g : r.generators) {
      CHECK(g.D_comm_norm <= 2 * r.delta_n + 1e-9);
      CHECK(g.norms_converged);
    }
    // Delta_n is reproduced from the stored witness
    const UniTri& z = report.config.generators[r.witness_generator];
    const double again = std::abs(psi(theta, z, QuotientElt(r.witness_alpha)) -
                                  psi(theta, z, QuotientElt(r.witness_y)));
    CHECK(std::abs(again - r.delta_n) < 1e-14);
    const Int k = psi_exponent(z, QuotientElt(r.witness_alpha)) - psi_exponent(z, QuotientElt(r.witness_y));
    CHECK(theta.phase_gap(k) == r.delta_n);
    CHECK(reduce_to_Kn(QuotientElt(r.witness_alpha), r.n) == QuotientElt(r.witness_y));

    REQUIRE(r.probes.size() == 6);
    CHECK(r.probes[0].label == "identity");
    CHECK(r.probes[0].defect < 1e-12);
    CHECK(r.probes[5].label == "far");
    CHECK(std::abs(r.probes[5].defect - 1.0) < 1e-12);
  }
}

TEST_CASE("trivial character and trivial generators") {
  const CertificateReport zero =
      run_certificate(with([](Json& j) { j["theta"] = {{"kind", "rational"}, {"p", 0}, {"q", 1}}; }));
  for (const auto& r : zero.records) {
    CHECK(r.delta_n == 0.0);
    for (const auto& g : r.generators) {
      CHECK(g.D_comm_norm < 1e-12);
      CHECK(g.twisted_comm_norm == doctest::Approx(g.lambda_comm_norm).epsilon(1e-12));
    }
  }
  const CertificateReport ident =
      run_certificate(with([](Json& j) { j["generators"] = {{{"d", 3}, {"entries", Json::array()}}}; }));
  for (const auto& r : ident.records) {
    CHECK(r.delta_n == 0.0);
    for (const auto& g : r.generators) {
      CHECK(g.lambda_comm_norm < 1e-12);
      CHECK(g.D_comm_norm < 1e-12);
      CHECK(g.twisted_comm_norm < 1e-12);
      CHECK(g.folner_ratio == 0.0);
    }
  }
}

TEST_CASE("empty n list and CSV shape") {
  const CertificateReport empty = run_certificate(with([](Json& j) { j["n_policy"] = Json::array(); }));
  CHECK(empty.records.empty());
  const Json ej = report_to_json(empty);
  CHECK(ej.at("records").empty());
  CHECK(ej.at("schema") == "qdcert/1");
  CHECK(parse_csv(report_to_csv(empty)).rows.empty());

  const CertificateReport report = run_certificate(golden_config());
  const CsvTable table = parse_csv(report_to_csv(report));
  CHECK(table.rows.size() == 16);
  CHECK(table.header.size() == 16);
  CHECK(table.header.front() == "n");
  CHECK(table.header.back() == "folner_ratio");
}

TEST_CASE("JSON round trip is byte-identical") {
  const CertificateReport report = run_certificate(golden_config());
  const std::string once = canonical_dump(report_to_json(report));
  const CertificateReport back = report_from_json(Json::parse(once));
  CHECK(canonical_dump(report_to_json(back)) == once);
  CHECK(back.records.size() == report.records.size());
  CHECK(back.records[2].delta_n == report.records[2].delta_n);
  CHECK_THROWS_AS(report_from_json(Json{{"schema", "other/9"}}), ConfigError);
}

TEST_CASE("CSV values read back within 1e-15") {
  const CertificateReport report = run_certificate(golden_config());
  const CsvTable table = parse_csv(report_to_csv(report));
  std::size_t row = 0;
  for (const auto& r : report.records)
    for (const auto& g : r.generators) {
      const auto& cells = table.rows[row++];
      CHECK(std::stoll(cells[0]) == r.n);
      CHECK(std::abs(std::stod(cells[5]) - r.delta_n) <= 1e-15);
      CHECK(std::abs(std::stod(cells[11]) - g.lambda_comm_norm) <= 1e-15);
      CHECK(std::abs(std::stod(cells[12]) - g.D_comm_norm) <= 1e-15);
      CHECK(std::abs(std::stod(cells[13]) - g.twisted_comm_norm) <= 1e-15);
      CHECK(std::abs(std::stod(cells[15]) - g.folner_ratio) <= 1e-15);
      CHECK(cells[10] == to_string(g.element));
    }
  CHECK_THROWS_AS(parse_csv("a,b\n1,2,3\n"), ConfigError);
}

TEST_CASE("reports are deterministic") {
  const std::string a = canonical_dump(report_to_json(run_certificate(golden_config())));
  setenv("QDCERT_THREADS", "2", 1);
  const std::string b = canonical_dump(report_to_json(run_certificate(golden_config())));
  unsetenv("QDCERT_THREADS");
  CHECK(a == b);
}

TEST_CASE("automatic n policy") {
  const CertificateConfig cfg = with([](Json& j) {
    j.erase("n_policy");
    j["caps"] = {{"max_basis", 8000}};
  });
  std::optional<NSelection> sel;
  const auto ns = plan_n_values(cfg, &sel);
  REQUIRE(sel);
  CHECK(sel->n == 34);
  CHECK(ns == std::vector<std::int64_t>{34, 55, 89});

  const CertificateConfig third = with([](Json& j) {
    j.erase("n_policy");
    j["theta"] = {{"kind", "rational"}, {"p", 1}, {"q", 3}};
    j["caps"] = {{"max_basis", 20000}};
  });
  CHECK(plan_n_values(third) == std::vector<std::int64_t>{33, 66, 132});

  const CertificateReport report = run_certificate(cfg);
  REQUIRE(report.selection);
  CHECK(report_to_json(report).at("n_selection").at("n") == 34);
}

TEST_CASE("caps name the offending n") {
  const CertificateConfig cfg = with([](Json& j) { j["caps"] = {{"max_basis", 1000}}; });
  try {
    run_certificate(cfg);
    FAIL("expected a cap error");
  } catch (const CapExceeded& e) {
    CHECK(std::string(e.what()).find("n=34") != std::string::npos);
  }
  const CertificateConfig dense = with([](Json& j) {
    j["norm_method"] = "dense";
    j["caps"] = {{"dense_cap", 50}};
  });
  CHECK_THROWS_AS(run_certificate(dense), CapExceeded);
}

TEST_CASE("files") {
  const auto path = temp_path("report.json");
  write_text_file(path.string(), "{}");
  CHECK(read_text_file(path.string()) == "{}");
  std::filesystem::remove(path);
  CHECK_THROWS_AS(write_text_file("/nonexistent-dir/x.json", "{}"), std::runtime_error);
}

TEST_CASE("norms deep dive") {
  const Json j = norms_report(golden_config(), 5);
  CHECK(j.at("rank") == 25);
  for (const auto& g : j.at("generators")) {
    for (const char* kind : {"lambda", "D", "twisted"}) {
      CHECK(g.at(kind).at("power_dense_gap").get<double>() <= 1e-6);
    }
    CHECK(g.at("max_diagonal_vector_defect").get<double>() <= j.at("delta_n").get<double>() + 1e-15);
  }
}
