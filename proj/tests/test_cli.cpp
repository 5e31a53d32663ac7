#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <sys/wait.h>

#include "doctest.h"

namespace fs = std::filesystem;

namespace {

int run(const std::string& args, std::string* out = nullptr) {
  const fs::path capture = fs::temp_directory_path() / "qdcert_cli_stdout.txt";
  const std::string cmd = std::string(QDCERT_CLI) + " " + args + " > " + capture.string() + " 2>/dev/null";
  const int status = std::system(cmd.c_str());
  if (out) {
    std::ifstream in(capture);
    std::stringstream ss;
    ss << in.rdbuf();
    *out = ss.str();
  }
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

fs::path write_config(const std::string& name, const std::string& text) {
  const fs::path p = fs::temp_directory_path() / name;
  std::ofstream(p) << text;
  return p;
}

const std::string kConfig = R"({
  "d": 3,
  "theta": {"kind": "quadratic", "a": -1, "b": 1, "D": 5, "c": 2},
  "generators": [{"d": 3, "entries": [{"i": 1, "j": 2, "v": 1}]}],
  "epsilon": 10.0,
  "n_policy": [5],
  "seed": 1
})";

}  // namespace

TEST_CASE("folner subcommand") {
  std::string out;
  CHECK(run("folner --d 3 --n 5", &out) == 0);
  CHECK(out.find("\"size_Kn\":25") != std::string::npos);
  CHECK(run("folner --d 3 --n 1") == 2);
}

TEST_CASE("certify writes to stdout or files") {
  const fs::path cfg = write_config("qdcert_cli_cfg.json", kConfig);
  std::string out;
  CHECK(run("certify --config " + cfg.string(), &out) == 0);
  CHECK(out.find("\"records\":[{") != std::string::npos);

  const fs::path json = fs::temp_directory_path() / "qdcert_cli_report.json";
  const fs::path csv = fs::temp_directory_path() / "qdcert_cli_report.csv";
  fs::remove(json);
  fs::remove(csv);
  CHECK(run("certify --config " + cfg.string() + " --n 5 13 --seed 4 --out-json " + json.string() +
            " --out-csv " + csv.string(), &out) == 0);
  CHECK(out.empty());
  CHECK(fs::exists(json));
  CHECK(fs::exists(csv));
}

TEST_CASE("exit codes") {
  const fs::path bad = write_config("qdcert_cli_bad.json", R"({"d": 3, "epsilon": -1})");
  CHECK(run("certify --config " + bad.string()) == 2);
  CHECK(run("certify --config /nonexistent.json") == 2);
  CHECK(run("bogus") == 2);

  std::string capped = kConfig;
  capped.replace(capped.find("\"seed\""), 0, "\"caps\": {\"max_basis\": 10},\n  ");
  const fs::path cap = write_config("qdcert_cli_cap.json", capped);
  CHECK(run("certify --config " + cap.string()) == 3);

  const fs::path cfg = write_config("qdcert_cli_cfg.json", kConfig);
  CHECK(run("certify --config " + cfg.string() + " --out-json /nonexistent/dir/r.json") == 1);
}

TEST_CASE("selftest subcommand") {
  std::string out;
  CHECK(run("selftest", &out) == 0);
  CHECK(out.find("\"passed\":true") != std::string::npos);
}
