#include <catch2/catch_amalgamated.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

namespace fs = std::filesystem;

namespace {

const char* kCli = DBRK_CLI_PATH;

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() / fs::path("dbrk_cli_test_" + std::to_string(::getpid()));
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
};

int run(const std::string& args) {
  std::string cmd = std::string(kCli) + " " + args + " >/dev/null 2>&1";
  int status = std::system(cmd.c_str());
  return WEXITSTATUS(status);
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write(const fs::path& p, const std::string& s) {
  std::ofstream out(p, std::ios::binary);
  out << s;
}

const char* kFarZeros = R"({"factors": [
  {"kind": "blaschke", "zero": ["2", "4"]},
  {"kind": "blaschke", "zero": ["-1", "3"]}
]})";

}  // namespace

TEST_CASE("anr subcommand emits a full matching table") {
  TempDir dir;
  auto out = dir.path / "anr.csv";
  REQUIRE(run("anr --n 5 --out " + out.string()) == 0);
  std::string csv = slurp(out);
  CHECK(csv.rfind("kind,n,r,s,value,reference,pass", 0) == 0);
  // every row ends in pass = 1
  std::istringstream lines(csv);
  std::string line;
  std::getline(lines, line);  // header
  int rows = 0;
  while (std::getline(lines, line)) {
    CHECK(line.substr(line.size() - 2) == ",1");
    ++rows;
  }
  // 2n+2 anr rows per n plus remark rows
  CHECK(rows > 40);
  // summary sits next to the table
  CHECK(fs::exists(dir.path / "anr.summary.json"));
  CHECK(slurp(dir.path / "anr.summary.json").find("\"pass\": true") != std::string::npos);
}

TEST_CASE("plan run: outputs, exit code, determinism") {
  TempDir dir;
  write(dir.path / "b.json", kFarZeros);
  std::string plan = R"({
    "function_file": ")" + (dir.path / "b.json").string() + R"(",
    "jobs": 2,
    "tasks": [
      {"kind": "anr", "n": 4, "out": ")" + (dir.path / "anr.csv").string() + R"("},
      {"kind": "converge", "x0": "0", "n": 1, "exact": true, "out": ")" +
                     (dir.path / "conv.csv").string() + R"("},
      {"kind": "condition", "x0": "0", "n": 0, "out": ")" + (dir.path / "cond.csv").string() +
                     R"("}
    ]
  })";
  write(dir.path / "plan.json", plan);
  REQUIRE(run("run " + (dir.path / "plan.json").string()) == 0);
  std::string first_anr = slurp(dir.path / "anr.csv");
  std::string first_conv = slurp(dir.path / "conv.csv");
  CHECK(!first_anr.empty());
  CHECK(!first_conv.empty());
  REQUIRE(run("run " + (dir.path / "plan.json").string()) == 0);
  CHECK(slurp(dir.path / "anr.csv") == first_anr);    // byte-for-byte
  CHECK(slurp(dir.path / "conv.csv") == first_conv);  // byte-for-byte
}

TEST_CASE("report-only tasks never fail the run") {
  TempDir dir;
  // a point mass sitting exactly at x0: finite = false, but exit stays 0
  write(dir.path / "atom.json",
        R"({"factors": [{"kind": "point_mass", "location": "0", "mass": "1"}]})");
  auto out = dir.path / "cond.csv";
  REQUIRE(run("condition --config " + (dir.path / "atom.json").string() + " --x0 0 --n 0 --out " +
              out.string()) == 0);
  std::string csv = slurp(out);
  CHECK(csv.find(",0,") != std::string::npos);  // finite column reads 0
  CHECK(csv.find("inf") != std::string::npos);
}

TEST_CASE("assertion failures exit 1") {
  TempDir dir;
  write(dir.path / "b.json", kFarZeros);
  // an impossibly tight tolerance forces a representation failure
  CHECK(run("represent --config " + (dir.path / "b.json").string() +
            " --w 0,1 --m 0 --omega 0,2 --n 0 --tol 1e-30 --out " +
            (dir.path / "r.csv").string()) == 1);
}

TEST_CASE("usage and parse errors exit 2") {
  TempDir dir;
  CHECK(run("definitely-not-a-command") == 2);
  CHECK(run("anr") == 2);  // missing required --n
  write(dir.path / "broken.json", "{ not json");
  CHECK(run("run " + (dir.path / "broken.json").string()) == 2);
  write(dir.path / "badfn.json", R"({"factors": [{"kind": "wat"}]})");
  CHECK(run("condition --config " + (dir.path / "badfn.json").string() + " --x0 0 --n 0 --out " +
            (dir.path / "c.csv").string()) == 2);
}

TEST_CASE("exact converge subcommand meets the trailing bound") {
  TempDir dir;
  write(dir.path / "b.json", kFarZeros);
  auto out = dir.path / "conv.csv";
  REQUIRE(run("converge --config " + (dir.path / "b.json").string() +
              " --x0 0 --n 1 --exact --out " + out.string()) == 0);
  std::string csv = slurp(out);
  CHECK(csv.find("1/4096") != std::string::npos);  // k = 12 row present
}
