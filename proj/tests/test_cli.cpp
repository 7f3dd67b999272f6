#include <doctest.h>

#include <sys/wait.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

namespace fs = std::filesystem;

namespace {

struct Run {
  int code;
  std::string out;
};

Run run(const std::string& args) {
  std::string cmd = std::string(ZWM_BIN) + " " + args + " 2>/dev/null";
  FILE* p = popen(cmd.c_str(), "r");
  REQUIRE(p != nullptr);
  std::string out;
  char buf[4096];
  std::size_t n;
  while ((n = std::fread(buf, 1, sizeof buf, p)) > 0) out.append(buf, n);
  int st = pclose(p);
  return {WIFEXITED(st) ? WEXITSTATUS(st) : -1, out};
}

std::string slurp(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  std::stringstream s;
  s << f.rdbuf();
  return s.str();
}

fs::path scratch() {
  auto d = fs::temp_directory_path() / "zwm_test_cli";
  fs::remove_all(d);
  fs::create_directories(d);
  return d;
}

}  // namespace

TEST_CASE("formula table shape") {
  auto r = run("formula table --a-grid 0.1:4:0.1");
  CHECK(r.code == 0);
  std::istringstream in(r.out);
  std::string line;
  int rows = -1;
  while (std::getline(in, line)) {
    ++rows;
    CHECK(std::count(line.begin(), line.end(), ',') == 9);
  }
  CHECK(rows == 40);
}

TEST_CASE("zero cache is byte-identical") {
  auto d = scratch();
  std::string common = "zeros find --range 10:1000 --cache-dir " + (d / "cache").string();
  auto a = run(common + " --output " + (d / "a.txt").string());
  auto b = run(common + " --output " + (d / "b.txt").string());
  CHECK(a.code == 0);
  CHECK(b.code == 0);
  CHECK(slurp(d / "a.txt") == slurp(d / "b.txt"));
  CHECK(fs::exists(d / "cache" / "zeros_10_1000_1e-09.txt"));
  CHECK(slurp(d / "a.txt").rfind("# zwm-zeros v1 10 1000 649 1\n", 0) == 0);
}

TEST_CASE("exit codes") {
  CHECK(run("moment weighted --T 40000").code == 1);
  CHECK(run("formula table --a-grid nonsense").code == 1);
  CHECK(run("no-such-command").code == 1);
  auto bad = run("report --only 1 --only 2 --perturb f1=1.001");
  CHECK(bad.code == 2);
  CHECK(bad.out.find("\"1 algebraic identities\"") != std::string::npos);
  auto good = run("report --only 1 --only 2 --only 3");
  CHECK(good.code == 0);
  CHECK(good.out == run("report --only 1 --only 2 --only 3").out);
}

TEST_CASE("config file with flag precedence") {
  auto d = scratch();
  {
    std::ofstream f(d / "cfg.ini");
    f << "a-grid = 0.5:1:0.5\n";
  }
  auto r = run("formula table --config " + (d / "cfg.ini").string());
  CHECK(std::count(r.out.begin(), r.out.end(), '\n') == 3);
  auto o = run("formula table --config " + (d / "cfg.ini").string() + " --a-grid 1:1:1");
  CHECK(std::count(o.out.begin(), o.out.end(), '\n') == 2);
}
