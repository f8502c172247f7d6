#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <sys/wait.h>

#include "cli/commands.hpp"
#include "cli/config.hpp"
#include "cli/csv.hpp"
#include "cli/manifest.hpp"

namespace fs = std::filesystem;
using namespace jury::cli;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result jurysim(std::vector<std::string> args) {
  args.insert(args.begin(), "jurysim");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

// Runs the installed binary so that exit codes go through a real process.
int exit_code_of(const std::string& args) {
  const std::string cmd = std::string(JURYSIM_BIN) + " " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

std::vector<std::vector<std::string>> parse_csv(const std::string& text) {
  std::vector<std::vector<std::string>> rows;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    std::vector<std::string> cells;
    std::istringstream ls(line);
    std::string cell;
    while (std::getline(ls, cell, ',')) cells.push_back(cell);
    rows.push_back(cells);
  }
  return rows;
}

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() / ("jurysim_test_" + std::to_string(::getpid()));
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  std::string file(const std::string& name) const { return (path / name).string(); }
};

}  // namespace

TEST_CASE("accuracy command") {
  CHECK(jurysim({"accuracy", "--experts", "0.6,0.6,0.6,0.7,0.9", "--log-odds"}).out == "0.900000\n");
  CHECK(jurysim({"accuracy", "--experts", "0.6,0.6,0.6,0.7,0.9", "--equal"}).out == "0.816480\n");
  CHECK(jurysim({"accuracy", "--experts", "0.7", "--weights", "1.0"}).out == "0.700000\n");
  CHECK(jurysim({"accuracy", "--experts", "0.6,0.6,0.6,0.7,0.9", "--judge", "0.6"}).out == "0.897840\n");
  CHECK(jurysim({"accuracy", "--experts", "0.6,0.6,0.6,0.7,0.9", "--judges", "1,1"}).out == "0.900000\n");

  const Result mc = jurysim({"accuracy", "--experts", "0.6,0.6,0.6,0.7,0.9", "--log-odds", "--mc", "100000",
                             "--seed", "5"});
  REQUIRE(mc.code == 0);
  double mean = 0, se = 0;
  unsigned long iters = 0;
  std::istringstream(mc.out) >> mean >> se >> iters;
  CHECK(iters == 100000);
  CHECK(std::abs(mean - 0.9) <= 3 * se + 1e-6);
  CHECK(jurysim({"accuracy", "--experts", "0.6,0.7,0.9", "--equal", "--mc", "1000", "--seed", "5", "--threads", "1"})
            .out == jurysim({"accuracy", "--experts", "0.6,0.7,0.9", "--equal", "--mc", "1000", "--seed", "5",
                             "--threads", "3"})
                        .out);

  SUBCASE("errors") {
    const Result two = jurysim({"accuracy", "--experts", "0.6", "--log-odds", "--equal"});
    CHECK(two.code == kExitConfig);
    CHECK(two.err.find("exactly one") != std::string::npos);
    CHECK(jurysim({"accuracy", "--experts", "0.6,1.2", "--equal"}).code == kExitDomain);
    CHECK(jurysim({"accuracy", "--experts", "0.6,abc", "--equal"}).code == kExitConfig);
    CHECK(jurysim({"accuracy", "--experts", "0.6,0.7", "--weights", "1"}).code == kExitConfig);
    CHECK(jurysim({"accuracy", "--experts", "0.6", "--equal", "--mode", "weird"}).code == kExitConfig);
    std::string many = "0.6";
    for (int i = 0; i < 22; ++i) many += ",0.6";
    CHECK(jurysim({"accuracy", "--experts", many, "--equal"}).code == kExitCapability);
  }
}

TEST_CASE("seed falls back to JURYSIM_SEED") {
  const std::vector<std::string> base = {"accuracy", "--experts", "0.6,0.7,0.9", "--equal", "--mc", "2000"};
  auto with_seed = base;
  with_seed.insert(with_seed.end(), {"--seed", "31"});
  ::setenv("JURYSIM_SEED", "31", 1);
  const std::string env = jurysim(base).out;
  ::unsetenv("JURYSIM_SEED");
  CHECK(env == jurysim(with_seed).out);
  CHECK(env != jurysim(base).out);
}

TEST_CASE("threshold command") {
  const Result r = jurysim({"threshold", "--experts", "0.6,0.6,0.6,0.7,0.9"});
  REQUIRE(r.code == 0);
  CHECK(std::abs(std::stod(r.out) - 0.962) <= 0.001);
  for (const char* e : {"0.8", "0.7,0.7"}) {
    const double t = std::stod(jurysim({"threshold", "--experts", e}).out);
    CHECK(t > 0.5);
    CHECK(t <= 0.5001);
  }
}

TEST_CASE("sweep command") {
  TempDir tmp;
  SUBCASE("fixed experts") {
    const Result r = jurysim({"sweep", "--experts", "0.6,0.6,0.6,0.7,0.9", "--grid", "0:1:0.01"});
    REQUIRE(r.code == 0);
    const auto rows = parse_csv(r.out);
    REQUIRE(rows.size() == 102);
    CHECK(rows[0] == std::vector<std::string>{"p_j", "accuracy_mean", "accuracy_stderr", "iterations"});
    CHECK(rows[61][0] == "0.6");
    CHECK(std::abs(std::stod(rows[61][1]) - 0.898) <= 0.001);
    CHECK(r.out.find('\r') == std::string::npos);
  }
  SUBCASE("drawn experts at full size") {
    const std::string out = tmp.file("u.csv");
    const Result r = jurysim({"sweep", "--dist", "uniform:0.001:0.999", "--m", "5", "--iters", "100000", "--seed",
                              "42", "--out", out});
    REQUIRE(r.code == 0);
    const auto rows = parse_csv(slurp(out));
    REQUIRE(rows.size() == 102);
    for (std::size_t i = 1; i < rows.size(); ++i) {
      CHECK(std::stod(rows[i][2]) <= 0.0016);
      CHECK(rows[i][3] == "100000");
    }
    CHECK(fs::exists(manifest_path_for(out)));
  }
  SUBCASE("determinism, thread counts and manifest round trip") {
    const std::string a = tmp.file("a.csv"), b = tmp.file("b.csv"), c = tmp.file("c.csv");
    const std::vector<std::string> args = {"sweep", "--dist", "truncnormal:0.5:0.2:0.001:0.999", "--iters", "3000",
                                           "--seed", "9", "--grid", "0:1:0.05"};
    auto run_to = [&](const std::string& path, const std::string& threads) {
      auto v = args;
      v.insert(v.end(), {"--out", path, "--threads", threads});
      return jurysim(v).code;
    };
    REQUIRE(run_to(a, "1") == 0);
    REQUIRE(run_to(b, "4") == 0);
    CHECK(slurp(a) == slurp(b));

    const RunManifest m = load_manifest(manifest_path_for(a));
    CHECK(m.command == "sweep");
    CHECK(m.seed == 9);
    CHECK(m.output_digest == fnv1a_hex(slurp(a)));
    REQUIRE(m.outputs.size() == 1);

    const Result replay = jurysim({"sweep", "--manifest", manifest_path_for(a), "--out", c});
    REQUIRE(replay.code == 0);
    CHECK(replay.err.empty());
    CHECK(slurp(c) == slurp(a));

    // Flags override the manifest.
    REQUIRE(jurysim({"sweep", "--manifest", manifest_path_for(a), "--seed", "10", "--out", c}).code == 0);
    CHECK(slurp(c) != slurp(a));
  }
  SUBCASE("config file") {
    const std::string cfg = tmp.file("sweep.cfg");
    std::ofstream(cfg) << "# five experts\nexperts = 0.6, 0.6, 0.6, 0.7, 0.9\n\ngrid = 0.5:0.7:0.1\n";
    const Result r = jurysim({"sweep", "--config", cfg});
    REQUIRE(r.code == 0);
    const auto rows = parse_csv(r.out);
    REQUIRE(rows.size() == 4);
    CHECK(rows[2][0] == "0.6");

    std::ofstream(cfg) << "experts = 0.6,0.7\ngrid = 0:1:0.1\nbogus = 1\n";
    const Result bad = jurysim({"sweep", "--config", cfg});
    CHECK(bad.code == kExitConfig);
    CHECK(bad.err.find(cfg + ":3") != std::string::npos);

    std::ofstream(cfg) << "experts = 0.6,0.7\ngrid 0:1:0.1\n";
    const Result syntax = jurysim({"sweep", "--config", cfg});
    CHECK(syntax.code == kExitConfig);
    CHECK(syntax.err.find(cfg + ":2") != std::string::npos);

    std::ofstream(cfg) << "dist = uniform:0.001:0.999\niters = ten\n";
    CHECK(jurysim({"sweep", "--config", cfg}).code == kExitConfig);
  }
}

TEST_CASE("partition command") {
  const Result r = jurysim({"partition", "--n", "5", "--dist", "uniform:0.001:0.999", "--k", "0,1,2,3,4", "--iters",
                            "20000", "--seed", "7"});
  REQUIRE(r.code == 0);
  const auto rows = parse_csv(r.out);
  REQUIRE(rows.size() == 6);
  CHECK(rows[0][0] == "k_judges");
  CHECK(rows[1][0] == "0");
  CHECK(rows[5][0] == "4");

  const Result texp = jurysim({"partition", "--n", "11", "--dist", "truncexp:1:0.501:0.999", "--k", "0,1",
                               "--iters", "3000", "--seed", "7"});
  REQUIRE(texp.code == 0);
  const auto t = parse_csv(texp.out);
  CHECK(std::stod(t[2][1]) > std::stod(t[1][1]));

  const Result bad = jurysim({"partition", "--n", "5", "--dist", "uniform:0.001:0.999", "--k", "5", "--iters", "10"});
  CHECK(bad.code == kExitConfig);
  CHECK(bad.err.find("at least one expert required") != std::string::npos);
}

TEST_CASE("exit codes through the process boundary") {
  CHECK(exit_code_of("accuracy --experts 0.6,0.7,0.9 --equal") == 0);
  CHECK(exit_code_of("accuracy --experts 0.6,1.5 --equal") == 3);
  CHECK(exit_code_of("partition --n 5 --dist uniform:0.001:0.999 --k 5 --iters 10") == 2);
  CHECK(exit_code_of("frobnicate") == 2);
  CHECK(exit_code_of("sweep --dist uniform:0.001:0.999 --m 23 --iters 1 --grid 0.5:0.5:0.1") == 4);
}
