#include <sys/wait.h>

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "doctest.h"

namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("qlu_cli_test_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write(const fs::path& p, const std::string& text) { std::ofstream(p) << text; }

int qlu(const std::string& args, const fs::path& log) {
  const std::string cmd = std::string(QLU_CLI_PATH) + " " + args + " > " + log.string() + " 2>&1";
  const int rc = std::system(cmd.c_str());
  return WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
}

std::vector<int> read_labels(const fs::path& p) {
  std::ifstream in(p);
  std::string line;
  std::getline(in, line);
  std::vector<int> out;
  while (std::getline(in, line)) out.push_back(std::stoi(line.substr(line.find(',') + 1)));
  return out;
}

bool same_grouping(const std::vector<int>& a, const std::vector<int>& b) {
  if (a.size() != b.size()) return false;
  std::map<int, int> ab, ba;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (ab.emplace(a[i], b[i]).first->second != b[i]) return false;
    if (ba.emplace(b[i], a[i]).first->second != a[i]) return false;
  }
  return true;
}

const char* kTinyConfig =
    "task = synthetic\n"
    "n = 12\n"
    "omega = 0.15\n"
    "hidden = 1\n"
    "outputs = 4\n"
    "iterations = 20\n"
    "particles = 2\n"
    "window = 20\n"
    "seeds = 3..4\n";

}  // namespace

TEST_SUITE("cli") {
  TEST_CASE("run writes the full bundle and metrics recomputes it") {
    const fs::path dir = scratch("bundle");
    write(dir / "tiny.cfg", kTinyConfig);
    REQUIRE(qlu("run --config " + (dir / "tiny.cfg").string() + " --out " + (dir / "out").string(), dir / "log") == 0);
    const fs::path out = dir / "out";
    for (const char* f : {"manifest", "metrics.csv", "consensus.csv", "consensus_partition.csv", "runs/0/partition.csv",
                          "runs/0/trace.log", "runs/1/partition.csv", "runs/1/trace.log"})
      CHECK_MESSAGE(fs::exists(out / f), f);
    CHECK_FALSE(fs::exists(out / "runs/2"));
    CHECK(read_labels(out / "runs/0/partition.csv").size() == 12);
    CHECK(slurp(out / "manifest").find("seeds=3,4\n") != std::string::npos);

    const std::string metrics = slurp(out / "metrics.csv");
    CHECK(metrics.rfind("run,metric,value\n", 0) == 0);
    CHECK(metrics.find("consensus,ri,") != std::string::npos);
    CHECK(metrics.find("all,stability,") != std::string::npos);

    const std::string grid = slurp(out / "consensus.csv");
    CHECK(std::count(grid.begin(), grid.end(), '\n') == 12);

    fs::remove(out / "metrics.csv");
    REQUIRE(qlu("metrics --out " + out.string(), dir / "log2") == 0);
    CHECK(slurp(out / "metrics.csv") == metrics);
  }

  TEST_CASE("a single run is its own consensus") {
    const fs::path dir = scratch("single");
    write(dir / "tiny.cfg", kTinyConfig);
    REQUIRE(qlu("run --config " + (dir / "tiny.cfg").string() + " --repeats 1 --out " + (dir / "out").string(),
                dir / "log") == 0);
    CHECK_FALSE(fs::exists(dir / "out/runs/1"));
    CHECK(same_grouping(read_labels(dir / "out/runs/0/partition.csv"),
                        read_labels(dir / "out/consensus_partition.csv")));
  }

  TEST_CASE("bundles are reproducible and independent of the thread count") {
    const fs::path dir = scratch("repro");
    write(dir / "tiny.cfg", kTinyConfig);
    const std::string cfg = "--config " + (dir / "tiny.cfg").string();
    REQUIRE(qlu("run " + cfg + " --threads 1 --out " + (dir / "a").string(), dir / "log") == 0);
    REQUIRE(qlu("run " + cfg + " --threads 2 --out " + (dir / "b").string(), dir / "log") == 0);
    int compared = 0;
    for (const auto& entry : fs::recursive_directory_iterator(dir / "a")) {
      if (!entry.is_regular_file() || entry.path().filename() == "manifest") continue;
      const fs::path rel = fs::relative(entry.path(), dir / "a");
      CHECK_MESSAGE(slurp(entry.path()) == slurp(dir / "b" / rel), rel.string());
      ++compared;
    }
    CHECK(compared >= 8);
  }

  TEST_CASE("seeds from the command line override the config") {
    const fs::path dir = scratch("seeds");
    write(dir / "tiny.cfg", kTinyConfig);
    REQUIRE(qlu("run --config " + (dir / "tiny.cfg").string() + " --seeds 9 --out " + (dir / "out").string(),
                dir / "log") == 0);
    CHECK(slurp(dir / "out/manifest").find("seeds=9\n") != std::string::npos);
    CHECK_FALSE(fs::exists(dir / "out/runs/1"));
  }

  TEST_CASE("unknown config keys are rejected by name") {
    const fs::path dir = scratch("badkey");
    write(dir / "bad.cfg", std::string(kTinyConfig) + "particels = 3\n");
    CHECK(qlu("run --config " + (dir / "bad.cfg").string() + " --out " + (dir / "out").string(), dir / "log") == 2);
    CHECK(slurp(dir / "log").find("particels") != std::string::npos);
    CHECK_FALSE(fs::exists(dir / "out/manifest"));
  }

  TEST_CASE("baseline writes a k-means partition") {
    const fs::path dir = scratch("baseline");
    write(dir / "tiny.cfg", kTinyConfig);
    REQUIRE(qlu("baseline --config " + (dir / "tiny.cfg").string() + " --out " + (dir / "out").string(), dir / "log") ==
            0);
    CHECK(read_labels(dir / "out/kmeans_partition.csv").size() == 12);
    CHECK(fs::exists(dir / "out/baseline_metrics.csv"));
  }

  TEST_CASE("sweep runs one bundle per value") {
    const fs::path dir = scratch("sweep");
    write(dir / "tiny.cfg", std::string(kTinyConfig) + "sweep_axis = omega\nsweep_values = 0.1,0.2\n");
    REQUIRE(qlu("sweep --config " + (dir / "tiny.cfg").string() + " --repeats 1 --out " + (dir / "out").string(),
                dir / "log") == 0);
    const std::string table = slurp(dir / "out/sweep.csv");
    CHECK(table.find("omega,0.1,") != std::string::npos);
    CHECK(table.find("omega,0.2,") != std::string::npos);
  }
}
