#include <doctest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "dfsim/cli/config.hpp"
#include "dfsim/cli/presets.hpp"
#include "dfsim/errors.hpp"
#include "dfsim/io.hpp"
#include "dfsim/state_spec.hpp"

using namespace dfsim;
using dfsim::cli::Config;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const auto dir = fs::temp_directory_path() / ("dfsim-cli-test-" + std::to_string(::getpid())) / name;
  fs::remove_all(dir);
  fs::create_directories(dir.parent_path());
  return dir;
}

int run_sim(const std::string& args, const fs::path& log) {
  const std::string cmd = std::string("\"") + SIM_EXECUTABLE + "\" " + args + " > \"" + log.string() + "\" 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

std::vector<double> csv_column(const fs::path& p, const std::string& name) {
  std::ifstream in(p);
  std::string line;
  std::getline(in, line);
  std::vector<std::string> header;
  for (std::stringstream s(line); std::getline(s, line, ',');) header.push_back(line);
  const auto col = static_cast<std::size_t>(std::find(header.begin(), header.end(), name) - header.begin());
  REQUIRE(col < header.size());
  std::vector<double> values;
  while (std::getline(in, line)) {
    std::stringstream s(line);
    std::string cell;
    for (std::size_t i = 0; i <= col; ++i) std::getline(s, cell, ',');
    values.push_back(parse_real(cell));
  }
  return values;
}

}  // namespace

TEST_CASE("config parsing") {
  const auto cfg = Config::parse(
      "# scenario\n"
      "preset = eta-vacuum\n"
      "n = 4   # trailing\n"
      "q = [0.5, -0.5+0.1j, 0, 0]\n"
      "flag = true\n"
      "\n");
  CHECK(cfg.require_string("preset") == "eta-vacuum");
  CHECK(cfg.get_int("n", 0) == 4);
  CHECK(cfg.get_bool("flag", false));
  CHECK(cfg.get_real("missing", 2.5) == 2.5);
  const auto q = cfg.get_complex_list("q");
  REQUIRE(q.size() == 4);
  CHECK(q[1] == cplx(-0.5, 0.1));
  CHECK(cfg.unused_keys().empty());

  CHECK_THROWS_AS((void)Config::parse("a = 1\na = 2\n"), ValidationError);
  CHECK_THROWS_AS((void)Config::parse("just words\n"), ValidationError);
  CHECK_THROWS_AS((void)cfg.require_string("absent"), ValidationError);

  auto more = Config::parse("x = 1");
  more.set("x=3");
  more.set("y", "hello");
  CHECK(more.get_int("x", 0) == 3);
  CHECK_THROWS_AS(more.set("novalue"), ValidationError);
  CHECK(more.unused_keys() == std::vector<std::string>{"y"});
  CHECK_THROWS_AS((void)more.get_int("y", 0), ValidationError);
}

TEST_CASE("CSV formatting") {
  CHECK(format_double(0.1) == "0.1");
  CHECK(format_double(1.0) == "1");
  CHECK(parse_real(format_double(1.0 / 3.0)) == 1.0 / 3.0);
  std::ostringstream out;
  write_csv(out, {0.0, 0.5}, {{"a", {1.0, 2.0}}, {"b", {-1e-20, 3.5}}});
  CHECK(out.str() == "t,a,b\n0,1,-1e-20\n0.5,2,3.5\n");
}

TEST_CASE("preset listing") {
  const auto text = cli::list_presets();
  for (const char* name : {"eta-vacuum", "w-vacuum", "eta-absd-compare", "two-atom-squeezed", "eta3-squeezed",
                           "eta4-squeezed", "memory-cycle", "full-cavity-reduction", "dfs-scan"}) {
    CHECK(text.find(name) != std::string::npos);
  }
  std::istringstream lines(text);
  std::string line;
  bool eta4 = false, dfs = false;
  while (std::getline(lines, line)) {
    if (line.rfind("eta4-squeezed", 0) == 0) eta4 = line.find("replacing |00⟩ → s") != std::string::npos;
    if (line.rfind("dfs-scan", 0) == 0) dfs = line.find("dimension n-1") != std::string::npos;
  }
  CHECK(eta4);
  CHECK(dfs);
  CHECK(cli::list_presets() == text);
  CHECK_THROWS_AS((void)cli::run_preset("nope", Config{}), UsageError);
}

TEST_CASE("preset results") {
  auto cfg = Config::parse("N = 1");
  const auto sst = cli::run_preset("two-atom-squeezed", cfg);
  CHECK(sst.report["fidelity_to_SST"].get<double>() >= 1.0 - 1e-6);

  const auto w = cli::run_preset("w-vacuum", Config::parse("n = 3"));
  CHECK(w.report["final_ground_population"].get<double>() > 1.0 - 1e-9);

  const auto eta = cli::run_preset("eta-vacuum", Config::parse("n = 4\nq = zsa-random\nseed = 7"));
  for (const auto& c : eta.columns) {
    if (c.name != "fidelity_initial") continue;
    for (double f : c.values) CHECK(std::abs(f - 1.0) <= 1e-9);
  }
}

TEST_CASE("every preset runs at default size") {
  for (const auto& info : cli::preset_catalog()) {
    CAPTURE(info.name);
    const auto out = cli::run_preset(info.name, Config{});
    CHECK(!out.times.empty());
    for (const auto& c : out.columns) CHECK(c.values.size() == out.times.size());
    CHECK(out.report.is_object());
  }
}

TEST_CASE("sim executable") {
  const auto dir = scratch("exe");
  fs::create_directories(dir);
  const auto log = dir / "log.txt";

  CHECK(run_sim("list", log) == 0);
  CHECK(slurp(log) == cli::list_presets());
  CHECK(run_sim("--help", log) == 0);
  CHECK(run_sim("", log) == 2);
  CHECK(run_sim("preset nope", log) == 2);
  CHECK(run_sim("preset eta-vacuum n=1", log) == 2);
  CHECK(run_sim("preset eta-vacuum bogus=1", log) == 2);
  CHECK(run_sim("run \"" + (dir / "missing.cfg").string() + "\"", log) == 2);

  const auto a = dir / "a";
  const auto b = dir / "b";
  REQUIRE(run_sim("preset eta-vacuum n=4 q=zsa-random seed=7 out=\"" + a.string() + "\"", log) == 0);
  for (const char* f : {"trajectory.csv", "report.json", "manifest.json"}) CHECK(fs::exists(a / f));
  const auto csv = slurp(a / "trajectory.csv");
  CHECK(csv.rfind("t,", 0) == 0);
  CHECK(csv.find('\r') == std::string::npos);
  for (double f : csv_column(a / "trajectory.csv", "fidelity_initial")) CHECK(std::abs(f - 1.0) <= 1e-9);

  // The same scenario from a config file is bit-identical.
  const auto cfg_path = dir / "eta.cfg";
  std::ofstream(cfg_path) << "# repeat\npreset = eta-vacuum\nn = 4\nq = zsa-random\nseed = 7\nout = " << b.string()
                          << "\n";
  REQUIRE(run_sim("run \"" + cfg_path.string() + "\"", log) == 0);
  CHECK(slurp(b / "trajectory.csv") == csv);
  CHECK(slurp(b / "report.json") == slurp(a / "report.json"));

  const auto manifest = nlohmann::json::parse(slurp(a / "manifest.json"));
  CHECK(manifest["preset"] == "eta-vacuum");
  CHECK(manifest["version"] == cli::kVersion);
  CHECK(manifest["parameters"]["seed"] == "7");

  // A steady-state search with too little time is a numerical failure.
  CHECK(run_sim("preset two-atom-squeezed steady_max_time=0.5 out=\"" + (dir / "c").string() + "\"", log) == 3);
  fs::remove_all(dir.parent_path());
}
