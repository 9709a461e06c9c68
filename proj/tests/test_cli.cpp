#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "commands.hpp"

namespace fs = std::filesystem;

namespace {

struct Outcome {
  int code;
  std::string out;
  std::string err;
};

Outcome run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = v2xcal::cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

fs::path scratch(const std::string& name) {
  const auto dir = fs::temp_directory_path() / ("v2xcal_cli_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

// A short calibrated drive-by: one pass, 150 s.
fs::path small_dataset(const fs::path& dir) {
  const auto r = run({"synth", "--out", dir.string(), "--preset", "calibrated", "--set",
                      "synth.duration=150"});
  REQUIRE(r.code == 0);
  return dir;
}

}  // namespace

TEST_CASE("usage errors exit with 2") {
  CHECK(run({}).code == 2);
  CHECK(run({"frobnicate"}).code == 2);
  CHECK(run({"simulate"}).code == 2);
  CHECK(run({"pdr", "/nonexistent/log.csv"}).code == 2);
  const auto missing = run({"simulate", "/nonexistent/trace.csv"});
  CHECK(missing.code == 2);
  CHECK(missing.err.find("cannot read '/nonexistent/trace.csv'") != std::string::npos);
}

TEST_CASE("synth writes the dataset") {
  const auto dir = small_dataset(scratch("synth"));
  for (const char* f : {"trace.csv", "observed_pdr.csv", "delivery_log.csv", "planted.cfg"}) {
    CHECK(fs::exists(dir / f));
  }
  CHECK(slurp(dir / "planted.cfg").find("radio.tx_power = 30.16") != std::string::npos);
}

TEST_CASE("simulate, pdr and heatmap agree") {
  const auto dir = small_dataset(scratch("simulate"));
  const auto cfg = (dir / "planted.cfg").string();
  const auto sim = dir / "sim";
  const auto r = run({"simulate", (dir / "trace.csv").string(), "--config", cfg, "--out", sim.string()});
  REQUIRE(r.code == 0);
  CHECK(r.out.find("packets") != std::string::npos);
  // Replaying the planted configuration reproduces the synthetic observation.
  CHECK(slurp(sim / "pdr.csv") == slurp(dir / "observed_pdr.csv"));
  CHECK(slurp(sim / "delivery_log.csv") == slurp(dir / "delivery_log.csv"));

  const auto p = run({"pdr", (sim / "delivery_log.csv").string()});
  CHECK(p.code == 0);
  CHECK(p.out == slurp(sim / "pdr.csv"));
  const auto h = run({"heatmap", (sim / "delivery_log.csv").string()});
  CHECK(h.code == 0);
  CHECK(h.out == slurp(sim / "heatmap.csv"));

  const auto bsm = run({"pdr", (sim / "delivery_log.csv").string(), "--direction", "bsm"});
  CHECK(bsm.code == 0);
  CHECK(bsm.out != p.out);
  CHECK(run({"pdr", (sim / "delivery_log.csv").string(), "--direction", "up"}).code == 2);
  CHECK(run({"pdr", (sim / "delivery_log.csv").string(), "--bin-width", "0"}).code == 2);
}

TEST_CASE("simulate needs an rsu position") {
  const auto dir = small_dataset(scratch("norsu"));
  const auto r = run({"simulate", (dir / "trace.csv").string(), "--out", (dir / "x").string()});
  CHECK(r.code == 2);
  CHECK(r.err.find("RSU") != std::string::npos);
}

TEST_CASE("configuration errors exit with 2") {
  const auto dir = small_dataset(scratch("badcfg"));
  const auto trace = (dir / "trace.csv").string();
  const auto cfg = (dir / "planted.cfg").string();
  CHECK(run({"simulate", trace, "--config", cfg, "--set", "radio.tx_power=-1"}).code == 2);
  CHECK(run({"simulate", trace, "--config", cfg, "--set", "radio.bogus=1"}).code == 2);
  CHECK(run({"simulate", trace, "--config", cfg, "--set", "noequals"}).code == 2);
  CHECK(run({"simulate", trace, "--config", cfg, "--preset", "unheard-of"}).code == 2);
}

TEST_CASE("calibrate argument checks") {
  const auto dir = small_dataset(scratch("calargs"));
  const auto obs = (dir / "observed_pdr.csv").string();
  const auto trace = (dir / "trace.csv").string();
  const auto cfg = (dir / "planted.cfg").string();
  const auto out = (dir / "cal").string();
  CHECK(run({"calibrate", obs, trace, "--config", cfg, "--out", out, "--generations", "0"}).code == 2);
  CHECK(run({"calibrate", obs, trace, "--config", cfg, "--out", out, "--jobs", "0"}).code == 2);
  CHECK(run({"calibrate", obs, trace, "--config", cfg, "--out", out, "--freeze", "beta"}).code == 2);
  const auto geom = run({"calibrate", obs, trace, "--config", cfg, "--out", out, "--set", "scenario.bin_width=10",
                         "--generations", "1", "--population", "4"});
  CHECK(geom.code == 2);
  CHECK(geom.err.find("bin geometry mismatch") != std::string::npos);
}

TEST_CASE("calibrate output is reproducible across worker counts") {
  const auto dir = small_dataset(scratch("caldet"));
  const auto obs = (dir / "observed_pdr.csv").string();
  const auto trace = (dir / "trace.csv").string();
  const auto cfg = (dir / "planted.cfg").string();
  auto calibrate = [&](const std::string& name, const std::string& jobs) {
    const auto out = dir / name;
    const auto r = run({"calibrate", obs, trace, "--config", cfg, "--out", out.string(), "--generations", "2",
                        "--population", "6", "--seed", "3", "--jobs", jobs, "--verbose"});
    REQUIRE(r.code == 0);
    CHECK(r.err.find("generation 1: best rmse") != std::string::npos);
    return slurp(out / "history.csv") + slurp(out / "result.txt") + slurp(out / "best.cfg");
  };
  const auto a = calibrate("a", "1");
  CHECK(a == calibrate("b", "1"));
  CHECK(a == calibrate("c", "8"));
  CHECK(a.find("evaluations = 12") != std::string::npos);
}

TEST_CASE("freeze pins genes at the configured value") {
  const auto dir = small_dataset(scratch("freeze"));
  const auto out = dir / "cal";
  const auto r = run({"calibrate", (dir / "observed_pdr.csv").string(), (dir / "trace.csv").string(), "--config",
                      (dir / "planted.cfg").string(), "--out", out.string(), "--generations", "2", "--population",
                      "6", "--freeze", "alpha", "--freeze", "slow_model"});
  REQUIRE(r.code == 0);
  const auto result = slurp(out / "result.txt");
  CHECK(result.find("best.alpha = 1.51\n") != std::string::npos);
  CHECK(result.find("best.slow_model = lognormal\n") != std::string::npos);
}

TEST_CASE("field pdr from a trace") {
  const auto dir = small_dataset(scratch("field"));
  const auto r = run({"pdr", (dir / "trace.csv").string(), "--field", "--config", (dir / "planted.cfg").string(),
                      "--mode", "cadence"});
  CHECK(r.code == 0);
  CHECK(r.out.rfind("bin_start,bin_end,sent,delivered,pdr\n", 0) == 0);
  CHECK(run({"pdr", (dir / "trace.csv").string(), "--field", "--config", (dir / "planted.cfg").string(),
             "--mode", "guess"}).code == 2);
}
