// Acceptance suite. Prints one PASS/FAIL line per criterion and exits
// non-zero if any criterion fails.
//
//   acceptance [--work-dir DIR] [--only N]

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "commands.hpp"
#include "oracle/oracle.hpp"
#include "v2xcal/aggregate.hpp"
#include "v2xcal/artifacts.hpp"
#include "v2xcal/calibration.hpp"
#include "v2xcal/config.hpp"
#include "v2xcal/propagation.hpp"
#include "v2xcal/random.hpp"
#include "v2xcal/synthetic.hpp"
#include "v2xcal/text.hpp"
#include "v2xcal/trace.hpp"

namespace fs = std::filesystem;
using namespace v2xcal;

namespace {

struct Verdict {
  bool pass = true;
  std::string detail;

  void require(bool ok, const std::string& what) {
    if (!detail.empty()) detail += "; ";
    detail += what + (ok ? "" : " [miss]");
    pass = pass && ok;
  }
};

std::string num(double v, int digits = 4) {
  std::ostringstream s;
  s.precision(digits);
  s << v;
  return s.str();
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + p.string());
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

int cli(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  if (code != 0) std::cerr << "cli failed (" << code << "): " << err.str();
  return code;
}

// Every regular file under `dir`, keyed by relative path.
std::map<std::string, std::string> snapshot(const fs::path& dir) {
  std::map<std::string, std::string> files;
  for (const auto& e : fs::recursive_directory_iterator(dir)) {
    if (e.is_regular_file()) files[fs::relative(e.path(), dir).string()] = slurp(e.path());
  }
  return files;
}

RunConfig load_config(const fs::path& path) {
  RunConfig c = default_run_config();
  apply_entries(c, parse_config_entries(slurp(path)));
  return c;
}

CalibrationProblem problem_from(const fs::path& dataset) {
  const RunConfig cfg = load_config(dataset / "planted.cfg");
  Trace trace = parse_trace_csv(slurp(dataset / "trace.csv"));
  trace.rsu = cfg.rsu;
  CalibrationProblem p;
  p.observed = parse_pdr_csv(slurp(dataset / "observed_pdr.csv"), cfg.scenario.bin_width);
  p.trace = project_enu(trace);
  p.scenario = cfg.scenario;
  p.base = cfg.channel;
  return p;
}

// 1 ---------------------------------------------------------------------

Verdict free_space_value() {
  Verdict v;
  const double p = free_space_rx_power(RadioParams{}, FadingParams{});
  v.require(std::abs(p - -34.85) <= 0.05, "P_r(d0) = " + num(p, 8) + " dBm, want -34.85 +- 0.05");
  return v;
}

// 2 ---------------------------------------------------------------------

Verdict nakagami_moments() {
  Verdict v;
  constexpr int n = 1'000'000;
  SplitMix64 rng(derive_seed({2, 1}));
  std::vector<double> xs(n);
  for (auto& x : xs) x = nakagami_power_sample(4.0, 2.0, rng);
  const auto m = oracle::moments(xs);
  v.require(std::abs(m.mean - 4.0) <= 0.04, "mean " + num(m.mean, 6) + " vs 4 +- 1%");
  v.require(std::abs(m.variance - 8.0) <= 0.24, "variance " + num(m.variance, 6) + " vs 8 +- 3%");

  SplitMix64 rng1(derive_seed({2, 2}));
  for (auto& x : xs) x = nakagami_power_sample(4.0, 1.0, rng1);
  const double ks = oracle::ks_statistic(xs, [](double x) { return 1.0 - std::exp(-x / 4.0); });
  v.require(ks < 0.002, "m=1 KS vs exponential " + num(ks, 4) + " < 0.002");
  return v;
}

// 3 ---------------------------------------------------------------------

Verdict lognormal_residuals() {
  Verdict v;
  RadioParams radio;
  FadingParams f;
  f.slow_model = SlowFading::Lognormal;
  f.alpha = 1.51;
  f.sigma = 6.03;
  const double d = 250.0;
  const double mean = mean_rx_power(radio, f, d);
  SplitMix64 rng(derive_seed({3}));
  std::vector<double> r(1'000'000);
  for (auto& x : r) x = lognormal_rx_power(radio, f, d, rng) - mean;
  const auto m = oracle::moments(r);
  const double sd = std::sqrt(m.variance);
  v.require(std::abs(sd - 6.03) <= 0.02 * 6.03, "residual std " + num(sd, 6) + " vs 6.03 +- 2%");
  v.require(std::abs(m.mean) < 0.02, "|mean| " + num(std::abs(m.mean), 3) + " < 0.02 dB");
  return v;
}

// 4 ---------------------------------------------------------------------

Verdict penalty_semantics() {
  Verdict v;
  // Short single-pass problem. The base antenna gains put the 1 m gain at
  // about +1.1 dB before system loss, so genomes with system_loss below
  // roughly 1.14 dB violate the constraint and the rest do not.
  auto spec = default_synthetic_spec();
  spec.duration = 60.0;
  const auto ds = generate_synthetic(spec, ScenarioConfig{});
  CalibrationProblem p{ds.observed, project_enu(ds.trace), ds.scenario, default_preset()};
  p.base.radio.antenna_gain_tx = std::pow(10.0, 2.45);
  p.base.radio.antenna_gain_rx = std::pow(10.0, 2.45);

  // Property: the objective equals exactly 1000 iff the sweep has a positive
  // gain; otherwise it is an RMSE on the percent scale.
  const auto space = table_search_space();
  SplitMix64 rng(derive_seed({4}));
  std::size_t violators = 0, feasible = 0, wrong = 0;
  for (int i = 0; i < 300; ++i) {
    Genome g;
    g.tx_power = uniform_in(rng, 20, 40);
    g.system_loss = uniform_in(rng, 0, 3);
    g.alpha = uniform_in(rng, 1, 3);
    g.slow_model = rng() % 2 ? SlowFading::Lognormal : SlowFading::FreeSpaceOnly;
    g.fast_model = rng() % 2 ? FastFading::Nakagami : FastFading::None;
    const auto ch = to_channel(g, p.base);
    bool positive = false;
    double farthest = 0.0;
    for (const auto& pt : p.trace.points) farthest = std::max(farthest, distance(pt.position, p.scenario.rsu_position));
    for (double d = 1.0; d <= farthest && !positive; d += 1.0) {
      positive = oracle::mean_power_dbm(1.0, ch.radio.antenna_gain_tx, ch.radio.antenna_gain_rx,
                                        ch.radio.carrier_frequency, ch.fading.system_loss, 1.0,
                                        ch.fading.slow_model == SlowFading::Lognormal ? ch.fading.alpha : 2.0,
                                        d) > 0.0;
    }
    const double f = objective(g, p);
    if (positive) {
      ++violators;
      wrong += f != 1000.0;
    } else {
      ++feasible;
      wrong += !(f >= 0.0 && f <= 100.0);
    }
  }
  v.require(wrong == 0 && violators > 0 && feasible > 0,
            std::to_string(violators) + " violators scored exactly 1000, " + std::to_string(feasible) +
                " feasible scored in [0, 100], " + std::to_string(wrong) + " mismatches");

  // Selection: whenever a generation holds a feasible genome, the next
  // generation's elites are feasible and the reported best is feasible.
  GaConfig c;
  c.population_size = 12;
  c.generations = 6;
  c.master_seed = 4;
  const auto r = evolve(c, p, space);
  std::vector<bool> any_feasible(c.generations, false);
  bool elites_ok = true;
  for (const auto& e : r.history) {
    if (e.rmse < kPathGainPenalty) any_feasible[e.generation] = true;
  }
  for (const auto& e : r.history) {
    if (e.generation > 0 && e.individual < c.elite_count && any_feasible[e.generation - 1]) {
      elites_ok = elites_ok && e.rmse < kPathGainPenalty;
    }
  }
  v.require(r.best_rmse < kPathGainPenalty, "GA best " + num(r.best_rmse) + " is feasible");
  v.require(elites_ok, "elites never infeasible while a feasible genome exists");
  return v;
}

// 5 ---------------------------------------------------------------------

Verdict parameter_recovery(const fs::path& work, const fs::path& data) {
  Verdict v;
  const fs::path ds = work / "recovery";
  fs::remove_all(ds);
  if (cli({"synth", (data / "drive_by.cfg").string(), "--out", ds.string()}) != 0) {
    v.require(false, "synth failed");
    return v;
  }
  const fs::path out = ds / "calibration";
  if (cli({"calibrate", (ds / "observed_pdr.csv").string(), (ds / "trace.csv").string(), "--config",
           (ds / "planted.cfg").string(), "--out", out.string(), "--population", "24", "--generations", "40",
           "--seed", "42"}) != 0) {
    v.require(false, "calibrate failed");
    return v;
  }
  const RunConfig best = load_config(out / "best.cfg");
  std::map<std::string, double> result;
  for (const auto& [k, val] : parse_config_entries(slurp(out / "result.txt"))) {
    if (auto d = parse_double(val)) result[k] = *d;
  }
  const double rmse_v = result["best_rmse"];
  const double alpha = best.channel.fading.alpha;
  const double sigma = best.channel.fading.sigma;
  v.require(result["evaluations"] == 960.0, "evaluations " + num(result["evaluations"]));
  v.require(rmse_v <= 1.0, "best_rmse " + num(rmse_v) + " <= 1.0");
  v.require(std::abs(alpha - 1.51) <= 0.25, "alpha " + num(alpha) + " within 1.51 +- 0.25");
  v.require(std::abs(sigma - 6.03) <= 1.5, "sigma " + num(sigma) + " within 6.03 +- 1.5");
  return v;
}

// 6 ---------------------------------------------------------------------

Verdict improvement_ordering(const fs::path& work, const fs::path& data) {
  Verdict v;
  const fs::path ds = work / "ordering";
  fs::remove_all(ds);
  if (cli({"synth", (data / "drive_by.cfg").string(), "--out", ds.string()}) != 0) {
    v.require(false, "synth failed");
    return v;
  }
  const auto p = problem_from(ds);
  Genome def = genome_from(default_preset());
  Genome noise = def;
  noise.noise = -90.0;
  const Genome cal = genome_from(calibrated_preset());
  const double a = objective(def, p);
  const double b = objective(noise, p);
  const double c = objective(cal, p);
  v.require(a > b && b > c,
            "default " + num(a) + " > noise -90 " + num(b) + " > calibrated " + num(c));
  return v;
}

// 7 ---------------------------------------------------------------------

// Expected delivery probability as a function of distance, tabulated on a
// fine grid and linearly interpolated.
class ExpectedPdr {
 public:
  ExpectedPdr(const ChannelParams& ch, double max_distance, double step) : step_(step) {
    const auto& r = ch.radio;
    const auto& f = ch.fading;
    const double exponent = f.slow_model == SlowFading::Lognormal ? f.alpha : 2.0;
    const double sigma = f.slow_model == SlowFading::Lognormal ? f.sigma : 0.0;
    const bool fast = f.fast_model == FastFading::Nakagami;
    const double threshold = std::max(r.rx_sensitivity, r.noise_floor + r.snr_thresholds.threshold(r.data_rate));
    for (double d = 0.0; d <= max_distance + 2.0 * step; d += step) {
      const double mean = oracle::mean_power_dbm(r.tx_power, r.antenna_gain_tx, r.antenna_gain_rx,
                                                 r.carrier_frequency, f.system_loss, f.reference_distance,
                                                 exponent, d);
      table_.push_back(oracle::delivery_probability(mean, sigma, fast, f.nakagami_m, threshold));
    }
  }

  double operator()(double d) const {
    const double pos = d / step_;
    const auto i = static_cast<std::size_t>(pos);
    const double t = pos - static_cast<double>(i);
    return table_[i] * (1.0 - t) + table_[i + 1] * t;
  }

 private:
  double step_;
  std::vector<double> table_;
};

Verdict oracle_agreement() {
  Verdict v;
  // 400 passes of the drive-by give every 20 m bin about 12000 sends, so
  // binomial noise is well below the tolerance.
  auto spec = default_synthetic_spec();
  spec.duration = 400.0 * 2000.0 / 13.4;
  const Trace trace = synthesize_trace(spec);
  const ProjectedTrace projected = project_enu(trace);

  ChannelParams lognormal_only = calibrated_preset();
  lognormal_only.fading.fast_model = FastFading::None;
  ChannelParams nakagami_only = calibrated_preset();
  nakagami_only.fading.slow_model = SlowFading::FreeSpaceOnly;
  nakagami_only.radio.noise_floor = -100.0;
  nakagami_only.radio.data_rate = DataRate::Mbps6;

  const std::vector<std::pair<std::string, ChannelParams>> cases{
      {"calibrated", calibrated_preset()}, {"lognormal", lognormal_only}, {"nakagami", nakagami_only}};
  for (const auto& [name, ch] : cases) {
    ScenarioConfig sc;
    sc.master_seed = 7;
    const DeliveryLog log = run_scenario(projected, sc, ch.radio, ch.fading);
    const PdrCurve sim = pdr_curve(log, sc.bin_width);
    double max_d = 0.0;
    for (const auto& r : log) max_d = std::max(max_d, r.distance);
    const ExpectedPdr expected(ch, max_d, 0.25);

    std::vector<double> sum(sim.bins.size(), 0.0);
    for (const auto& r : log) {
      sum[static_cast<std::size_t>(std::floor(r.distance / sc.bin_width))] += expected(r.distance);
    }
    double worst = 0.0;
    std::size_t checked = 0;
    for (std::size_t i = 0; i < sim.bins.size(); ++i) {
      const auto& b = sim.bins[i];
      if (b.sent < 200) continue;
      ++checked;
      worst = std::max(worst, std::abs(*b.pdr - 100.0 * sum[i] / static_cast<double>(b.sent)));
    }
    v.require(worst <= 3.0 && checked > 0, name + ": " + std::to_string(checked) + " bins, worst |diff| " +
                                               num(worst, 3) + " pp <= 3");
  }
  return v;
}

// 8 ---------------------------------------------------------------------

Verdict determinism(const fs::path& work, const fs::path& data) {
  Verdict v;
  const fs::path root = work / "determinism";
  fs::remove_all(root);
  const auto cfg = (data / "drive_by.cfg").string();
  auto synth = [&](const std::string& name) {
    const fs::path out = root / name;
    return cli({"synth", cfg, "--out", out.string(), "--seed", "5"}) == 0 ? snapshot(out)
                                                                         : std::map<std::string, std::string>{};
  };
  const auto s1 = synth("synth1");
  const auto s2 = synth("synth2");
  v.require(!s1.empty() && s1 == s2, "synth x2 identical (" + std::to_string(s1.size()) + " files)");

  const fs::path ds = root / "synth1";
  const auto planted = (ds / "planted.cfg").string();
  auto simulate = [&](const std::string& name) {
    const fs::path out = root / name;
    return cli({"simulate", (ds / "trace.csv").string(), "--config", planted, "--out", out.string(), "--seed",
                "11"}) == 0
               ? snapshot(out)
               : std::map<std::string, std::string>{};
  };
  const auto m1 = simulate("sim1");
  const auto m2 = simulate("sim2");
  v.require(!m1.empty() && m1 == m2, "simulate x2 identical (" + std::to_string(m1.size()) + " files)");

  auto calibrate = [&](const std::string& name, const std::string& jobs) {
    const fs::path out = root / name;
    return cli({"calibrate", (ds / "observed_pdr.csv").string(), (ds / "trace.csv").string(), "--config",
                planted, "--out", out.string(), "--population", "24", "--generations", "10", "--seed", "8",
                "--jobs", jobs}) == 0
               ? snapshot(out)
               : std::map<std::string, std::string>{};
  };
  const auto c1 = calibrate("cal_j1_a", "1");
  const auto c2 = calibrate("cal_j1_b", "1");
  const auto c8 = calibrate("cal_j8", "8");
  v.require(!c1.empty() && c1 == c2, "calibrate x2 identical");
  v.require(!c1.empty() && c1 == c8, "calibrate --jobs 1 vs --jobs 8 identical");
  return v;
}

// 9 ---------------------------------------------------------------------

Verdict round_trips(const fs::path& work, const fs::path& data) {
  Verdict v;
  const fs::path ds = work / "roundtrip";
  fs::remove_all(ds);
  if (cli({"synth", (data / "drive_by.cfg").string(), "--out", ds.string()}) != 0) {
    v.require(false, "synth failed");
    return v;
  }

  // Trace: parse -> export reproduces the bytes and the parsed value.
  const std::string trace_text = slurp(ds / "trace.csv");
  const Trace trace = parse_trace_csv(trace_text);
  v.require(export_trace_csv(trace) == trace_text && parse_trace_csv(export_trace_csv(trace)) == trace, "trace");

  const std::string log_text = slurp(ds / "delivery_log.csv");
  const DeliveryLog log = parse_log_csv(log_text);
  v.require(export_log_csv(log) == log_text && parse_log_csv(export_log_csv(log)) == log, "delivery log");

  bool pdr_ok = true, heat_ok = true;
  SplitMix64 rng(derive_seed({9}));
  for (int i = 0; i < 20; ++i) {
    const double w = uniform_in(rng, 0.5, 150.0);
    const auto c = pdr_curve(log, w, static_cast<DirectionFilter>(i % 3));
    pdr_ok = pdr_ok && parse_pdr_csv(export_pdr_csv(c), w) == c;
    const auto h = heatmap(log, w, static_cast<DirectionFilter>(i % 3));
    heat_ok = heat_ok && parse_heatmap_csv(export_heatmap_csv(h), w) == h;
  }
  v.require(pdr_ok, "pdr curve");
  v.require(heat_ok, "heatmap");

  // GA history with random genomes.
  CalibrationResult r;
  const auto space = table_search_space();
  for (std::size_t k = 0; k < 500; ++k) {
    Genome g;
    for (Gene gene : kAllGenes) {
      if (gene == Gene::DataRate) {
        g.set(gene, megabits(kAllDataRates[rng() % 4]));
      } else if (is_categorical(gene)) {
        g.set(gene, static_cast<double>(rng() % 2));
      } else {
        g.set(gene, uniform_in(rng, space.range(gene).lo, space.range(gene).hi));
      }
    }
    r.history.push_back({k / 24, k % 24, g, uniform_in(rng, 0, 100)});
  }
  v.require(parse_history_csv(history_to_csv(r)) == r.history, "GA history");

  // Configuration echo with randomized values.
  bool cfg_ok = true;
  for (int i = 0; i < 50; ++i) {
    RunConfig c = default_run_config();
    c.channel.radio.tx_power = uniform_in(rng, 20, 40);
    c.channel.radio.noise_floor = uniform_in(rng, -110, -90);
    c.channel.radio.data_rate = kAllDataRates[rng() % 4];
    c.channel.fading.alpha = uniform_in(rng, 1, 3);
    c.channel.fading.sigma = uniform_in(rng, 1, 10);
    c.channel.fading.slow_model = rng() % 2 ? SlowFading::Lognormal : SlowFading::FreeSpaceOnly;
    c.scenario.master_seed = rng();
    c.scenario.rsu_position = {uniform_in(rng, -5, 5), uniform_in(rng, -5, 5), uniform_in(rng, 0, 10)};
    c.ga.crossover_prob = uniform_open01(rng);
    c.ga.master_seed = rng();
    c.rsu = GeodeticPosition{uniform_in(rng, -80, 80), uniform_in(rng, -180, 180), uniform_in(rng, 0, 3000)};
    if (rng() % 2) c.frozen = {Gene::Sigma, Gene::TxPower};
    const std::string text = to_config_text(c);
    RunConfig back = default_run_config();
    apply_entries(back, parse_config_entries(text));
    cfg_ok = cfg_ok && back == c && to_config_text(back) == text;
  }
  cfg_ok = cfg_ok && to_config_text(load_config(ds / "planted.cfg")) == slurp(ds / "planted.cfg");
  v.require(cfg_ok, "configuration echo");
  return v;
}

}  // namespace

int main(int argc, char** argv) {
  fs::path work = fs::temp_directory_path() / "v2xcal_acceptance";
  fs::path data = V2XCAL_DATA_DIR;
  int only = 0;
  for (int i = 1; i < argc; ++i) {
    const std::string a = argv[i];
    if (a == "--work-dir" && i + 1 < argc) {
      work = argv[++i];
    } else if (a == "--data-dir" && i + 1 < argc) {
      data = argv[++i];
    } else if (a == "--only" && i + 1 < argc) {
      only = std::atoi(argv[++i]);
    } else {
      std::cerr << "usage: acceptance [--work-dir DIR] [--data-dir DIR] [--only N]\n";
      return 2;
    }
  }
  fs::create_directories(work);

  const std::vector<std::pair<std::string, std::function<Verdict()>>> criteria{
      {"free-space reference power", free_space_value},
      {"Nakagami moments", nakagami_moments},
      {"lognormal residuals", lognormal_residuals},
      {"path-gain penalty", penalty_semantics},
      {"parameter recovery", [&] { return parameter_recovery(work, data); }},
      {"improvement ordering", [&] { return improvement_ordering(work, data); }},
      {"expected-PDR oracle agreement", oracle_agreement},
      {"determinism", [&] { return determinism(work, data); }},
      {"round trips", [&] { return round_trips(work, data); }},
  };

  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    if (only != 0 && static_cast<std::size_t>(only) != i + 1) continue;
    const auto start = std::chrono::steady_clock::now();
    Verdict verdict;
    try {
      verdict = criteria[i].second();
    } catch (const std::exception& e) {
      verdict.require(false, std::string("exception: ") + e.what());
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    failures += verdict.pass ? 0 : 1;
    std::cout << "criterion " << i + 1 << " " << (verdict.pass ? "PASS" : "FAIL") << " " << criteria[i].first
              << ": " << verdict.detail << " (" << num(secs, 3) << " s)" << std::endl;
  }
  std::cout << (failures == 0 ? "all criteria passed" : std::to_string(failures) + " criteria failed") << "\n";
  return failures == 0 ? 0 : 1;
}
