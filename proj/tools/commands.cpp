#include "commands.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <optional>
#include <ostream>
#include <sstream>

#include "v2xcal/aggregate.hpp"
#include "v2xcal/artifacts.hpp"
#include "v2xcal/calibration.hpp"
#include "v2xcal/config.hpp"
#include "v2xcal/error.hpp"
#include "v2xcal/field.hpp"
#include "v2xcal/simulator.hpp"
#include "v2xcal/synthetic.hpp"
#include "v2xcal/text.hpp"
#include "v2xcal/trace.hpp"

namespace fs = std::filesystem;

namespace v2xcal::cli {

namespace {

// Input problems (bad files, flags, documents) map to exit code 2.
class InputError : public Error {
 public:
  using Error::Error;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot read '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_file(const fs::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot write '" + path.string() + "'");
  out << content;
  if (!out) throw Error("failed writing '" + path.string() + "'");
}

fs::path prepare_dir(const std::string& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir)) throw InputError("cannot create output directory '" + dir + "'");
  return fs::path(dir);
}

// Wraps a parse of `path` so diagnostics name the file.
template <class Fn>
auto parse_document(const std::string& path, Fn&& fn) {
  const std::string text = read_file(path);
  try {
    return fn(text);
  } catch (const ParseError& e) {
    throw InputError(path + ": " + e.what());
  }
}

struct ConfigFlags {
  std::string config_path;
  std::string preset;
  std::vector<std::string> sets;

  void attach(CLI::App* cmd) {
    cmd->add_option("--config", config_path, "Key-value configuration file");
    cmd->add_option("--preset", preset, "Channel preset: default, calibrated or noise-raised");
    cmd->add_option("--set", sets, "Override one configuration key (key=value)");
  }

  RunConfig resolve() const {
    RunConfig config = default_run_config();
    try {
      if (!config_path.empty()) {
        apply_entries(config, parse_config_entries(read_file(config_path)));
      }
      if (!preset.empty()) apply_entry(config, "preset", preset);
      for (const auto& kv : sets) {
        const auto eq = kv.find('=');
        if (eq == std::string::npos) throw ConfigError("--set expects key=value, got '" + kv + "'");
        apply_entry(config, kv.substr(0, eq), kv.substr(eq + 1));
      }
    } catch (const ConfigError& e) {
      throw InputError((config_path.empty() ? std::string("configuration") : config_path) + ": " +
                       e.what());
    }
    return config;
  }
};

DirectionFilter parse_direction_flag(const std::string& text) {
  const std::string d = to_lower(text);
  if (d == "both") return DirectionFilter::Both;
  if (d == "bsm") return DirectionFilter::VehicleToRsu;
  if (d == "spat") return DirectionFilter::RsuToVehicle;
  throw InputError("--direction must be both, bsm or spat");
}

Trace load_trace(const std::string& path, const RunConfig& config) {
  Trace trace = parse_document(path, [&](const std::string& text) {
    return parse_trace_csv(text, TraceParseOptions{config.epoch_ms});
  });
  if (!config.rsu) {
    throw InputError("RSU position unknown: set trace.rsu_latitude, trace.rsu_longitude and "
                     "trace.rsu_altitude_ft");
  }
  trace.rsu = config.rsu;
  return trace;
}

void check_inputs(const RunConfig& config) {
  try {
    validate(config.channel.radio);
    validate(config.channel.fading);
    validate(config.scenario);
  } catch (const DomainError& e) {
    throw InputError(std::string("invalid configuration: ") + e.what());
  }
}

std::string percent(double value) {
  std::ostringstream s;
  s << std::fixed << std::setprecision(2) << value;
  return s.str();
}

std::string describe(const Genome& g) {
  std::string out;
  for (Gene gene : kAllGenes) {
    if (!out.empty()) out += ' ';
    out += gene_name(gene);
    out += '=';
    if (gene == Gene::SlowModel) {
      out += to_string(g.slow_model);
    } else if (gene == Gene::FastModel) {
      out += to_string(g.fast_model);
    } else {
      out += format_double(g.get(gene));
    }
  }
  return out;
}

// simulate ---------------------------------------------------------------

struct SimulateArgs {
  ConfigFlags config;
  std::string trace_path;
  std::string out_dir = ".";
  std::optional<std::uint64_t> seed;
};

int simulate(const SimulateArgs& a, std::ostream& out) {
  RunConfig config = a.config.resolve();
  if (a.seed) config.scenario.master_seed = *a.seed;
  check_inputs(config);
  const Trace trace = load_trace(a.trace_path, config);
  const fs::path dir = prepare_dir(a.out_dir);

  const DeliveryLog log = run_scenario(trace, config.scenario, config.channel.radio, config.channel.fading);
  const PdrCurve curve = pdr_curve(log, config.scenario.bin_width, config.scenario.pdr_direction);
  const HeatmapGrid grid = heatmap(log, config.scenario.heatmap_cell, config.scenario.pdr_direction);

  write_file(dir / "delivery_log.csv", export_log_csv(log));
  write_file(dir / "pdr.csv", export_pdr_csv(curve));
  write_file(dir / "heatmap.csv", export_heatmap_csv(grid));
  write_file(dir / "config_resolved.cfg", to_config_text(config));

  std::size_t delivered = 0;
  std::size_t bsm = 0;
  for (const auto& r : log) {
    delivered += r.delivered ? 1 : 0;
    bsm += r.direction == LinkDirection::VehicleToRsu ? 1 : 0;
  }
  const double overall = log.empty() ? 0.0 : 100.0 * static_cast<double>(delivered) / static_cast<double>(log.size());
  out << "simulate: " << log.size() << " packets (" << bsm << " BSM, " << log.size() - bsm
      << " SPaT), " << delivered << " delivered, overall PDR " << percent(overall) << "%; wrote "
      << (dir / "delivery_log.csv").string() << ", " << (dir / "pdr.csv").string() << ", "
      << (dir / "heatmap.csv").string() << "\n";
  return kExitOk;
}

// calibrate --------------------------------------------------------------

struct CalibrateArgs {
  ConfigFlags config;
  std::string observed_path;
  std::string trace_path;
  std::string out_dir = ".";
  std::optional<std::size_t> generations;
  std::optional<std::size_t> population;
  std::optional<std::uint64_t> seed;
  std::vector<std::string> freeze;
  std::size_t jobs = 1;
  bool verbose = false;
};

int calibrate(const CalibrateArgs& a, std::ostream& out, std::ostream& err) {
  RunConfig config = a.config.resolve();
  if (a.generations) config.ga.generations = *a.generations;
  if (a.population) config.ga.population_size = *a.population;
  if (a.seed) config.ga.master_seed = *a.seed;
  for (const auto& name : a.freeze) {
    auto gene = gene_from_name(name);
    if (!gene) throw InputError("--freeze: unknown gene '" + name + "'");
    if (std::find(config.frozen.begin(), config.frozen.end(), *gene) == config.frozen.end()) {
      config.frozen.push_back(*gene);
    }
  }
  if (config.ga.generations == 0) throw InputError("--generations must be at least 1");
  if (a.jobs == 0) throw InputError("--jobs must be at least 1");
  check_inputs(config);
  try {
    validate(config.ga);
  } catch (const DomainError& e) {
    throw InputError(std::string("invalid GA configuration: ") + e.what());
  }

  CalibrationProblem problem;
  problem.observed = parse_document(a.observed_path, [&](const std::string& text) {
    return parse_pdr_csv(text, config.scenario.bin_width);
  });
  if (problem.observed.bins.empty()) throw InputError(a.observed_path + ": observed PDR curve is empty");
  if (std::abs(problem.observed.bin_width - config.scenario.bin_width) >
      1e-9 * config.scenario.bin_width) {
    throw InputError("bin geometry mismatch: observed curve uses " +
                     format_double(problem.observed.bin_width) + " m bins, scenario.bin_width is " +
                     format_double(config.scenario.bin_width) + " m");
  }
  problem.trace = project_enu(load_trace(a.trace_path, config));
  problem.scenario = config.scenario;
  problem.base = config.channel;
  const fs::path dir = prepare_dir(a.out_dir);
  write_file(dir / "config_resolved.cfg", to_config_text(config));

  EvolveOptions options;
  options.jobs = a.jobs;
  if (a.verbose) {
    options.on_generation = [&err](std::size_t gen, double best) {
      err << "generation " << gen << ": best rmse " << format_double(best) << "\n";
    };
  }
  const CalibrationResult result = evolve(config.ga, problem, search_space(config), options);

  write_file(dir / "history.csv", history_to_csv(result));
  write_file(dir / "result.txt", result_summary(result));
  RunConfig best = config;
  best.channel = to_channel(result.best_genome, config.channel);
  write_file(dir / "best.cfg", to_config_text(best));

  out << "calibrate: " << result.evaluations << " evaluations, best rmse "
      << format_double(result.best_rmse) << "\n"
      << "best genome: " << describe(result.best_genome) << "\n"
      << "wrote " << (dir / "history.csv").string() << ", " << (dir / "result.txt").string() << ", "
      << (dir / "best.cfg").string() << "\n";
  return kExitOk;
}

// synth ------------------------------------------------------------------

struct SynthArgs {
  ConfigFlags config;
  std::string out_dir = ".";
  std::optional<std::uint64_t> seed;
};

int synth(SynthArgs a, const std::string& spec_path, std::ostream& out) {
  if (!spec_path.empty()) {
    if (!a.config.config_path.empty()) throw InputError("give the spec either positionally or via --config");
    a.config.config_path = spec_path;
  }
  RunConfig config = a.config.resolve();
  if (a.seed) config.synth.seed = *a.seed;
  check_inputs(config);
  const SyntheticSpec spec = synthetic_spec(config);
  SyntheticDataset data;
  try {
    data = generate_synthetic(spec, config.scenario);
  } catch (const DomainError& e) {
    throw InputError(std::string("invalid synthetic spec: ") + e.what());
  }
  const fs::path dir = prepare_dir(a.out_dir);

  // Everything needed to replay or calibrate against this dataset.
  RunConfig planted = config;
  planted.rsu = spec.rsu;
  planted.scenario.master_seed = data.scenario.master_seed;

  write_file(dir / "trace.csv", export_trace_csv(data.trace));
  write_file(dir / "observed_pdr.csv", export_pdr_csv(data.observed));
  write_file(dir / "delivery_log.csv", export_log_csv(data.log));
  write_file(dir / "planted.cfg", to_config_text(planted));

  out << "synth: " << data.trace.records.size() << " trace rows, " << data.log.size()
      << " packets, " << data.observed.bins.size() << " PDR bins; wrote "
      << (dir / "trace.csv").string() << ", " << (dir / "observed_pdr.csv").string() << ", "
      << (dir / "planted.cfg").string() << "\n";
  return kExitOk;
}

// pdr / heatmap ----------------------------------------------------------

struct AggregateArgs {
  ConfigFlags config;
  std::string input_path;
  std::string out_path;
  std::optional<double> width;
  std::string direction = "both";
  // Field-log mode for pdr.
  bool field = false;
  std::string message_type = "spat";
  std::string mode = "auto";
  double expected_rate = 10.0;
};

void emit(const std::string& path, const std::string& content, std::ostream& out) {
  if (path.empty() || path == "-") {
    out << content;
  } else {
    write_file(path, content);
  }
}

int pdr(const AggregateArgs& a, std::ostream& out) {
  const RunConfig config = a.config.resolve();
  const double width = a.width.value_or(config.scenario.bin_width);
  if (!(width > 0.0)) throw InputError("--bin-width must be positive");
  PdrCurve curve;
  if (a.field) {
    FieldPdrOptions options;
    options.bin_width = width;
    const std::string type = to_lower(a.message_type);
    if (type != "bsm" && type != "spat") throw InputError("--message-type must be bsm or spat");
    options.message_type = type == "bsm" ? MessageType::Bsm : MessageType::Spat;
    const std::string mode = to_lower(a.mode);
    if (mode == "auto") {
      options.mode = FieldPdrMode::Auto;
    } else if (mode == "id") {
      options.mode = FieldPdrMode::PairById;
    } else if (mode == "cadence") {
      options.mode = FieldPdrMode::ExpectedCadence;
    } else {
      throw InputError("--mode must be auto, id or cadence");
    }
    options.expected_rate = a.expected_rate;
    options.rsu_position = config.scenario.rsu_position;
    curve = field_pdr_curve(load_trace(a.input_path, config), options);
  } else {
    const DeliveryLog log = parse_document(a.input_path, [](const std::string& t) { return parse_log_csv(t); });
    curve = pdr_curve(log, width, parse_direction_flag(a.direction));
  }
  emit(a.out_path, export_pdr_csv(curve), out);
  return kExitOk;
}

int heatmap_cmd(const AggregateArgs& a, std::ostream& out) {
  const RunConfig config = a.config.resolve();
  const double cell = a.width.value_or(config.scenario.heatmap_cell);
  if (!(cell > 0.0)) throw InputError("--cell must be positive");
  const DeliveryLog log = parse_document(a.input_path, [](const std::string& t) { return parse_log_csv(t); });
  emit(a.out_path, export_heatmap_csv(heatmap(log, cell, parse_direction_flag(a.direction))), out);
  return kExitOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"V2X channel simulator and GA calibration toolkit", "v2xcal"};
  app.require_subcommand(1);

  SimulateArgs sim;
  auto* c_sim = app.add_subcommand("simulate", "Replay a trace through the channel model");
  sim.config.attach(c_sim);
  c_sim->add_option("trace", sim.trace_path, "Trace CSV")->required();
  c_sim->add_option("--out", sim.out_dir, "Output directory");
  c_sim->add_option("--seed", sim.seed, "Simulation master seed");

  CalibrateArgs cal;
  auto* c_cal = app.add_subcommand("calibrate", "Fit the channel parameters to an observed PDR curve");
  cal.config.attach(c_cal);
  c_cal->add_option("observed", cal.observed_path, "Observed PDR CSV")->required();
  c_cal->add_option("trace", cal.trace_path, "Trace CSV the observation was taken on")->required();
  c_cal->add_option("--out", cal.out_dir, "Output directory");
  c_cal->add_option("--generations", cal.generations, "GA generations");
  c_cal->add_option("--population", cal.population, "GA population size");
  c_cal->add_option("--seed", cal.seed, "GA master seed");
  c_cal->add_option("--freeze", cal.freeze, "Pin a gene at its configured value (repeatable)");
  c_cal->add_option("--jobs", cal.jobs, "Worker threads; does not change results");
  c_cal->add_flag("--verbose", cal.verbose, "Report progress per generation");

  SynthArgs syn;
  std::string spec_path;
  auto* c_syn = app.add_subcommand("synth", "Generate a ground-truth dataset with planted parameters");
  syn.config.attach(c_syn);
  c_syn->add_option("spec", spec_path, "Synthetic spec (configuration file)");
  c_syn->add_option("--out", syn.out_dir, "Output directory");
  c_syn->add_option("--seed", syn.seed, "Simulation seed");

  AggregateArgs pdr_args;
  auto* c_pdr = app.add_subcommand("pdr", "Aggregate a delivery log into a PDR-vs-distance curve");
  pdr_args.config.attach(c_pdr);
  c_pdr->add_option("input", pdr_args.input_path, "Delivery log CSV (or OBU trace with --field)")->required();
  c_pdr->add_option("--out", pdr_args.out_path, "Output CSV (default stdout)");
  c_pdr->add_option("--bin-width", pdr_args.width, "Bin width in meters");
  c_pdr->add_option("--direction", pdr_args.direction, "both, bsm or spat");
  c_pdr->add_flag("--field", pdr_args.field, "Input is an OBU trace log");
  c_pdr->add_option("--message-type", pdr_args.message_type, "Field mode: bsm or spat");
  c_pdr->add_option("--mode", pdr_args.mode, "Field mode: auto, id or cadence");
  c_pdr->add_option("--expected-rate", pdr_args.expected_rate, "Field cadence mode: sender rate (Hz)");

  AggregateArgs heat_args;
  auto* c_heat = app.add_subcommand("heatmap", "Aggregate a delivery log into a spatial PDR grid");
  heat_args.config.attach(c_heat);
  c_heat->add_option("input", heat_args.input_path, "Delivery log CSV")->required();
  c_heat->add_option("--out", heat_args.out_path, "Output CSV (default stdout)");
  c_heat->add_option("--cell", heat_args.width, "Cell size in meters");
  c_heat->add_option("--direction", heat_args.direction, "both, bsm or spat");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "v2xcal: " << e.what() << "\n";
    return kExitUsage;
  }

  try {
    if (c_sim->parsed()) return simulate(sim, out);
    if (c_cal->parsed()) return calibrate(cal, out, err);
    if (c_syn->parsed()) return synth(syn, spec_path, out);
    if (c_pdr->parsed()) return pdr(pdr_args, out);
    if (c_heat->parsed()) return heatmap_cmd(heat_args, out);
  } catch (const InputError& e) {
    err << "v2xcal: " << e.what() << "\n";
    return kExitUsage;
  } catch (const ParseError& e) {
    err << "v2xcal: " << e.what() << "\n";
    return kExitUsage;
  } catch (const ConfigError& e) {
    err << "v2xcal: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "v2xcal: error: " << e.what() << "\n";
    return kExitFailure;
  }
  return kExitUsage;
}

}  // namespace v2xcal::cli
