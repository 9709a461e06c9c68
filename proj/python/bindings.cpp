#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <map>
#include <string>

#include "v2xcal/aggregate.hpp"
#include "v2xcal/artifacts.hpp"
#include "v2xcal/calibration.hpp"
#include "v2xcal/config.hpp"
#include "v2xcal/error.hpp"
#include "v2xcal/propagation.hpp"
#include "v2xcal/random.hpp"
#include "v2xcal/synthetic.hpp"
#include "v2xcal/trace.hpp"

namespace py = pybind11;
using namespace v2xcal;

namespace {

RunConfig resolve(const std::string& config_text) {
  RunConfig config = default_run_config();
  apply_entries(config, parse_config_entries(config_text));
  return config;
}

Trace load_trace(const std::string& csv_text, const RunConfig& config) {
  Trace trace = parse_trace_csv(csv_text, TraceParseOptions{config.epoch_ms});
  if (!config.rsu) throw ConfigError("RSU position unknown: set trace.rsu_latitude/longitude/altitude_ft");
  trace.rsu = config.rsu;
  return trace;
}

DirectionFilter direction_from(const std::string& text) {
  if (text == "both") return DirectionFilter::Both;
  if (text == "bsm") return DirectionFilter::VehicleToRsu;
  if (text == "spat") return DirectionFilter::RsuToVehicle;
  throw py::value_error("direction must be both, bsm or spat");
}

py::dict genome_dict(const Genome& g) {
  py::dict d;
  for (Gene gene : kAllGenes) {
    const std::string key(gene_name(gene));
    if (gene == Gene::SlowModel) {
      d[key.c_str()] = std::string(to_string(g.slow_model));
    } else if (gene == Gene::FastModel) {
      d[key.c_str()] = std::string(to_string(g.fast_model));
    } else if (gene == Gene::DataRate) {
      d[key.c_str()] = megabits(g.data_rate);
    } else {
      d[key.c_str()] = g.get(gene);
    }
  }
  return d;
}

Genome genome_from_dict(const py::dict& d, const Genome& start) {
  Genome g = start;
  for (auto item : d) {
    const auto name = py::cast<std::string>(item.first);
    const auto gene = gene_from_name(name);
    if (!gene) throw py::key_error("unknown gene '" + name + "'");
    if (*gene == Gene::SlowModel) {
      const auto m = slow_fading_from_string(py::cast<std::string>(item.second));
      if (!m) throw py::value_error("slow_model must be fsm or lognormal");
      g.slow_model = *m;
    } else if (*gene == Gene::FastModel) {
      const auto m = fast_fading_from_string(py::cast<std::string>(item.second));
      if (!m) throw py::value_error("fast_model must be none or nakagami");
      g.fast_model = *m;
    } else {
      g.set(*gene, py::cast<double>(item.second));
    }
  }
  return g;
}

CalibrationProblem make_problem(const std::string& observed_csv, const std::string& trace_csv,
                                const RunConfig& config) {
  CalibrationProblem p;
  p.observed = parse_pdr_csv(observed_csv, config.scenario.bin_width);
  p.trace = project_enu(load_trace(trace_csv, config));
  p.scenario = config.scenario;
  p.base = config.channel;
  return p;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "V2X channel simulator and GA calibration (C++ core)";

  py::register_exception<DomainError>(m, "DomainError", PyExc_ValueError);
  py::register_exception<ParseError>(m, "ParseError", PyExc_ValueError);
  py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);

  py::enum_<DataRate>(m, "DataRate")
      .value("Mbps6", DataRate::Mbps6)
      .value("Mbps12", DataRate::Mbps12)
      .value("Mbps18", DataRate::Mbps18)
      .value("Mbps27", DataRate::Mbps27);
  py::enum_<SlowFading>(m, "SlowFading")
      .value("FreeSpaceOnly", SlowFading::FreeSpaceOnly)
      .value("Lognormal", SlowFading::Lognormal);
  py::enum_<FastFading>(m, "FastFading").value("None_", FastFading::None).value("Nakagami", FastFading::Nakagami);

  py::class_<RadioParams>(m, "RadioParams")
      .def(py::init<>())
      .def_readwrite("tx_power", &RadioParams::tx_power)
      .def_readwrite("antenna_gain_tx", &RadioParams::antenna_gain_tx)
      .def_readwrite("antenna_gain_rx", &RadioParams::antenna_gain_rx)
      .def_readwrite("carrier_frequency", &RadioParams::carrier_frequency)
      .def_readwrite("data_rate", &RadioParams::data_rate)
      .def_readwrite("noise_floor", &RadioParams::noise_floor)
      .def_readwrite("rx_sensitivity", &RadioParams::rx_sensitivity)
      .def_readwrite("dsrc_profile", &RadioParams::dsrc_profile)
      .def("snr_threshold", [](const RadioParams& r) { return r.snr_thresholds.threshold(r.data_rate); });

  py::class_<FadingParams>(m, "FadingParams")
      .def(py::init<>())
      .def_readwrite("slow_model", &FadingParams::slow_model)
      .def_readwrite("fast_model", &FadingParams::fast_model)
      .def_readwrite("alpha", &FadingParams::alpha)
      .def_readwrite("system_loss", &FadingParams::system_loss)
      .def_readwrite("sigma", &FadingParams::sigma)
      .def_readwrite("nakagami_m", &FadingParams::nakagami_m)
      .def_readwrite("reference_distance", &FadingParams::reference_distance);

  py::class_<ChannelParams>(m, "ChannelParams")
      .def(py::init<>())
      .def_readwrite("radio", &ChannelParams::radio)
      .def_readwrite("fading", &ChannelParams::fading);

  m.def("preset", [](const std::string& name) {
    auto p = preset_by_name(name);
    if (!p) throw py::value_error("unknown preset '" + name + "'");
    return *p;
  }, py::arg("name"));

  m.def("free_space_rx_power", &free_space_rx_power, py::arg("radio"), py::arg("fading"),
        "Received power at the reference distance, dBm.");
  m.def("mean_rx_power", &mean_rx_power, py::arg("radio"), py::arg("fading"), py::arg("distance"));
  m.def("deterministic_gain_db", &deterministic_gain_db, py::arg("radio"), py::arg("fading"), py::arg("distance"));
  m.def("is_received", [](double rx_power, const RadioParams& radio) {
    const auto r = is_received(rx_power, radio);
    return py::make_tuple(r.delivered, std::string(to_string(r.reason)));
  }, py::arg("rx_power"), py::arg("radio"));

  m.def("nakagami_samples", [](double omega, double shape, std::size_t n, std::uint64_t seed) {
    SplitMix64 rng(seed);
    std::vector<double> out(n);
    for (auto& x : out) x = nakagami_power_sample(omega, shape, rng);
    return out;
  }, py::arg("omega"), py::arg("m"), py::arg("n"), py::arg("seed") = 1,
        "Nakagami-m power samples in linear units (mean omega).");

  m.def("resolve_config", [](const std::string& text) { return to_config_text(resolve(text)); },
        py::arg("config_text") = "", "Fully resolved configuration echo.");

  m.def("synth", [](const std::string& config_text) {
    const RunConfig config = resolve(config_text);
    const SyntheticSpec spec = synthetic_spec(config);
    const SyntheticDataset data = generate_synthetic(spec, config.scenario);
    RunConfig planted = config;
    planted.rsu = spec.rsu;
    planted.scenario.master_seed = data.scenario.master_seed;
    return std::map<std::string, std::string>{{"trace.csv", export_trace_csv(data.trace)},
                                              {"observed_pdr.csv", export_pdr_csv(data.observed)},
                                              {"delivery_log.csv", export_log_csv(data.log)},
                                              {"planted.cfg", to_config_text(planted)}};
  }, py::arg("config_text") = "", "Synthetic dataset; returns file name -> contents.");

  m.def("simulate", [](const std::string& trace_csv, const std::string& config_text) {
    const RunConfig config = resolve(config_text);
    const Trace trace = load_trace(trace_csv, config);
    const DeliveryLog log = run_scenario(trace, config.scenario, config.channel.radio, config.channel.fading);
    return std::map<std::string, std::string>{
        {"delivery_log.csv", export_log_csv(log)},
        {"pdr.csv", export_pdr_csv(pdr_curve(log, config.scenario.bin_width, config.scenario.pdr_direction))},
        {"heatmap.csv", export_heatmap_csv(heatmap(log, config.scenario.heatmap_cell, config.scenario.pdr_direction))},
        {"config_resolved.cfg", to_config_text(config)}};
  }, py::arg("trace_csv"), py::arg("config_text"));

  m.def("pdr", [](const std::string& log_csv, double bin_width, const std::string& direction) {
    return export_pdr_csv(pdr_curve(parse_log_csv(log_csv), bin_width, direction_from(direction)));
  }, py::arg("log_csv"), py::arg("bin_width") = 20.0, py::arg("direction") = "both");

  m.def("heatmap", [](const std::string& log_csv, double cell, const std::string& direction) {
    return export_heatmap_csv(heatmap(parse_log_csv(log_csv), cell, direction_from(direction)));
  }, py::arg("log_csv"), py::arg("cell") = 20.0, py::arg("direction") = "both");

  m.def("rmse", [](const std::string& observed_csv, const std::string& simulated_csv, double bin_width) {
    return rmse(parse_pdr_csv(observed_csv, bin_width), parse_pdr_csv(simulated_csv, bin_width));
  }, py::arg("observed_csv"), py::arg("simulated_csv"), py::arg("bin_width") = 20.0);

  m.def("objective", [](const py::dict& genome, const std::string& observed_csv, const std::string& trace_csv,
                        const std::string& config_text) {
    const RunConfig config = resolve(config_text);
    const Genome g = genome_from_dict(genome, genome_from(config.channel));
    const CalibrationProblem p = make_problem(observed_csv, trace_csv, config);
    py::gil_scoped_release release;
    return objective(g, p);
  }, py::arg("genome"), py::arg("observed_csv"), py::arg("trace_csv"), py::arg("config_text"),
        "RMSE of one genome; genes not given take the configured channel's values.");

  m.def("calibrate", [](const std::string& observed_csv, const std::string& trace_csv,
                        const std::string& config_text, std::optional<std::size_t> generations,
                        std::optional<std::size_t> population, std::optional<std::uint64_t> seed,
                        std::size_t jobs) {
    RunConfig config = resolve(config_text);
    if (generations) config.ga.generations = *generations;
    if (population) config.ga.population_size = *population;
    if (seed) config.ga.master_seed = *seed;
    const CalibrationProblem p = make_problem(observed_csv, trace_csv, config);
    CalibrationResult r;
    {
      py::gil_scoped_release release;
      EvolveOptions options;
      options.jobs = jobs;
      r = evolve(config.ga, p, search_space(config), options);
    }
    py::dict out;
    out["best_genome"] = genome_dict(r.best_genome);
    out["best_rmse"] = r.best_rmse;
    out["evaluations"] = r.evaluations;
    out["history_csv"] = history_to_csv(r);
    out["result"] = result_summary(r);
    return out;
  }, py::arg("observed_csv"), py::arg("trace_csv"), py::arg("config_text"), py::arg("generations") = py::none(),
        py::arg("population") = py::none(), py::arg("seed") = py::none(), py::arg("jobs") = 1);
}
