#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "v2xcal/aggregate.hpp"
#include "v2xcal/radio.hpp"
#include "v2xcal/simulator.hpp"
#include "v2xcal/trace.hpp"

namespace v2xcal {

// Genes in the canonical order of the calibration parameter table.
enum class Gene {
  TxPower,
  DataRate,
  Noise,
  RxSensitivity,
  SlowModel,
  FastModel,
  Alpha,
  SystemLoss,
  Sigma,
  NakagamiM,
};

inline constexpr std::size_t kGeneCount = 10;

inline constexpr std::array<Gene, kGeneCount> kAllGenes = {
    Gene::TxPower,   Gene::DataRate, Gene::Noise,      Gene::RxSensitivity, Gene::SlowModel,
    Gene::FastModel, Gene::Alpha,    Gene::SystemLoss, Gene::Sigma,         Gene::NakagamiM};

std::string_view gene_name(Gene gene);
std::optional<Gene> gene_from_name(std::string_view name);
bool is_categorical(Gene gene);

// Penalty returned for configurations whose deterministic path gain is
// positive somewhere along the trace.
inline constexpr double kPathGainPenalty = 1000.0;

struct Genome {
  double tx_power = 20.0;  // mW
  DataRate data_rate = DataRate::Mbps6;
  double noise = -110.0;           // dBm
  double rx_sensitivity = -110.0;  // dBm
  SlowFading slow_model = SlowFading::FreeSpaceOnly;
  FastFading fast_model = FastFading::None;
  double alpha = 1.0;
  double system_loss = 0.0;  // dB
  double sigma = 2.0;        // dB
  double nakagami_m = 1.0;

  // Numeric view used by the GA operators. Categorical genes map to
  // their megabit rate (DataRate) or enumerator index (models).
  double get(Gene gene) const;
  void set(Gene gene, double value);

  friend bool operator==(const Genome&, const Genome&) = default;
};

Genome genome_from(const ChannelParams& params);
// Gene fields come from the genome; everything else (gains, frequency,
// reference distance, SNR table) from `base`.
ChannelParams to_channel(const Genome& genome, const ChannelParams& base);

// Search bounds per gene plus optional pins.
struct SearchSpace {
  struct Range {
    double lo = 0.0;
    double hi = 0.0;
  };
  std::array<Range, kGeneCount> ranges{};  // continuous genes only
  std::vector<DataRate> data_rates;
  std::vector<SlowFading> slow_models;
  std::vector<FastFading> fast_models;
  // Pinned gene values (numeric view); a pinned gene never changes.
  std::array<std::optional<double>, kGeneCount> frozen{};

  const Range& range(Gene gene) const { return ranges[static_cast<std::size_t>(gene)]; }
  Range& range(Gene gene) { return ranges[static_cast<std::size_t>(gene)]; }

  void freeze(Gene gene, double value) { frozen[static_cast<std::size_t>(gene)] = value; }
  bool is_frozen(Gene gene) const { return frozen[static_cast<std::size_t>(gene)].has_value(); }

  bool contains(const Genome& genome) const;
};

// Ranges of the calibration parameter table.
SearchSpace table_search_space();

struct GaConfig {
  std::size_t population_size = 24;
  std::size_t generations = 200;
  std::size_t tournament_size = 3;
  double crossover_prob = 0.9;
  double mutation_prob_per_gene = 0.15;
  // Gaussian step standard deviation as a fraction of the gene's range.
  double mutation_sigma_fraction = 0.1;
  std::size_t elite_count = 2;
  std::uint64_t master_seed = 1;

  friend bool operator==(const GaConfig&, const GaConfig&) = default;
};

void validate(const GaConfig& config);

// Everything an objective evaluation needs besides the genome.
struct CalibrationProblem {
  PdrCurve observed;
  ProjectedTrace trace;
  ScenarioConfig scenario;
  // Source of the non-gene radio and fading fields.
  ChannelParams base;
};

// True if deterministic_gain_db is positive anywhere on the sweep
// {d0, d0 + 1 m, ...} up to the farthest trace point.
bool violates_path_gain(const ChannelParams& channel, const CalibrationProblem& problem);

// kPathGainPenalty for path-gain violations, else the RMSE between the
// observed curve and a simulation with the genome's parameters. The
// simulation always uses problem.scenario.master_seed so that fitness
// differences come from parameters alone.
double objective(const Genome& genome, const CalibrationProblem& problem);

struct Evaluation {
  std::size_t generation = 0;
  std::size_t individual = 0;
  Genome genome;
  double rmse = 0.0;

  friend bool operator==(const Evaluation&, const Evaluation&) = default;
};

struct CalibrationResult {
  Genome best_genome;
  double best_rmse = 0.0;
  std::vector<Evaluation> history;
  std::size_t evaluations = 0;
};

struct EvolveOptions {
  // Worker threads for fitness evaluation; results do not depend on it.
  std::size_t jobs = 1;
  // Called after each generation with (generation, best-so-far rmse).
  std::function<void(std::size_t, double)> on_generation;
  // Fitness override, mainly for tests; defaults to objective().
  std::function<double(const Genome&)> fitness;
};

// Generational GA: uniform initialisation, tournament selection, uniform
// crossover, clamped Gaussian mutation (resampling for categorical genes)
// and elitism.
CalibrationResult evolve(const GaConfig& config, const CalibrationProblem& problem,
                         const SearchSpace& space, const EvolveOptions& options = {});

// generation,individual,<ten genes in canonical order>,rmse
std::string history_to_csv(const CalibrationResult& result);
std::vector<Evaluation> parse_history_csv(std::string_view document);

// Key-value summary of the best genome, its RMSE and the evaluation count.
std::string result_summary(const CalibrationResult& result);

}  // namespace v2xcal
