#include "v2xcal/calibration.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <numeric>
#include <thread>

#include "v2xcal/csv.hpp"
#include "v2xcal/error.hpp"
#include "v2xcal/propagation.hpp"
#include "v2xcal/random.hpp"
#include "v2xcal/text.hpp"

namespace v2xcal {

namespace {

constexpr std::array<std::string_view, kGeneCount> kGeneNames = {
    "tx_power", "data_rate", "noise",       "rx_sensitivity", "slow_model",
    "fast_model", "alpha",   "system_loss", "sigma",          "nakagami_m"};

std::size_t idx(Gene gene) { return static_cast<std::size_t>(gene); }

}  // namespace

std::string_view gene_name(Gene gene) { return kGeneNames[idx(gene)]; }

std::optional<Gene> gene_from_name(std::string_view name) {
  const std::string key = to_lower(trim(name));
  for (Gene g : kAllGenes) {
    if (gene_name(g) == key) return g;
  }
  if (key == "noise_floor") return Gene::Noise;
  return std::nullopt;
}

bool is_categorical(Gene gene) {
  return gene == Gene::DataRate || gene == Gene::SlowModel || gene == Gene::FastModel;
}

double Genome::get(Gene gene) const {
  switch (gene) {
    case Gene::TxPower: return tx_power;
    case Gene::DataRate: return megabits(data_rate);
    case Gene::Noise: return noise;
    case Gene::RxSensitivity: return rx_sensitivity;
    case Gene::SlowModel: return static_cast<double>(slow_model);
    case Gene::FastModel: return static_cast<double>(fast_model);
    case Gene::Alpha: return alpha;
    case Gene::SystemLoss: return system_loss;
    case Gene::Sigma: return sigma;
    case Gene::NakagamiM: return nakagami_m;
  }
  return 0.0;
}

void Genome::set(Gene gene, double value) {
  switch (gene) {
    case Gene::TxPower: tx_power = value; return;
    case Gene::DataRate: {
      auto rate = data_rate_from_megabits(static_cast<int>(std::lround(value)));
      if (!rate) throw DomainError("data rate must be one of 6, 12, 18, 27 Mbps");
      data_rate = *rate;
      return;
    }
    case Gene::Noise: noise = value; return;
    case Gene::RxSensitivity: rx_sensitivity = value; return;
    case Gene::SlowModel:
      slow_model = value == 0.0 ? SlowFading::FreeSpaceOnly : SlowFading::Lognormal;
      return;
    case Gene::FastModel:
      fast_model = value == 0.0 ? FastFading::None : FastFading::Nakagami;
      return;
    case Gene::Alpha: alpha = value; return;
    case Gene::SystemLoss: system_loss = value; return;
    case Gene::Sigma: sigma = value; return;
    case Gene::NakagamiM: nakagami_m = value; return;
  }
}

Genome genome_from(const ChannelParams& p) {
  Genome g;
  g.tx_power = p.radio.tx_power;
  g.data_rate = p.radio.data_rate;
  g.noise = p.radio.noise_floor;
  g.rx_sensitivity = p.radio.rx_sensitivity;
  g.slow_model = p.fading.slow_model;
  g.fast_model = p.fading.fast_model;
  g.alpha = p.fading.alpha;
  g.system_loss = p.fading.system_loss;
  g.sigma = p.fading.sigma;
  g.nakagami_m = p.fading.nakagami_m;
  return g;
}

ChannelParams to_channel(const Genome& g, const ChannelParams& base) {
  ChannelParams p = base;
  p.radio.tx_power = g.tx_power;
  p.radio.data_rate = g.data_rate;
  p.radio.noise_floor = g.noise;
  p.radio.rx_sensitivity = g.rx_sensitivity;
  p.fading.slow_model = g.slow_model;
  p.fading.fast_model = g.fast_model;
  p.fading.alpha = g.alpha;
  p.fading.system_loss = g.system_loss;
  p.fading.sigma = g.sigma;
  p.fading.nakagami_m = g.nakagami_m;
  return p;
}

bool SearchSpace::contains(const Genome& genome) const {
  for (Gene gene : kAllGenes) {
    const double v = genome.get(gene);
    if (const auto& pin = frozen[idx(gene)]) {
      if (v != *pin) return false;
      continue;
    }
    switch (gene) {
      case Gene::DataRate:
        if (std::find(data_rates.begin(), data_rates.end(), genome.data_rate) == data_rates.end()) {
          return false;
        }
        break;
      case Gene::SlowModel:
        if (std::find(slow_models.begin(), slow_models.end(), genome.slow_model) == slow_models.end()) {
          return false;
        }
        break;
      case Gene::FastModel:
        if (std::find(fast_models.begin(), fast_models.end(), genome.fast_model) == fast_models.end()) {
          return false;
        }
        break;
      default:
        if (v < range(gene).lo || v > range(gene).hi) return false;
    }
  }
  return true;
}

SearchSpace table_search_space() {
  SearchSpace s;
  s.range(Gene::TxPower) = {20.0, 40.0};
  s.range(Gene::Noise) = {-110.0, -90.0};
  s.range(Gene::RxSensitivity) = {-120.0, -90.0};
  s.range(Gene::Alpha) = {1.0, 3.0};
  s.range(Gene::SystemLoss) = {0.0, 3.0};
  s.range(Gene::Sigma) = {1.0, 10.0};
  s.range(Gene::NakagamiM) = {1.0, 3.5};
  s.data_rates.assign(kAllDataRates.begin(), kAllDataRates.end());
  s.slow_models = {SlowFading::FreeSpaceOnly, SlowFading::Lognormal};
  s.fast_models = {FastFading::None, FastFading::Nakagami};
  return s;
}

void validate(const GaConfig& c) {
  if (c.population_size < 2) throw DomainError("population_size must be at least 2");
  if (c.generations < 1) throw DomainError("generations must be at least 1");
  if (c.tournament_size < 2) throw DomainError("tournament_size must be at least 2");
  if (c.elite_count >= c.population_size) throw DomainError("elite_count must be below population_size");
  if (!(c.crossover_prob >= 0.0 && c.crossover_prob <= 1.0)) {
    throw DomainError("crossover_prob must lie in [0, 1]");
  }
  if (!(c.mutation_prob_per_gene >= 0.0 && c.mutation_prob_per_gene <= 1.0)) {
    throw DomainError("mutation_prob_per_gene must lie in [0, 1]");
  }
  if (!(c.mutation_sigma_fraction > 0.0 && c.mutation_sigma_fraction <= 1.0)) {
    throw DomainError("mutation_sigma_fraction must lie in (0, 1]");
  }
}

bool violates_path_gain(const ChannelParams& channel, const CalibrationProblem& problem) {
  double farthest = 0.0;
  for (const auto& p : problem.trace.points) {
    farthest = std::max(farthest, distance(p.position, problem.scenario.rsu_position));
  }
  const double d0 = channel.fading.reference_distance;
  for (double d = d0; d <= std::max(farthest, d0); d += 1.0) {
    if (deterministic_gain_db(channel.radio, channel.fading, d) > 0.0) return true;
  }
  return false;
}

double objective(const Genome& genome, const CalibrationProblem& problem) {
  const ChannelParams channel = to_channel(genome, problem.base);
  if (violates_path_gain(channel, problem)) return kPathGainPenalty;
  const DeliveryLog log = run_scenario(problem.trace, problem.scenario, channel.radio, channel.fading);
  const PdrCurve simulated = pdr_curve(log, problem.scenario.bin_width, problem.scenario.pdr_direction);
  return rmse(problem.observed, simulated);
}

namespace {

enum class Phase : std::uint64_t { Init = 1, Breed = 2 };

class GeneticSearch {
 public:
  GeneticSearch(const GaConfig& config, const SearchSpace& space) : config_(config), space_(space) {}

  Genome random_genome(SplitMix64& rng) const {
    Genome g;
    for (Gene gene : kAllGenes) g.set(gene, sample_gene(gene, rng));
    return g;
  }

  std::size_t tournament(const std::vector<double>& fitness, SplitMix64& rng) const {
    std::size_t best = pick(fitness.size(), rng);
    for (std::size_t i = 1; i < config_.tournament_size; ++i) {
      const std::size_t c = pick(fitness.size(), rng);
      if (fitness[c] < fitness[best] || (fitness[c] == fitness[best] && c < best)) best = c;
    }
    return best;
  }

  void crossover(Genome& a, Genome& b, SplitMix64& rng) const {
    for (Gene gene : kAllGenes) {
      if (uniform_open01(rng) < 0.5) {
        const double va = a.get(gene);
        a.set(gene, b.get(gene));
        b.set(gene, va);
      }
    }
  }

  void mutate(Genome& g, SplitMix64& rng) const {
    for (Gene gene : kAllGenes) {
      if (uniform_open01(rng) >= config_.mutation_prob_per_gene) continue;
      if (space_.is_frozen(gene)) continue;
      if (is_categorical(gene)) {
        g.set(gene, sample_gene(gene, rng));
      } else {
        const auto& r = space_.range(gene);
        const double step = config_.mutation_sigma_fraction * (r.hi - r.lo) * standard_normal(rng);
        g.set(gene, std::clamp(g.get(gene) + step, r.lo, r.hi));
      }
    }
  }

 private:
  static std::size_t pick(std::size_t n, SplitMix64& rng) {
    return std::min(n - 1, static_cast<std::size_t>(uniform_open01(rng) * static_cast<double>(n)));
  }

  double sample_gene(Gene gene, SplitMix64& rng) const {
    if (const auto& pin = space_.frozen[idx(gene)]) return *pin;
    auto choose = [&](const auto& options) {
      if (options.empty()) throw DomainError("search space has no option for " + std::string(gene_name(gene)));
      return options[pick(options.size(), rng)];
    };
    switch (gene) {
      case Gene::DataRate: return megabits(choose(space_.data_rates));
      case Gene::SlowModel: return static_cast<double>(choose(space_.slow_models));
      case Gene::FastModel: return static_cast<double>(choose(space_.fast_models));
      default: {
        const auto& r = space_.range(gene);
        return r.lo == r.hi ? r.lo : uniform_in(rng, r.lo, r.hi);
      }
    }
  }

  const GaConfig& config_;
  const SearchSpace& space_;
};

// Evaluates fitness[i] for every i in `todo`, spreading work over threads.
void evaluate_all(const std::vector<Genome>& population, const std::vector<std::size_t>& todo,
                  std::vector<double>& fitness, const std::function<double(const Genome&)>& fn,
                  std::size_t jobs) {
  const std::size_t workers = std::max<std::size_t>(1, std::min(jobs, todo.size()));
  if (workers == 1) {
    for (std::size_t i : todo) fitness[i] = fn(population[i]);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  std::vector<std::thread> threads;
  threads.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    threads.emplace_back([&] {
      for (std::size_t k = next++; k < todo.size(); k = next++) {
        try {
          fitness[todo[k]] = fn(population[todo[k]]);
        } catch (...) {
          std::lock_guard lock(failure_mutex);
          if (!failure) failure = std::current_exception();
        }
      }
    });
  }
  for (auto& t : threads) t.join();
  if (failure) std::rethrow_exception(failure);
}

}  // namespace

CalibrationResult evolve(const GaConfig& config, const CalibrationProblem& problem,
                         const SearchSpace& space, const EvolveOptions& options) {
  validate(config);
  const std::function<double(const Genome&)> fitness_fn =
      options.fitness ? options.fitness : [&problem](const Genome& g) { return objective(g, problem); };
  const GeneticSearch ga(config, space);
  const std::size_t n = config.population_size;

  CalibrationResult result;
  result.history.reserve(n * config.generations);

  std::vector<Genome> population;
  population.reserve(n);
  SplitMix64 init_rng(derive_seed({config.master_seed, static_cast<std::uint64_t>(Phase::Init)}));
  for (std::size_t i = 0; i < n; ++i) population.push_back(ga.random_genome(init_rng));

  std::vector<double> fitness(n, 0.0);
  std::vector<std::size_t> todo(n);
  std::iota(todo.begin(), todo.end(), 0);

  for (std::size_t gen = 0; gen < config.generations; ++gen) {
    evaluate_all(population, todo, fitness, fitness_fn, options.jobs);
    for (std::size_t i = 0; i < n; ++i) {
      result.history.push_back({gen, i, population[i], fitness[i]});
      if (result.history.size() == 1 || fitness[i] < result.best_rmse) {
        result.best_rmse = fitness[i];
        result.best_genome = population[i];
      }
    }
    if (options.on_generation) options.on_generation(gen, result.best_rmse);
    if (gen + 1 == config.generations) break;

    // Next generation: elites verbatim (their fitness is known), then
    // offspring from tournament pairs.
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return fitness[a] < fitness[b]; });

    SplitMix64 rng(derive_seed({config.master_seed, static_cast<std::uint64_t>(Phase::Breed), gen}));
    std::vector<Genome> next;
    std::vector<double> next_fitness;
    next.reserve(n);
    for (std::size_t e = 0; e < config.elite_count; ++e) {
      next.push_back(population[order[e]]);
      next_fitness.push_back(fitness[order[e]]);
    }
    while (next.size() < n) {
      Genome a = population[ga.tournament(fitness, rng)];
      Genome b = population[ga.tournament(fitness, rng)];
      if (uniform_open01(rng) < config.crossover_prob) ga.crossover(a, b, rng);
      ga.mutate(a, rng);
      ga.mutate(b, rng);
      next.push_back(a);
      if (next.size() < n) next.push_back(b);
    }
    next_fitness.resize(n, 0.0);
    population = std::move(next);
    fitness = std::move(next_fitness);
    todo.clear();
    for (std::size_t i = config.elite_count; i < n; ++i) todo.push_back(i);
  }
  result.evaluations = result.history.size();
  return result;
}

namespace {

std::vector<std::string> gene_fields(const Genome& g) {
  return {format_double(g.tx_power),
          std::to_string(megabits(g.data_rate)),
          format_double(g.noise),
          format_double(g.rx_sensitivity),
          std::string(to_string(g.slow_model)),
          std::string(to_string(g.fast_model)),
          format_double(g.alpha),
          format_double(g.system_loss),
          format_double(g.sigma),
          format_double(g.nakagami_m)};
}

}  // namespace

std::string history_to_csv(const CalibrationResult& result) {
  std::string out = "generation,individual";
  for (Gene g : kAllGenes) {
    out += ',';
    out += gene_name(g);
  }
  out += ",rmse\n";
  for (const auto& e : result.history) {
    std::vector<std::string> fields{std::to_string(e.generation), std::to_string(e.individual)};
    for (auto& f : gene_fields(e.genome)) fields.push_back(std::move(f));
    fields.push_back(format_double(e.rmse));
    csv::append_row(out, fields);
  }
  return out;
}

std::vector<Evaluation> parse_history_csv(std::string_view document) {
  const csv::Table table = csv::read(document);
  if (table.header.empty()) throw ParseError(0, "", "empty history document");
  const csv::Columns cols(table.header);
  const std::size_t c_gen = cols.require({"generation"});
  const std::size_t c_ind = cols.require({"individual"});
  std::array<std::size_t, kGeneCount> c_gene{};
  for (Gene g : kAllGenes) c_gene[idx(g)] = cols.require({gene_name(g)});
  const std::size_t c_rmse = cols.require({"rmse"});

  std::vector<Evaluation> history;
  for (const auto& row : table.rows) {
    if (row.fields.size() != table.header.size()) throw ParseError(row.line, "", "wrong field count");
    Evaluation e;
    auto count = [&](std::size_t col, const char* name) {
      auto v = parse_uint(row.fields[col]);
      if (!v) throw ParseError(row.line, name, "not a count");
      return static_cast<std::size_t>(*v);
    };
    e.generation = count(c_gen, "generation");
    e.individual = count(c_ind, "individual");
    for (Gene g : kAllGenes) {
      const std::string& text = row.fields[c_gene[idx(g)]];
      const std::string name(gene_name(g));
      if (g == Gene::SlowModel) {
        auto m = slow_fading_from_string(text);
        if (!m) throw ParseError(row.line, name, "unknown slow fading model");
        e.genome.slow_model = *m;
      } else if (g == Gene::FastModel) {
        auto m = fast_fading_from_string(text);
        if (!m) throw ParseError(row.line, name, "unknown fast fading model");
        e.genome.fast_model = *m;
      } else {
        auto v = parse_double(text);
        if (!v) throw ParseError(row.line, name, "not a number");
        try {
          e.genome.set(g, *v);
        } catch (const DomainError& err) {
          throw ParseError(row.line, name, err.what());
        }
      }
    }
    auto r = parse_double(row.fields[c_rmse]);
    if (!r) throw ParseError(row.line, "rmse", "not a number");
    e.rmse = *r;
    history.push_back(e);
  }
  return history;
}

std::string result_summary(const CalibrationResult& result) {
  std::string out;
  const auto fields = gene_fields(result.best_genome);
  for (Gene g : kAllGenes) {
    out += "best.";
    out += gene_name(g);
    out += " = " + fields[idx(g)] + "\n";
  }
  out += "best_rmse = " + format_double(result.best_rmse) + "\n";
  out += "evaluations = " + std::to_string(result.evaluations) + "\n";
  return out;
}

}  // namespace v2xcal
