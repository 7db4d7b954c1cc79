#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "wdds/parallel.hpp"
#include "wdds/pipeline.hpp"

namespace wdds {

struct GaConfig {
  int population_size = 400;
  double mutation_rate = 0.2;   // per individual: flip one random bit
  double crossover_rate = 0.8;  // single point on the whole bitstring
  int elites = 1;
  int tournament_size = 2;
  int bits_per_variable = 8;
  int immigration_interval = 50;  // generations; 0 disables
  int immigrant_count = 300;      // worst individuals replaced
  int max_generations = 400;      // generation 0 included
  std::uint64_t seed = 1;
  int jobs = 1;  // evaluation threads; never changes results

  /// Throws ConfigError on inconsistent settings.
  void validate() const;
};

/// One bit per element (0 or 1), variables concatenated most significant bit
/// first.
using Genome = std::vector<std::uint8_t>;

[[nodiscard]] std::uint32_t max_code(int bits);
[[nodiscard]] std::vector<std::uint32_t> genome_codes(const Genome& g, int bits);
[[nodiscard]] double decode_value(std::uint32_t code, int bits, Bounds b);
/// Nearest grid code for x, clamped to the bounds.
[[nodiscard]] std::uint32_t encode_value(double x, int bits, Bounds b);
[[nodiscard]] std::vector<double> decode(const Genome& g, std::span<const Bounds> bounds,
                                         int bits);
[[nodiscard]] Genome encode(std::span<const double> x, std::span<const Bounds> bounds,
                            int bits);

struct Fitness {
  double value = kFailedObjective;  // minimised
  bool feasible = false;
};

struct HistoryRow {
  int generation = 0;
  double best = 0;
  double mean = 0;
  double feasible_fraction = 0;
};

struct GaResult {
  Genome best_genome;
  Fitness best;
  std::vector<HistoryRow> history;
  std::size_t evaluations = 0;  // distinct genomes evaluated
};

/// The objective must be pure: genomes are memoised and may be evaluated on
/// worker threads in any order.
using GenomeObjective = std::function<Fitness(const Genome&)>;

[[nodiscard]] GaResult ga_run(std::size_t n_bits, const GenomeObjective& objective,
                              const GaConfig& cfg, const std::vector<Genome>& initial = {});

/// Which design variables a stage optimises; the rest stay at `frozen`.
struct DesignSpace {
  std::array<bool, DesignVector::size> active{};
  DesignVector frozen = nominal_design();

  [[nodiscard]] std::size_t n_active() const;
  [[nodiscard]] std::vector<Bounds> bounds() const;
  [[nodiscard]] DesignVector expand(std::span<const double> active_values) const;
  [[nodiscard]] std::vector<double> project(const DesignVector& d) const;
  [[nodiscard]] std::vector<std::string> names() const;

  [[nodiscard]] static DesignSpace all();
  [[nodiscard]] static DesignSpace wec(const DesignVector& frozen);
  [[nodiscard]] static DesignSpace pto(const DesignVector& frozen);
  [[nodiscard]] static DesignSpace plant(const DesignVector& frozen);
};

using DesignObjective = std::function<Fitness(const DesignVector&)>;

struct StageResult {
  std::string name;
  std::string objective;  // lcow, lcoke or lcof
  std::vector<std::string> variables;
  DesignVector best;
  Fitness best_fitness;
  std::vector<HistoryRow> history;
  std::size_t evaluations = 0;
};

/// GA over the active subspace. With no active variables the frozen design is
/// returned after a single evaluation.
[[nodiscard]] StageResult optimize_stage(const std::string& name, const std::string& objective_name,
                                         const DesignSpace& space, const DesignObjective& objective,
                                         const GaConfig& cfg,
                                         const std::vector<DesignVector>& initial = {});

struct EvaluationSummary {
  DesignVector design;
  double lcow = kInfeasibleCost;
  double objective = kFailedObjective;
  bool feasible = false;
  bool failed = false;
  std::string diagnostic;

  friend bool operator==(const EvaluationSummary&, const EvaluationSummary&) = default;
};
[[nodiscard]] EvaluationSummary summarize(const Evaluation& e);

struct OptimizationReport {
  std::string workflow;  // mdo, sdo-a or sdo-b
  SeaState sea;
  std::string spectrum;
  std::uint64_t seed = 1;
  std::uint64_t params_checksum = 0;
  GaConfig ga;
  std::vector<StageResult> stages;
  EvaluationSummary best;
  EvaluationSummary nominal;
};

[[nodiscard]] OptimizationReport run_mdo(const EvalContext& ctx, const GaConfig& cfg);
[[nodiscard]] OptimizationReport run_sdo_a(const EvalContext& ctx, const GaConfig& cfg);
[[nodiscard]] OptimizationReport run_sdo_b(const EvalContext& ctx, const GaConfig& cfg);

/// One MDO run per sea state, each with its own wave realization drawn from
/// `seed`. Sea states run concurrently up to cfg.jobs; output order follows
/// the input order.
[[nodiscard]] std::vector<OptimizationReport> run_sensitivity(
    const ParameterSet& p, const std::vector<SeaState>& seas, const GaConfig& cfg,
    std::uint64_t seed, SpectrumMode mode = SpectrumMode::standard);

/// Schema "wdds-optimization/1". The thread count is not part of the report.
[[nodiscard]] nlohmann::json report_to_json(const OptimizationReport& r);
[[nodiscard]] OptimizationReport report_from_json(const nlohmann::json& j);
void save_report(const OptimizationReport& r, const std::filesystem::path& path);
[[nodiscard]] OptimizationReport load_report(const std::filesystem::path& path);

/// Columns: generation,best,mean,feasible_fraction.
void write_history_csv(const std::vector<HistoryRow>& h, std::ostream& out);
/// Columns: index,Tp,Hs,w,t,m,l1,Ap,Vacc,P0,Qpmax,lcow (P0 in Pa, Qpmax in
/// m^3/day). A best design that could not be priced leaves lcow empty.
void write_sensitivity_csv(const std::vector<OptimizationReport>& reports, std::ostream& out);

}  // namespace wdds
