#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>

#include <nlohmann/json.hpp>

#include "wdds/econ.hpp"
#include "wdds/sysdyn.hpp"

namespace wdds {

enum class HydroProvider { surrogate, imported };

/// Everything a design evaluation needs besides the design itself. The wave
/// realization is drawn once so every candidate sees the same sea.
struct EvalContext {
  ParameterSet params;
  SeaState sea;
  SpectrumMode spectrum = SpectrumMode::standard;
  std::uint64_t seed = 1;
  HydroProvider provider = HydroProvider::surrogate;
  std::optional<HydroCoefficients> imported;
  SwroCurves curves = default_swro_curves();
  WaveRealization wave;
};

[[nodiscard]] EvalContext make_context(const ParameterSet& p, const SeaState& sea,
                                       std::uint64_t seed,
                                       SpectrumMode mode = SpectrumMode::standard);

/// Sets import mode. The coefficients must carry a geometry hash; designs with
/// a different geometry are rejected at evaluation time.
void use_imported_coefficients(EvalContext& ctx, HydroCoefficients coeffs);

/// Coefficients for a geometry under the context's provider. Throws
/// HydroFormatError in import mode when the geometry hash does not match.
[[nodiscard]] HydroCoefficients coefficients_for(const WecGeometry& g, const EvalContext& ctx);

inline constexpr double kPenaltyWeight = 10.0;
inline constexpr double kFailedObjective = 1e6;

struct Evaluation {
  DesignVector design;
  WecGeometry geometry;
  bool statically_unstable = false;
  bool kernel_decay_ok = true;
  DesalPlant plant;
  SimulationResult sim;
  CylinderSizing cylinder;
  SwroCost swro;
  CostBreakdown cost;
  PlantFlows mean_flows;   // m^3/day
  double awp = 0;          // m^3/yr
  double lcow = kInfeasibleCost;
  double penalty = 0;
  double objective = kFailedObjective;
  bool failed = false;
  std::string diagnostic;

  [[nodiscard]] bool feasible() const { return !failed && penalty == 0.0; }
};

struct EvalOptions {
  bool record_series = false;
};

/// geometry -> hydro -> simulate -> econ. Never throws for design-dependent
/// failures; those set `failed` and the sentinel objective.
[[nodiscard]] Evaluation evaluate(const DesignVector& d, const EvalContext& ctx,
                                  const EvalOptions& opt = {});

/// Sum of relative violations times the penalty weight.
[[nodiscard]] double penalty_term(const std::vector<ConstraintViolation>& v);

[[nodiscard]] double penalized_objective(const DesignVector& d, const EvalContext& ctx);

/// Stage objectives of the sequential workflows. Both return the penalised
/// value, or kFailedObjective.
struct StageValue {
  double value = kFailedObjective;
  bool feasible = false;
};
[[nodiscard]] StageValue lcoke_objective(const DesignVector& d, const EvalContext& ctx);
[[nodiscard]] StageValue lcof_objective(const DesignVector& d, const EvalContext& ctx);

/// Report document ("wdds-evaluation/1"): design, LCOW, cost breakdown,
/// production, constraint measurements and diagnostics.
[[nodiscard]] nlohmann::json evaluation_to_json(const Evaluation& e);

/// Fixed columns: t,theta,theta_dot,s,P_feed,Q_perm,Q_brine,Q_relief (SI).
void write_timeseries_csv(const TimeSeries& ts, std::ostream& out);

[[nodiscard]] nlohmann::json design_to_json(const DesignVector& d);
/// Requires all eight named fields; throws ConfigError otherwise.
[[nodiscard]] DesignVector design_from_json(const nlohmann::json& j);

}  // namespace wdds
