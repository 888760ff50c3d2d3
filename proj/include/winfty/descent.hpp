#pragma once

#include "winfty/admm.hpp"
#include "winfty/metrics.hpp"

#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace winfty {

enum class RunMode { Cascade, Converge };

struct DescentConfig {
  double gamma = 1e-4;          // Armijo constant, in (0,1)
  int t_min_exp = 11;           // smallest trial step 2^-t_min_exp
  int max_steps_per_level = 15; // accepted-step cap per level (cascade mode)
  int levels = 4;
  double stationarity_tol = 1e-8;  // scaled by (1 + |energy|)
  RunMode mode = RunMode::Cascade;
  AdmmParams admm;

  double t_min() const { return std::ldexp(1.0, -t_min_exp); }
};

/// One row per visited shape: step 0 is the level's initial shape, subsequent
/// rows are accepted steps (t is the step that produced the shape).
struct HistoryRow {
  int level = 0;
  int step = 0;
  double h = 0.0;
  double t = 0.0;
  double energy = 0.0;
  double pairing = 0.0;
  double dual_norm = 0.0;
  double hcd = 0.0;
  double dphi_norm = 0.0;
  double dphi_inv_norm = 0.0;
  double volume = 0.0;
};

struct ArmijoOutcome {
  bool accepted = false;
  double t = 0.0;
  double energy = 0.0;
};

/// Dyadic backtracking core: largest t in {1/2, 1/4, ..., t_min} satisfying
/// energy_at(t) - energy0 <= gamma * t * pairing.  energy_at returns nullopt
/// for trial steps that are inadmissible or fail to solve.  Requires
/// pairing < 0.
ArmijoOutcome armijo_backtrack(double energy0, double pairing, double gamma, double t_min,
                               const std::function<std::optional<double>(double)>& energy_at);

struct ArmijoResult {
  double t = 0.0;
  DeformationMap phi;
  FeFunction u;
  double energy = 0.0;
};

/// Armijo search along the direction field: trial deformation is
/// phi + t * direction evaluated nodally.  Returns nullopt when no admissible
/// step down to t_min achieves the decrease.
std::optional<ArmijoResult> armijo_search(const ReferenceMesh& mesh, const DeformationMap& phi,
                                          const std::vector<Vec2>& direction, double energy0,
                                          double pairing, const DescentConfig& config,
                                          const CostIntegrand& problem,
                                          const PenaltyConfig* penalty = nullptr);

struct LevelResult {
  DeformationMap phi_final;   // shape at the level's stopping point
  DeformationMap phi_carry;   // shape carried to the refined level (at k*)
  int k_star = 0;             // accepted steps before the carry snapshot
  int steps_accepted = 0;
  std::string stop_reason;    // "stationary" | "step-min" | "rejected" | "step-cap"
  std::vector<HistoryRow> rows;
  int warm_faster_or_equal = 0;  // warm-started ADMM solves within cold-start budget
  int warm_total = 0;
};

LevelResult optimize_level(const ReferenceMesh& mesh, const DeformationMap& phi0,
                           const DescentConfig& config, const CostIntegrand& problem,
                           const TargetShape& target, const PenaltyConfig* penalty = nullptr,
                           int level = 0);

struct CascadeResult {
  std::vector<HistoryRow> history;
  ConvergenceTable table;  // one row per level (final shape metrics)
  std::vector<ReferenceMesh> meshes;         // per level
  std::vector<DeformationMap> final_phis;    // per level, at the stopping point
};

/// Multi-level driver: optimizes, congruently refines carrying the deformation
/// at k*, and rescales the volume penalty with the new mesh size.
CascadeResult cascade(const DescentConfig& config, const ExperimentSetup& setup,
                      const ReferenceMesh& mesh0);

}  // namespace winfty
