#include "winfty/descent.hpp"

#include <cmath>
#include <limits>

namespace winfty {

ArmijoOutcome armijo_backtrack(double energy0, double pairing, double gamma, double t_min,
                               const std::function<std::optional<double>(double)>& energy_at) {
  if (!(pairing < 0.0))
    throw std::invalid_argument("armijo: pairing must be strictly negative");
  if (!(gamma > 0.0 && gamma < 1.0))
    throw std::invalid_argument("armijo: gamma must lie in (0,1)");
  for (double t = 0.5; t >= t_min; t *= 0.5) {
    const std::optional<double> energy = energy_at(t);
    if (energy && *energy - energy0 <= gamma * t * pairing) return {true, t, *energy};
  }
  return {};
}

std::optional<ArmijoResult> armijo_search(const ReferenceMesh& mesh, const DeformationMap& phi,
                                          const std::vector<Vec2>& direction, double energy0,
                                          double pairing, const DescentConfig& config,
                                          const CostIntegrand& problem,
                                          const PenaltyConfig* penalty) {
  ArmijoResult result;
  auto energy_at = [&](double t) -> std::optional<double> {
    DeformationMap trial;
    trial.values.resize(phi.values.size());
    for (std::size_t i = 0; i < phi.values.size(); ++i)
      trial.values[i] = phi.values[i] + t * direction[i];
    const AdmissibilityReport report = check_admissible(mesh, trial);
    if (!report.admissible) return std::nullopt;
    try {
      FeFunction u = solve_state(mesh, trial, problem);
      const double energy = evaluate_cost(mesh, trial, u, problem, penalty);
      result.phi = std::move(trial);
      result.u = std::move(u);
      return energy;
    } catch (const SolveError&) {
      return std::nullopt;
    } catch (const std::domain_error&) {
      return std::nullopt;
    } catch (const std::runtime_error&) {
      return std::nullopt;
    }
  };
  const ArmijoOutcome outcome =
      armijo_backtrack(energy0, pairing, config.gamma, config.t_min(), energy_at);
  if (!outcome.accepted) return std::nullopt;
  result.t = outcome.t;
  result.energy = outcome.energy;
  return result;
}

LevelResult optimize_level(const ReferenceMesh& mesh, const DeformationMap& phi0,
                           const DescentConfig& config, const CostIntegrand& problem,
                           const TargetShape& target, const PenaltyConfig* penalty, int level) {
  {
    const AdmissibilityReport report = check_admissible(mesh, phi0);
    if (!report.admissible)
      throw std::invalid_argument("optimize_level: initial deformation is not admissible");
  }
  const bool converge_mode = config.mode == RunMode::Converge;
  const int carry_cap = config.max_steps_per_level;
  // Converge mode runs past the carry cap until the step length bottoms out.
  const int step_cap = converge_mode ? std::numeric_limits<int>::max() : carry_cap;

  LevelResult result;
  DeformationMap phi = phi0;
  FeFunction u = solve_state(mesh, phi, problem);
  double energy = evaluate_cost(mesh, phi, u, problem, penalty);

  AdmmState warm;
  bool have_warm = false;
  int cold_iterations = 0;
  double t_arrived = 0.0;
  int k = 0;
  std::string pending_stop;

  for (;;) {
    const FeFunction p = solve_adjoint(mesh, phi, u, problem);
    const ShapeGradient grad = assemble_shape_gradient(mesh, phi, u, p, problem, penalty);
    DirectionResult dir = admm_direction(mesh, phi, grad, config.admm, have_warm ? &warm : nullptr);
    if (have_warm) {
      ++result.warm_total;
      if (dir.state.iterations <= cold_iterations) ++result.warm_faster_or_equal;
    } else {
      cold_iterations = dir.state.iterations;
    }
    warm = dir.state;
    have_warm = true;

    const double pairing = evaluate_pairing(grad, dir.direction);
    const double dual = -pairing;
    const auto [dphi_norm, dphi_inv] = deformation_norms(mesh, phi);
    result.rows.push_back({level, k, mesh.h, t_arrived, energy, pairing, dual,
                           discrete_hcd(mesh, phi, target), dphi_norm, dphi_inv,
                           volume(mesh, phi)});

    if (!pending_stop.empty()) {
      result.stop_reason = pending_stop;
      break;
    }
    if (dual < config.stationarity_tol * (1.0 + std::abs(energy))) {
      result.stop_reason = "stationary";
      break;
    }
    if (k >= step_cap) {
      result.stop_reason = "step-cap";
      break;
    }

    const std::optional<ArmijoResult> step =
        armijo_search(mesh, phi, dir.direction, energy, pairing, config, problem, penalty);
    if (!step) {
      result.stop_reason = "rejected";
      break;
    }
    phi = step->phi;
    u = step->u;
    energy = step->energy;
    t_arrived = step->t;
    ++k;
    if (converge_mode && k == carry_cap) result.phi_carry = phi;
    if (step->t <= config.t_min()) pending_stop = "step-min";
  }

  result.phi_final = phi;
  result.steps_accepted = k;
  if (!converge_mode || k < carry_cap) {
    result.phi_carry = result.phi_final;
    result.k_star = k;
  } else {
    result.k_star = carry_cap;
  }
  return result;
}

namespace {

std::optional<double> pair_eoc(double v_coarse, double v_fine, double h_coarse, double h_fine) {
  if (!(v_coarse > 0.0) || !(v_fine > 0.0)) return std::nullopt;
  return (std::log(v_coarse) - std::log(v_fine)) / (std::log(h_coarse) - std::log(h_fine));
}

}  // namespace

CascadeResult cascade(const DescentConfig& config, const ExperimentSetup& setup,
                      const ReferenceMesh& mesh0) {
  if (config.levels < 1) throw std::invalid_argument("cascade: levels must be >= 1");
  CascadeResult result;
  ReferenceMesh mesh = mesh0;
  DeformationMap phi = identity_map(mesh);

  for (int level = 0; level < config.levels; ++level) {
    const std::optional<PenaltyConfig> penalty = setup.penalty_at(mesh.h);
    const LevelResult lr = optimize_level(mesh, phi, config, setup.integrand, setup.target,
                                          penalty ? &*penalty : nullptr, level);
    result.history.insert(result.history.end(), lr.rows.begin(), lr.rows.end());

    ConvergenceRow row;
    row.h = mesh.h;
    if (penalty) row.mu = penalty->mu;
    row.energy = lr.rows.back().energy;
    row.hcd = lr.rows.back().hcd;
    if (!result.table.rows.empty()) {
      const ConvergenceRow& prev = result.table.rows.back();
      row.eoc_energy = pair_eoc(prev.energy, row.energy, prev.h, row.h);
      row.eoc_hcd = pair_eoc(prev.hcd, row.hcd, prev.h, row.h);
    }
    result.table.rows.push_back(row);
    result.meshes.push_back(mesh);
    result.final_phis.push_back(lr.phi_final);

    if (level + 1 < config.levels) {
      auto [fine_mesh, fine_phi] = refine_congruent(mesh, lr.phi_carry);
      mesh = std::move(fine_mesh);
      phi = std::move(fine_phi);
    }
  }
  return result;
}

}  // namespace winfty
