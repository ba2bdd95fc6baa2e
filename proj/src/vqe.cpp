#include "dvqe/vqe.hpp"

#include <spdlog/spdlog.h>

#include <json.hpp>

#include "dvqe/eigensolver.hpp"
#include "dvqe/error.hpp"

namespace dvqe {

VqeResult vqe_minimize(const NormalOrderedOperator& h, const CIVector& reference,
                       const ExcitationPool& pool, const VqeConfig& config) {
  const GuccObjective objective(h, pool, reference, config.gucc);
  Eigen::VectorXd theta0 = config.initial.value_or(
      Eigen::VectorXd::Zero(static_cast<Eigen::Index>(pool.size())));
  if (static_cast<std::size_t>(theta0.size()) != pool.size()) {
    throw DimensionMismatch("initial parameters do not match the pool");
  }

  auto on_step = [&](const OptimizerStep& s) {
    spdlog::debug("vqe {:5d}  E {:.10f}  |g| {:.3e}  |dtheta| {:.3e}", s.iteration, s.value,
                  s.grad_inf_norm, s.max_step);
    if (!config.trace) return;
    nlohmann::json j = {{"iteration", s.iteration},
                        {"energy", s.value},
                        {"grad_inf_norm", s.grad_inf_norm},
                        {"max_theta_change", s.max_step},
                        {"evaluations", s.evaluations}};
    *config.trace << j.dump() << '\n';
  };
  const BfgsResult b = bfgs_minimize(
      [&](const Eigen::VectorXd& x, Eigen::VectorXd& g) {
        return objective.energy_and_gradient(x, g);
      },
      std::move(theta0), config.optimizer, on_step);

  VqeResult r;
  r.energy = b.value;
  r.theta = b.x;
  r.state = objective.state(b.x);
  r.iterations = b.iterations;
  r.evaluations = b.evaluations;
  r.gradient_inf_norm = b.gradient.size() ? b.gradient.lpNorm<Eigen::Infinity>() : 0.0;
  r.converged = b.converged;
  r.termination_reason = b.reason;
  r.min_energy_evaluated = objective.min_energy();
  r.max_norm_error = objective.max_norm_error();
  if (config.fci_state) {
    r.overlap_with_fci = overlap(r.state, *config.fci_state);
    r.delta_norm = delta_norm_from_overlap(*r.overlap_with_fci);
  }
  spdlog::info("vqe: E = {:.10f} after {} iterations ({}), |g| = {:.2e}", r.energy,
               r.iterations, to_string(r.termination_reason), r.gradient_inf_norm);
  return r;
}

}  // namespace dvqe
