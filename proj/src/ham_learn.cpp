#include "hamlearn/ham_learn.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <stdexcept>

#include "hamlearn/dense.hpp"
#include "hamlearn/rng.hpp"

namespace hamlearn {

std::string gradient_method_name(GradientMethod m) {
  switch (m) {
    case GradientMethod::ParameterShift:
      return "parameter-shift";
    case GradientMethod::AnalyticShift:
      return "analytic-shift";
    case GradientMethod::FiniteDifference:
      return "finite-difference";
  }
  throw std::logic_error("unreachable");
}

GradientMethod gradient_method_from_name(const std::string& name) {
  if (name == "parameter-shift") return GradientMethod::ParameterShift;
  if (name == "analytic-shift") return GradientMethod::AnalyticShift;
  if (name == "finite-difference") return GradientMethod::FiniteDifference;
  throw std::invalid_argument("unknown gradient method: " + name);
}

namespace {

struct SlotInfo {
  int gate;
  int term;
};

std::vector<SlotInfo> collect_slots(const TrotterPlan& plan) {
  std::vector<SlotInfo> slots;
  for (std::size_t t = 0; t < plan.term_slots.size(); ++t)
    for (int g : plan.term_slots[t]) slots.push_back({g, static_cast<int>(t)});
  std::sort(slots.begin(), slots.end(),
            [](const SlotInfo& a, const SlotInfo& b) { return a.gate < b.gate; });
  return slots;
}

void check_ham_mode(const TimeSeriesDataset& data) {
  if (data.mode != TimeSeriesDataset::Mode::HamiltonianLearning)
    throw std::invalid_argument(
        "dataset is not in Hamiltonian-learning mode");
}

Circuit bind(const ForwardModel& fm, std::span<const double> params) {
  ParamHamiltonian model = fm.model;
  model.set_params(params);
  return bound_circuit(fm.plan, model.coeffs);
}

struct StateWork {
  double cost = 0.0;
  std::vector<double> grad_term;
};

// Cost and per-term gradient contribution of one initial state. Shifting a
// slot at circuit application j perturbs every horizon k >= j, so each
// shifted state is propagated forward once with expectations taken at every
// remaining step.
StateWork state_cost_gradient(const ForwardModel& fm, const Circuit& bound,
                              const std::vector<SlotInfo>& slots,
                              const TimeSeriesDataset& data, int state_index,
                              GradientMethod method) {
  const int n_t = data.n_timesteps;
  const int n_obs = data.n_observables();
  StateWork work;
  work.grad_term.assign(fm.model.basis.size(), 0.0);

  std::vector<StateVector> prefix(n_t + 1);
  prefix[0] = data.initial_states[state_index];
  for (int j = 1; j <= n_t; ++j) {
    prefix[j] = prefix[j - 1];
    apply_circuit_inplace(prefix[j], bound);
  }

  std::vector<double> residual(static_cast<std::size_t>(n_obs) * n_t);
  for (int k = 1; k <= n_t; ++k)
    for (int a = 0; a < n_obs; ++a) {
      const double r =
          observable_expectation(prefix[k], data.observables[a]) -
          data.record(a, state_index, k);
      residual[(k - 1) * n_obs + a] = r;
      work.cost += r * r;
    }

  const double angle_to_coeff = fm.plan.angle_scale();
  Circuit shifted = bound;

  auto propagate_and_accumulate = [&](StateVector& phi, int j, int term,
                                      bool analytic, double sign) {
    for (int k = j; k <= n_t; ++k) {
      if (k > j) apply_circuit_inplace(phi, bound);
      for (int a = 0; a < n_obs; ++a) {
        double dtheta;
        if (analytic) {
          dtheta = observable_cross_expectation(phi, data.observables[a],
                                                prefix[k])
                       .real();
        } else {
          dtheta = sign * 0.5 *
                   observable_expectation(phi, data.observables[a]);
        }
        work.grad_term[term] +=
            2.0 * residual[(k - 1) * n_obs + a] * dtheta * angle_to_coeff;
      }
    }
  };

  for (int j = 1; j <= n_t; ++j) {
    for (const SlotInfo& slot : slots) {
      if (method == GradientMethod::AnalyticShift) {
        StateVector phi = prefix[j - 1];
        shifted.gates[slot.gate].angle += kPi;
        apply_circuit_inplace(phi, shifted);
        shifted.gates[slot.gate].angle -= kPi;
        propagate_and_accumulate(phi, j, slot.term, true, 1.0);
      } else {
        for (double sign : {1.0, -1.0}) {
          StateVector phi = prefix[j - 1];
          shifted.gates[slot.gate].angle += sign * kPi / 2;
          apply_circuit_inplace(phi, shifted);
          shifted.gates[slot.gate].angle -= sign * kPi / 2;
          propagate_and_accumulate(phi, j, slot.term, false, sign);
        }
      }
    }
  }
  return work;
}

std::vector<double> fold_to_params(const ParamHamiltonian& shape,
                                   const std::vector<double>& grad_term) {
  std::vector<double> grad(static_cast<std::size_t>(shape.num_params), 0.0);
  for (std::size_t t = 0; t < grad_term.size(); ++t)
    grad[shape.param_map[t]] += grad_term[t];
  return grad;
}

}  // namespace

ForwardModel make_forward_model(const ParamHamiltonian& shape, double dt,
                                int steps_per_dt) {
  ForwardModel fm;
  fm.model = shape;
  fm.plan = build_plan(shape, dt, steps_per_dt);
  return fm;
}

std::vector<double> model_records(const ForwardModel& fm,
                                  std::span<const double> params,
                                  const TimeSeriesDataset& data) {
  check_ham_mode(data);
  const Circuit bound = bind(fm, params);
  std::vector<double> out(data.records.size(), 0.0);
  for (int i = 0; i < data.n_series(); ++i) {
    StateVector psi = data.initial_states[i];
    for (int k = 1; k <= data.n_timesteps; ++k) {
      apply_circuit_inplace(psi, bound);
      for (int a = 0; a < data.n_observables(); ++a)
        out[data.record_index(a, i, k)] =
            observable_expectation(psi, data.observables[a]);
    }
  }
  return out;
}

double cost(const ForwardModel& fm, std::span<const double> params,
            const TimeSeriesDataset& data) {
  const std::vector<double> predicted = model_records(fm, params, data);
  double acc = 0.0;
  for (std::size_t r = 0; r < predicted.size(); ++r) {
    const double d = predicted[r] - data.records[r];
    acc += d * d;
  }
  return acc;
}

CostGradient evaluate_cost_gradient(const ForwardModel& fm,
                                    std::span<const double> params,
                                    const TimeSeriesDataset& data,
                                    GradientMethod method, int threads) {
  check_ham_mode(data);
  if (static_cast<int>(params.size()) != fm.model.num_params)
    throw std::invalid_argument("parameter vector length mismatch");

  CostGradient out;
  if (method == GradientMethod::FiniteDifference) {
    out.cost = cost(fm, params, data);
    out.gradient.resize(params.size());
    const double h = 1e-5;
    std::vector<double> p(params.begin(), params.end());
    for (std::size_t i = 0; i < p.size(); ++i) {
      const double saved = p[i];
      p[i] = saved + h;
      const double up = cost(fm, p, data);
      p[i] = saved - h;
      const double down = cost(fm, p, data);
      p[i] = saved;
      out.gradient[i] = (up - down) / (2 * h);
    }
    return out;
  }

  const Circuit bound = bind(fm, params);
  const std::vector<SlotInfo> slots = collect_slots(fm.plan);
  const int n_states = data.n_series();

  std::vector<StateWork> partials(n_states);
  if (threads > 1 && n_states > 1) {
    std::vector<std::future<StateWork>> jobs;
    jobs.reserve(n_states);
    for (int i = 0; i < n_states; ++i)
      jobs.push_back(std::async(std::launch::async, [&, i] {
        return state_cost_gradient(fm, bound, slots, data, i, method);
      }));
    for (int i = 0; i < n_states; ++i) partials[i] = jobs[i].get();
  } else {
    for (int i = 0; i < n_states; ++i)
      partials[i] = state_cost_gradient(fm, bound, slots, data, i, method);
  }

  std::vector<double> grad_term(fm.model.basis.size(), 0.0);
  for (const StateWork& w : partials) {
    out.cost += w.cost;
    for (std::size_t t = 0; t < grad_term.size(); ++t)
      grad_term[t] += w.grad_term[t];
  }
  out.gradient = fold_to_params(fm.model, grad_term);
  return out;
}

std::vector<double> gradient(const ForwardModel& fm,
                             std::span<const double> params,
                             const TimeSeriesDataset& data,
                             GradientMethod method, int threads) {
  return evaluate_cost_gradient(fm, params, data, method, threads).gradient;
}

std::vector<double> random_init_params(const ParamHamiltonian& shape,
                                       std::uint64_t seed) {
  Rng rng(seed);
  std::vector<double> p(static_cast<std::size_t>(shape.num_params));
  for (auto& x : p) x = rng.uniform(-1.0, 1.0);
  return p;
}

TrainingTrace train(const LearnConfig& config, const TimeSeriesDataset& data,
                    const ParamHamiltonian& shape, std::vector<double> init,
                    const ParamHamiltonian* truth) {
  check_ham_mode(data);
  const ForwardModel fm =
      make_forward_model(shape, data.dt, config.steps_per_dt);
  std::vector<double> params = std::move(init);
  if (static_cast<int>(params.size()) != shape.num_params)
    throw std::invalid_argument("initial parameter vector length mismatch");

  TrainingTrace trace;
  double lr = config.learning_rate;
  double initial_cost = -1.0;
  const double t_ref = data.n_timesteps * data.dt;

  // Adam state, used only behind the flag.
  std::vector<double> m(params.size(), 0.0), v(params.size(), 0.0);
  const double beta1 = 0.9, beta2 = 0.999, adam_eps = 1e-8;

  ParamHamiltonian current = shape;
  for (int epoch = 0; epoch < config.max_epochs; ++epoch) {
    const CostGradient cg = evaluate_cost_gradient(
        fm, params, data, config.gradient_method, config.threads);
    if (epoch == 0) initial_cost = cg.cost;
    if (initial_cost > 0.0 && cg.cost > 1e6 * initial_cost)
      throw DivergenceError("training diverged: cost exceeds 1e6 x initial");
    if (!std::isfinite(cg.cost))
      throw DivergenceError("training diverged: cost is not finite");

    TraceEntry entry;
    entry.epoch = epoch;
    entry.cost = cg.cost;
    if (truth && config.trace_every > 0 && epoch % config.trace_every == 0) {
      current.set_params(params);
      entry.trace_distance = trace_distance_hamiltonians(*truth, current,
                                                         t_ref);
    }
    trace.entries.push_back(entry);
    if (config.snapshot_every > 0 && epoch % config.snapshot_every == 0)
      trace.snapshots.push_back({epoch, params});

    if (cg.cost < config.cost_threshold) {
      trace.converged = true;
      trace.stop_reason = "cost below threshold";
      trace.final_cost = cg.cost;
      trace.final_params = params;
      return trace;
    }

    if (config.use_adam) {
      for (std::size_t i = 0; i < params.size(); ++i) {
        m[i] = beta1 * m[i] + (1 - beta1) * cg.gradient[i];
        v[i] = beta2 * v[i] + (1 - beta2) * cg.gradient[i] * cg.gradient[i];
        const double mh = m[i] / (1 - std::pow(beta1, epoch + 1));
        const double vh = v[i] / (1 - std::pow(beta2, epoch + 1));
        params[i] -= lr * mh / (std::sqrt(vh) + adam_eps);
      }
    } else {
      for (std::size_t i = 0; i < params.size(); ++i)
        params[i] -= lr * cg.gradient[i];
    }
    lr *= config.lr_decay;
  }

  trace.converged = false;
  trace.stop_reason = "epoch cap reached";
  trace.final_cost = cost(fm, params, data);
  trace.final_params = params;
  return trace;
}

double trace_distance_hamiltonians(const ParamHamiltonian& h,
                                   const ParamHamiltonian& k, double t) {
  if (h.num_sites != k.num_sites)
    throw std::invalid_argument("Hamiltonian dimension mismatch");
  const Eigen::MatrixXcd uh = exact_evolution(h, t);
  const Eigen::MatrixXcd uk = exact_evolution(k, t);
  const long dim = uh.rows();
  const Eigen::MatrixXcd m =
      uh.adjoint() * uk - Eigen::MatrixXcd::Identity(dim, dim);
  return m.norm() / std::sqrt(static_cast<double>(dim));
}

double trace_distance_hamiltonians_phase_min(const ParamHamiltonian& h,
                                             const ParamHamiltonian& k,
                                             double t) {
  const Eigen::MatrixXcd uh = exact_evolution(h, t);
  const Eigen::MatrixXcd uk = exact_evolution(k, t);
  const long dim = uh.rows();
  // ||e^{i phi} A - I||_F^2 = 2 dim - 2 |tr A| at the optimal phase.
  const double tr = std::abs((uh.adjoint() * uk).trace());
  const double norm2 = std::max(0.0, 2.0 * dim - 2.0 * tr);
  return std::sqrt(norm2 / dim);
}

double validation_error(const ParamHamiltonian& learned,
                        const TimeSeriesDataset& heldout) {
  const std::vector<double> predicted = exact_ham_records(learned, heldout);
  double acc = 0.0;
  for (std::size_t r = 0; r < predicted.size(); ++r) {
    const double d = predicted[r] - heldout.records[r];
    acc += d * d;
  }
  return acc / static_cast<double>(predicted.size());
}

std::vector<std::pair<std::string, double>> validation_report(
    const ParamHamiltonian& learned, const TimeSeriesDataset& heldout) {
  const std::vector<double> predicted = exact_ham_records(learned, heldout);
  std::vector<std::pair<std::string, double>> out;
  for (int a = 0; a < heldout.n_observables(); ++a) {
    double acc = 0.0;
    for (int i = 0; i < heldout.n_series(); ++i)
      for (int k = 1; k <= heldout.n_timesteps; ++k) {
        const double d = predicted[heldout.record_index(a, i, k)] -
                         heldout.record(a, i, k);
        acc += d * d;
      }
    acc /= static_cast<double>(heldout.n_series()) * heldout.n_timesteps;
    out.push_back({heldout.observables[a].label, acc});
  }
  return out;
}

std::vector<double> observable_series(const ParamHamiltonian& h,
                                      const StateVector& psi,
                                      const ObservableSpec& obs, double dt,
                                      int steps) {
  const Eigen::MatrixXcd prop = exact_evolution(h, dt);
  std::vector<double> out;
  out.reserve(steps);
  Eigen::VectorXcd v = dense::to_eigen(psi);
  for (int k = 1; k <= steps; ++k) {
    v = prop * v;
    out.push_back(observable_expectation(
        dense::from_eigen(v, psi.num_sites, psi.local_dim), obs));
  }
  return out;
}

}  // namespace hamlearn
