#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "hamlearn/dataset.hpp"
#include "hamlearn/hamiltonian.hpp"
#include "hamlearn/trace.hpp"
#include "hamlearn/trotter.hpp"

namespace hamlearn {

/// Model shape plus the compiled circuit template it trains through.
struct ForwardModel {
  ParamHamiltonian model;
  TrotterPlan plan;
};

ForwardModel make_forward_model(const ParamHamiltonian& shape, double dt,
                                int steps_per_dt);

/// Trotter-model predictions in the dataset's record layout.
std::vector<double> model_records(const ForwardModel& fm,
                                  std::span<const double> params,
                                  const TimeSeriesDataset& data);

double cost(const ForwardModel& fm, std::span<const double> params,
            const TimeSeriesDataset& data);

struct CostGradient {
  double cost = 0.0;
  std::vector<double> gradient;
};

/// Cost and its gradient with respect to the learnable parameters. The two
/// shift methods differentiate every angle slot of every circuit repetition
/// and chain through the parameter-to-gate map; finite differences perturb
/// the parameters directly (debugging reference). Work is data-parallel
/// over initial states with a fixed-order reduction.
CostGradient evaluate_cost_gradient(const ForwardModel& fm,
                                    std::span<const double> params,
                                    const TimeSeriesDataset& data,
                                    GradientMethod method, int threads = 1);

std::vector<double> gradient(const ForwardModel& fm,
                             std::span<const double> params,
                             const TimeSeriesDataset& data,
                             GradientMethod method, int threads = 1);

struct LearnConfig {
  double learning_rate = 0.05;
  double lr_decay = 1.0;  // multiplicative per epoch; 0.99 gives a slow decay
  int max_epochs = 2000;
  int steps_per_dt = 4;
  double cost_threshold = 1e-12;
  GradientMethod gradient_method = GradientMethod::ParameterShift;
  int snapshot_every = 10;
  int trace_every = 1;  // epochs between trace-distance evaluations, 0 = off
  int threads = 1;
  bool use_adam = false;  // not used for paper-parity runs
  std::uint64_t seed = 0;
};

std::vector<double> random_init_params(const ParamHamiltonian& shape,
                                       std::uint64_t seed);

/// Plain gradient descent on the summed squared-error cost. Stops at the
/// epoch cap or when the cost drops below the threshold; aborts with
/// DivergenceError past 1e6 x the initial cost. When `truth` is given the
/// trace distance at t = N_T dt is recorded every `trace_every` epochs.
TrainingTrace train(const LearnConfig& config, const TimeSeriesDataset& data,
                    const ParamHamiltonian& shape, std::vector<double> init,
                    const ParamHamiltonian* truth = nullptr);

/// || U_H(t)^dag U_K(t) - I ||_F / sqrt(dim).
double trace_distance_hamiltonians(const ParamHamiltonian& h,
                                   const ParamHamiltonian& k, double t);

/// Same, minimized over a global phase of U_K (reported for information).
double trace_distance_hamiltonians_phase_min(const ParamHamiltonian& h,
                                             const ParamHamiltonian& k,
                                             double t);

/// Mean squared deviation of the learned Hamiltonian's exact dynamics from
/// the held-out dataset's records.
double validation_error(const ParamHamiltonian& learned,
                        const TimeSeriesDataset& heldout);

/// Per-observable breakdown of the above: (label, mse).
std::vector<std::pair<std::string, double>> validation_report(
    const ParamHamiltonian& learned, const TimeSeriesDataset& heldout);

/// Expectation time series of one observable under exact evolution,
/// k = 1..steps.
std::vector<double> observable_series(const ParamHamiltonian& h,
                                      const StateVector& psi,
                                      const ObservableSpec& obs, double dt,
                                      int steps);

}  // namespace hamlearn
