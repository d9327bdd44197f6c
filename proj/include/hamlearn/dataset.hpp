#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "hamlearn/hamiltonian.hpp"
#include "hamlearn/pauli.hpp"
#include "hamlearn/statevector.hpp"

namespace hamlearn {

/// One measurable. All qubit observables carry their canonical Pauli
/// expansion; projector/coherence kinds additionally record the basis
/// indices so expectations can be read off the amplitudes directly.
/// Lambda observables index the SU(3) generator basis (1..8, 9 = identity).
struct ObservableSpec {
  enum class Kind { Pauli, BasisProjector, CoherenceSym, CoherenceAnti,
                    Lambda };
  Kind kind = Kind::Pauli;
  PauliObservable pauli;
  std::size_t m = 0;
  std::size_t m2 = 0;
  int lambda_index = 0;
  std::string label;

  double bound() const;  // max |expectation|
};

double observable_expectation(const StateVector& state,
                              const ObservableSpec& obs);

/// <bra|O|ket> for qubit observables; backs the analytic-shift gradient.
cplx observable_cross_expectation(const StateVector& bra,
                                  const ObservableSpec& obs,
                                  const StateVector& ket);

ObservableSpec pauli_observable_spec(PauliObservable obs, std::string label);

/// sum_p sigma_axis^p as a spec, labelled mag_x / mag_z.
ObservableSpec magnetization_spec(char axis, int num_sites);

/// sigma_axis on three sites, e.g. the held-out X'/Z' checks.
ObservableSpec three_point_correlator(char axis, int num_sites, int s0,
                                      int s1, int s2);

/// All 2-point sigma_axis correlators over site pairs i<j, canonical order.
std::vector<ObservableSpec> correlator_pool(char axis, int num_sites);

/// n_each ZZ-type plus n_each XX-type correlators, drawn without
/// replacement from the pools with the given seed.
std::vector<ObservableSpec> select_training_observables(int num_sites,
                                                        int n_each,
                                                        std::uint64_t seed);

/// Computational-basis projectors |m><m| followed, pair by pair (m < m'),
/// by |m><m'| + |m'><m| and i(|m'><m| - |m><m'|). The full list of
/// local_dim^(2n) operators is informationally complete.
std::vector<ObservableSpec> coherence_observables(int num_qubits);

struct GeneratorInfo {
  nlohmann::json truth;  // serialized generating Hamiltonian or state
  std::uint64_t noise_seed = 0;
  nlohmann::json provenance;  // caller context: family, seeds, counts
};

/// Time series O^obs_{alpha,i,k}, k = 1..n_timesteps, stored densely.
struct TimeSeriesDataset {
  enum class Mode { HamiltonianLearning, StateLearning, Su3Learning };

  Mode mode = Mode::HamiltonianLearning;
  int num_sites = 0;
  int local_dim = 2;
  double dt = 0.0;
  int n_timesteps = 0;
  double noise_sigma = 0.0;
  std::vector<ObservableSpec> observables;
  std::vector<StateVector> initial_states;      // ham / su3 modes
  std::vector<ParamHamiltonian> hamiltonians;   // state mode
  std::vector<double> records;                  // [alpha][i][k-1]
  GeneratorInfo generator_info;

  int n_observables() const { return static_cast<int>(observables.size()); }
  int n_series() const {
    return mode == Mode::StateLearning
               ? static_cast<int>(hamiltonians.size())
               : static_cast<int>(initial_states.size());
  }
  std::size_t record_index(int alpha, int i, int k) const;
  double record(int alpha, int i, int k) const;
  void validate() const;
};

/// Records from the exact eigendecomposition propagator of H_true, with
/// optional additive Gaussian noise. Data generation never uses Trotter;
/// the learner's splitting error stays a model-side bias.
TimeSeriesDataset generate_ham_learning_data(
    const ParamHamiltonian& h_true, std::vector<StateVector> states,
    std::vector<ObservableSpec> observables, int n_timesteps, double dt,
    double noise_sigma = 0.0, std::uint64_t noise_seed = 0);

/// Roles swapped: one unknown state, several known Hamiltonians.
TimeSeriesDataset generate_state_learning_data(
    const StateVector& psi_true, std::vector<ParamHamiltonian> hamiltonians,
    std::vector<ObservableSpec> observables, int n_timesteps, double dt,
    double noise_sigma = 0.0, std::uint64_t noise_seed = 0);

/// Noiseless records the given Hamiltonian would produce on the dataset's
/// states and observables (exact propagator). Used for validation and for
/// regeneration self-consistency.
std::vector<double> exact_ham_records(const ParamHamiltonian& h,
                                      const TimeSeriesDataset& shape);

/// Noiseless records for a candidate state under the dataset's
/// Hamiltonians (state-learning mode).
std::vector<double> exact_state_records(const StateVector& psi,
                                        const TimeSeriesDataset& shape);

}  // namespace hamlearn
