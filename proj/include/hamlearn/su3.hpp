#pragma once

#include <Eigen/Dense>
#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include "hamlearn/dataset.hpp"
#include "hamlearn/trace.hpp"

namespace hamlearn::su3 {

using Matrix3cd = Eigen::Matrix3cd;

/// lambda_1 .. lambda_8 (Gell-Mann), lambda_9 = identity.
const Matrix3cd& generator(int index);

/// H = sum_{i=1..8} c_i lambda_i.
Matrix3cd hamiltonian_matrix(std::span<const double> c);

/// Totally antisymmetric structure constants of su(3),
/// [l_a, l_b] = 2i sum_c f^{abc} l_c, computed from
/// f^{abc} = -i/4 tr(l_a [l_b, l_c]) and cached. Indices are 1-based.
class StructureConstants {
 public:
  double operator()(int a, int b, int c) const;

 private:
  friend const StructureConstants& structure_constants();
  StructureConstants();
  std::array<double, 512> f_{};  // 8x8x8
};

const StructureConstants& structure_constants();

/// Truncated commutator series for U^dag O U with U = exp(-i H t):
/// sum_{m=0..order} (1/m!) ad_A^m(O), A = i t H.
Matrix3cd bch_conjugation(std::span<const double> c, const Matrix3cd& obs,
                          double t, int order);

/// Derivative of the truncated series with respect to c_p (p in 1..8),
/// including all cross terms of the multinomial expansion (built by the
/// product rule on the recursion). order 1 gives exactly i t [l_p, O].
Matrix3cd bch_gradient(std::span<const double> c, const Matrix3cd& obs,
                       double t, int order, int p);

/// Eigendecomposition reference for the conjugation and its derivative
/// (Daleckii-Krein divided differences for d exp).
Matrix3cd exact_conjugation(std::span<const double> c, const Matrix3cd& obs,
                            double t);
Matrix3cd exact_conjugation_gradient(std::span<const double> c,
                                     const Matrix3cd& obs, double t, int p);

/// Conjugated observable and all eight derivatives, via the series when it
/// converges (tail norm below 1e-8 at an order extended up to 40) and the
/// eigendecomposition otherwise, including whenever t * ||c||_1 > 1.
struct ConjugationBundle {
  Matrix3cd value;
  std::array<Matrix3cd, 8> gradients;
  bool exact_path = false;
  int order_used = 0;
};
ConjugationBundle conjugate_with_gradients(std::span<const double> c,
                                           const Matrix3cd& obs, double t,
                                           int order);

/// M = sum_{j=1..8} a_j lambda_j + a_9 I for Hermitian M.
std::array<double, 9> lambda_decompose(const Matrix3cd& m);

/// The primitive expectations a gradient evaluation consumes:
/// <psi_i | lambda_j | psi_i> for j = 1..9, per (observable, state) pair.
/// The count is independent of the number of timesteps.
struct MeasurementLedger {
  struct Entry {
    int alpha;
    int state;
    int lambda_index;
  };
  std::vector<Entry> entries;
  bool lambda_basis = true;  // false when an observable is not a generator
  std::size_t size() const { return entries.size(); }
};

struct CostGradient {
  double cost = 0.0;
  std::array<double, 8> gradient{};
  MeasurementLedger ledger;
};

/// Residual-weighted gradient of the squared-error cost, assembled from
/// the lambda-basis decomposition of the conjugated observables and the
/// primitive expectations in the ledger.
CostGradient su3_cost_gradient(std::span<const double> c,
                               const TimeSeriesDataset& data, int order);

struct Su3LearnConfig {
  double learning_rate = 0.05;
  double lr_decay = 1.0;
  int max_epochs = 2000;
  double cost_threshold = 1e-12;
  int order = 12;
  int snapshot_every = 10;
};

TrainingTrace learn_su3(const Su3LearnConfig& config,
                        const TimeSeriesDataset& data,
                        std::array<double, 8> init,
                        const std::array<double, 8>* truth = nullptr);

/// Exact qutrit dynamics records for the lambda observables with the given
/// indices (1..9).
TimeSeriesDataset generate_su3_data(std::span<const double> c_true,
                                    const std::vector<int>& lambda_indices,
                                    int n_states, int n_timesteps, double dt,
                                    std::uint64_t state_seed);

}  // namespace hamlearn::su3
