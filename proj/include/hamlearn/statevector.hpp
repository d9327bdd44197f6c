#pragma once

#include <complex>
#include <cstdint>
#include <vector>

namespace hamlearn {

using cplx = std::complex<double>;

/// Dense state vector over `local_dim^num_sites` basis states.
/// Site 0 is the most significant digit of the basis index, so for qubits
/// the index of |b0 b1 ... b_{n-1}> is sum_s b_s * 2^(n-1-s).
struct StateVector {
  std::vector<cplx> amplitudes;
  int num_sites = 0;
  int local_dim = 2;

  static StateVector zero_state(int num_sites, int local_dim = 2);

  std::size_t dim() const { return amplitudes.size(); }
  double norm() const;
  void normalize();
};

/// Normalized state with Gaussian-random amplitudes (Haar for complex ones).
/// Deterministic for a fixed seed; real_only restricts to real amplitudes.
StateVector random_state(int num_sites, std::uint64_t seed,
                         bool real_only = false, int local_dim = 2);

cplx inner(const StateVector& a, const StateVector& b);  // <a|b>
double overlap2(const StateVector& a, const StateVector& b);

}  // namespace hamlearn
