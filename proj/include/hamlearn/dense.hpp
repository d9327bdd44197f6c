#pragma once

#include <Eigen/Dense>

#include "hamlearn/circuit.hpp"
#include "hamlearn/pauli.hpp"
#include "hamlearn/statevector.hpp"

// Explicit dense-matrix constructions. The simulator proper never routes
// through these; they back the splitting-error diagnostic and serve as the
// brute-force reference for the strided kernels in tests.
namespace hamlearn::dense {

Eigen::Matrix2cd single_pauli(char p);

/// Kronecker-product matrix of a Pauli string (site 0 = leftmost factor).
Eigen::MatrixXcd pauli_matrix(const PauliString& p);

/// Full 2^n x 2^n unitary of one gate.
Eigen::MatrixXcd gate_matrix(const Gate& g, int num_sites);

/// Product of gate matrices in application order.
Eigen::MatrixXcd circuit_unitary(const Circuit& c);

Eigen::VectorXcd to_eigen(const StateVector& s);
StateVector from_eigen(const Eigen::VectorXcd& v, int num_sites,
                       int local_dim = 2);

}  // namespace hamlearn::dense
