#pragma once

#include <string>
#include <vector>

#include "hamlearn/statevector.hpp"

namespace hamlearn {

/// Tensor product of single-site operators, one character per site from
/// {I, X, Y, Z}. Site 0 is the leftmost character.
struct PauliString {
  std::string ops;

  PauliString() = default;
  explicit PauliString(std::string s);

  int num_sites() const { return static_cast<int>(ops.size()); }
  int support() const;  // number of non-identity sites

  static PauliString identity(int n);
  static PauliString single(int n, int site, char p);
  static PauliString two(int n, int site0, char p0, int site1, char p1);

  bool operator==(const PauliString& o) const { return ops == o.ops; }
  bool operator<(const PauliString& o) const { return ops < o.ops; }
};

/// Real-weighted sum of Pauli strings. Hermitian by construction.
struct PauliObservable {
  struct Term {
    double weight;
    PauliString string;
  };
  std::vector<Term> terms;

  int num_sites() const;
  double weight_l1() const;  // sum of |weights|, bounds any expectation
};

/// X^M or Z^M: sum over sites of the single-site Pauli, unit weights.
PauliObservable magnetization_observable(char axis, int num_sites);

/// <bra|P|ket> for a single string; states need not be equal.
cplx pauli_matrix_element(const StateVector& bra, const PauliString& p,
                          const StateVector& ket);

double expectation(const StateVector& state, const PauliString& p);
double expectation(const StateVector& state, const PauliObservable& obs);
cplx cross_expectation(const StateVector& bra, const PauliObservable& obs,
                       const StateVector& ket);

}  // namespace hamlearn
