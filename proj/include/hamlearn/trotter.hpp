#pragma once

#include <span>
#include <vector>

#include "hamlearn/circuit.hpp"
#include "hamlearn/hamiltonian.hpp"

namespace hamlearn {

/// Compiled first-order product-formula circuit for U(dt), with
/// `steps_per_dt` repetitions of the single-step layout inside. Every
/// rotation gate in `base` is owned by exactly one Hamiltonian term;
/// `term_slots[t]` lists the gate indices whose angle equals
/// 2 * coeffs[t] * dt / steps_per_dt.
struct TrotterPlan {
  Circuit base;
  double dt = 0.0;
  int steps_per_dt = 1;
  int num_sites = 0;
  std::vector<std::vector<int>> term_slots;

  double angle_scale() const { return 2.0 * dt / steps_per_dt; }
};

/// Build the evolution circuit for one dt. Two-site rotations are compiled
/// to CNOT/CY-conjugated single-site rotations; terms on nearest-neighbor
/// chains are scheduled into interleaved even/odd bond layers (general
/// graphs get greedy edge-coloring), which keeps the step depth independent
/// of the chain length. With `optimize` set, adjacent identical CNOT/CY
/// pairs are cancelled.
TrotterPlan build_plan(const ParamHamiltonian& h, double dt, int steps_per_dt,
                       bool optimize = true);

/// Fresh circuit with rotation angles bound from the given coefficients
/// (one value per Hamiltonian term).
Circuit bound_circuit(const TrotterPlan& plan, std::span<const double> coeffs);

/// Apply the base circuit k times; k = 0 returns the input.
StateVector evolve(const TrotterPlan& plan, const StateVector& state, int k);

/// Operator-norm (largest singular value) of
/// U_trotter(t; steps) - exp(-i H t).
double splitting_error(const ParamHamiltonian& h, double t, int steps);

}  // namespace hamlearn
