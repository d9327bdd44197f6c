#pragma once

#include <string>
#include <vector>

#include "hamlearn/statevector.hpp"

namespace hamlearn {

enum class GateKind { Rx, Ry, Rz, Cnot, Cy, PauliRot2 };

/// One gate. Rotation convention throughout the codebase:
///   R_P(theta) = exp(-i * theta * P / 2)
/// for any Pauli generator P, including two-site products.
struct Gate {
  GateKind kind;
  int q0 = 0;          // rotation site, or control for Cnot/Cy
  int q1 = -1;         // target for Cnot/Cy, second site for PauliRot2
  double angle = 0.0;  // rotation gates only
  char p0 = 'I';       // PauliRot2 generator on q0
  char p1 = 'I';       // PauliRot2 generator on q1

  static Gate rx(int q, double angle);
  static Gate ry(int q, double angle);
  static Gate rz(int q, double angle);
  static Gate cnot(int control, int target);
  static Gate cy(int control, int target);
  static Gate pauli_rot2(char p0, int q0, char p1, int q1, double angle);

  bool is_rotation() const {
    return kind == GateKind::Rx || kind == GateKind::Ry ||
           kind == GateKind::Rz || kind == GateKind::PauliRot2;
  }
  bool is_two_qubit() const { return q1 >= 0; }
};

struct Circuit {
  int num_sites = 0;
  std::vector<Gate> gates;
};

void apply_gate_inplace(StateVector& state, const Gate& g);
StateVector apply_gate(const StateVector& state, const Gate& g);

void apply_circuit_inplace(StateVector& state, const Circuit& c);
StateVector apply_circuit(const StateVector& state, const Circuit& c);

int two_qubit_gate_count(const Circuit& c);

/// ASAP-scheduled depth: each gate takes one time slot on the sites it
/// touches.
int circuit_depth(const Circuit& c);

/// One gate per line: NAME sites [angle]. Angles printed with 17 significant
/// digits for cross-implementation diffing.
std::string circuit_to_text(const Circuit& c);

}  // namespace hamlearn
