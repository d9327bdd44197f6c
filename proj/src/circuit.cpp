#include "hamlearn/circuit.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace hamlearn {

namespace {

void check_angle(double angle) {
  if (!std::isfinite(angle))
    throw std::invalid_argument("gate angle must be finite");
}

void check_sites(const Gate& g, int num_sites) {
  if (g.q0 < 0 || g.q0 >= num_sites)
    throw std::out_of_range("gate site out of range");
  if (g.is_two_qubit()) {
    if (g.q1 < 0 || g.q1 >= num_sites)
      throw std::out_of_range("gate site out of range");
    if (g.q0 == g.q1)
      throw std::invalid_argument("gate sites must be distinct");
  }
}

bool valid_rot_pauli(char c) { return c == 'X' || c == 'Y' || c == 'Z'; }

// Apply a 2x2 matrix to the amplitude pairs split by site q.
void apply_1q(StateVector& s, int q, cplx u00, cplx u01, cplx u10, cplx u11) {
  const int n = s.num_sites;
  const std::size_t stride = 1ULL << (n - 1 - q);
  const std::size_t dim = s.dim();
  for (std::size_t block = 0; block < dim; block += 2 * stride) {
    for (std::size_t j = 0; j < stride; ++j) {
      cplx& a0 = s.amplitudes[block + j];
      cplx& a1 = s.amplitudes[block + j + stride];
      const cplx t0 = u00 * a0 + u01 * a1;
      const cplx t1 = u10 * a0 + u11 * a1;
      a0 = t0;
      a1 = t1;
    }
  }
}

struct PairMasks {
  std::uint64_t flip = 0;
  std::uint64_t sign = 0;
  int n_y = 0;
};

PairMasks masks_for_pair(const Gate& g, int n) {
  PairMasks m;
  const std::uint64_t b0 = 1ULL << (n - 1 - g.q0);
  const std::uint64_t b1 = 1ULL << (n - 1 - g.q1);
  auto add = [&m](char p, std::uint64_t bit) {
    switch (p) {
      case 'X':
        m.flip |= bit;
        break;
      case 'Y':
        m.flip |= bit;
        m.sign |= bit;
        ++m.n_y;
        break;
      case 'Z':
        m.sign |= bit;
        break;
      default:
        throw std::invalid_argument("PauliRot2 generator must be X, Y or Z");
    }
  };
  add(g.p0, b0);
  add(g.p1, b1);
  return m;
}

cplx pair_phase(const PairMasks& m, std::uint64_t b) {
  static const cplx i_pow[4] = {cplx(1, 0), cplx(0, 1), cplx(-1, 0),
                                cplx(0, -1)};
  cplx ph = i_pow[m.n_y & 3];
  if (std::popcount(b & m.sign) & 1) ph = -ph;
  return ph;
}

// exp(-i theta/2 P_a Q_b) applied in place. The generator M satisfies
// M|b> = phase(b)|b ^ flip>, and M^2 = I, so the exponential is
// cos(theta/2) I - i sin(theta/2) M.
void apply_pauli_rot2(StateVector& s, const Gate& g) {
  const PairMasks m = masks_for_pair(g, s.num_sites);
  const double c = std::cos(g.angle / 2.0);
  const cplx is(0.0, std::sin(g.angle / 2.0));
  const std::size_t dim = s.dim();
  if (m.flip == 0) {
    for (std::size_t i = 0; i < dim; ++i)
      s.amplitudes[i] *= (c - is * pair_phase(m, i));
    return;
  }
  for (std::size_t i = 0; i < dim; ++i) {
    const std::size_t j = i ^ m.flip;
    if (j < i) continue;
    const cplx ai = s.amplitudes[i];
    const cplx aj = s.amplitudes[j];
    s.amplitudes[i] = c * ai - is * pair_phase(m, j) * aj;
    s.amplitudes[j] = c * aj - is * pair_phase(m, i) * ai;
  }
}

}  // namespace

Gate Gate::rx(int q, double angle) {
  check_angle(angle);
  return Gate{GateKind::Rx, q, -1, angle, 'X', 'I'};
}

Gate Gate::ry(int q, double angle) {
  check_angle(angle);
  return Gate{GateKind::Ry, q, -1, angle, 'Y', 'I'};
}

Gate Gate::rz(int q, double angle) {
  check_angle(angle);
  return Gate{GateKind::Rz, q, -1, angle, 'Z', 'I'};
}

Gate Gate::cnot(int control, int target) {
  return Gate{GateKind::Cnot, control, target, 0.0, 'I', 'I'};
}

Gate Gate::cy(int control, int target) {
  return Gate{GateKind::Cy, control, target, 0.0, 'I', 'I'};
}

Gate Gate::pauli_rot2(char p0, int q0, char p1, int q1, double angle) {
  check_angle(angle);
  if (!valid_rot_pauli(p0) || !valid_rot_pauli(p1))
    throw std::invalid_argument("PauliRot2 generator must be X, Y or Z");
  return Gate{GateKind::PauliRot2, q0, q1, angle, p0, p1};
}

void apply_gate_inplace(StateVector& state, const Gate& g) {
  if (state.local_dim != 2)
    throw std::invalid_argument("gates act on qubit registers");
  check_sites(g, state.num_sites);
  if (g.is_rotation()) check_angle(g.angle);

  const double h = g.angle / 2.0;
  switch (g.kind) {
    case GateKind::Rx:
      apply_1q(state, g.q0, cplx(std::cos(h), 0), cplx(0, -std::sin(h)),
               cplx(0, -std::sin(h)), cplx(std::cos(h), 0));
      break;
    case GateKind::Ry:
      apply_1q(state, g.q0, cplx(std::cos(h), 0), cplx(-std::sin(h), 0),
               cplx(std::sin(h), 0), cplx(std::cos(h), 0));
      break;
    case GateKind::Rz:
      apply_1q(state, g.q0, std::exp(cplx(0, -h)), cplx(0, 0), cplx(0, 0),
               std::exp(cplx(0, h)));
      break;
    case GateKind::Cnot: {
      const int n = state.num_sites;
      const std::uint64_t mc = 1ULL << (n - 1 - g.q0);
      const std::uint64_t mt = 1ULL << (n - 1 - g.q1);
      for (std::size_t i = 0; i < state.dim(); ++i)
        if ((i & mc) && !(i & mt))
          std::swap(state.amplitudes[i], state.amplitudes[i | mt]);
      break;
    }
    case GateKind::Cy: {
      const int n = state.num_sites;
      const std::uint64_t mc = 1ULL << (n - 1 - g.q0);
      const std::uint64_t mt = 1ULL << (n - 1 - g.q1);
      for (std::size_t i = 0; i < state.dim(); ++i)
        if ((i & mc) && !(i & mt)) {
          const cplx a0 = state.amplitudes[i];
          const cplx a1 = state.amplitudes[i | mt];
          state.amplitudes[i] = cplx(0, -1) * a1;
          state.amplitudes[i | mt] = cplx(0, 1) * a0;
        }
      break;
    }
    case GateKind::PauliRot2:
      apply_pauli_rot2(state, g);
      break;
  }
}

StateVector apply_gate(const StateVector& state, const Gate& g) {
  StateVector out = state;
  apply_gate_inplace(out, g);
  return out;
}

void apply_circuit_inplace(StateVector& state, const Circuit& c) {
  if (c.num_sites != state.num_sites)
    throw std::invalid_argument("circuit/state dimension mismatch");
  for (const auto& g : c.gates) apply_gate_inplace(state, g);
}

StateVector apply_circuit(const StateVector& state, const Circuit& c) {
  StateVector out = state;
  apply_circuit_inplace(out, c);
  return out;
}

int two_qubit_gate_count(const Circuit& c) {
  int k = 0;
  for (const auto& g : c.gates)
    if (g.is_two_qubit()) ++k;
  return k;
}

int circuit_depth(const Circuit& c) {
  std::vector<int> avail(static_cast<std::size_t>(c.num_sites), 0);
  int depth = 0;
  for (const auto& g : c.gates) {
    int at = avail[g.q0];
    if (g.is_two_qubit()) at = std::max(at, avail[g.q1]);
    ++at;
    avail[g.q0] = at;
    if (g.is_two_qubit()) avail[g.q1] = at;
    depth = std::max(depth, at);
  }
  return depth;
}

std::string circuit_to_text(const Circuit& c) {
  std::string out;
  char buf[128];
  for (const auto& g : c.gates) {
    switch (g.kind) {
      case GateKind::Rx:
      case GateKind::Ry:
      case GateKind::Rz: {
        const char* name = g.kind == GateKind::Rx   ? "RX"
                           : g.kind == GateKind::Ry ? "RY"
                                                    : "RZ";
        std::snprintf(buf, sizeof(buf), "%s %d %.17g\n", name, g.q0, g.angle);
        break;
      }
      case GateKind::Cnot:
        std::snprintf(buf, sizeof(buf), "CNOT %d %d\n", g.q0, g.q1);
        break;
      case GateKind::Cy:
        std::snprintf(buf, sizeof(buf), "CY %d %d\n", g.q0, g.q1);
        break;
      case GateKind::PauliRot2:
        std::snprintf(buf, sizeof(buf), "R%c%c %d %d %.17g\n", g.p0, g.p1,
                      g.q0, g.q1, g.angle);
        break;
    }
    out += buf;
  }
  return out;
}

}  // namespace hamlearn
