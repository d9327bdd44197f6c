#include "hamlearn/trotter.hpp"

#include <Eigen/SVD>
#include <algorithm>
#include <map>
#include <stdexcept>

#include "hamlearn/dense.hpp"

namespace hamlearn {

namespace {

// Conjugation classes for two-site rotations. exp(-i th/2 P_a Q_b) equals
// C R(th) C with a single self-inverse Clifford C in {CNOT, CY} and a
// single-site rotation R; grouping the terms of an edge by C lets the
// peephole pass cancel the inner C pairs.
enum class CliffordClass { CnotAB, CyAB, CyBA, CnotBA };

struct PairCompile {
  CliffordClass cls;
  GateKind rot;
  bool rot_on_a;  // rotation on the lower site of the edge?
};

// Keyed by the Pauli on the lower site then the higher site.
PairCompile compile_pair(char pa, char pb) {
  if (pa == 'X' && pb == 'X') return {CliffordClass::CnotAB, GateKind::Rx, true};
  if (pa == 'Y' && pb == 'X') return {CliffordClass::CnotAB, GateKind::Ry, true};
  if (pa == 'Z' && pb == 'Y') return {CliffordClass::CnotAB, GateKind::Ry, false};
  if (pa == 'Z' && pb == 'Z') return {CliffordClass::CnotAB, GateKind::Rz, false};
  if (pa == 'X' && pb == 'Y') return {CliffordClass::CyAB, GateKind::Rx, true};
  if (pa == 'Y' && pb == 'Y') return {CliffordClass::CyAB, GateKind::Ry, true};
  if (pa == 'Z' && pb == 'X') return {CliffordClass::CyAB, GateKind::Rx, false};
  if (pa == 'X' && pb == 'Z') return {CliffordClass::CyBA, GateKind::Rx, true};
  if (pa == 'Y' && pb == 'Z') return {CliffordClass::CnotBA, GateKind::Ry, true};
  throw std::invalid_argument("invalid Pauli pair");
}

Gate clifford_gate(CliffordClass cls, int a, int b) {
  switch (cls) {
    case CliffordClass::CnotAB:
      return Gate::cnot(a, b);
    case CliffordClass::CyAB:
      return Gate::cy(a, b);
    case CliffordClass::CyBA:
      return Gate::cy(b, a);
    case CliffordClass::CnotBA:
      return Gate::cnot(b, a);
  }
  throw std::logic_error("unreachable");
}

Gate rotation_gate(GateKind kind, int q) {
  switch (kind) {
    case GateKind::Rx:
      return Gate::rx(q, 0.0);
    case GateKind::Ry:
      return Gate::ry(q, 0.0);
    case GateKind::Rz:
      return Gate::rz(q, 0.0);
    default:
      throw std::logic_error("not a rotation kind");
  }
}

struct TermInfo {
  int term;
  int site_a = -1;  // lower site (or the only site)
  int site_b = -1;
  char pa = 'I';
  char pb = 'I';
};

TermInfo term_info(int idx, const PauliString& p) {
  TermInfo info;
  info.term = idx;
  for (int s = 0; s < p.num_sites(); ++s) {
    if (p.ops[s] == 'I') continue;
    if (info.site_a < 0) {
      info.site_a = s;
      info.pa = p.ops[s];
    } else {
      info.site_b = s;
      info.pb = p.ops[s];
    }
  }
  return info;
}

// Gate plus the index of the Hamiltonian term that owns its angle
// (-1 for Cliffords).
struct OwnedGate {
  Gate gate;
  int owner;
};

bool same_clifford(const Gate& a, const Gate& b) {
  return a.kind == b.kind &&
         (a.kind == GateKind::Cnot || a.kind == GateKind::Cy) &&
         a.q0 == b.q0 && a.q1 == b.q1;
}

// Remove adjacent identical self-inverse Clifford pairs until fixpoint.
void cancel_adjacent(std::vector<OwnedGate>& gates) {
  bool changed = true;
  while (changed) {
    changed = false;
    std::vector<OwnedGate> next;
    next.reserve(gates.size());
    std::size_t i = 0;
    while (i < gates.size()) {
      if (i + 1 < gates.size() &&
          same_clifford(gates[i].gate, gates[i + 1].gate)) {
        i += 2;
        changed = true;
      } else {
        next.push_back(gates[i]);
        ++i;
      }
    }
    gates = std::move(next);
  }
}

// Emission order for one Trotter step: single-site terms first, then edges
// layer by layer from a greedy edge-coloring (even/odd interleave on
// chains); within an edge, terms grouped by conjugation class.
std::vector<TermInfo> schedule_terms(const ParamHamiltonian& h) {
  std::vector<TermInfo> singles;
  std::map<std::pair<int, int>, std::vector<TermInfo>> edges;
  std::vector<std::pair<int, int>> edge_order;
  for (std::size_t t = 0; t < h.basis.size(); ++t) {
    TermInfo info = term_info(static_cast<int>(t), h.basis[t]);
    if (info.site_b < 0) {
      singles.push_back(info);
    } else {
      const auto key = std::make_pair(info.site_a, info.site_b);
      if (!edges.count(key)) edge_order.push_back(key);
      edges[key].push_back(info);
    }
  }

  std::vector<int> color(edge_order.size(), -1);
  int n_colors = 0;
  for (std::size_t e = 0; e < edge_order.size(); ++e) {
    std::vector<bool> used(edge_order.size() + 1, false);
    for (std::size_t f = 0; f < e; ++f) {
      const bool adjacent = edge_order[e].first == edge_order[f].first ||
                            edge_order[e].first == edge_order[f].second ||
                            edge_order[e].second == edge_order[f].first ||
                            edge_order[e].second == edge_order[f].second;
      if (adjacent) used[color[f]] = true;
    }
    int c = 0;
    while (used[c]) ++c;
    color[e] = c;
    n_colors = std::max(n_colors, c + 1);
  }

  auto class_rank = [](const TermInfo& info) {
    return static_cast<int>(compile_pair(info.pa, info.pb).cls);
  };

  std::vector<TermInfo> order = singles;
  for (int layer = 0; layer < n_colors; ++layer) {
    for (std::size_t e = 0; e < edge_order.size(); ++e) {
      if (color[e] != layer) continue;
      auto terms = edges[edge_order[e]];
      std::stable_sort(terms.begin(), terms.end(),
                       [&](const TermInfo& x, const TermInfo& y) {
                         return class_rank(x) < class_rank(y);
                       });
      order.insert(order.end(), terms.begin(), terms.end());
    }
  }
  return order;
}

}  // namespace

TrotterPlan build_plan(const ParamHamiltonian& h, double dt, int steps_per_dt,
                       bool optimize) {
  h.validate();
  if (!(dt > 0.0)) throw std::invalid_argument("dt must be positive");
  if (steps_per_dt < 1)
    throw std::invalid_argument("steps_per_dt must be >= 1");

  const std::vector<TermInfo> order = schedule_terms(h);

  std::vector<OwnedGate> gates;
  for (int step = 0; step < steps_per_dt; ++step) {
    for (const TermInfo& info : order) {
      if (info.site_b < 0) {
        const GateKind kind = info.pa == 'X'   ? GateKind::Rx
                              : info.pa == 'Y' ? GateKind::Ry
                                               : GateKind::Rz;
        gates.push_back({rotation_gate(kind, info.site_a), info.term});
      } else {
        const PairCompile pc = compile_pair(info.pa, info.pb);
        const Gate c = clifford_gate(pc.cls, info.site_a, info.site_b);
        const int rot_site = pc.rot_on_a ? info.site_a : info.site_b;
        gates.push_back({c, -1});
        gates.push_back({rotation_gate(pc.rot, rot_site), info.term});
        gates.push_back({c, -1});
      }
    }
  }

  if (optimize) cancel_adjacent(gates);

  TrotterPlan plan;
  plan.dt = dt;
  plan.steps_per_dt = steps_per_dt;
  plan.num_sites = h.num_sites;
  plan.base.num_sites = h.num_sites;
  plan.term_slots.assign(h.basis.size(), {});
  for (const OwnedGate& og : gates) {
    if (og.owner >= 0)
      plan.term_slots[og.owner].push_back(
          static_cast<int>(plan.base.gates.size()));
    plan.base.gates.push_back(og.gate);
  }
  // Every coefficient must control at least one angle slot.
  for (const auto& slots : plan.term_slots)
    if (slots.empty()) throw std::logic_error("term lost its gate slots");

  Circuit bound = bound_circuit(plan, h.coeffs);
  plan.base = std::move(bound);
  return plan;
}

Circuit bound_circuit(const TrotterPlan& plan,
                      std::span<const double> coeffs) {
  if (coeffs.size() != plan.term_slots.size())
    throw std::invalid_argument("coefficient vector length mismatch");
  Circuit c = plan.base;
  const double scale = plan.angle_scale();
  for (std::size_t t = 0; t < plan.term_slots.size(); ++t)
    for (int g : plan.term_slots[t]) {
      if (!c.gates[g].is_rotation())
        throw std::logic_error("slot does not point at a rotation gate");
      c.gates[g].angle = scale * coeffs[t];
    }
  return c;
}

StateVector evolve(const TrotterPlan& plan, const StateVector& state, int k) {
  if (k < 0) throw std::invalid_argument("k must be >= 0");
  StateVector out = state;
  for (int i = 0; i < k; ++i) apply_circuit_inplace(out, plan.base);
  return out;
}

double splitting_error(const ParamHamiltonian& h, double t, int steps) {
  if (t == 0.0) return 0.0;
  const TrotterPlan plan = build_plan(h, std::abs(t), steps);
  Eigen::MatrixXcd u_trot = dense::circuit_unitary(plan.base);
  if (t < 0.0) u_trot = u_trot.adjoint().eval();
  const Eigen::MatrixXcd diff = u_trot - exact_evolution(h, t);
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(diff);
  return svd.singularValues()(0);
}

}  // namespace hamlearn
