#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <Eigen/Dense>

#include "hamlearn/dense.hpp"
#include "hamlearn/trotter.hpp"
#include "test_support.hpp"

using namespace hamlearn;

namespace {

double state_distance(const StateVector& a, const StateVector& b) {
  double acc = 0.0;
  for (std::size_t i = 0; i < a.dim(); ++i)
    acc += std::norm(a.amplitudes[i] - b.amplitudes[i]);
  return std::sqrt(acc);
}

}  // namespace

TEST_CASE("every two-site Pauli pair compiles to its exponential") {
  static const char paulis[3] = {'X', 'Y', 'Z'};
  const double theta = 0.83;
  for (char pa : paulis)
    for (char pb : paulis) {
      auto h = build_custom(2, {PauliString::two(2, 0, pa, 1, pb)}, {1.0});
      // dt chosen so the slot angle is exactly theta.
      auto plan = build_plan(h, theta / 2.0, 1);
      const Eigen::MatrixXcd got = dense::circuit_unitary(plan.base);
      const Eigen::MatrixXcd want = dense::gate_matrix(
          Gate::pauli_rot2(pa, 0, pb, 1, theta), 2);
      CHECK((got - want).cwiseAbs().maxCoeff() < 1e-12);
    }
}

TEST_CASE("compiled pairs work on non-adjacent, reordered sites") {
  auto h = build_custom(3, {PauliString::two(3, 2, 'X', 0, 'Z')}, {0.7});
  auto plan = build_plan(h, 0.31, 1);
  const Eigen::MatrixXcd got = dense::circuit_unitary(plan.base);
  const Eigen::MatrixXcd want = dense::gate_matrix(
      Gate::pauli_rot2('Z', 0, 'X', 2, 2 * 0.7 * 0.31), 3);
  CHECK((got - want).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("plans contain only the compiled gate set") {
  auto h = build_generic_2local(3, 4);
  auto plan = build_plan(h, 0.1, 2);
  for (const auto& g : plan.base.gates) {
    const bool ok = g.kind == GateKind::Rx || g.kind == GateKind::Ry ||
                    g.kind == GateKind::Rz || g.kind == GateKind::Cnot ||
                    g.kind == GateKind::Cy;
    CHECK(ok);
  }
}

TEST_CASE("XYZ chain two-qubit gate count is 4n-4") {
  for (int n : {4, 8}) {
    auto h = build_xyz_chain(n, 1.0);
    auto plan = build_plan(h, 0.1, 1);
    CHECK(two_qubit_gate_count(plan.base) == 4 * n - 4);
  }
}

TEST_CASE("cancellation takes the 4-qubit step from depth 18 to 12") {
  auto h = build_xyz_chain(4, 1.0);
  auto raw = build_plan(h, 0.1, 1, /*optimize=*/false);
  auto opt = build_plan(h, 0.1, 1, /*optimize=*/true);
  CHECK(circuit_depth(raw.base) == 18);
  CHECK(circuit_depth(opt.base) == 12);
  // The optimized circuit still implements the same unitary.
  const Eigen::MatrixXcd a = dense::circuit_unitary(raw.base);
  const Eigen::MatrixXcd b = dense::circuit_unitary(opt.base);
  CHECK((a - b).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("nearest-neighbor step depth is constant in n") {
  std::vector<int> depths;
  for (int n = 4; n <= 10; ++n) {
    auto h = build_xyz_chain(n, 0.8);
    depths.push_back(circuit_depth(build_plan(h, 0.1, 1).base));
  }
  for (std::size_t i = 1; i < depths.size(); ++i)
    CHECK(depths[i] == depths[0]);
}

TEST_CASE("a single commuting term is Trotterized exactly") {
  auto h = build_custom(2, {PauliString("ZZ")}, {0.9});
  for (int steps : {1, 3, 7}) {
    CHECK(splitting_error(h, 1.3, steps) < 1e-12);
  }
}

TEST_CASE("evolve composes and k=0 is the identity") {
  auto h = build_zz_xx(3, 2);
  auto plan = build_plan(h, 0.1, 2);
  auto psi = random_state(3, 5);
  auto same = evolve(plan, psi, 0);
  CHECK(state_distance(psi, same) == 0.0);
  auto once = evolve(plan, psi, 1);
  auto twice_direct = evolve(plan, psi, 2);
  auto twice_chained = evolve(plan, once, 1);
  CHECK(state_distance(twice_direct, twice_chained) < 1e-13);
}

TEST_CASE("Trotter evolution tracks the exact propagator") {
  auto h = build_zz_xx(3, 21);
  const double dt = 0.1;
  auto plan = build_plan(h, dt, 8);
  auto psi = random_state(3, 6);
  auto got = evolve(plan, psi, 5);
  const Eigen::VectorXcd want =
      exact_evolution(h, 5 * dt) * dense::to_eigen(psi);
  double acc = 0.0;
  for (std::size_t i = 0; i < got.dim(); ++i)
    acc += std::norm(got.amplitudes[i] - want(static_cast<long>(i)));
  CHECK(std::sqrt(acc) < 1e-3);
}

TEST_CASE("total splitting error is first order in 1/steps") {
  auto h = build_zz_xx(3, 123);
  const double e1 = splitting_error(h, 1.0, 8);
  const double e2 = splitting_error(h, 1.0, 16);
  CHECK(e1 / e2 > 1.6);
  CHECK(e1 / e2 < 2.4);
}

TEST_CASE("per-step splitting error is second order in the step size") {
  // Doubling the number of steps a unit-time evolution is split into
  // quarters the error of a single step.
  for (std::uint64_t seed : {1, 2, 3, 4, 5}) {
    auto h = build_zz_xx(3, seed);
    const double e1 = splitting_error(h, 1.0 / 8, 1);
    const double e2 = splitting_error(h, 1.0 / 16, 1);
    CHECK(e1 / e2 > 3.2);
    CHECK(e1 / e2 < 4.8);
  }
}

TEST_CASE("splitting error vanishes at t=0") {
  auto h = build_zz_xx(3, 9);
  CHECK(splitting_error(h, 0.0, 4) == 0.0);
}

TEST_CASE("coefficient perturbation only moves its own slots") {
  auto h = build_tfim_inhomogeneous(4, 3);
  auto plan = build_plan(h, 0.1, 3);
  const double delta = 0.01;
  const int j = 2;
  std::vector<double> bumped = h.coeffs;
  bumped[j] += delta;
  Circuit c0 = bound_circuit(plan, h.coeffs);
  Circuit c1 = bound_circuit(plan, bumped);
  std::vector<bool> owned(c0.gates.size(), false);
  for (int g : plan.term_slots[j]) owned[g] = true;
  CHECK(plan.term_slots[j].size() == 3);  // one slot per internal step
  for (std::size_t g = 0; g < c0.gates.size(); ++g) {
    const double diff = c1.gates[g].angle - c0.gates[g].angle;
    if (owned[g]) {
      CHECK(diff == doctest::Approx(2 * delta * 0.1 / 3).epsilon(1e-12));
    } else {
      CHECK(diff == 0.0);
    }
  }
}

TEST_CASE("plan construction validates input") {
  auto h = build_zz_xx(2, 1);
  CHECK_THROWS(build_plan(h, 0.0, 1));
  CHECK_THROWS(build_plan(h, -0.1, 1));
  CHECK_THROWS(build_plan(h, 0.1, 0));
  CHECK_THROWS(evolve(build_plan(h, 0.1, 1), random_state(2, 1), -1));
}
