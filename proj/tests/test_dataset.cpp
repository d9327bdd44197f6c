#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <Eigen/Dense>

#include "hamlearn/dataset.hpp"
#include "hamlearn/dense.hpp"
#include "test_support.hpp"

using namespace hamlearn;

namespace {

std::vector<StateVector> seeded_states(int n_states, int num_sites,
                                       std::uint64_t base_seed) {
  std::vector<StateVector> out;
  for (int i = 0; i < n_states; ++i)
    out.push_back(random_state(num_sites, base_seed + i));
  return out;
}

}  // namespace

TEST_CASE("zero Hamiltonian gives constant records") {
  auto h = build_custom(2, {PauliString("ZZ")}, {0.0});
  auto states = seeded_states(2, 2, 100);
  auto obs = select_training_observables(2, 1, 5);
  auto ds = generate_ham_learning_data(h, states, obs, 4, 0.1);
  for (int a = 0; a < ds.n_observables(); ++a)
    for (int i = 0; i < ds.n_series(); ++i) {
      const double at_start =
          observable_expectation(states[i], ds.observables[a]);
      for (int k = 1; k <= 4; ++k)
        CHECK(ds.record(a, i, k) == doctest::Approx(at_start).epsilon(1e-12));
    }
}

TEST_CASE("conserved observables stay constant") {
  // H built from ZZ terms commutes with single-site Z.
  auto h = build_custom(
      3, {PauliString("ZZI"), PauliString("IZZ")}, {0.8, -0.5});
  PauliObservable z0;
  z0.terms.push_back({1.0, PauliString("ZII")});
  auto ds = generate_ham_learning_data(
      h, seeded_states(1, 3, 4), {pauli_observable_spec(z0, "z0")}, 6, 0.2);
  const double first = ds.record(0, 0, 1);
  for (int k = 2; k <= 6; ++k)
    CHECK(ds.record(0, 0, k) == doctest::Approx(first).epsilon(1e-10));
}

TEST_CASE("5-qubit TFIM dataset has 240 records at the stated sizes") {
  auto h = build_tfim_inhomogeneous(5, 17);
  auto obs = select_training_observables(5, 3, 9);
  CHECK(obs.size() == 6);  // 3 ZZ-type + 3 XX-type
  auto ds = generate_ham_learning_data(h, seeded_states(8, 5, 50), obs, 5,
                                       0.1);
  CHECK(ds.records.size() == 240);
  ds.validate();
}

TEST_CASE("records match an independent dense computation") {
  auto h = build_zz_xx(3, 3);
  auto states = seeded_states(2, 3, 77);
  auto obs = select_training_observables(3, 2, 11);
  const double dt = 0.13;
  auto ds = generate_ham_learning_data(h, states, obs, 3, dt);

  const Eigen::MatrixXcd hm = dense_matrix(h);
  int checked = 0;
  for (int a = 0; a < 2 && checked < 5; ++a)
    for (int i = 0; i < 2 && checked < 5; ++i)
      for (int k = 1; k <= 3 && checked < 5; ++k) {
        const Eigen::MatrixXcd u =
            testsupport::taylor_expm(cplx(0, -dt * k) * hm);
        Eigen::MatrixXcd om = Eigen::MatrixXcd::Zero(8, 8);
        for (const auto& t : ds.observables[a].pauli.terms)
          om += t.weight * dense::pauli_matrix(t.string);
        const Eigen::VectorXcd evolved = u * dense::to_eigen(states[i]);
        const double want = (evolved.adjoint() * om * evolved)(0).real();
        CHECK(ds.record(a, i, k) == doctest::Approx(want).epsilon(1e-9));
        ++checked;
      }
  CHECK(checked == 5);
}

TEST_CASE("state-learning records: zero Hamiltonian is static tomography") {
  auto psi = random_state(2, 31, /*real_only=*/true);
  auto h0 = build_custom(2, {PauliString("ZZ")}, {0.0});
  auto obs = coherence_observables(2);
  auto ds = generate_state_learning_data(psi, {h0}, obs, 5, 0.1);
  CHECK(ds.records.size() == 16u * 1 * 5);
  for (int a = 0; a < ds.n_observables(); ++a) {
    const double direct = observable_expectation(psi, ds.observables[a]);
    for (int k = 1; k <= 5; ++k)
      CHECK(ds.record(a, 0, k) == doctest::Approx(direct).epsilon(1e-12));
  }
}

TEST_CASE("Rabi-type decay of Z magnetization under a pure X drive") {
  // |00>, H = c (X0 + X1): each qubit precesses independently and
  // <Z_i>(t) = cos(2 c t).
  auto psi = StateVector::zero_state(2);
  const double c = 0.6;
  auto h = build_custom(
      2, {PauliString("XI"), PauliString("IX")}, {c, c});
  auto ds = generate_state_learning_data(
      psi, {h}, {magnetization_spec('Z', 2)}, 8, 0.15);
  for (int k = 1; k <= 8; ++k) {
    const double want = 2.0 * std::cos(2.0 * c * 0.15 * k);
    CHECK(ds.record(0, 0, k) == doctest::Approx(want).epsilon(1e-9));
  }
}

TEST_CASE("state-mode cardinality") {
  auto psi = random_state(2, 3, true);
  std::vector<ParamHamiltonian> hams;
  for (int i = 0; i < 2; ++i) hams.push_back(build_generic_2local(2, 40 + i));
  auto ds = generate_state_learning_data(psi, hams,
                                         coherence_observables(2), 10, 0.1);
  CHECK(ds.records.size() == 320);
}

TEST_CASE("single-qubit coherence set is (I+Z)/2, (I-Z)/2, X, Y") {
  auto obs = coherence_observables(1);
  REQUIRE(obs.size() == 4);

  auto as_matrix = [](const ObservableSpec& spec) {
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(2, 2);
    for (const auto& t : spec.pauli.terms)
      m += t.weight * dense::pauli_matrix(t.string);
    return m;
  };
  Eigen::MatrixXcd p0(2, 2), p1(2, 2);
  p0 << 1, 0, 0, 0;
  p1 << 0, 0, 0, 1;
  CHECK((as_matrix(obs[0]) - p0).cwiseAbs().maxCoeff() < 1e-14);
  CHECK((as_matrix(obs[1]) - p1).cwiseAbs().maxCoeff() < 1e-14);
  CHECK((as_matrix(obs[2]) - dense::pauli_matrix(PauliString("X")))
            .cwiseAbs()
            .maxCoeff() < 1e-14);
  CHECK((as_matrix(obs[3]) - dense::pauli_matrix(PauliString("Y")))
            .cwiseAbs()
            .maxCoeff() < 1e-14);
}

TEST_CASE("two-qubit coherence set is the 16-element IC basis") {
  auto obs = coherence_observables(2);
  CHECK(obs.size() == 16);

  // The operators span the full Hermitian space: stack their Pauli weight
  // vectors and check the rank.
  Eigen::MatrixXd weights = Eigen::MatrixXd::Zero(16, 16);
  for (int o = 0; o < 16; ++o)
    for (const auto& t : obs[o].pauli.terms) {
      int idx = 0;
      for (char ch : t.string.ops) {
        int v = ch == 'I' ? 0 : ch == 'X' ? 1 : ch == 'Y' ? 2 : 3;
        idx = idx * 4 + v;
      }
      weights(o, idx) = t.weight;
    }
  Eigen::FullPivLU<Eigen::MatrixXd> lu(weights);
  CHECK(lu.rank() == 16);
}

TEST_CASE("projector expectations sum to one and lie in [0,1]") {
  Rng rng(8);
  for (int n : {1, 2, 3}) {
    auto obs = coherence_observables(n);
    auto psi = random_state(n, rng.next_u64());
    double total = 0.0;
    for (const auto& spec : obs) {
      if (spec.kind != ObservableSpec::Kind::BasisProjector) continue;
      const double p = observable_expectation(psi, spec);
      CHECK(p >= -1e-12);
      CHECK(p <= 1.0 + 1e-12);
      total += p;
    }
    CHECK(total == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("fast-path expectations agree with the Pauli expansion") {
  Rng rng(55);
  for (int trial = 0; trial < 40; ++trial) {
    const int n = 1 + static_cast<int>(rng.uniform_int(3));
    auto obs = coherence_observables(n);
    auto psi = random_state(n, rng.next_u64());
    for (const auto& spec : obs) {
      const double fast = observable_expectation(psi, spec);
      const double slow = expectation(psi, spec.pauli);
      CHECK(fast == doctest::Approx(slow).epsilon(1e-11));
    }
  }
}

TEST_CASE("observable selection is deterministic and non-repeating") {
  auto a = select_training_observables(5, 3, 99);
  auto b = select_training_observables(5, 3, 99);
  REQUIRE(a.size() == b.size());
  for (std::size_t i = 0; i < a.size(); ++i) CHECK(a[i].label == b[i].label);
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = i + 1; j < a.size(); ++j)
      CHECK(a[i].label != a[j].label);
}

TEST_CASE("noise is seeded and bounded") {
  auto h = build_zz_xx(2, 5);
  auto states = seeded_states(2, 2, 9);
  auto obs = select_training_observables(2, 1, 5);
  auto d1 = generate_ham_learning_data(h, states, obs, 3, 0.1, 0.05, 123);
  auto d2 = generate_ham_learning_data(h, states, obs, 3, 0.1, 0.05, 123);
  CHECK(d1.records == d2.records);
  auto d3 = generate_ham_learning_data(h, states, obs, 3, 0.1, 0.05, 124);
  CHECK(d1.records != d3.records);
  auto clean = generate_ham_learning_data(h, states, obs, 3, 0.1);
  bool any_diff = false;
  for (std::size_t r = 0; r < clean.records.size(); ++r)
    if (clean.records[r] != d1.records[r]) any_diff = true;
  CHECK(any_diff);
}

TEST_CASE("generation validates inputs") {
  auto h = build_zz_xx(2, 5);
  auto obs = select_training_observables(2, 1, 5);
  CHECK_THROWS(generate_ham_learning_data(h, {}, obs, 3, 0.1));
  CHECK_THROWS(
      generate_ham_learning_data(h, seeded_states(1, 2, 1), obs, 0, 0.1));
  CHECK_THROWS(
      generate_ham_learning_data(h, seeded_states(1, 3, 1), obs, 3, 0.1));
  CHECK_THROWS(select_training_observables(3, 4, 1));  // pool has C(3,2)=3
}

TEST_CASE("three point correlators") {
  auto spec = three_point_correlator('X', 5, 0, 2, 4);
  CHECK(spec.pauli.terms.size() == 1);
  CHECK(spec.pauli.terms[0].string.ops == "XIXIX");
  CHECK(spec.label == "corr3_x(0,2,4)");
  CHECK_THROWS(three_point_correlator('X', 5, 0, 0, 1));
}
