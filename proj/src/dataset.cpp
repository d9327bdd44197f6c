#include "hamlearn/dataset.hpp"

#include <cmath>
#include <stdexcept>

#include "hamlearn/dense.hpp"
#include "hamlearn/rng.hpp"
#include "hamlearn/su3.hpp"

namespace hamlearn {

namespace {

// Pauli expansion of prod_s F_s where each site factor is a 2x2 operator
// written over {I, X, Y, Z} with complex weights.
struct SiteFactor {
  cplx wi{0, 0}, wx{0, 0}, wy{0, 0}, wz{0, 0};
};

std::vector<std::pair<cplx, std::string>> expand_product(
    const std::vector<SiteFactor>& factors) {
  std::vector<std::pair<cplx, std::string>> terms = {{cplx(1, 0), ""}};
  for (const auto& f : factors) {
    std::vector<std::pair<cplx, std::string>> next;
    next.reserve(terms.size() * 4);
    const std::pair<cplx, char> parts[4] = {
        {f.wi, 'I'}, {f.wx, 'X'}, {f.wy, 'Y'}, {f.wz, 'Z'}};
    for (const auto& [w, s] : terms)
      for (const auto& [fw, fc] : parts) {
        if (fw == cplx(0, 0)) continue;
        next.push_back({w * fw, s + fc});
      }
    terms = std::move(next);
  }
  return terms;
}

// Complex-weighted expansion of |m><m2| over the Pauli basis.
std::vector<std::pair<cplx, std::string>> ketbra_expansion(int num_qubits,
                                                           std::size_t m,
                                                           std::size_t m2) {
  std::vector<SiteFactor> factors(num_qubits);
  for (int s = 0; s < num_qubits; ++s) {
    const int b = (m >> (num_qubits - 1 - s)) & 1;
    const int b2 = (m2 >> (num_qubits - 1 - s)) & 1;
    SiteFactor f;
    if (b == b2) {
      // |b><b| = (I +- Z) / 2
      f.wi = cplx(0.5, 0);
      f.wz = b == 0 ? cplx(0.5, 0) : cplx(-0.5, 0);
    } else if (b == 0) {
      // |0><1| = (X + iY) / 2
      f.wx = cplx(0.5, 0);
      f.wy = cplx(0, 0.5);
    } else {
      // |1><0| = (X - iY) / 2
      f.wx = cplx(0.5, 0);
      f.wy = cplx(0, -0.5);
    }
    factors[s] = f;
  }
  return expand_product(factors);
}

PauliObservable real_part_observable(
    const std::vector<std::pair<cplx, std::string>>& expansion, bool sym) {
  // sym:  A + A^dag  -> weights 2 Re(w)
  // anti: i(A^dag - A) -> weights 2 Im(w)
  PauliObservable obs;
  for (const auto& [w, s] : expansion) {
    const double weight = sym ? 2.0 * w.real() : 2.0 * w.imag();
    if (weight == 0.0) continue;
    obs.terms.push_back({weight, PauliString(s)});
  }
  return obs;
}

double gaussian_noise(Rng& rng, double sigma) {
  return sigma > 0.0 ? sigma * rng.normal() : 0.0;
}

}  // namespace

double ObservableSpec::bound() const {
  if (kind == Kind::Lambda) return lambda_index == 9 ? 1.0 : 2.0;
  return pauli.weight_l1();
}

double observable_expectation(const StateVector& state,
                              const ObservableSpec& obs) {
  switch (obs.kind) {
    case ObservableSpec::Kind::BasisProjector:
      return std::norm(state.amplitudes.at(obs.m));
    case ObservableSpec::Kind::CoherenceSym: {
      const cplx z =
          std::conj(state.amplitudes.at(obs.m)) * state.amplitudes.at(obs.m2);
      return 2.0 * z.real();
    }
    case ObservableSpec::Kind::CoherenceAnti: {
      const cplx z =
          std::conj(state.amplitudes.at(obs.m)) * state.amplitudes.at(obs.m2);
      return 2.0 * z.imag();
    }
    case ObservableSpec::Kind::Lambda: {
      if (state.local_dim != 3 || state.dim() != 3)
        throw std::invalid_argument(
            "lambda observables act on single-qutrit states");
      const Eigen::Vector3cd v(state.amplitudes[0], state.amplitudes[1],
                               state.amplitudes[2]);
      const cplx val = v.adjoint() * su3::generator(obs.lambda_index) * v;
      return val.real();
    }
    case ObservableSpec::Kind::Pauli:
      return expectation(state, obs.pauli);
  }
  throw std::logic_error("unreachable");
}

cplx observable_cross_expectation(const StateVector& bra,
                                  const ObservableSpec& obs,
                                  const StateVector& ket) {
  switch (obs.kind) {
    case ObservableSpec::Kind::BasisProjector:
      return std::conj(bra.amplitudes.at(obs.m)) * ket.amplitudes.at(obs.m);
    case ObservableSpec::Kind::CoherenceSym:
      return std::conj(bra.amplitudes.at(obs.m)) * ket.amplitudes.at(obs.m2) +
             std::conj(bra.amplitudes.at(obs.m2)) * ket.amplitudes.at(obs.m);
    case ObservableSpec::Kind::CoherenceAnti:
      return cplx(0, 1) * (std::conj(bra.amplitudes.at(obs.m2)) *
                               ket.amplitudes.at(obs.m) -
                           std::conj(bra.amplitudes.at(obs.m)) *
                               ket.amplitudes.at(obs.m2));
    case ObservableSpec::Kind::Pauli:
      return cross_expectation(bra, obs.pauli, ket);
    case ObservableSpec::Kind::Lambda: {
      if (bra.local_dim != 3 || bra.dim() != 3 || ket.dim() != 3)
        throw std::invalid_argument(
            "lambda observables act on single-qutrit states");
      const Eigen::Vector3cd vb(bra.amplitudes[0], bra.amplitudes[1],
                                bra.amplitudes[2]);
      const Eigen::Vector3cd vk(ket.amplitudes[0], ket.amplitudes[1],
                                ket.amplitudes[2]);
      return (vb.adjoint() * su3::generator(obs.lambda_index) * vk)(0);
    }
  }
  throw std::logic_error("unreachable");
}

ObservableSpec pauli_observable_spec(PauliObservable obs, std::string label) {
  ObservableSpec spec;
  spec.kind = ObservableSpec::Kind::Pauli;
  spec.pauli = std::move(obs);
  spec.label = std::move(label);
  return spec;
}

ObservableSpec magnetization_spec(char axis, int num_sites) {
  std::string label = axis == 'X' ? "mag_x" : "mag_z";
  return pauli_observable_spec(magnetization_observable(axis, num_sites),
                               label);
}

ObservableSpec three_point_correlator(char axis, int num_sites, int s0,
                                      int s1, int s2) {
  if (s0 == s1 || s0 == s2 || s1 == s2)
    throw std::invalid_argument("correlator sites must be distinct");
  PauliString p = PauliString::identity(num_sites);
  for (int s : {s0, s1, s2}) {
    if (s < 0 || s >= num_sites)
      throw std::invalid_argument("correlator site out of range");
    p.ops[s] = axis;
  }
  char buf[64];
  std::snprintf(buf, sizeof(buf), "corr3_%c(%d,%d,%d)",
                static_cast<char>(std::tolower(axis)), s0, s1, s2);
  PauliObservable obs;
  obs.terms.push_back({1.0, p});
  return pauli_observable_spec(std::move(obs), buf);
}

std::vector<ObservableSpec> correlator_pool(char axis, int num_sites) {
  std::vector<ObservableSpec> pool;
  for (int i = 0; i < num_sites; ++i)
    for (int j = i + 1; j < num_sites; ++j) {
      PauliObservable obs;
      obs.terms.push_back({1.0, PauliString::two(num_sites, i, axis, j, axis)});
      char buf[32];
      std::snprintf(buf, sizeof(buf), "%c%c(%d,%d)",
                    static_cast<char>(std::tolower(axis)),
                    static_cast<char>(std::tolower(axis)), i, j);
      pool.push_back(pauli_observable_spec(std::move(obs), buf));
    }
  return pool;
}

std::vector<ObservableSpec> select_training_observables(int num_sites,
                                                        int n_each,
                                                        std::uint64_t seed) {
  auto zz = correlator_pool('Z', num_sites);
  auto xx = correlator_pool('X', num_sites);
  if (n_each < 1 || n_each > static_cast<int>(zz.size()))
    throw std::invalid_argument("n_each out of range for the correlator pool");
  Rng rng(seed);
  std::vector<ObservableSpec> out;
  for (int idx : rng.sample_without_replacement(static_cast<int>(zz.size()),
                                                n_each))
    out.push_back(zz[idx]);
  for (int idx : rng.sample_without_replacement(static_cast<int>(xx.size()),
                                                n_each))
    out.push_back(xx[idx]);
  return out;
}

std::vector<ObservableSpec> coherence_observables(int num_qubits) {
  if (num_qubits < 1) throw std::invalid_argument("num_qubits must be >= 1");
  const std::size_t dim = 1ULL << num_qubits;
  std::vector<ObservableSpec> out;
  char buf[48];
  for (std::size_t m = 0; m < dim; ++m) {
    ObservableSpec spec;
    spec.kind = ObservableSpec::Kind::BasisProjector;
    spec.m = m;
    spec.pauli = real_part_observable(ketbra_expansion(num_qubits, m, m), true);
    // The sym form doubles |m><m|; halve back.
    for (auto& t : spec.pauli.terms) t.weight *= 0.5;
    std::snprintf(buf, sizeof(buf), "proj(%zu)", m);
    spec.label = buf;
    out.push_back(std::move(spec));
  }
  for (std::size_t m = 0; m < dim; ++m)
    for (std::size_t m2 = m + 1; m2 < dim; ++m2) {
      const auto expansion = ketbra_expansion(num_qubits, m, m2);
      ObservableSpec sym;
      sym.kind = ObservableSpec::Kind::CoherenceSym;
      sym.m = m;
      sym.m2 = m2;
      sym.pauli = real_part_observable(expansion, true);
      std::snprintf(buf, sizeof(buf), "cohS(%zu,%zu)", m, m2);
      sym.label = buf;
      out.push_back(std::move(sym));

      ObservableSpec anti;
      anti.kind = ObservableSpec::Kind::CoherenceAnti;
      anti.m = m;
      anti.m2 = m2;
      anti.pauli = real_part_observable(expansion, false);
      std::snprintf(buf, sizeof(buf), "cohA(%zu,%zu)", m, m2);
      anti.label = buf;
      out.push_back(std::move(anti));
    }
  return out;
}

std::size_t TimeSeriesDataset::record_index(int alpha, int i, int k) const {
  if (alpha < 0 || alpha >= n_observables() || i < 0 || i >= n_series() ||
      k < 1 || k > n_timesteps)
    throw std::out_of_range("record index out of range");
  return (static_cast<std::size_t>(alpha) * n_series() + i) * n_timesteps +
         (k - 1);
}

double TimeSeriesDataset::record(int alpha, int i, int k) const {
  return records[record_index(alpha, i, k)];
}

void TimeSeriesDataset::validate() const {
  if (n_timesteps < 1) throw std::invalid_argument("n_timesteps must be >= 1");
  if (!(dt > 0.0)) throw std::invalid_argument("dt must be positive");
  if (noise_sigma < 0.0)
    throw std::invalid_argument("noise_sigma must be non-negative");
  const std::size_t expected = static_cast<std::size_t>(n_observables()) *
                               n_series() * n_timesteps;
  if (records.size() != expected)
    throw std::invalid_argument("record table is incomplete");
  for (int a = 0; a < n_observables(); ++a) {
    const double bound = observables[a].bound() + 5.0 * noise_sigma;
    for (int i = 0; i < n_series(); ++i)
      for (int k = 1; k <= n_timesteps; ++k)
        if (std::abs(record(a, i, k)) > bound + 1e-9)
          throw std::invalid_argument("record exceeds observable bound");
  }
}

TimeSeriesDataset generate_ham_learning_data(
    const ParamHamiltonian& h_true, std::vector<StateVector> states,
    std::vector<ObservableSpec> observables, int n_timesteps, double dt,
    double noise_sigma, std::uint64_t noise_seed) {
  if (n_timesteps < 1) throw std::invalid_argument("n_timesteps must be >= 1");
  if (states.empty() || observables.empty())
    throw std::invalid_argument("need at least one state and one observable");
  for (const auto& s : states)
    if (s.num_sites != h_true.num_sites || s.local_dim != 2)
      throw std::invalid_argument("state/Hamiltonian dimension mismatch");

  TimeSeriesDataset ds;
  ds.mode = TimeSeriesDataset::Mode::HamiltonianLearning;
  ds.num_sites = h_true.num_sites;
  ds.local_dim = 2;
  ds.dt = dt;
  ds.n_timesteps = n_timesteps;
  ds.noise_sigma = noise_sigma;
  ds.observables = std::move(observables);
  ds.initial_states = std::move(states);
  ds.records.assign(static_cast<std::size_t>(ds.n_observables()) *
                        ds.n_series() * n_timesteps,
                    0.0);
  ds.generator_info.noise_seed = noise_seed;

  ds.records = exact_ham_records(h_true, ds);
  if (noise_sigma > 0.0) {
    Rng rng(noise_seed);
    for (int i = 0; i < ds.n_series(); ++i)
      for (int k = 1; k <= n_timesteps; ++k)
        for (int a = 0; a < ds.n_observables(); ++a)
          ds.records[ds.record_index(a, i, k)] +=
              gaussian_noise(rng, noise_sigma);
  }
  ds.validate();
  return ds;
}

TimeSeriesDataset generate_state_learning_data(
    const StateVector& psi_true, std::vector<ParamHamiltonian> hamiltonians,
    std::vector<ObservableSpec> observables, int n_timesteps, double dt,
    double noise_sigma, std::uint64_t noise_seed) {
  if (n_timesteps < 1) throw std::invalid_argument("n_timesteps must be >= 1");
  if (hamiltonians.empty() || observables.empty())
    throw std::invalid_argument(
        "need at least one Hamiltonian and one observable");
  for (const auto& h : hamiltonians)
    if (h.num_sites != psi_true.num_sites)
      throw std::invalid_argument("state/Hamiltonian dimension mismatch");

  TimeSeriesDataset ds;
  ds.mode = TimeSeriesDataset::Mode::StateLearning;
  ds.num_sites = psi_true.num_sites;
  ds.local_dim = 2;
  ds.dt = dt;
  ds.n_timesteps = n_timesteps;
  ds.noise_sigma = noise_sigma;
  ds.observables = std::move(observables);
  ds.hamiltonians = std::move(hamiltonians);
  ds.records = exact_state_records(psi_true, ds);
  ds.generator_info.noise_seed = noise_seed;
  if (noise_sigma > 0.0) {
    Rng rng(noise_seed);
    for (int i = 0; i < ds.n_series(); ++i)
      for (int k = 1; k <= n_timesteps; ++k)
        for (int a = 0; a < ds.n_observables(); ++a)
          ds.records[ds.record_index(a, i, k)] +=
              gaussian_noise(rng, noise_sigma);
  }
  ds.validate();
  return ds;
}

std::vector<double> exact_ham_records(const ParamHamiltonian& h,
                                      const TimeSeriesDataset& shape) {
  if (shape.mode != TimeSeriesDataset::Mode::HamiltonianLearning)
    throw std::invalid_argument("dataset is not in Hamiltonian-learning mode");
  const Eigen::MatrixXcd prop = exact_evolution(h, shape.dt);
  std::vector<double> out(static_cast<std::size_t>(shape.n_observables()) *
                              shape.n_series() * shape.n_timesteps,
                          0.0);
  for (int i = 0; i < shape.n_series(); ++i) {
    Eigen::VectorXcd psi = dense::to_eigen(shape.initial_states[i]);
    for (int k = 1; k <= shape.n_timesteps; ++k) {
      psi = prop * psi;
      const StateVector sv =
          dense::from_eigen(psi, shape.num_sites, shape.local_dim);
      for (int a = 0; a < shape.n_observables(); ++a)
        out[shape.record_index(a, i, k)] =
            observable_expectation(sv, shape.observables[a]);
    }
  }
  return out;
}

std::vector<double> exact_state_records(const StateVector& psi,
                                        const TimeSeriesDataset& shape) {
  if (shape.mode != TimeSeriesDataset::Mode::StateLearning)
    throw std::invalid_argument("dataset is not in state-learning mode");
  std::vector<double> out(static_cast<std::size_t>(shape.n_observables()) *
                              shape.n_series() * shape.n_timesteps,
                          0.0);
  for (int i = 0; i < shape.n_series(); ++i) {
    const Eigen::MatrixXcd prop = exact_evolution(shape.hamiltonians[i],
                                                  shape.dt);
    Eigen::VectorXcd v = dense::to_eigen(psi);
    for (int k = 1; k <= shape.n_timesteps; ++k) {
      v = prop * v;
      const StateVector sv =
          dense::from_eigen(v, shape.num_sites, shape.local_dim);
      for (int a = 0; a < shape.n_observables(); ++a)
        out[shape.record_index(a, i, k)] =
            observable_expectation(sv, shape.observables[a]);
    }
  }
  return out;
}

}  // namespace hamlearn
