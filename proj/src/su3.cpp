#include "hamlearn/su3.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <stdexcept>

#include "hamlearn/rng.hpp"

namespace hamlearn::su3 {

namespace {

constexpr double kTailTolerance = 1e-8;
constexpr int kMaxOrder = 40;

std::array<Matrix3cd, 9> make_generators() {
  std::array<Matrix3cd, 9> g;
  const cplx i(0, 1);
  for (auto& m : g) m = Matrix3cd::Zero();
  g[0] << 0, 1, 0, 1, 0, 0, 0, 0, 0;
  g[1] << 0, -i, 0, i, 0, 0, 0, 0, 0;
  g[2] << 1, 0, 0, 0, -1, 0, 0, 0, 0;
  g[3] << 0, 0, 1, 0, 0, 0, 1, 0, 0;
  g[4] << 0, 0, -i, 0, 0, 0, i, 0, 0;
  g[5] << 0, 0, 0, 0, 0, 1, 0, 1, 0;
  g[6] << 0, 0, 0, 0, 0, -i, 0, i, 0;
  const double s3 = 1.0 / std::sqrt(3.0);
  g[7] << s3, 0, 0, 0, s3, 0, 0, 0, -2 * s3;
  g[8] = Matrix3cd::Identity();
  return g;
}

Matrix3cd commutator(const Matrix3cd& a, const Matrix3cd& b) {
  return a * b - b * a;
}

void check_param_index(int p) {
  if (p < 1 || p > 8)
    throw std::invalid_argument("generator index must be in 1..8");
}

void check_coeffs(std::span<const double> c) {
  if (c.size() != 8)
    throw std::invalid_argument("expected 8 coefficients");
  for (double x : c)
    if (!std::isfinite(x))
      throw std::invalid_argument("coefficients must be finite");
}

double l1_norm(std::span<const double> c) {
  double s = 0.0;
  for (double x : c) s += std::abs(x);
  return s;
}

// Terms T_m = (1/m!) ad_A^m(O) with A = i t H, computed by
// T_m = [A, T_{m-1}] / m.
struct SeriesState {
  Matrix3cd a;
  Matrix3cd term;   // T_m
  Matrix3cd sum;    // sum up to current order
  int m = 0;

  SeriesState(const Matrix3cd& a_in, const Matrix3cd& obs)
      : a(a_in), term(obs), sum(obs) {}

  void advance() {
    ++m;
    term = commutator(a, term) / static_cast<double>(m);
    sum += term;
  }
  double next_term_norm() const {
    return (commutator(a, term) / static_cast<double>(m + 1)).norm();
  }
};

}  // namespace

const Matrix3cd& generator(int index) {
  static const std::array<Matrix3cd, 9> gens = make_generators();
  if (index < 1 || index > 9)
    throw std::invalid_argument("generator index must be in 1..9");
  return gens[index - 1];
}

Matrix3cd hamiltonian_matrix(std::span<const double> c) {
  check_coeffs(c);
  Matrix3cd h = Matrix3cd::Zero();
  for (int i = 1; i <= 8; ++i) h += c[i - 1] * generator(i);
  return h;
}

StructureConstants::StructureConstants() {
  const cplx quarter_i(0, -0.25);
  for (int a = 1; a <= 8; ++a)
    for (int b = 1; b <= 8; ++b)
      for (int c = 1; c <= 8; ++c) {
        const cplx tr =
            (generator(a) * commutator(generator(b), generator(c))).trace();
        const cplx val = quarter_i * tr;
        f_[(a - 1) * 64 + (b - 1) * 8 + (c - 1)] = val.real();
      }
}

double StructureConstants::operator()(int a, int b, int c) const {
  check_param_index(a);
  check_param_index(b);
  check_param_index(c);
  return f_[(a - 1) * 64 + (b - 1) * 8 + (c - 1)];
}

const StructureConstants& structure_constants() {
  static const StructureConstants f;
  return f;
}

Matrix3cd bch_conjugation(std::span<const double> c, const Matrix3cd& obs,
                          double t, int order) {
  check_coeffs(c);
  if (order < 0) throw std::invalid_argument("order must be >= 0");
  const Matrix3cd a = cplx(0, t) * hamiltonian_matrix(c);
  SeriesState s(a, obs);
  for (int m = 1; m <= order; ++m) s.advance();
  return s.sum;
}

Matrix3cd bch_gradient(std::span<const double> c, const Matrix3cd& obs,
                       double t, int order, int p) {
  check_coeffs(c);
  check_param_index(p);
  if (order < 0) throw std::invalid_argument("order must be >= 0");
  const Matrix3cd a = cplx(0, t) * hamiltonian_matrix(c);
  const Matrix3cd e = cplx(0, t) * generator(p);
  Matrix3cd term = obs;                  // T_{m-1}
  Matrix3cd dterm = Matrix3cd::Zero();   // dT_{m-1}/dc_p
  Matrix3cd grad = Matrix3cd::Zero();
  for (int m = 1; m <= order; ++m) {
    const Matrix3cd next_d =
        (commutator(e, term) + commutator(a, dterm)) / static_cast<double>(m);
    term = commutator(a, term) / static_cast<double>(m);
    dterm = next_d;
    grad += dterm;
  }
  return grad;
}

Matrix3cd exact_conjugation(std::span<const double> c, const Matrix3cd& obs,
                            double t) {
  check_coeffs(c);
  Eigen::SelfAdjointEigenSolver<Matrix3cd> solver(hamiltonian_matrix(c));
  const Eigen::Vector3d w = solver.eigenvalues();
  const Matrix3cd& v = solver.eigenvectors();
  Eigen::Vector3cd u;
  for (int i = 0; i < 3; ++i) u(i) = std::exp(cplx(0, -w(i) * t));
  const Matrix3cd ud = v * u.asDiagonal() * v.adjoint();
  return ud.adjoint() * obs * ud;
}

Matrix3cd exact_conjugation_gradient(std::span<const double> c,
                                     const Matrix3cd& obs, double t, int p) {
  check_coeffs(c);
  check_param_index(p);
  Eigen::SelfAdjointEigenSolver<Matrix3cd> solver(hamiltonian_matrix(c));
  const Eigen::Vector3d w = solver.eigenvalues();
  const Matrix3cd& v = solver.eigenvectors();

  Eigen::Vector3cd u;
  for (int i = 0; i < 3; ++i) u(i) = std::exp(cplx(0, -w(i) * t));
  const Matrix3cd uu = v * u.asDiagonal() * v.adjoint();

  // Daleckii-Krein: dU = V (D .* (V^dag l_p V)) V^dag with divided
  // differences of f(x) = exp(-i x t).
  const Matrix3cd lp = v.adjoint() * generator(p) * v;
  Matrix3cd du_tilde;
  const double scale = std::abs(w(0)) + std::abs(w(1)) + std::abs(w(2)) + 1.0;
  for (int m = 0; m < 3; ++m)
    for (int n = 0; n < 3; ++n) {
      cplx d;
      if (std::abs(w(m) - w(n)) < 1e-12 * scale) {
        d = cplx(0, -t) * std::exp(cplx(0, -w(m) * t));
      } else {
        d = (std::exp(cplx(0, -w(m) * t)) - std::exp(cplx(0, -w(n) * t))) /
            (w(m) - w(n));
      }
      du_tilde(m, n) = d * lp(m, n);
    }
  const Matrix3cd du = v * du_tilde * v.adjoint();
  return du.adjoint() * obs * uu + uu.adjoint() * obs * du;
}

ConjugationBundle conjugate_with_gradients(std::span<const double> c,
                                           const Matrix3cd& obs, double t,
                                           int order) {
  check_coeffs(c);
  if (order < 0) throw std::invalid_argument("order must be >= 0");
  ConjugationBundle out;

  bool exact = std::abs(t) * l1_norm(c) > 1.0;
  int order_used = order;
  if (!exact) {
    const Matrix3cd a = cplx(0, t) * hamiltonian_matrix(c);
    SeriesState s(a, obs);
    for (int m = 1; m <= order_used; ++m) s.advance();
    while (s.next_term_norm() >= kTailTolerance && order_used < kMaxOrder) {
      s.advance();
      ++order_used;
    }
    if (s.next_term_norm() >= kTailTolerance) {
      exact = true;
    } else {
      out.value = s.sum;
    }
  }

  out.exact_path = exact;
  out.order_used = exact ? 0 : order_used;
  if (exact) {
    out.value = exact_conjugation(c, obs, t);
    for (int p = 1; p <= 8; ++p)
      out.gradients[p - 1] = exact_conjugation_gradient(c, obs, t, p);
  } else {
    for (int p = 1; p <= 8; ++p)
      out.gradients[p - 1] = bch_gradient(c, obs, t, order_used, p);
  }
  return out;
}

std::array<double, 9> lambda_decompose(const Matrix3cd& m) {
  std::array<double, 9> a{};
  for (int j = 1; j <= 8; ++j)
    a[j - 1] = 0.5 * (generator(j) * m).trace().real();
  a[8] = m.trace().real() / 3.0;
  return a;
}

CostGradient su3_cost_gradient(std::span<const double> c,
                               const TimeSeriesDataset& data, int order) {
  check_coeffs(c);
  if (data.mode != TimeSeriesDataset::Mode::Su3Learning)
    throw std::invalid_argument("dataset is not in SU(3)-learning mode");
  data.validate();

  CostGradient out;
  const int n_states = data.n_series();
  const int n_obs = data.n_observables();

  // Primitive expectations, one batch per initial state; their count is
  // what the ledger records.
  std::vector<std::array<double, 9>> prim(n_states);
  for (int i = 0; i < n_states; ++i) {
    const auto& psi = data.initial_states[i];
    const Eigen::Vector3cd v(psi.amplitudes[0], psi.amplitudes[1],
                             psi.amplitudes[2]);
    for (int j = 1; j <= 9; ++j)
      prim[i][j - 1] = (v.adjoint() * generator(j) * v)(0).real();
  }
  for (int a = 0; a < n_obs; ++a) {
    if (data.observables[a].kind != ObservableSpec::Kind::Lambda)
      out.ledger.lambda_basis = false;
    for (int i = 0; i < n_states; ++i)
      for (int j = 1; j <= 9; ++j)
        out.ledger.entries.push_back({a, i, j});
  }

  for (int a = 0; a < n_obs; ++a) {
    const ObservableSpec& spec = data.observables[a];
    if (spec.kind != ObservableSpec::Kind::Lambda)
      throw std::invalid_argument(
          "SU(3) learning expects lambda observables");
    const Matrix3cd& obs = generator(spec.lambda_index);
    for (int k = 1; k <= data.n_timesteps; ++k) {
      const double t = k * data.dt;
      const ConjugationBundle bundle =
          conjugate_with_gradients(c, obs, t, order);
      const std::array<double, 9> coeffs = lambda_decompose(bundle.value);
      std::array<std::array<double, 9>, 8> grad_coeffs;
      for (int p = 0; p < 8; ++p)
        grad_coeffs[p] = lambda_decompose(bundle.gradients[p]);
      for (int i = 0; i < n_states; ++i) {
        double model = 0.0;
        for (int j = 0; j < 9; ++j) model += coeffs[j] * prim[i][j];
        const double residual = model - data.record(a, i, k);
        out.cost += residual * residual;
        for (int p = 0; p < 8; ++p) {
          double dmodel = 0.0;
          for (int j = 0; j < 9; ++j) dmodel += grad_coeffs[p][j] * prim[i][j];
          out.gradient[p] += 2.0 * residual * dmodel;
        }
      }
    }
  }
  return out;
}

TrainingTrace learn_su3(const Su3LearnConfig& config,
                        const TimeSeriesDataset& data,
                        std::array<double, 8> init,
                        const std::array<double, 8>* truth) {
  std::array<double, 8> c = init;
  TrainingTrace trace;
  double lr = config.learning_rate;
  double initial_cost = -1.0;

  for (int epoch = 0; epoch < config.max_epochs; ++epoch) {
    const CostGradient cg = su3_cost_gradient(c, data, config.order);
    if (epoch == 0) initial_cost = cg.cost;
    if (initial_cost > 0.0 && cg.cost > 1e6 * initial_cost)
      throw DivergenceError("SU(3) training diverged");

    TraceEntry entry;
    entry.epoch = epoch;
    entry.cost = cg.cost;
    if (truth) {
      double d2 = 0.0;
      for (int p = 0; p < 8; ++p)
        d2 += (c[p] - (*truth)[p]) * (c[p] - (*truth)[p]);
      entry.trace_distance = std::sqrt(d2);
    }
    trace.entries.push_back(entry);
    if (config.snapshot_every > 0 && epoch % config.snapshot_every == 0)
      trace.snapshots.push_back({epoch, {c.begin(), c.end()}});

    if (cg.cost < config.cost_threshold) {
      trace.converged = true;
      trace.stop_reason = "cost below threshold";
      trace.final_cost = cg.cost;
      trace.final_params.assign(c.begin(), c.end());
      return trace;
    }
    for (int p = 0; p < 8; ++p) c[p] -= lr * cg.gradient[p];
    lr *= config.lr_decay;
  }
  trace.converged = false;
  trace.stop_reason = "epoch cap reached";
  trace.final_cost = su3_cost_gradient(c, data, config.order).cost;
  trace.final_params.assign(c.begin(), c.end());
  return trace;
}

TimeSeriesDataset generate_su3_data(std::span<const double> c_true,
                                    const std::vector<int>& lambda_indices,
                                    int n_states, int n_timesteps, double dt,
                                    std::uint64_t state_seed) {
  check_coeffs(c_true);
  if (n_states < 1 || n_timesteps < 1)
    throw std::invalid_argument("need at least one state and one timestep");

  TimeSeriesDataset ds;
  ds.mode = TimeSeriesDataset::Mode::Su3Learning;
  ds.num_sites = 1;
  ds.local_dim = 3;
  ds.dt = dt;
  ds.n_timesteps = n_timesteps;
  for (int idx : lambda_indices) {
    if (idx < 1 || idx > 9)
      throw std::invalid_argument("lambda index must be in 1..9");
    ObservableSpec spec;
    spec.kind = ObservableSpec::Kind::Lambda;
    spec.lambda_index = idx;
    spec.label = "lambda_" + std::to_string(idx);
    ds.observables.push_back(spec);
  }
  Rng rng(state_seed);
  for (int i = 0; i < n_states; ++i)
    ds.initial_states.push_back(random_state(1, rng.child(i).seed(), false, 3));

  Eigen::SelfAdjointEigenSolver<Matrix3cd> solver(hamiltonian_matrix(c_true));
  const Eigen::Vector3d w = solver.eigenvalues();
  const Matrix3cd& v = solver.eigenvectors();
  Eigen::Vector3cd phases;
  for (int i = 0; i < 3; ++i) phases(i) = std::exp(cplx(0, -w(i) * dt));
  const Matrix3cd prop = v * phases.asDiagonal() * v.adjoint();

  ds.records.assign(static_cast<std::size_t>(ds.n_observables()) * n_states *
                        n_timesteps,
                    0.0);
  for (int i = 0; i < n_states; ++i) {
    Eigen::Vector3cd psi(ds.initial_states[i].amplitudes[0],
                         ds.initial_states[i].amplitudes[1],
                         ds.initial_states[i].amplitudes[2]);
    for (int k = 1; k <= n_timesteps; ++k) {
      psi = prop * psi;
      for (int a = 0; a < ds.n_observables(); ++a) {
        const cplx val =
            psi.adjoint() * generator(ds.observables[a].lambda_index) * psi;
        ds.records[ds.record_index(a, i, k)] = val.real();
      }
    }
  }
  ds.validate();
  return ds;
}

}  // namespace hamlearn::su3
