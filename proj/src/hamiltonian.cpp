#include "hamlearn/hamiltonian.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <set>
#include <stdexcept>

#include "hamlearn/dense.hpp"
#include "hamlearn/rng.hpp"

namespace hamlearn {

namespace {

constexpr std::size_t kDenseDimCap = 4096;

std::vector<int> identity_map(std::size_t n) {
  std::vector<int> m(n);
  for (std::size_t i = 0; i < n; ++i) m[i] = static_cast<int>(i);
  return m;
}

void fill_random_coeffs(ParamHamiltonian& h, std::uint64_t seed) {
  Rng rng(seed);
  h.coeffs.resize(h.basis.size());
  for (auto& c : h.coeffs) c = rng.uniform(-1.0, 1.0);
}

}  // namespace

std::string family_tag_name(FamilyTag tag) {
  switch (tag) {
    case FamilyTag::Generic2Local:
      return "generic-2local";
    case FamilyTag::ZzXx:
      return "zz-xx";
    case FamilyTag::TfimInhomogeneous:
      return "tfim-inhomogeneous";
    case FamilyTag::TfimHomogeneous:
      return "tfim-homogeneous";
    case FamilyTag::Custom:
      return "custom";
  }
  throw std::logic_error("unreachable");
}

FamilyTag family_tag_from_name(const std::string& name) {
  if (name == "generic-2local") return FamilyTag::Generic2Local;
  if (name == "zz-xx") return FamilyTag::ZzXx;
  if (name == "tfim-inhomogeneous") return FamilyTag::TfimInhomogeneous;
  if (name == "tfim-homogeneous") return FamilyTag::TfimHomogeneous;
  if (name == "custom") return FamilyTag::Custom;
  throw std::invalid_argument("unknown Hamiltonian family: " + name);
}

std::vector<double> ParamHamiltonian::params() const {
  std::vector<double> p(static_cast<std::size_t>(num_params), 0.0);
  for (std::size_t t = 0; t < basis.size(); ++t) p[param_map[t]] = coeffs[t];
  return p;
}

void ParamHamiltonian::set_params(std::span<const double> p) {
  if (static_cast<int>(p.size()) != num_params)
    throw std::invalid_argument("parameter vector length mismatch");
  for (std::size_t t = 0; t < basis.size(); ++t) coeffs[t] = p[param_map[t]];
}

void ParamHamiltonian::validate() const {
  if (basis.size() != coeffs.size() || basis.size() != param_map.size())
    throw std::invalid_argument("basis/coeffs/param_map length mismatch");
  std::set<std::string> seen;
  for (const auto& term : basis) {
    if (term.num_sites() != num_sites)
      throw std::invalid_argument("basis term has wrong number of sites");
    if (term.support() > 2)
      throw std::invalid_argument("Hamiltonian terms must be at most 2-local");
    if (term.support() == 0)
      throw std::invalid_argument("identity terms are not allowed");
    if (!seen.insert(term.ops).second)
      throw std::invalid_argument("duplicate basis term: " + term.ops);
  }
  for (int m : param_map)
    if (m < 0 || m >= num_params)
      throw std::invalid_argument("param_map entry out of range");
  for (double c : coeffs)
    if (!std::isfinite(c))
      throw std::invalid_argument("coefficients must be finite");
}

ParamHamiltonian build_zz_xx(int num_sites, std::uint64_t seed) {
  if (num_sites < 2) throw std::invalid_argument("num_sites must be >= 2");
  ParamHamiltonian h;
  h.family = FamilyTag::ZzXx;
  h.num_sites = num_sites;
  for (char p : {'Z', 'X'})
    for (int i = 0; i < num_sites; ++i)
      for (int j = i + 1; j < num_sites; ++j)
        h.basis.push_back(PauliString::two(num_sites, i, p, j, p));
  fill_random_coeffs(h, seed);
  h.param_map = identity_map(h.basis.size());
  h.num_params = static_cast<int>(h.basis.size());
  h.validate();
  return h;
}

ParamHamiltonian build_tfim_inhomogeneous(int num_sites, std::uint64_t seed) {
  if (num_sites < 2) throw std::invalid_argument("num_sites must be >= 2");
  ParamHamiltonian h;
  h.family = FamilyTag::TfimInhomogeneous;
  h.num_sites = num_sites;
  for (int i = 0; i < num_sites; ++i)
    h.basis.push_back(PauliString::single(num_sites, i, 'X'));
  for (int i = 0; i + 1 < num_sites; ++i)
    h.basis.push_back(PauliString::two(num_sites, i, 'Z', i + 1, 'Z'));
  fill_random_coeffs(h, seed);
  h.param_map = identity_map(h.basis.size());
  h.num_params = static_cast<int>(h.basis.size());
  h.validate();
  return h;
}

ParamHamiltonian build_tfim_homogeneous(int num_sites, double h_field,
                                        double j_coupling) {
  if (num_sites < 2) throw std::invalid_argument("num_sites must be >= 2");
  ParamHamiltonian h;
  h.family = FamilyTag::TfimHomogeneous;
  h.num_sites = num_sites;
  for (int i = 0; i < num_sites; ++i) {
    h.basis.push_back(PauliString::single(num_sites, i, 'X'));
    h.coeffs.push_back(h_field);
    h.param_map.push_back(0);
  }
  for (int i = 0; i + 1 < num_sites; ++i) {
    h.basis.push_back(PauliString::two(num_sites, i, 'Z', i + 1, 'Z'));
    h.coeffs.push_back(j_coupling);
    h.param_map.push_back(1);
  }
  h.num_params = 2;
  h.validate();
  return h;
}

ParamHamiltonian build_generic_2local(int num_sites, std::uint64_t seed) {
  if (num_sites < 2) throw std::invalid_argument("num_sites must be >= 2");
  ParamHamiltonian h;
  h.family = FamilyTag::Generic2Local;
  h.num_sites = num_sites;
  static const char paulis[3] = {'X', 'Y', 'Z'};
  for (int i = 0; i < num_sites; ++i)
    for (int j = i + 1; j < num_sites; ++j)
      for (char b : paulis)
        for (char g : paulis)
          h.basis.push_back(PauliString::two(num_sites, i, b, j, g));
  fill_random_coeffs(h, seed);
  h.param_map = identity_map(h.basis.size());
  h.num_params = static_cast<int>(h.basis.size());
  h.validate();
  return h;
}

ParamHamiltonian build_xyz_chain(int num_sites, double coupling) {
  if (num_sites < 2) throw std::invalid_argument("num_sites must be >= 2");
  ParamHamiltonian h;
  h.family = FamilyTag::Custom;
  h.num_sites = num_sites;
  for (int i = 0; i + 1 < num_sites; ++i)
    for (char p : {'X', 'Y', 'Z'})
      h.basis.push_back(PauliString::two(num_sites, i, p, i + 1, p));
  h.coeffs.assign(h.basis.size(), coupling);
  h.param_map = identity_map(h.basis.size());
  h.num_params = static_cast<int>(h.basis.size());
  h.validate();
  return h;
}

ParamHamiltonian build_custom(int num_sites, std::vector<PauliString> basis,
                              std::vector<double> coeffs) {
  ParamHamiltonian h;
  h.family = FamilyTag::Custom;
  h.num_sites = num_sites;
  h.basis = std::move(basis);
  h.coeffs = std::move(coeffs);
  h.param_map = identity_map(h.basis.size());
  h.num_params = static_cast<int>(h.basis.size());
  h.validate();
  return h;
}

ParamHamiltonian build_family(FamilyTag tag, int num_sites,
                              std::uint64_t seed) {
  switch (tag) {
    case FamilyTag::Generic2Local:
      return build_generic_2local(num_sites, seed);
    case FamilyTag::ZzXx:
      return build_zz_xx(num_sites, seed);
    case FamilyTag::TfimInhomogeneous:
      return build_tfim_inhomogeneous(num_sites, seed);
    case FamilyTag::TfimHomogeneous: {
      // Random (h, J) in [-1, 1], matching the other random families.
      Rng rng(seed);
      const double h_field = rng.uniform(-1.0, 1.0);
      const double j_coupling = rng.uniform(-1.0, 1.0);
      return build_tfim_homogeneous(num_sites, h_field, j_coupling);
    }
    case FamilyTag::Custom:
      throw std::invalid_argument(
          "custom family requires an explicit basis, use build_custom");
  }
  throw std::invalid_argument("unknown family tag");
}

Eigen::MatrixXcd dense_matrix(const ParamHamiltonian& h) {
  h.validate();
  const std::size_t dim = 1ULL << h.num_sites;
  if (dim > kDenseDimCap)
    throw std::invalid_argument("dense matrix dimension cap exceeded");
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(dim, dim);
  for (std::size_t t = 0; t < h.basis.size(); ++t)
    m += h.coeffs[t] * dense::pauli_matrix(h.basis[t]);
  return m;
}

Eigen::MatrixXcd exact_evolution(const ParamHamiltonian& h, double t) {
  if (!std::isfinite(t)) throw std::invalid_argument("time must be finite");
  const Eigen::MatrixXcd m = dense_matrix(h);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(m);
  if (solver.info() != Eigen::Success)
    throw std::runtime_error("eigendecomposition failed");
  const Eigen::VectorXd w = solver.eigenvalues();
  const Eigen::MatrixXcd& v = solver.eigenvectors();
  Eigen::VectorXcd phases(w.size());
  for (long i = 0; i < w.size(); ++i) phases(i) = std::exp(cplx(0, -w(i) * t));
  return v * phases.asDiagonal() * v.adjoint();
}

}  // namespace hamlearn
