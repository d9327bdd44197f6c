#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "hamlearn/pauli.hpp"

namespace hamlearn {

enum class FamilyTag {
  Generic2Local,
  ZzXx,
  TfimInhomogeneous,
  TfimHomogeneous,
  Custom,
};

std::string family_tag_name(FamilyTag tag);
FamilyTag family_tag_from_name(const std::string& name);

/// Real-coefficient Hamiltonian over an ordered basis of 2-local Pauli
/// strings. `coeffs` carries one value per term; `param_map` folds terms
/// onto the learnable parameter vector, so families whose terms share a
/// coupling (the homogeneous chain) expose fewer parameters than terms.
struct ParamHamiltonian {
  FamilyTag family = FamilyTag::Custom;
  int num_sites = 0;
  std::vector<PauliString> basis;
  std::vector<double> coeffs;
  std::vector<int> param_map;  // term index -> parameter index
  int num_params = 0;

  std::vector<double> params() const;
  void set_params(std::span<const double> p);

  void validate() const;
};

/// All-pair sigma_z sigma_z + sigma_x sigma_x couplings, coefficients
/// uniform in [-1, 1].
ParamHamiltonian build_zz_xx(int num_sites, std::uint64_t seed);

/// Per-site transverse fields plus per-bond nearest-neighbor ZZ couplings,
/// all independently random in [-1, 1].
ParamHamiltonian build_tfim_inhomogeneous(int num_sites, std::uint64_t seed);

/// h * sum_i X_i + J * sum_i Z_i Z_{i+1}; two learnable parameters.
ParamHamiltonian build_tfim_homogeneous(int num_sites, double h, double J);

/// All pairs, all {X,Y,Z} x {X,Y,Z} couplings, uniform [-1, 1].
ParamHamiltonian build_generic_2local(int num_sites, std::uint64_t seed);

/// Nearest-neighbor XX + YY + ZZ chain with a shared coupling J per term.
ParamHamiltonian build_xyz_chain(int num_sites, double coupling);

ParamHamiltonian build_custom(int num_sites, std::vector<PauliString> basis,
                              std::vector<double> coeffs);

/// Seeded dispatcher over the random families.
ParamHamiltonian build_family(FamilyTag tag, int num_sites,
                              std::uint64_t seed);

/// Dense Hermitian matrix sum_t coeffs[t] * kron(basis[t]).
/// Throws above a 4096-dimensional cap.
Eigen::MatrixXcd dense_matrix(const ParamHamiltonian& h);

/// exp(-i H t) by eigendecomposition of the dense matrix.
Eigen::MatrixXcd exact_evolution(const ParamHamiltonian& h, double t);

}  // namespace hamlearn
