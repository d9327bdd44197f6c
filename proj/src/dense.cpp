#include "hamlearn/dense.hpp"

#include <cmath>
#include <stdexcept>

namespace hamlearn::dense {

namespace {

using Eigen::Matrix2cd;
using Eigen::Matrix4cd;
using Eigen::MatrixXcd;

// kron(A, B) with A as the most significant factor.
MatrixXcd kron(const MatrixXcd& a, const Matrix2cd& b) {
  MatrixXcd out(a.rows() * 2, a.cols() * 2);
  for (long i = 0; i < a.rows(); ++i)
    for (long j = 0; j < a.cols(); ++j)
      out.block<2, 2>(2 * i, 2 * j) = a(i, j) * b;
  return out;
}

Matrix2cd rotation_2x2(char p, double angle) {
  const double c = std::cos(angle / 2.0);
  const double s = std::sin(angle / 2.0);
  Matrix2cd m;
  switch (p) {
    case 'X':
      m << cplx(c, 0), cplx(0, -s), cplx(0, -s), cplx(c, 0);
      break;
    case 'Y':
      m << cplx(c, 0), cplx(-s, 0), cplx(s, 0), cplx(c, 0);
      break;
    case 'Z':
      m << std::exp(cplx(0, -angle / 2.0)), 0.0, 0.0,
          std::exp(cplx(0, angle / 2.0));
      break;
    default:
      throw std::invalid_argument("invalid rotation generator");
  }
  return m;
}

// Embed a 4x4 two-site operator given as entries over (q0, q1) subspace
// into the full register.
MatrixXcd embed_two_site(const Matrix4cd& u4, int q0, int q1, int n) {
  const std::size_t dim = 1ULL << n;
  const std::uint64_t m0 = 1ULL << (n - 1 - q0);
  const std::uint64_t m1 = 1ULL << (n - 1 - q1);
  MatrixXcd full = MatrixXcd::Zero(dim, dim);
  for (std::size_t col = 0; col < dim; ++col) {
    const int c0 = (col & m0) ? 1 : 0;
    const int c1 = (col & m1) ? 1 : 0;
    const int cc = 2 * c0 + c1;
    for (int rr = 0; rr < 4; ++rr) {
      if (u4(rr, cc) == cplx(0, 0)) continue;
      std::size_t row = col & ~(m0 | m1);
      if (rr & 2) row |= m0;
      if (rr & 1) row |= m1;
      full(row, col) += u4(rr, cc);
    }
  }
  return full;
}

}  // namespace

Eigen::Matrix2cd single_pauli(char p) {
  Matrix2cd m;
  switch (p) {
    case 'I':
      m << 1, 0, 0, 1;
      break;
    case 'X':
      m << 0, 1, 1, 0;
      break;
    case 'Y':
      m << cplx(0, 0), cplx(0, -1), cplx(0, 1), cplx(0, 0);
      break;
    case 'Z':
      m << 1, 0, 0, -1;
      break;
    default:
      throw std::invalid_argument("invalid Pauli character");
  }
  return m;
}

Eigen::MatrixXcd pauli_matrix(const PauliString& p) {
  MatrixXcd m = MatrixXcd::Identity(1, 1);
  for (char c : p.ops) m = kron(m, single_pauli(c));
  return m;
}

Eigen::MatrixXcd gate_matrix(const Gate& g, int num_sites) {
  const std::size_t dim = 1ULL << num_sites;
  switch (g.kind) {
    case GateKind::Rx:
    case GateKind::Ry:
    case GateKind::Rz: {
      const char p = g.kind == GateKind::Rx   ? 'X'
                     : g.kind == GateKind::Ry ? 'Y'
                                              : 'Z';
      const Matrix2cd r = rotation_2x2(p, g.angle);
      MatrixXcd m = MatrixXcd::Identity(1, 1);
      for (int s = 0; s < num_sites; ++s)
        m = kron(m, s == g.q0 ? r : Matrix2cd(Matrix2cd::Identity()));
      return m;
    }
    case GateKind::Cnot: {
      Matrix4cd u = Matrix4cd::Zero();
      u(0, 0) = 1;
      u(1, 1) = 1;
      u(3, 2) = 1;
      u(2, 3) = 1;
      return embed_two_site(u, g.q0, g.q1, num_sites);
    }
    case GateKind::Cy: {
      Matrix4cd u = Matrix4cd::Zero();
      u(0, 0) = 1;
      u(1, 1) = 1;
      u(3, 2) = cplx(0, 1);
      u(2, 3) = cplx(0, -1);
      return embed_two_site(u, g.q0, g.q1, num_sites);
    }
    case GateKind::PauliRot2: {
      PauliString p = PauliString::two(num_sites, g.q0, g.p0, g.q1, g.p1);
      const MatrixXcd gen = pauli_matrix(p);
      const double c = std::cos(g.angle / 2.0);
      const double s = std::sin(g.angle / 2.0);
      return c * MatrixXcd::Identity(dim, dim) - cplx(0, s) * gen;
    }
  }
  throw std::logic_error("unreachable");
}

Eigen::MatrixXcd circuit_unitary(const Circuit& c) {
  const std::size_t dim = 1ULL << c.num_sites;
  MatrixXcd u = MatrixXcd::Identity(dim, dim);
  for (const auto& g : c.gates) u = gate_matrix(g, c.num_sites) * u;
  return u;
}

Eigen::VectorXcd to_eigen(const StateVector& s) {
  return Eigen::Map<const Eigen::VectorXcd>(s.amplitudes.data(),
                                            static_cast<long>(s.dim()));
}

StateVector from_eigen(const Eigen::VectorXcd& v, int num_sites,
                       int local_dim) {
  StateVector s;
  s.num_sites = num_sites;
  s.local_dim = local_dim;
  s.amplitudes.assign(v.data(), v.data() + v.size());
  return s;
}

}  // namespace hamlearn::dense
