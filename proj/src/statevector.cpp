#include "hamlearn/statevector.hpp"

#include <cmath>
#include <stdexcept>

#include "hamlearn/rng.hpp"

namespace hamlearn {

namespace {

std::size_t power(int base, int exp) {
  std::size_t d = 1;
  for (int i = 0; i < exp; ++i) d *= static_cast<std::size_t>(base);
  return d;
}

}  // namespace

StateVector StateVector::zero_state(int num_sites, int local_dim) {
  if (num_sites < 1) throw std::invalid_argument("num_sites must be >= 1");
  if (local_dim != 2 && local_dim != 3)
    throw std::invalid_argument("local_dim must be 2 or 3");
  StateVector s;
  s.num_sites = num_sites;
  s.local_dim = local_dim;
  s.amplitudes.assign(power(local_dim, num_sites), cplx(0.0, 0.0));
  s.amplitudes[0] = cplx(1.0, 0.0);
  return s;
}

double StateVector::norm() const {
  double n2 = 0.0;
  for (const auto& a : amplitudes) n2 += std::norm(a);
  return std::sqrt(n2);
}

void StateVector::normalize() {
  const double n = norm();
  if (n == 0.0) throw std::runtime_error("cannot normalize a zero vector");
  for (auto& a : amplitudes) a /= n;
}

StateVector random_state(int num_sites, std::uint64_t seed, bool real_only,
                         int local_dim) {
  StateVector s = StateVector::zero_state(num_sites, local_dim);
  Rng rng(seed);
  for (auto& a : s.amplitudes) {
    const double re = rng.normal();
    const double im = real_only ? 0.0 : rng.normal();
    a = cplx(re, im);
  }
  s.normalize();
  return s;
}

cplx inner(const StateVector& a, const StateVector& b) {
  if (a.dim() != b.dim()) throw std::invalid_argument("dimension mismatch");
  cplx acc(0.0, 0.0);
  for (std::size_t i = 0; i < a.dim(); ++i)
    acc += std::conj(a.amplitudes[i]) * b.amplitudes[i];
  return acc;
}

double overlap2(const StateVector& a, const StateVector& b) {
  return std::norm(inner(a, b));
}

}  // namespace hamlearn
