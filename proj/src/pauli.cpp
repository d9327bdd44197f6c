#include "hamlearn/pauli.hpp"

#include <bit>
#include <cmath>
#include <stdexcept>

namespace hamlearn {

namespace {

bool valid_pauli_char(char c) {
  return c == 'I' || c == 'X' || c == 'Y' || c == 'Z';
}

struct StringMasks {
  std::uint64_t flip = 0;  // X and Y sites
  std::uint64_t sign = 0;  // Y and Z sites, contribute (-1)^bit
  int n_y = 0;
};

// Site s of an n-site register maps to bit 2^(n-1-s).
StringMasks masks_for(const PauliString& p) {
  StringMasks m;
  const int n = p.num_sites();
  for (int s = 0; s < n; ++s) {
    const std::uint64_t bit = 1ULL << (n - 1 - s);
    switch (p.ops[s]) {
      case 'I':
        break;
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
        throw std::invalid_argument("invalid Pauli character");
    }
  }
  return m;
}

// P|b> = phase(b) |b ^ flip> with phase(b) = i^{n_y} (-1)^{popcount(b & sign)}.
cplx phase_for(const StringMasks& m, std::uint64_t b) {
  static const cplx i_pow[4] = {cplx(1, 0), cplx(0, 1), cplx(-1, 0),
                                cplx(0, -1)};
  cplx ph = i_pow[m.n_y & 3];
  if (std::popcount(b & m.sign) & 1) ph = -ph;
  return ph;
}

}  // namespace

PauliString::PauliString(std::string s) : ops(std::move(s)) {
  for (char c : ops)
    if (!valid_pauli_char(c))
      throw std::invalid_argument("Pauli string may only contain I, X, Y, Z");
}

int PauliString::support() const {
  int k = 0;
  for (char c : ops)
    if (c != 'I') ++k;
  return k;
}

PauliString PauliString::identity(int n) {
  return PauliString(std::string(static_cast<std::size_t>(n), 'I'));
}

PauliString PauliString::single(int n, int site, char p) {
  if (site < 0 || site >= n) throw std::invalid_argument("site out of range");
  PauliString s = identity(n);
  if (!valid_pauli_char(p)) throw std::invalid_argument("invalid Pauli");
  s.ops[site] = p;
  return s;
}

PauliString PauliString::two(int n, int site0, char p0, int site1, char p1) {
  if (site0 == site1) throw std::invalid_argument("sites must be distinct");
  PauliString s = single(n, site0, p0);
  if (site1 < 0 || site1 >= n) throw std::invalid_argument("site out of range");
  if (!valid_pauli_char(p1)) throw std::invalid_argument("invalid Pauli");
  s.ops[site1] = p1;
  return s;
}

int PauliObservable::num_sites() const {
  return terms.empty() ? 0 : terms.front().string.num_sites();
}

double PauliObservable::weight_l1() const {
  double w = 0.0;
  for (const auto& t : terms) w += std::abs(t.weight);
  return w;
}

PauliObservable magnetization_observable(char axis, int num_sites) {
  if (axis != 'X' && axis != 'Z')
    throw std::invalid_argument("magnetization axis must be X or Z");
  PauliObservable obs;
  for (int s = 0; s < num_sites; ++s)
    obs.terms.push_back({1.0, PauliString::single(num_sites, s, axis)});
  return obs;
}

cplx pauli_matrix_element(const StateVector& bra, const PauliString& p,
                          const StateVector& ket) {
  if (bra.dim() != ket.dim())
    throw std::invalid_argument("dimension mismatch");
  if (p.num_sites() != ket.num_sites)
    throw std::invalid_argument("Pauli string length does not match state");
  if (ket.local_dim != 2)
    throw std::invalid_argument("Pauli operators act on qubit registers");
  const StringMasks m = masks_for(p);
  cplx acc(0.0, 0.0);
  const std::size_t dim = ket.dim();
  for (std::size_t j = 0; j < dim; ++j) {
    const std::size_t src = j ^ m.flip;
    acc += std::conj(bra.amplitudes[j]) * phase_for(m, src) *
           ket.amplitudes[src];
  }
  return acc;
}

double expectation(const StateVector& state, const PauliString& p) {
  return pauli_matrix_element(state, p, state).real();
}

double expectation(const StateVector& state, const PauliObservable& obs) {
  double acc = 0.0;
  for (const auto& t : obs.terms)
    acc += t.weight * expectation(state, t.string);
  return acc;
}

cplx cross_expectation(const StateVector& bra, const PauliObservable& obs,
                       const StateVector& ket) {
  cplx acc(0.0, 0.0);
  for (const auto& t : obs.terms)
    acc += t.weight * pauli_matrix_element(bra, t.string, ket);
  return acc;
}

}  // namespace hamlearn
