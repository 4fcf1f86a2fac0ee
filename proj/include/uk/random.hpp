#pragma once

// Seeded random observables and states. Real and imaginary parts are drawn
// from a standard normal, so random states are uniform on the unit sphere.

#include <cstdint>
#include <random>

#include "uk/linalg.hpp"

namespace uk {

using Rng = std::mt19937_64;

/// Independent stream for (seed, index): the same pair always yields the same
/// draws regardless of how many other streams were consumed.
inline Rng make_rng(std::uint64_t seed, std::uint64_t index = 0) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32)};
  return Rng(seq);
}

template <typename Real = double>
Vector<Real> random_gaussian_vector(Index dim, Rng& rng) {
  std::normal_distribution<Real> normal;
  Vector<Real> v(dim);
  for (Index k = 0; k < dim; ++k) {
    const Real re = normal(rng);
    const Real im = normal(rng);
    v(k) = Complex<Real>(re, im);
  }
  return v;
}

template <typename Real = double>
State<Real> random_state(Index dim, Rng& rng) {
  return State<Real>(random_gaussian_vector<Real>(dim, rng));
}

/// (G + G†)/2 with G a complex Gaussian matrix.
template <typename Real = double>
Hermitian<Real> random_hermitian(Index dim, Rng& rng) {
  std::normal_distribution<Real> normal;
  Matrix<Real> g(dim, dim);
  for (Index j = 0; j < dim; ++j)
    for (Index i = 0; i < dim; ++i) {
      const Real re = normal(rng);
      const Real im = normal(rng);
      g(i, j) = Complex<Real>(re, im);
    }
  return Hermitian<Real>::symmetrized(g);
}

}  // namespace uk
