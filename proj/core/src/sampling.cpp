#include "spinbath/sampling.hpp"

#include <cmath>
#include <numbers>

namespace spinbath {

double SplitMix64::normal() {
  // Box-Muller; discards the second variate for a stateless layout.
  double u1 = uniform();
  while (u1 <= 0.0) u1 = uniform();
  const double u2 = uniform();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

SplitMix64 SplitMix64::split(std::uint64_t label) {
  SplitMix64 child(state ^ (0xa0761d6478bd642fULL * (label + 1)));
  child.next();
  return child;
}

Matrix random_ginibre(Eigen::Index dim, SplitMix64& rng) {
  Matrix g(dim, dim);
  for (Eigen::Index i = 0; i < dim; ++i) {
    for (Eigen::Index j = 0; j < dim; ++j) {
      g(i, j) = Complex(rng.normal(), rng.normal());
    }
  }
  return g;
}

Matrix random_hermitian(Eigen::Index dim, SplitMix64& rng) {
  const Matrix g = random_ginibre(dim, rng);
  return 0.5 * (g + g.adjoint());
}

Matrix random_density(Eigen::Index dim, SplitMix64& rng) {
  const Matrix g = random_ginibre(dim, rng);
  Matrix rho = g * g.adjoint();
  rho /= rho.trace().real();
  return rho;
}

Matrix random_faithful_density(Eigen::Index dim, SplitMix64& rng, double mix) {
  if (mix <= 0.0 || mix >= 1.0) {
    throw std::invalid_argument("random_faithful_density: mix must be in (0, 1)");
  }
  return (1.0 - mix) * random_density(dim, rng) +
         mix / static_cast<double>(dim) * Matrix::Identity(dim, dim);
}

}  // namespace spinbath
