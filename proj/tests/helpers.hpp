#pragma once

#include <vector>

#include "spinbath/lindblad.hpp"
#include "spinbath/sampling.hpp"

namespace spinbath::testing {

// Standard chain with unit field and couplings, baths at the listed sites.
inline LindbladModel standard_model(int n_sites, const std::vector<std::pair<int, double>>& baths) {
  std::vector<BathSpec> specs;
  specs.reserve(baths.size());
  for (const auto& [site, beta] : baths) specs.push_back(make_bath(site, beta));
  return make_model(default_chain(n_sites), specs);
}

inline LindbladModel two_ended(int n_sites, double beta, double beta_prime) {
  return standard_model(n_sites, {{1, beta}, {n_sites, beta_prime}});
}

inline LindbladModel all_sites(int n_sites, double beta) {
  std::vector<std::pair<int, double>> baths;
  for (int k = 1; k <= n_sites; ++k) baths.emplace_back(k, beta);
  return standard_model(n_sites, baths);
}

// Independent dissipator assembly straight from the jump family, used as an
// oracle against the term-by-term generator.
inline Matrix vform_generator(const LindbladModel& model, const Matrix& x, Picture picture) {
  const Matrix h = chain_hamiltonian(model.chain);
  const Complex sign = picture == Picture::heisenberg ? Complex(0, 1) : Complex(0, -1);
  Matrix out = sign * (h * x - x * h);
  for (const auto& j : jump_operators(model)) {
    const Matrix vv = j.op.adjoint() * j.op;
    if (picture == Picture::heisenberg) {
      out += j.op.adjoint() * x * j.op;
    } else {
      out += j.op * x * j.op.adjoint();
    }
    out -= 0.5 * (vv * x + x * vv);
  }
  return out;
}

}  // namespace spinbath::testing
