#include "spinbath/model.hpp"

#include <cmath>
#include <limits>
#include <set>

namespace spinbath {

ChainParams default_chain(int n_sites) {
  chain_dim(n_sites);
  return ChainParams{n_sites, 1.0, 1.0, 1.0};
}

double gibbs_weight_upper(double beta) {
  if (std::isnan(beta)) {
    throw std::invalid_argument("bath beta must not be NaN");
  }
  if (std::isinf(beta)) {
    if (beta < 0) throw std::invalid_argument("bath beta must exceed -infinity");
    return 0.0;
  }
  return 1.0 / (1.0 + std::exp(2.0 * beta));
}

double gibbs_weight_lower(double beta) {
  if (std::isinf(beta) && beta > 0) return 1.0;
  return gibbs_weight_upper(-beta);
}

BathSpec make_bath(int site, double beta) {
  if (site < 1) {
    throw std::invalid_argument("bath site must be >= 1");
  }
  BathSpec b;
  b.site = site;
  b.beta = beta;
  b.beta0 = gibbs_weight_upper(beta);
  b.beta1 = gibbs_weight_lower(beta);
  return b;
}

void validate(const LindbladModel& model) {
  chain_dim(model.chain.n_sites);
  if (!std::isfinite(model.chain.b_field) || !std::isfinite(model.chain.jx) ||
      !std::isfinite(model.chain.jy)) {
    throw std::invalid_argument("chain parameters must be finite");
  }
  if (model.baths.empty()) {
    throw std::invalid_argument("at least one bath is required");
  }
  std::set<int> seen;
  for (const auto& b : model.baths) {
    if (b.site < 1 || b.site > model.chain.n_sites) {
      throw std::invalid_argument("bath site out of range");
    }
    if (!seen.insert(b.site).second) {
      throw std::invalid_argument("bath sites must be distinct");
    }
    if (std::isnan(b.beta) || (std::isinf(b.beta) && b.beta < 0)) {
      throw std::invalid_argument("bath beta must be in (-inf, +inf]");
    }
    const double b0 = gibbs_weight_upper(b.beta);
    const double b1 = gibbs_weight_lower(b.beta);
    if (std::abs(b.beta0 - b0) > 1e-14 || std::abs(b.beta1 - b1) > 1e-14) {
      throw std::invalid_argument("bath Gibbs weights are inconsistent with beta");
    }
  }
}

LindbladModel make_model(const ChainParams& chain, const std::vector<BathSpec>& baths) {
  LindbladModel m{chain, baths};
  validate(m);
  return m;
}

bool equal_bath_betas(const LindbladModel& model) {
  for (const auto& b : model.baths) {
    if (!(b.beta == model.baths.front().beta)) return false;
  }
  return true;
}

Matrix gibbs_qubit(double beta) {
  Matrix m = Matrix::Zero(2, 2);
  m(0, 0) = gibbs_weight_upper(beta);
  m(1, 1) = gibbs_weight_lower(beta);
  return m;
}

Matrix product_gibbs(double beta, int n_sites) {
  chain_dim(n_sites);
  Matrix out = gibbs_qubit(beta);
  for (int k = 1; k < n_sites; ++k) {
    out = kron(out, gibbs_qubit(beta));
  }
  return out;
}

Matrix chain_hamiltonian(const ChainParams& params) {
  const int n = params.n_sites;
  const long d = chain_dim(n);
  Matrix h = Matrix::Zero(d, d);
  for (int k = 1; k <= n; ++k) {
    h += params.b_field * embed_site(sigma_z(), k, n);
  }
  for (int k = 1; k < n; ++k) {
    h += params.jx * embed_site(sigma_x(), k, n) * embed_site(sigma_x(), k + 1, n);
    h += params.jy * embed_site(sigma_y(), k, n) * embed_site(sigma_y(), k + 1, n);
  }
  return h;
}

Matrix free_hamiltonian(int n_sites) {
  const long d = chain_dim(n_sites);
  Matrix h = Matrix::Zero(d, d);
  for (int k = 1; k <= n_sites; ++k) {
    h += embed_site(sigma_z(), k, n_sites);
  }
  return h;
}

}  // namespace spinbath
