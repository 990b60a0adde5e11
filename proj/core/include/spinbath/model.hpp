#pragma once

#include <vector>

#include "spinbath/operators.hpp"

namespace spinbath {

// ---- chain and bath description ----

struct ChainParams {
  int n_sites = 1;
  double b_field = 1.0;
  double jx = 1.0;
  double jy = 1.0;
};

// Chain with unit field and isotropic unit couplings.
ChainParams default_chain(int n_sites);

// Heat bath attached to one site. beta may be +infinity (zero temperature);
// beta0/beta1 are the Gibbs weights of the upper/lower sigma_z level.
struct BathSpec {
  int site = 0;
  double beta = 0.0;
  double beta0 = 0.5;
  double beta1 = 0.5;
};

BathSpec make_bath(int site, double beta);

double gibbs_weight_upper(double beta);  // 1 / (1 + e^{2 beta})
double gibbs_weight_lower(double beta);  // 1 / (1 + e^{-2 beta})

struct LindbladModel {
  ChainParams chain;
  std::vector<BathSpec> baths;
};

// Validates ranges, distinct bath sites, and at least one bath.
LindbladModel make_model(const ChainParams& chain, const std::vector<BathSpec>& baths);
void validate(const LindbladModel& model);

bool equal_bath_betas(const LindbladModel& model);

// ---- states and Hamiltonians ----

// e^{-beta sigma_z} / Tr = diag(beta0, beta1)
Matrix gibbs_qubit(double beta);

// n-fold tensor power of gibbs_qubit(beta)
Matrix product_gibbs(double beta, int n_sites);

// B sum_k sigma_z^(k) + sum_k [jx sx^(k) sx^(k+1) + jy sy^(k) sy^(k+1)]
Matrix chain_hamiltonian(const ChainParams& params);

// sum_k sigma_z^(k)
Matrix free_hamiltonian(int n_sites);

}  // namespace spinbath
