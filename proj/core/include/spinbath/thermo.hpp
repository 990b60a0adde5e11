#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "spinbath/lindblad.hpp"

namespace spinbath {

// S(rho | sigma) = Tr rho (log sigma - log rho), always <= 0; returns
// -infinity when the support of rho is not contained in that of sigma.
double relative_entropy(const Matrix& rho, const Matrix& sigma,
                        double floor = tol::psd_floor);

// Product Gibbs reference e^{-beta H^(S)} / Z at the common bath temperature.
// Requires all baths at one finite beta.
Matrix reference_state(const LindbladModel& model);

struct SupportWarning {
  int eigen_index = 0;  // eigenbasis index of rho with a vanishing eigenvalue
  double rate = 0.0;    // diagonal rate <psi_j, L*(rho) psi_j>
};

struct EntropyReport {
  double sigma_total = 0.0;
  std::vector<double> per_bath;   // one entry per model bath, same order
  double hamiltonian_term = 0.0;  // contribution of -i[H, rho]; zero analytically
  std::string method;
  bool infinite = false;  // sigma_total is +infinity (singular rho with active rate)
  std::vector<SupportWarning> support_warnings;
};

// Entropy production sigma(rho) = Tr( L*(rho) (log rho_ref - log rho) ),
// evaluated term by term in the eigenbasis of rho. rho_ref must be faithful.
// A zero eigenvalue of rho with |rate| > 1e-10 yields +infinity and a warning;
// zero-rate zero modes contribute nothing.
EntropyReport entropy_production_def(const LindbladModel& model, const Matrix& rho,
                                     const Matrix& rho_ref);

// Spectral closed form at equal finite bath temperatures:
//   sigma = 4 beta0 sum_baths sum_{j,k} |<psi_k, sigma_+^(site) psi_j>|^2
//           (e^{2 beta} r_k - r_j)(log r_k - log r_j + 2 beta).
// Requires a faithful rho. Eigenvalue pairs with both |r_k - r_j| < 1e-14 and
// matrix element < 1e-14 contribute exactly zero.
EntropyReport entropy_production_closed(const LindbladModel& model, const Matrix& rho);

struct DetailedBalanceReport {
  double commutation_residual = 0.0;  // ||[H_S, rho]||_max
  double symmetry_residual = 0.0;     // max |<D(A),B>_rho - <A,D(B)>_rho|
  long pairs_checked = 0;
  bool exhaustive = false;
  bool satisfied = false;
};

// Quantum detailed balance certificate at a faithful state rho: commutation
// with H_S plus symmetry of the Heisenberg dissipator in the GNS inner
// product <A,B>_rho = Tr(rho A* B). Exhaustive over matrix-unit pairs for
// n_sites <= 3; deterministic seeded subsample of 4096 pairs above that.
DetailedBalanceReport detailed_balance_certificate(const LindbladModel& model, const Matrix& rho,
                                                   std::uint64_t seed = 0x5eed5eedULL);

}  // namespace spinbath
