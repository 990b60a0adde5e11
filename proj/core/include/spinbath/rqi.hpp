#pragma once

#include <array>
#include <vector>

#include "spinbath/lindblad.hpp"

namespace spinbath {

// ---- repeated-interaction discretization ----

// One interaction round of duration h: the chain coupled to one fresh Gibbs
// qubit per bath through (1/sqrt(h)) (sx sx + sy sy) at the bath's site.
struct InteractionSetup {
  ChainParams chain;
  std::vector<BathSpec> baths;
  double h = 0.0;
};

// Validates h > 0 and finite, all betas finite and > 0, bath sites in range
// and distinct.
InteractionSetup make_setup(const ChainParams& chain, const std::vector<BathSpec>& baths,
                            double h);

// Orthonormal basis of (C^2, rho_beta) under <A,B> = Tr(rho_beta A* B):
//   X0 = I, X1 = sigma_- / sqrt(beta0), X2 = sigma_+ / sqrt(beta1),
//   X3 = diag(beta1, -beta0) / sqrt(beta0 beta1).
std::array<Matrix, 4> gns_basis(double beta);

// Full Hamiltonian on chain (x) baths: H_S + H_R + the scaled couplings.
// Tensor order: chain factor first, then one qubit per bath in list order.
Matrix interaction_hamiltonian(const InteractionSetup& setup);

// exp(-i h H); unitary by construction (Hermitian eigendecomposition).
Matrix one_step_unitary(const InteractionSetup& setup);

// Chain-space blocks B_i of the one-step unitary in the product GNS basis,
// indexed by a base-4 multi-index over baths (first bath most significant).
// The discrete Heisenberg map is L_h(X) = sum_i B_i* X B_i, and
// sum_i B_i* B_i = I exactly at every h.
struct RqiBlocks {
  int n_sites = 0;
  int n_baths = 0;
  double h = 0.0;
  std::vector<Matrix> blocks;
};

RqiBlocks gns_blocks(const InteractionSetup& setup);

// max-abs of sum_i B_i* B_i - I.
double isometry_residual(const RqiBlocks& blocks);

// L_h(X) = sum_i B_i* X B_i.
Matrix discrete_map(const RqiBlocks& blocks, const Matrix& x);

// n-fold application of the discrete map.
Matrix repeated_map(const RqiBlocks& blocks, const Matrix& x, long n_steps);

struct ProbePoint {
  double h = 0.0;
  double residual = 0.0;           // ||(L_h(X) - X)/h - L(X)||_max
  double isometry_residual = 0.0;  // ||sum B_i* B_i - I||_max at this h
};

// Convergence of the discrete map toward the Lindblad generator over a grid
// of interaction times. The model's chain and baths define both sides.
std::vector<ProbePoint> convergence_probe(const LindbladModel& model, const Matrix& observable,
                                          const std::vector<double>& h_grid);

// Least-squares slope of log(residual) against log(h).
double probe_order(const std::vector<ProbePoint>& points);

}  // namespace spinbath
