#pragma once

#include <vector>

#include "spinbath/lindblad.hpp"

namespace spinbath {

// ---- stationary states ----

struct StationaryOptions {
  bool compute_gap = false;
  double kernel_rel_tol = tol::kernel_relative;
};

struct StationaryReport {
  int kernel_dimension = 0;
  // Hermitized, trace-normalized kernel state; empty unless kernel_dimension == 1.
  Matrix state;
  // Raw kernel basis (unvectorized right singular vectors), always populated.
  std::vector<Matrix> kernel_basis;
  double residual = 0.0;        // max-abs of L*(state); NaN when no unique state
  double gap = 0.0;             // NaN unless compute_gap was set
  double min_eigenvalue = 0.0;  // of the returned state; NaN when absent
  bool faithful = false;
};

StationaryReport stationary_state(const LindbladModel& model, const StationaryOptions& opts = {});

// ---- commutant ----

struct CommutantReport {
  int dimension = 0;
  std::vector<Matrix> witnesses;      // orthonormal basis of the commutant
  double max_witness_residual = 0.0;  // max over witnesses W, ops M of ||[W, M]||_max
};

// Dimension of {A : [A, M] = 0 for all M in ops} via the stacked commutator
// map's null space (relative singular value threshold 1e-8).
CommutantReport commutant_dimension(const std::vector<Matrix>& ops);

struct UniquenessCertificate {
  int commutant_dimension = 0;
  bool family_self_adjoint = false;  // {V} spans the same space as {V*}
  double span_residual = 0.0;
  bool unique = false;
};

// Certifies uniqueness of the stationary state: the commutant of
// {H_S} u {V_j} u {V_j*} is trivial and the jump family is self-adjoint as a set.
UniquenessCertificate uniqueness_certificate(const LindbladModel& model);

// Smallest nonzero decay rate: min { -Re(lambda) : |lambda| > 1e-9 } over the
// Schrodinger spectrum. Full dense eigensolve; practical for n_sites <= 4.
double spectral_gap(const LindbladModel& model);

// ---- local states and closed forms ----

// Reduced state at one site (1-based).
Matrix local_state(const Matrix& rho, int site, int n_sites);

// Closed-form two-ended-chain stationary state for n_sites in {2, 3, 4} with
// unit field/couplings, left bath beta, right bath beta_prime.
Matrix closed_form_stationary(double beta, double beta_prime, int n_sites);

// Local-state formulas for the two-ended chain: (3 rho_b + rho_b')/4 at site 1,
// (rho_b + rho_b')/2 in the interior, (rho_b + 3 rho_b')/4 at site n. Proved
// for n_sites <= 4, conjectured beyond.
Matrix conjectured_local_state(double beta, double beta_prime, int site, int n_sites);

struct EntryMismatch {
  int row = 0;
  int col = 0;
  Complex closed_form;
  Complex kernel;
  double abs_diff = 0.0;
};

struct ClosedFormComparison {
  int n_sites = 0;
  double max_abs_diff = 0.0;
  bool agrees = false;
  double closed_form_residual = 0.0;  // max-abs of L* applied to the closed form
  std::vector<EntryMismatch> mismatches;
};

// Compares the closed-form expression against the numerically extracted kernel
// state. Requires the standard two-ended model shape. Never throws on
// disagreement; the mismatching entries are listed in the report.
ClosedFormComparison compare_closed_form(const LindbladModel& model, double tolerance = 1e-8);

}  // namespace spinbath
