#pragma once

#include <string>
#include <vector>

#include "spinbath/model.hpp"

namespace spinbath {

enum class Picture { heisenberg, schrodinger };

// ---- jump operators ----

// One Lindblad jump operator embedded on the full chain. The family per bath
// is {2 sqrt(beta0) sigma_+^(site), 2 sqrt(beta1) sigma_-^(site)}, ordered by
// the model's bath list, raising before lowering.
struct JumpOperator {
  std::string label;
  int site = 0;
  double coefficient = 0.0;  // 2 sqrt(beta0) or 2 sqrt(beta1)
  bool raising = false;
  Matrix op;
};

std::vector<JumpOperator> jump_operators(const LindbladModel& model);

// ---- generator application (matrix-free) ----

// i[H, x] in the Heisenberg picture, -i[H, x] in the Schrodinger picture.
Matrix apply_hamiltonian_part(const LindbladModel& model, const Matrix& x, Picture picture);

// Dissipator of the bath at model.baths[bath_index]:
//   Heisenberg:  sum_V V* x V - (1/2){V*V, x}
//   Schrodinger: sum_V V x V* - (1/2){V*V, x}
Matrix apply_dissipator(const LindbladModel& model, int bath_index, const Matrix& x,
                        Picture picture);

// Full generator, assembled term by term from the parts above.
Matrix apply_generator(const LindbladModel& model, const Matrix& x, Picture picture);

// ---- dense superoperator ----

// Column-stacking convention: vec(A X B) = (B^T kron A) vec(X).
ComplexVector vec(const Matrix& m);
Matrix unvec(const ComplexVector& v);

struct SuperOperator {
  int n_sites = 0;
  Picture picture = Picture::schrodinger;
  Matrix mat;  // 4^n x 4^n
};

// Dense 4^n x 4^n matrix of the generator. Refuses n_sites > 7.
SuperOperator superoperator(const LindbladModel& model, Picture picture);

// ---- time evolution ----

enum class EvolveMethod { expm, adaptive_rk };

struct EvolveOptions {
  EvolveMethod method = EvolveMethod::expm;
  double tol = 1e-9;
};

struct EvolveResult {
  Matrix state;
  double trace_drift = 0.0;  // |Tr(state) - 1|, never silently renormalized
};

// exp(t L*) as a dense matrix on vectorized states. Allowed for n_sites <= 5.
Matrix propagator(const LindbladModel& model, double t);

// Schrodinger evolution of a density matrix. Validates the input state
// (Hermitian, unit trace, eigenvalues >= -tol) and rejects negative times.
EvolveResult evolve(const LindbladModel& model, const Matrix& rho0, double t,
                    const EvolveOptions& opts = {});

// Applies a precomputed propagator to a state.
EvolveResult apply_propagator(const Matrix& prop, const Matrix& rho0);

}  // namespace spinbath
