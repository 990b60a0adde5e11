#pragma once

#include <complex>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

namespace spinbath {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using RealVector = Eigen::VectorXd;
using ComplexVector = Eigen::VectorXcd;

// Raised when a numerical guarantee the library promises is not met by the
// data at hand (degenerate kernel where uniqueness is required, residuals
// above contract bounds, and so on). Distinct from input validation errors.
struct contract_violation : std::runtime_error {
  using std::runtime_error::runtime_error;
};

namespace tol {
inline constexpr double hermiticity = 1e-10;
inline constexpr double psd_floor = 1e-12;
inline constexpr double comparison = 1e-9;
inline constexpr double kernel_relative = 1e-10;
inline constexpr double commutant_relative = 1e-8;
}  // namespace tol

// ---- chain-sized operator carrier ----

// Square matrix tagged with the number of spin sites it acts on.
struct ChainOperator {
  int n_sites = 0;
  Matrix mat;

  ChainOperator() = default;
  ChainOperator(int n, Matrix m);
};

long chain_dim(int n_sites);

// ---- fixed 2x2 matrices ----

const Matrix& sigma_x();
const Matrix& sigma_y();
const Matrix& sigma_z();
const Matrix& sigma_plus();   // |0><1|
const Matrix& sigma_minus();  // |1><0|
const Matrix& n_plus();       // sigma_+ sigma_- = diag(1, 0)
const Matrix& n_minus();      // sigma_- sigma_+ = diag(0, 1)
const Matrix& id2();

Matrix identity(int n_sites);

// ---- elementary algebra ----

Matrix kron(const Matrix& a, const Matrix& b);

// Places a single-site operator at site `site` (1-based) of an n-site chain.
Matrix embed_site(const Matrix& op, int site, int n_sites);

Matrix commutator(const Matrix& a, const Matrix& b);
Matrix anticommutator(const Matrix& a, const Matrix& b);

// Reduced 2x2 matrix at `site`, tracing out every other site.
Matrix partial_trace_keep(const Matrix& rho, int site, int n_sites);

double max_abs(const Matrix& m);
bool approx_equal(const Matrix& a, const Matrix& b, double tolerance = tol::comparison);
bool is_hermitian(const Matrix& m, double tolerance = tol::hermiticity);

// ---- spectral toolbox ----

struct SpectralDecomposition {
  RealVector eigenvalues;  // ascending
  Matrix eigenvectors;     // columns, orthonormal
};

// Eigensystem of a Hermitian matrix. Near-degenerate groups are
// re-orthonormalized in index order and each column's phase is fixed so the
// output is a deterministic function of the input.
SpectralDecomposition herm_eig(const Matrix& m, double herm_tol = tol::hermiticity);

// Matrix exponential. Hermitian and anti-Hermitian inputs go through an exact
// eigendecomposition; everything else through scaling-and-squaring.
Matrix matrix_exp(const Matrix& m);

enum class SupportRule { error, project_to_support };

// Logarithm of a positive semidefinite matrix. Eigenvalues below the support
// floor either raise (SupportRule::error) or are excluded so the log lives on
// the support (SupportRule::project_to_support). Negative eigenvalues below
// -floor always raise.
Matrix matrix_log_psd(const Matrix& m, SupportRule rule = SupportRule::error,
                      double floor = tol::psd_floor);

// ---- inner products and norms ----

// <a, b>_rho = Tr(rho a* b)
Complex gns_inner(const Matrix& rho, const Matrix& a, const Matrix& b);

double trace_norm(const Matrix& m);
double trace_distance(const Matrix& a, const Matrix& b);

}  // namespace spinbath
