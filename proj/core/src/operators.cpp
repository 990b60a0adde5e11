#include "spinbath/operators.hpp"

#include <cmath>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <unsupported/Eigen/MatrixFunctions>

namespace spinbath {

long chain_dim(int n_sites) {
  if (n_sites < 1 || n_sites > 30) {
    throw std::invalid_argument("n_sites must be in [1, 30]");
  }
  return 1L << n_sites;
}

ChainOperator::ChainOperator(int n, Matrix m) : n_sites(n), mat(std::move(m)) {
  const long d = chain_dim(n);
  if (mat.rows() != d || mat.cols() != d) {
    throw std::invalid_argument("ChainOperator: matrix must be 2^n_sites square");
  }
}

// ---- fixed 2x2 matrices ----

namespace {
Matrix make2(Complex a, Complex b, Complex c, Complex d) {
  Matrix m(2, 2);
  m << a, b, c, d;
  return m;
}
}  // namespace

const Matrix& sigma_x() { static const Matrix m = make2(0, 1, 1, 0); return m; }
const Matrix& sigma_y() { static const Matrix m = make2(0, Complex(0, -1), Complex(0, 1), 0); return m; }
const Matrix& sigma_z() { static const Matrix m = make2(1, 0, 0, -1); return m; }
const Matrix& sigma_plus() { static const Matrix m = make2(0, 1, 0, 0); return m; }
const Matrix& sigma_minus() { static const Matrix m = make2(0, 0, 1, 0); return m; }
const Matrix& n_plus() { static const Matrix m = make2(1, 0, 0, 0); return m; }
const Matrix& n_minus() { static const Matrix m = make2(0, 0, 0, 1); return m; }
const Matrix& id2() { static const Matrix m = Matrix::Identity(2, 2); return m; }

Matrix identity(int n_sites) {
  const long d = chain_dim(n_sites);
  return Matrix::Identity(d, d);
}

// ---- elementary algebra ----

Matrix kron(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

Matrix embed_site(const Matrix& op, int site, int n_sites) {
  if (op.rows() != 2 || op.cols() != 2) {
    throw std::invalid_argument("embed_site: operator must be 2x2");
  }
  chain_dim(n_sites);
  if (site < 1 || site > n_sites) {
    throw std::out_of_range("embed_site: site out of range");
  }
  const long left = 1L << (site - 1);
  const long right = 1L << (n_sites - site);
  Matrix out = kron(Matrix::Identity(left, left), op);
  if (right > 1) {
    out = kron(out, Matrix::Identity(right, right));
  }
  return out;
}

Matrix commutator(const Matrix& a, const Matrix& b) { return a * b - b * a; }

Matrix anticommutator(const Matrix& a, const Matrix& b) { return a * b + b * a; }

Matrix partial_trace_keep(const Matrix& rho, int site, int n_sites) {
  const long d = chain_dim(n_sites);
  if (rho.rows() != d || rho.cols() != d) {
    throw std::invalid_argument("partial_trace_keep: dimension mismatch");
  }
  if (site < 1 || site > n_sites) {
    throw std::out_of_range("partial_trace_keep: site out of range");
  }
  // Row index factors as (left, s, right) with s the kept site's bit.
  const long right = 1L << (n_sites - site);
  const long left = d / (2 * right);
  Matrix out = Matrix::Zero(2, 2);
  for (long a = 0; a < 2; ++a) {
    for (long b = 0; b < 2; ++b) {
      Complex sum = 0;
      for (long l = 0; l < left; ++l) {
        for (long r = 0; r < right; ++r) {
          const long row = (l * 2 + a) * right + r;
          const long col = (l * 2 + b) * right + r;
          sum += rho(row, col);
        }
      }
      out(a, b) = sum;
    }
  }
  return out;
}

double max_abs(const Matrix& m) {
  if (m.size() == 0) return 0.0;
  return m.cwiseAbs().maxCoeff();
}

bool approx_equal(const Matrix& a, const Matrix& b, double tolerance) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) return false;
  return max_abs(a - b) <= tolerance;
}

bool is_hermitian(const Matrix& m, double tolerance) {
  if (m.rows() != m.cols()) return false;
  return max_abs(m - m.adjoint()) <= tolerance;
}

// ---- spectral toolbox ----

SpectralDecomposition herm_eig(const Matrix& m, double herm_tol) {
  if (m.rows() != m.cols()) {
    throw std::invalid_argument("herm_eig: matrix must be square");
  }
  const double scale = std::max(1.0, max_abs(m));
  if (max_abs(m - m.adjoint()) > herm_tol * scale) {
    throw std::invalid_argument("herm_eig: matrix is not Hermitian");
  }
  Eigen::SelfAdjointEigenSolver<Matrix> solver(0.5 * (m + m.adjoint()));
  if (solver.info() != Eigen::Success) {
    throw std::runtime_error("herm_eig: eigensolver failed");
  }
  SpectralDecomposition out{solver.eigenvalues(), solver.eigenvectors()};

  // Deterministic post-pass: re-orthonormalize near-degenerate groups in
  // index order, then fix each column's phase by its largest entry.
  const Eigen::Index n = out.eigenvalues.size();
  const double group_tol = 1e-12 * std::max(1.0, out.eigenvalues.cwiseAbs().maxCoeff());
  Eigen::Index start = 0;
  while (start < n) {
    Eigen::Index stop = start + 1;
    while (stop < n && out.eigenvalues(stop) - out.eigenvalues(stop - 1) <= group_tol) ++stop;
    for (Eigen::Index j = start; j < stop; ++j) {
      auto col = out.eigenvectors.col(j);
      for (Eigen::Index k = start; k < j; ++k) {
        col -= out.eigenvectors.col(k).dot(col) * out.eigenvectors.col(k);
      }
      col.normalize();
    }
    start = stop;
  }
  for (Eigen::Index j = 0; j < n; ++j) {
    Eigen::Index imax = 0;
    double amax = -1.0;
    for (Eigen::Index i = 0; i < n; ++i) {
      const double a = std::abs(out.eigenvectors(i, j));
      if (a > amax + 1e-14) {
        amax = a;
        imax = i;
      }
    }
    const Complex pivot = out.eigenvectors(imax, j);
    if (std::abs(pivot) > 0) {
      out.eigenvectors.col(j) *= std::conj(pivot) / std::abs(pivot);
    }
  }
  return out;
}

Matrix matrix_exp(const Matrix& m) {
  if (m.rows() != m.cols()) {
    throw std::invalid_argument("matrix_exp: matrix must be square");
  }
  const double scale = std::max(1.0, max_abs(m));
  if (max_abs(m - m.adjoint()) <= tol::hermiticity * scale) {
    auto eig = herm_eig(m);
    return eig.eigenvectors *
           eig.eigenvalues.array().exp().matrix().asDiagonal() *
           eig.eigenvectors.adjoint();
  }
  if (max_abs(m + m.adjoint()) <= tol::hermiticity * scale) {
    // m = -iH with H Hermitian, so exp(m) = U exp(-i diag) U*.
    auto eig = herm_eig(Matrix(Complex(0, 1) * m));
    ComplexVector phases(eig.eigenvalues.size());
    for (Eigen::Index i = 0; i < phases.size(); ++i) {
      phases(i) = std::exp(Complex(0, -eig.eigenvalues(i)));
    }
    return eig.eigenvectors * phases.asDiagonal() * eig.eigenvectors.adjoint();
  }
  return m.exp();
}

Matrix matrix_log_psd(const Matrix& m, SupportRule rule, double floor) {
  auto eig = herm_eig(m);
  const Eigen::Index n = eig.eigenvalues.size();
  RealVector logs = RealVector::Zero(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double v = eig.eigenvalues(i);
    if (v < -floor) {
      throw std::invalid_argument("matrix_log_psd: matrix has a negative eigenvalue");
    }
    if (v <= floor) {
      if (rule == SupportRule::error) {
        throw std::invalid_argument("matrix_log_psd: matrix is singular at the support floor");
      }
      logs(i) = 0.0;  // excluded from the support
    } else {
      logs(i) = std::log(v);
    }
  }
  return eig.eigenvectors * logs.asDiagonal() * eig.eigenvectors.adjoint();
}

// ---- inner products and norms ----

Complex gns_inner(const Matrix& rho, const Matrix& a, const Matrix& b) {
  return (rho * a.adjoint() * b).trace();
}

double trace_norm(const Matrix& m) {
  if (m.size() == 0) return 0.0;
  Eigen::BDCSVD<Matrix> svd(m);
  return svd.singularValues().sum();
}

double trace_distance(const Matrix& a, const Matrix& b) {
  return 0.5 * trace_norm(a - b);
}

}  // namespace spinbath
