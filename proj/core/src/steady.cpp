#include "spinbath/steady.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

namespace spinbath {

namespace {

Matrix kron_chain(const std::vector<Matrix>& factors) {
  Matrix out = factors.front();
  for (std::size_t i = 1; i < factors.size(); ++i) out = kron(out, factors[i]);
  return out;
}

}  // namespace

StationaryReport stationary_state(const LindbladModel& model, const StationaryOptions& opts) {
  const Matrix l = superoperator(model, Picture::schrodinger).mat;
  Eigen::BDCSVD<Matrix> svd(l, Eigen::ComputeFullV);
  const auto& s = svd.singularValues();
  const double smax = s.size() > 0 ? s(0) : 0.0;
  const double thresh = opts.kernel_rel_tol * smax;

  StationaryReport report;
  report.gap = std::numeric_limits<double>::quiet_NaN();
  for (Eigen::Index i = 0; i < s.size(); ++i) {
    if (s(i) <= thresh) {
      report.kernel_basis.push_back(unvec(ComplexVector(svd.matrixV().col(i))));
      ++report.kernel_dimension;
    }
  }
  if (report.kernel_dimension == 1) {
    Matrix m = report.kernel_basis.front();
    m = 0.5 * (m + m.adjoint());
    const double tr = m.trace().real();
    if (std::abs(tr) < 1e-12) {
      throw contract_violation("stationary_state: kernel vector has vanishing trace");
    }
    m /= tr;
    report.state = std::move(m);
    report.residual = max_abs(apply_generator(model, report.state, Picture::schrodinger));
    report.min_eigenvalue = herm_eig(report.state).eigenvalues.minCoeff();
    report.faithful = report.min_eigenvalue > tol::psd_floor;
  } else {
    report.residual = std::numeric_limits<double>::quiet_NaN();
    report.min_eigenvalue = std::numeric_limits<double>::quiet_NaN();
    report.faithful = false;
  }
  if (opts.compute_gap) {
    report.gap = spectral_gap(model);
  }
  return report;
}

CommutantReport commutant_dimension(const std::vector<Matrix>& ops) {
  if (ops.empty()) {
    throw std::invalid_argument("commutant_dimension: empty operator list");
  }
  const Eigen::Index d = ops.front().rows();
  for (const auto& m : ops) {
    if (m.rows() != d || m.cols() != d) {
      throw std::invalid_argument("commutant_dimension: operators must share one square size");
    }
  }
  const Eigen::Index dd = d * d;
  const Matrix idd = Matrix::Identity(d, d);
  Matrix stack(static_cast<Eigen::Index>(ops.size()) * dd, dd);
  for (std::size_t i = 0; i < ops.size(); ++i) {
    // vec([A, M]) = (M^T kron I - I kron M) vec(A)
    stack.middleRows(static_cast<Eigen::Index>(i) * dd, dd) =
        kron(ops[i].transpose(), idd) - kron(idd, ops[i]);
  }

  CommutantReport report;
  Eigen::BDCSVD<Matrix> svd(stack, Eigen::ComputeFullV);
  const auto& s = svd.singularValues();
  const double smax = s.size() > 0 ? s(0) : 0.0;
  if (smax <= 1e-300) {
    // Every operator is scalar; the commutant is the whole matrix algebra.
    report.dimension = static_cast<int>(dd);
    for (Eigen::Index i = 0; i < dd; ++i) {
      ComplexVector e = ComplexVector::Zero(dd);
      e(i) = 1.0;
      report.witnesses.push_back(unvec(e));
    }
    return report;
  }
  const double thresh = tol::commutant_relative * smax;
  for (Eigen::Index i = 0; i < s.size(); ++i) {
    if (s(i) <= thresh) {
      report.witnesses.push_back(unvec(ComplexVector(svd.matrixV().col(i))));
      ++report.dimension;
    }
  }
  for (const auto& w : report.witnesses) {
    for (const auto& m : ops) {
      report.max_witness_residual =
          std::max(report.max_witness_residual, max_abs(commutator(w, m)));
    }
  }
  return report;
}

UniquenessCertificate uniqueness_certificate(const LindbladModel& model) {
  const auto jumps = jump_operators(model);
  std::vector<Matrix> family;
  family.push_back(chain_hamiltonian(model.chain));
  for (const auto& j : jumps) family.push_back(j.op);
  for (const auto& j : jumps) family.push_back(j.op.adjoint());

  UniquenessCertificate cert;
  cert.commutant_dimension = commutant_dimension(family).dimension;

  // Is each V* a linear combination of the V family?
  const Eigen::Index dd = family.front().size();
  Matrix a(dd, static_cast<Eigen::Index>(jumps.size()));
  for (std::size_t k = 0; k < jumps.size(); ++k) a.col(static_cast<Eigen::Index>(k)) = vec(jumps[k].op);
  auto qr = a.colPivHouseholderQr();
  cert.span_residual = 0.0;
  for (const auto& j : jumps) {
    const ComplexVector b = vec(Matrix(j.op.adjoint()));
    const ComplexVector x = qr.solve(b);
    const double res = (a * x - b).norm() / std::max(1.0, b.norm());
    cert.span_residual = std::max(cert.span_residual, res);
  }
  cert.family_self_adjoint = cert.span_residual <= tol::comparison;
  cert.unique = cert.commutant_dimension == 1 && cert.family_self_adjoint;
  return cert;
}

double spectral_gap(const LindbladModel& model) {
  const Matrix l = superoperator(model, Picture::schrodinger).mat;
  Eigen::ComplexEigenSolver<Matrix> solver(l, false);
  if (solver.info() != Eigen::Success) {
    throw std::runtime_error("spectral_gap: eigensolver failed");
  }
  double gap = std::numeric_limits<double>::infinity();
  for (Eigen::Index i = 0; i < solver.eigenvalues().size(); ++i) {
    const Complex ev = solver.eigenvalues()(i);
    if (std::abs(ev) > 1e-9) {
      gap = std::min(gap, -ev.real());
    }
  }
  if (!std::isfinite(gap)) {
    throw contract_violation("spectral_gap: no nonzero eigenvalues found");
  }
  // Undamped oscillatory modes (and eigensolver noise) can put the minimum at
  // a signed zero; a Lindblad spectrum never has a genuinely positive real
  // part, so clamp to zero.
  return std::max(gap, 0.0);
}

Matrix local_state(const Matrix& rho, int site, int n_sites) {
  return partial_trace_keep(rho, site, n_sites);
}

// ---- closed forms ----

namespace {

void check_closed_form_args(double beta, double beta_prime) {
  if (std::isnan(beta) || std::isnan(beta_prime)) {
    throw std::invalid_argument("closed_form_stationary: beta must not be NaN");
  }
}

}  // namespace

Matrix closed_form_stationary(double beta, double beta_prime, int n_sites) {
  check_closed_form_args(beta, beta_prime);
  const Matrix rb = gibbs_qubit(beta);
  const Matrix rbp = gibbs_qubit(beta_prime);
  const Matrix p = 0.5 * (rb + rbp);
  const Matrix m = 0.5 * (rb - rbp);
  const double b0 = gibbs_weight_upper(beta);
  const double b1 = gibbs_weight_lower(beta);
  const double b0p = gibbs_weight_upper(beta_prime);
  const double b1p = gibbs_weight_lower(beta_prime);
  const double del = b0 - b0p;
  const Matrix& sp = sigma_plus();
  const Matrix& sm = sigma_minus();
  const Matrix& np = n_plus();
  const Matrix& nm = n_minus();
  const Matrix& sz = sigma_z();
  const Matrix& i2 = id2();
  const Complex im(0, 1);
  auto k = [](const std::vector<Matrix>& f) { return kron_chain(f); };

  if (n_sites == 2) {
    Matrix out = k({p, p}) - (del * del / 8.0) * k({sz, sz});
    out += (del / 4.0) * (k({np, nm}) - k({nm, np}));
    out += im * (del / 4.0) * (k({sp, sm}) - k({sm, sp}));
    return out;
  }
  if (n_sites == 3) {
    Matrix out = k({p, p, p}) - 0.75 * k({m, p, m}) + 0.75 * (k({m, p, p}) - k({p, p, m}));
    out += (del / 8.0) * (k({rb, nm, np}) - k({rb, np, nm}) + k({nm, np, rbp}) - k({np, nm, rbp}));
    out += im * (del / 8.0) * (k({sp, sm, p}) - k({sm, sp, p}));
    out += im * (del / 8.0) * (k({p, sp, sm}) - k({p, sm, sp}));
    out += im * (del / 8.0) * (k({rb, sp, sm}) - k({rb, sm, sp}));
    out += im * (del / 8.0) * (k({sp, sm, rbp}) - k({sm, sp, rbp}));
    out -= (del * del / 16.0) * (k({sp, i2, sm}) + k({sm, i2, sp}));
    return out;
  }
  if (n_sites == 4) {
    const double d2 = del * del;
    const double d3 = d2 * del;
    Matrix out = k({p, p, p, p});
    out -= (7.0 / 8.0) * k({m, p, p, m});
    out += 0.5 * (k({m, p, p, p}) - k({p, p, p, m}));
    out -= (1.0 / 8.0) * k({rb, m, m, rbp});
    out -= (d2 / 32.0) * (k({nm, p, i2, np}) + k({np, i2, p, nm}));
    out -= (d2 / 16.0) * (k({p, np, np, nm}) + k({p, nm, nm, np}));
    out -= (d2 / 16.0) * (k({nm, np, np, p}) + k({np, nm, nm, p}));
    out += (d2 / 16.0) * (k({nm, p, np, nm}) + k({np, nm, p, np}));
    out += (d2 / 32.0) * (k({rb, nm, np, nm}) + k({np, np, nm, rb}));
    out += (d2 / 32.0) * (k({rbp, nm, np, np}) + k({nm, np, nm, rbp}));
    out += (d2 / 32.0) * (b0 + b0p) * k({np, np, nm, np});
    out += (d2 / 32.0) * (b1 + b1p) * k({nm, np, nm, nm});
    out += (3.0 * d2 / 32.0) * (k({np, nm, nm, np}) + k({nm, np, np, nm}));
    out -= (d2 / 16.0) * (k({np, np, nm, nm}) + k({nm, nm, np, np}));
    out += im * (del / 32.0) * (k({p, p, sp, sm}) - k({p, p, sm, sp}));
    out += im * (del / 32.0) * (k({sp, sm, p, p}) - k({sm, sp, p, p}));
    out += im * (del / 16.0) * (k({rb, rbp, sp, sm}) - k({rb, rbp, sm, sp}));
    out += im * (del / 16.0) * (k({sp, sm, rb, rbp}) - k({sm, sp, rb, rbp}));
    out += im * (del / 8.0) * (k({sp, sm, p, rbp}) - k({sm, sp, p, rbp}));
    out += im * (del / 8.0) * (k({rb, p, sp, sm}) - k({rb, p, sm, sp}));
    out += im * (3.0 * del / 32.0) * (k({p, sp, sm, p}) - k({p, sm, sp, p}));
    out -= im * (d2 / 32.0) * (k({np, nm, sp, sm}) - k({np, nm, sm, sp}));
    out += im * (d2 / 32.0) * (k({nm, np, sp, sm}) - k({nm, np, sm, sp}));
    out -= im * (d2 / 32.0) * (k({sp, sm, np, nm}) - k({sm, sp, np, nm}));
    out -= im * (d2 / 32.0) * (k({sp, sm, nm, np}) - k({sm, sp, nm, np}));
    out += im * (d2 / 32.0) * (k({np, sp, sm, nm}) - k({np, sm, sp, nm}));
    out += im * (d2 / 32.0) * (k({nm, sp, sm, np}) - k({nm, sm, sp, np}));
    const double q = (b0 + b0p) * (b0 + b0p) / 64.0;
    out += (q - b0 * b0 / 16.0) * del * (k({sz, sp, i2, sm}) + k({sz, sm, i2, sp}));
    out -= (q - b0p * b0p / 16.0) * del * (k({sp, i2, sm, sz}) + k({sm, i2, sp, sz}));
    out -= (d2 / 16.0) * (k({nm, sp, i2, sm}) + k({nm, sm, i2, sp}));
    out -= (d2 / 16.0) * (k({sp, i2, sm, nm}) + k({sm, i2, sp, nm}));
    out += (d3 / 64.0) * (k({i2, sp, sm, i2}) + k({i2, sm, sp, i2}));
    out += (d2 / 16.0) * (k({sp, sm, sp, sm}) + k({sm, sp, sm, sp}));
    out -= (d2 / 16.0) * (k({sp, sm, sm, sp}) + k({sm, sp, sp, sm}));
    return out;
  }
  throw std::invalid_argument("closed_form_stationary: n_sites must be 2, 3 or 4");
}

Matrix conjectured_local_state(double beta, double beta_prime, int site, int n_sites) {
  check_closed_form_args(beta, beta_prime);
  if (n_sites < 2) {
    throw std::invalid_argument("conjectured_local_state: n_sites must be >= 2");
  }
  if (site < 1 || site > n_sites) {
    throw std::out_of_range("conjectured_local_state: site out of range");
  }
  const Matrix rb = gibbs_qubit(beta);
  const Matrix rbp = gibbs_qubit(beta_prime);
  if (site == 1) return 0.25 * (3.0 * rb + rbp);
  if (site == n_sites) return 0.25 * (rb + 3.0 * rbp);
  return 0.5 * (rb + rbp);
}

ClosedFormComparison compare_closed_form(const LindbladModel& model, double tolerance) {
  const int n = model.chain.n_sites;
  if (n < 2 || n > 4) {
    throw std::invalid_argument("compare_closed_form: n_sites must be 2, 3 or 4");
  }
  if (model.chain.b_field != 1.0 || model.chain.jx != 1.0 || model.chain.jy != 1.0) {
    throw std::invalid_argument("compare_closed_form: requires unit field and couplings");
  }
  if (model.baths.size() != 2) {
    throw std::invalid_argument("compare_closed_form: requires exactly two baths");
  }
  double beta = 0.0, beta_prime = 0.0;
  bool have_left = false, have_right = false;
  for (const auto& b : model.baths) {
    if (b.site == 1) { beta = b.beta; have_left = true; }
    if (b.site == n) { beta_prime = b.beta; have_right = true; }
  }
  if (!have_left || !have_right) {
    throw std::invalid_argument("compare_closed_form: baths must sit at sites 1 and n");
  }

  const auto report = stationary_state(model);
  if (report.kernel_dimension != 1) {
    throw contract_violation("compare_closed_form: kernel is not one-dimensional");
  }
  const Matrix cf = closed_form_stationary(beta, beta_prime, n);

  ClosedFormComparison cmp;
  cmp.n_sites = n;
  cmp.closed_form_residual = max_abs(apply_generator(model, cf, Picture::schrodinger));
  const Matrix diff = cf - report.state;
  cmp.max_abs_diff = max_abs(diff);
  cmp.agrees = cmp.max_abs_diff <= tolerance;
  if (!cmp.agrees) {
    for (Eigen::Index i = 0; i < diff.rows(); ++i) {
      for (Eigen::Index j = 0; j < diff.cols(); ++j) {
        if (std::abs(diff(i, j)) > tolerance) {
          cmp.mismatches.push_back(EntryMismatch{static_cast<int>(i), static_cast<int>(j),
                                                 cf(i, j), report.state(i, j),
                                                 std::abs(diff(i, j))});
        }
      }
    }
    std::sort(cmp.mismatches.begin(), cmp.mismatches.end(),
              [](const EntryMismatch& a, const EntryMismatch& b) { return a.abs_diff > b.abs_diff; });
    if (cmp.mismatches.size() > 64) cmp.mismatches.resize(64);
  }
  return cmp;
}

}  // namespace spinbath
