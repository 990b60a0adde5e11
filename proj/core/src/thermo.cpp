#include "spinbath/thermo.hpp"

#include <cmath>
#include <limits>

#include "spinbath/sampling.hpp"

namespace spinbath {

double relative_entropy(const Matrix& rho, const Matrix& sigma, double floor) {
  if (rho.rows() != sigma.rows() || rho.cols() != sigma.cols()) {
    throw std::invalid_argument("relative_entropy: dimension mismatch");
  }
  const auto er = herm_eig(rho);
  const auto es = herm_eig(sigma);
  const Eigen::Index n = er.eigenvalues.size();
  for (Eigen::Index i = 0; i < n; ++i) {
    if (er.eigenvalues(i) < -floor || es.eigenvalues(i) < -floor) {
      throw std::invalid_argument("relative_entropy: states must be positive semidefinite");
    }
  }
  // Overlap of each rho eigenvector with the kernel of sigma.
  const Matrix overlaps = es.eigenvectors.adjoint() * er.eigenvectors;  // (k, j)
  double value = 0.0;
  for (Eigen::Index j = 0; j < n; ++j) {
    const double rj = er.eigenvalues(j);
    if (rj <= floor) continue;
    double cross = 0.0;
    for (Eigen::Index k = 0; k < n; ++k) {
      const double w = std::norm(overlaps(k, j));
      const double sk = es.eigenvalues(k);
      if (sk <= floor) {
        if (w > 1e-12) return -std::numeric_limits<double>::infinity();
        continue;
      }
      cross += w * std::log(sk);
    }
    value += rj * (cross - std::log(rj));
  }
  return value;
}

Matrix reference_state(const LindbladModel& model) {
  validate(model);
  if (!equal_bath_betas(model)) {
    throw std::invalid_argument("reference_state: baths must share one temperature");
  }
  const double beta = model.baths.front().beta;
  if (std::isinf(beta)) {
    throw std::invalid_argument("reference_state: beta must be finite");
  }
  return product_gibbs(beta, model.chain.n_sites);
}

namespace {

constexpr double kRateFloor = 1e-10;

// Splits Tr(A log_ref) - sum_j <psi_j, A psi_j> log r_j over the eigenbasis
// of rho; flags +infinity when a zero mode of rho carries a positive rate.
struct SigmaAccumulator {
  const SpectralDecomposition& eig;
  const Matrix& log_ref;
  double floor;
  std::vector<SupportWarning>* warnings;
  bool* infinite;

  double operator()(const Matrix& a) const {
    double value = (a * log_ref).trace().real();
    const Eigen::Index n = eig.eigenvalues.size();
    for (Eigen::Index j = 0; j < n; ++j) {
      const double rate = (eig.eigenvectors.col(j).adjoint() * a * eig.eigenvectors.col(j))(0).real();
      const double rj = eig.eigenvalues(j);
      if (rj <= floor) {
        if (std::abs(rate) > kRateFloor) {
          warnings->push_back(SupportWarning{static_cast<int>(j), rate});
          *infinite = true;
        }
        continue;
      }
      value -= rate * std::log(rj);
    }
    return value;
  }
};

}  // namespace

EntropyReport entropy_production_def(const LindbladModel& model, const Matrix& rho,
                                     const Matrix& rho_ref) {
  validate(model);
  const long d = chain_dim(model.chain.n_sites);
  if (rho.rows() != d || rho.cols() != d || rho_ref.rows() != d || rho_ref.cols() != d) {
    throw std::invalid_argument("entropy_production_def: dimension mismatch");
  }
  const Matrix log_ref = matrix_log_psd(rho_ref, SupportRule::error);
  const auto eig = herm_eig(rho);
  if (eig.eigenvalues.minCoeff() < -tol::psd_floor) {
    throw std::invalid_argument("entropy_production_def: rho must be positive semidefinite");
  }

  EntropyReport report;
  report.method = "definition";
  SigmaAccumulator sigma{eig, log_ref, tol::psd_floor, &report.support_warnings,
                         &report.infinite};

  report.hamiltonian_term = sigma(apply_hamiltonian_part(model, rho, Picture::schrodinger));
  double total = report.hamiltonian_term;
  for (std::size_t i = 0; i < model.baths.size(); ++i) {
    const double s =
        sigma(apply_dissipator(model, static_cast<int>(i), rho, Picture::schrodinger));
    report.per_bath.push_back(s);
    total += s;
  }
  report.sigma_total =
      report.infinite ? std::numeric_limits<double>::infinity() : total;
  return report;
}

EntropyReport entropy_production_closed(const LindbladModel& model, const Matrix& rho) {
  validate(model);
  if (!equal_bath_betas(model)) {
    throw std::invalid_argument("entropy_production_closed: baths must share one temperature");
  }
  const double beta = model.baths.front().beta;
  if (std::isinf(beta)) {
    throw std::invalid_argument("entropy_production_closed: beta must be finite");
  }
  const long d = chain_dim(model.chain.n_sites);
  if (rho.rows() != d || rho.cols() != d) {
    throw std::invalid_argument("entropy_production_closed: dimension mismatch");
  }
  const auto eig = herm_eig(rho);
  if (eig.eigenvalues.minCoeff() <= tol::psd_floor) {
    throw std::invalid_argument("entropy_production_closed: rho must be faithful");
  }

  EntropyReport report;
  report.method = "closed-form";
  const double b0 = gibbs_weight_upper(beta);
  const double e2b = std::exp(2.0 * beta);
  const Eigen::Index n = eig.eigenvalues.size();
  RealVector logs(n);
  for (Eigen::Index i = 0; i < n; ++i) logs(i) = std::log(eig.eigenvalues(i));

  double total = 0.0;
  for (const auto& b : model.baths) {
    const Matrix t = eig.eigenvectors.adjoint() *
                     embed_site(sigma_plus(), b.site, model.chain.n_sites) * eig.eigenvectors;
    double s = 0.0;
    for (Eigen::Index k = 0; k < n; ++k) {
      for (Eigen::Index j = 0; j < n; ++j) {
        const double w = std::abs(t(k, j));
        const double rk = eig.eigenvalues(k);
        const double rj = eig.eigenvalues(j);
        if (w < 1e-14 && std::abs(rk - rj) < 1e-14) continue;
        s += w * w * (e2b * rk - rj) * (logs(k) - logs(j) + 2.0 * beta);
      }
    }
    report.per_bath.push_back(4.0 * b0 * s);
    total += 4.0 * b0 * s;
  }
  report.sigma_total = total;
  report.hamiltonian_term = 0.0;
  return report;
}

DetailedBalanceReport detailed_balance_certificate(const LindbladModel& model, const Matrix& rho,
                                                   std::uint64_t seed) {
  validate(model);
  const int n = model.chain.n_sites;
  const long d = chain_dim(n);
  if (rho.rows() != d || rho.cols() != d) {
    throw std::invalid_argument("detailed_balance_certificate: dimension mismatch");
  }
  const auto eig = herm_eig(rho);
  if (eig.eigenvalues.minCoeff() <= tol::psd_floor) {
    throw std::invalid_argument("detailed_balance_certificate: rho must be faithful");
  }

  DetailedBalanceReport report;
  report.commutation_residual = max_abs(commutator(chain_hamiltonian(model.chain), rho));

  auto dissipator_total = [&model](const Matrix& x) {
    Matrix out = Matrix::Zero(x.rows(), x.cols());
    for (std::size_t i = 0; i < model.baths.size(); ++i) {
      out += apply_dissipator(model, static_cast<int>(i), x, Picture::heisenberg);
    }
    return out;
  };

  const long dd = d * d;
  auto unit = [d](long idx) {
    Matrix e = Matrix::Zero(d, d);
    e(idx / d, idx % d) = 1.0;
    return e;
  };

  // Pair list: exhaustive when small, deterministic subsample otherwise.
  std::vector<std::pair<long, long>> pairs;
  if (dd * dd <= 4096) {
    report.exhaustive = true;
    for (long a = 0; a < dd; ++a) {
      for (long b = 0; b < dd; ++b) pairs.emplace_back(a, b);
    }
  } else {
    SplitMix64 rng(seed);
    pairs.reserve(4096);
    for (int i = 0; i < 4096; ++i) {
      pairs.emplace_back(static_cast<long>(rng.next() % static_cast<std::uint64_t>(dd)),
                         static_cast<long>(rng.next() % static_cast<std::uint64_t>(dd)));
    }
  }

  // Cache D(E) for every basis element that appears.
  std::vector<Matrix> dcache(static_cast<std::size_t>(dd));
  std::vector<bool> have(static_cast<std::size_t>(dd), false);
  auto dof = [&](long idx) -> const Matrix& {
    if (!have[static_cast<std::size_t>(idx)]) {
      dcache[static_cast<std::size_t>(idx)] = dissipator_total(unit(idx));
      have[static_cast<std::size_t>(idx)] = true;
    }
    return dcache[static_cast<std::size_t>(idx)];
  };

  for (const auto& [ia, ib] : pairs) {
    const Matrix a = unit(ia);
    const Matrix b = unit(ib);
    const Complex lhs = gns_inner(rho, dof(ia), b);
    const Complex rhs = gns_inner(rho, a, dof(ib));
    report.symmetry_residual = std::max(report.symmetry_residual, std::abs(lhs - rhs));
  }
  report.pairs_checked = static_cast<long>(pairs.size());
  report.satisfied = report.commutation_residual <= tol::comparison &&
                     report.symmetry_residual <= tol::comparison;
  return report;
}

}  // namespace spinbath
