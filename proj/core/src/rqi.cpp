#include "spinbath/rqi.hpp"

#include <cmath>
#include <set>

namespace spinbath {

InteractionSetup make_setup(const ChainParams& chain, const std::vector<BathSpec>& baths,
                            double h) {
  chain_dim(chain.n_sites);
  if (!(h > 0.0) || !std::isfinite(h)) {
    throw std::invalid_argument("make_setup: h must be finite and > 0");
  }
  if (baths.empty()) {
    throw std::invalid_argument("make_setup: at least one bath is required");
  }
  std::set<int> seen;
  for (const auto& b : baths) {
    if (b.site < 1 || b.site > chain.n_sites) {
      throw std::invalid_argument("make_setup: bath site out of range");
    }
    if (!seen.insert(b.site).second) {
      throw std::invalid_argument("make_setup: bath sites must be distinct");
    }
    if (!std::isfinite(b.beta) || !(b.beta > 0.0)) {
      throw std::invalid_argument("make_setup: bath beta must be finite and > 0");
    }
  }
  return InteractionSetup{chain, baths, h};
}

std::array<Matrix, 4> gns_basis(double beta) {
  if (!std::isfinite(beta) || !(beta > 0.0)) {
    throw std::invalid_argument("gns_basis: beta must be finite and > 0");
  }
  const double b0 = gibbs_weight_upper(beta);
  const double b1 = gibbs_weight_lower(beta);
  Matrix x3 = Matrix::Zero(2, 2);
  x3(0, 0) = b1;
  x3(1, 1) = -b0;
  x3 /= std::sqrt(b0 * b1);
  return {id2(), Matrix(sigma_minus() / std::sqrt(b0)), Matrix(sigma_plus() / std::sqrt(b1)),
          std::move(x3)};
}

Matrix interaction_hamiltonian(const InteractionSetup& setup) {
  const int n = setup.chain.n_sites;
  const int r = static_cast<int>(setup.baths.size());
  const long ds = chain_dim(n);
  const long db = 1L << r;
  const Matrix ids = Matrix::Identity(ds, ds);
  const Matrix idb = Matrix::Identity(db, db);

  Matrix h = kron(chain_hamiltonian(setup.chain), idb);
  for (int j = 1; j <= r; ++j) {
    h += kron(ids, embed_site(sigma_z(), j, r));
  }
  const double scale = 1.0 / std::sqrt(setup.h);
  for (int j = 1; j <= r; ++j) {
    const int site = setup.baths[static_cast<std::size_t>(j - 1)].site;
    h += scale * kron(embed_site(sigma_x(), site, n), embed_site(sigma_x(), j, r));
    h += scale * kron(embed_site(sigma_y(), site, n), embed_site(sigma_y(), j, r));
  }
  return h;
}

Matrix one_step_unitary(const InteractionSetup& setup) {
  const Matrix h = interaction_hamiltonian(setup);
  return matrix_exp(Matrix(Complex(0, -setup.h) * h));
}

RqiBlocks gns_blocks(const InteractionSetup& setup) {
  const int n = setup.chain.n_sites;
  const int r = static_cast<int>(setup.baths.size());
  const long ds = chain_dim(n);
  const long db = 1L << r;
  const Matrix u = one_step_unitary(setup);

  // Chain-space block of U between bath basis states a and b.
  std::vector<Matrix> chain_block(static_cast<std::size_t>(db * db));
  for (long a = 0; a < db; ++a) {
    for (long b = 0; b < db; ++b) {
      Matrix m(ds, ds);
      for (long s = 0; s < ds; ++s) {
        for (long t = 0; t < ds; ++t) {
          m(s, t) = u(s * db + a, t * db + b);
        }
      }
      chain_block[static_cast<std::size_t>(a * db + b)] = std::move(m);
    }
  }

  // Per-bath coefficient tables c[i][a][b] = <X_i, E_ab>_beta.
  std::vector<std::array<std::array<std::array<Complex, 2>, 2>, 4>> coeff(
      static_cast<std::size_t>(r));
  for (int j = 0; j < r; ++j) {
    const auto basis = gns_basis(setup.baths[static_cast<std::size_t>(j)].beta);
    const Matrix rho = gibbs_qubit(setup.baths[static_cast<std::size_t>(j)].beta);
    for (int i = 0; i < 4; ++i) {
      for (int a = 0; a < 2; ++a) {
        for (int b = 0; b < 2; ++b) {
          Matrix e = Matrix::Zero(2, 2);
          e(a, b) = 1.0;
          coeff[static_cast<std::size_t>(j)][static_cast<std::size_t>(i)]
               [static_cast<std::size_t>(a)][static_cast<std::size_t>(b)] =
                   gns_inner(rho, basis[static_cast<std::size_t>(i)], e);
        }
      }
    }
  }

  RqiBlocks out;
  out.n_sites = n;
  out.n_baths = r;
  out.h = setup.h;
  const long n_blocks = 1L << (2 * r);  // 4^r
  out.blocks.reserve(static_cast<std::size_t>(n_blocks));
  for (long idx = 0; idx < n_blocks; ++idx) {
    Matrix bi = Matrix::Zero(ds, ds);
    for (long a = 0; a < db; ++a) {
      for (long b = 0; b < db; ++b) {
        Complex c(1, 0);
        for (int j = 0; j < r; ++j) {
          const int ij = static_cast<int>((idx >> (2 * (r - 1- j))) & 3);
          const int aj = static_cast<int>((a >> (r - 1 - j)) & 1);
          const int bj = static_cast<int>((b >> (r - 1 - j)) & 1);
          c *= coeff[static_cast<std::size_t>(j)][static_cast<std::size_t>(ij)]
                    [static_cast<std::size_t>(aj)][static_cast<std::size_t>(bj)];
          if (c == Complex(0, 0)) break;
        }
        if (c == Complex(0, 0)) continue;
        bi += c * chain_block[static_cast<std::size_t>(a * db + b)];
      }
    }
    out.blocks.push_back(std::move(bi));
  }
  return out;
}

double isometry_residual(const RqiBlocks& blocks) {
  const long ds = chain_dim(blocks.n_sites);
  Matrix sum = Matrix::Zero(ds, ds);
  for (const auto& b : blocks.blocks) {
    sum += b.adjoint() * b;
  }
  return max_abs(sum - Matrix::Identity(ds, ds));
}

Matrix discrete_map(const RqiBlocks& blocks, const Matrix& x) {
  const long ds = chain_dim(blocks.n_sites);
  if (x.rows() != ds || x.cols() != ds) {
    throw std::invalid_argument("discrete_map: dimension mismatch");
  }
  Matrix out = Matrix::Zero(ds, ds);
  for (const auto& b : blocks.blocks) {
    out += b.adjoint() * x * b;
  }
  return out;
}

Matrix repeated_map(const RqiBlocks& blocks, const Matrix& x, long n_steps) {
  if (n_steps < 0) {
    throw std::invalid_argument("repeated_map: n_steps must be >= 0");
  }
  Matrix out = x;
  for (long i = 0; i < n_steps; ++i) {
    out = discrete_map(blocks, out);
  }
  return out;
}

std::vector<ProbePoint> convergence_probe(const LindbladModel& model, const Matrix& observable,
                                          const std::vector<double>& h_grid) {
  validate(model);
  if (h_grid.empty()) {
    throw std::invalid_argument("convergence_probe: empty h grid");
  }
  const Matrix lx = apply_generator(model, observable, Picture::heisenberg);
  std::vector<ProbePoint> out;
  out.reserve(h_grid.size());
  for (const double h : h_grid) {
    const auto setup = make_setup(model.chain, model.baths, h);
    const auto blocks = gns_blocks(setup);
    ProbePoint p;
    p.h = h;
    p.isometry_residual = isometry_residual(blocks);
    p.residual = max_abs((discrete_map(blocks, observable) - observable) / h - lx);
    out.push_back(p);
  }
  return out;
}

double probe_order(const std::vector<ProbePoint>& points) {
  if (points.size() < 2) {
    throw std::invalid_argument("probe_order: need at least two points");
  }
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const auto n = static_cast<double>(points.size());
  for (const auto& p : points) {
    const double x = std::log(p.h);
    const double y = std::log(p.residual);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

}  // namespace spinbath
