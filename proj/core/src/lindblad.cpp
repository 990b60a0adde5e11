#include "spinbath/lindblad.hpp"

#include <array>
#include <cmath>
#include <functional>

namespace spinbath {

std::vector<JumpOperator> jump_operators(const LindbladModel& model) {
  validate(model);
  const int n = model.chain.n_sites;
  std::vector<JumpOperator> out;
  out.reserve(2 * model.baths.size());
  for (const auto& b : model.baths) {
    JumpOperator up;
    up.label = "up@" + std::to_string(b.site);
    up.site = b.site;
    up.coefficient = 2.0 * std::sqrt(b.beta0);
    up.raising = true;
    up.op = up.coefficient * embed_site(sigma_plus(), b.site, n);
    out.push_back(std::move(up));

    JumpOperator down;
    down.label = "down@" + std::to_string(b.site);
    down.site = b.site;
    down.coefficient = 2.0 * std::sqrt(b.beta1);
    down.raising = false;
    down.op = down.coefficient * embed_site(sigma_minus(), b.site, n);
    out.push_back(std::move(down));
  }
  return out;
}

Matrix apply_hamiltonian_part(const LindbladModel& model, const Matrix& x, Picture picture) {
  const Matrix h = chain_hamiltonian(model.chain);
  const Complex sign = picture == Picture::heisenberg ? Complex(0, 1) : Complex(0, -1);
  return sign * commutator(h, x);
}

namespace {

Matrix dissipator_at_site(const BathSpec& b, int n, const Matrix& x, Picture picture) {
  const Matrix sp = embed_site(sigma_plus(), b.site, n);
  const Matrix sm = embed_site(sigma_minus(), b.site, n);
  const Matrix proj_up = embed_site(n_plus(), b.site, n);
  const Matrix proj_dn = embed_site(n_minus(), b.site, n);
  // V_up = 2 sqrt(beta0) sigma_+, V_down = 2 sqrt(beta1) sigma_-;
  // V_up* V_up = 4 beta0 n_-, V_down* V_down = 4 beta1 n_+.
  Matrix out;
  if (picture == Picture::heisenberg) {
    out = 4.0 * b.beta0 * (sm * x * sp) + 4.0 * b.beta1 * (sp * x * sm);
  } else {
    out = 4.0 * b.beta0 * (sp * x * sm) + 4.0 * b.beta1 * (sm * x * sp);
  }
  out -= 2.0 * b.beta0 * anticommutator(proj_dn, x);
  out -= 2.0 * b.beta1 * anticommutator(proj_up, x);
  return out;
}

}  // namespace

Matrix apply_dissipator(const LindbladModel& model, int bath_index, const Matrix& x,
                        Picture picture) {
  if (bath_index < 0 || bath_index >= static_cast<int>(model.baths.size())) {
    throw std::out_of_range("apply_dissipator: bath_index out of range");
  }
  const long d = chain_dim(model.chain.n_sites);
  if (x.rows() != d || x.cols() != d) {
    throw std::invalid_argument("apply_dissipator: dimension mismatch");
  }
  return dissipator_at_site(model.baths[bath_index], model.chain.n_sites, x, picture);
}

Matrix apply_generator(const LindbladModel& model, const Matrix& x, Picture picture) {
  validate(model);
  const long d = chain_dim(model.chain.n_sites);
  if (x.rows() != d || x.cols() != d) {
    throw std::invalid_argument("apply_generator: dimension mismatch");
  }
  Matrix out = apply_hamiltonian_part(model, x, picture);
  for (std::size_t i = 0; i < model.baths.size(); ++i) {
    out += dissipator_at_site(model.baths[i], model.chain.n_sites, x, picture);
  }
  return out;
}

ComplexVector vec(const Matrix& m) {
  return Eigen::Map<const ComplexVector>(m.data(), m.size());
}

Matrix unvec(const ComplexVector& v) {
  const auto n = static_cast<Eigen::Index>(std::llround(std::sqrt(static_cast<double>(v.size()))));
  if (n * n != v.size()) {
    throw std::invalid_argument("unvec: length is not a perfect square");
  }
  return Eigen::Map<const Matrix>(v.data(), n, n);
}

SuperOperator superoperator(const LindbladModel& model, Picture picture) {
  validate(model);
  const int n = model.chain.n_sites;
  if (n > 7) {
    throw std::invalid_argument("superoperator: dense form limited to n_sites <= 7");
  }
  const long d = chain_dim(n);
  const Matrix idd = Matrix::Identity(d, d);
  const Matrix h = chain_hamiltonian(model.chain);
  const Complex sign = picture == Picture::heisenberg ? Complex(0, 1) : Complex(0, -1);
  Matrix out = sign * (kron(idd, h) - kron(h.transpose(), idd));
  for (const auto& j : jump_operators(model)) {
    const Matrix vv = j.op.adjoint() * j.op;
    if (picture == Picture::heisenberg) {
      out += kron(j.op.transpose(), j.op.adjoint());
    } else {
      out += kron(j.op.conjugate(), j.op);
    }
    out -= 0.5 * (kron(idd, vv) + kron(vv.transpose(), idd));
  }
  return SuperOperator{n, picture, std::move(out)};
}

// ---- time evolution ----

Matrix propagator(const LindbladModel& model, double t) {
  if (!(t >= 0) || !std::isfinite(t)) {
    throw std::invalid_argument("propagator: time must be finite and >= 0");
  }
  if (model.chain.n_sites > 5) {
    throw std::invalid_argument("propagator: dense exponential limited to n_sites <= 5");
  }
  const Matrix l = superoperator(model, Picture::schrodinger).mat;
  return matrix_exp(Matrix(t * l));
}

namespace {

void check_density(const Matrix& rho, double tolerance) {
  const double tolr = std::max(tolerance, 1e-12);
  if (std::abs(rho.trace() - Complex(1, 0)) > tolr) {
    throw std::invalid_argument("evolve: input state must have unit trace");
  }
  auto eig = herm_eig(rho);  // throws if not Hermitian
  if (eig.eigenvalues.minCoeff() < -tolr) {
    throw std::invalid_argument("evolve: input state has a negative eigenvalue");
  }
}

// Dormand-Prince 5(4) on d rho/dt = f(rho) with dense output disabled.
Matrix integrate_rk45(const std::function<Matrix(const Matrix&)>& f, Matrix y, double t_end,
                      double tolerance) {
  if (t_end == 0.0) return y;
  constexpr double a21 = 1.0 / 5;
  constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
  constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
  constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                   a54 = -212.0 / 729;
  constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                   a64 = 49.0 / 176, a65 = -5103.0 / 18656;
  constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784,
                   b6 = 11.0 / 84;
  constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                   e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;

  double t = 0.0;
  double h = std::min(t_end, 1e-3);
  Matrix k1 = f(y);
  long steps = 0;
  while (t < t_end) {
    if (++steps > 2000000) {
      throw std::runtime_error("evolve: step limit exceeded");
    }
    h = std::min(h, t_end - t);
    if (h < 1e-15 * std::max(1.0, t_end)) {
      throw std::runtime_error("evolve: step size underflow");
    }
    const Matrix k2 = f(Matrix(y + h * (a21 * k1)));
    const Matrix k3 = f(Matrix(y + h * (a31 * k1 + a32 * k2)));
    const Matrix k4 = f(Matrix(y + h * (a41 * k1 + a42 * k2 + a43 * k3)));
    const Matrix k5 = f(Matrix(y + h * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4)));
    const Matrix k6 = f(Matrix(y + h * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5)));
    const Matrix ynew = y + h * (b1 * k1 + b3 * k3 + b4 * k4 + b5 * k5 + b6 * k6);
    const Matrix k7 = f(ynew);
    const Matrix err = h * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);
    const double scale = tolerance * std::max(1.0, std::max(max_abs(y), max_abs(ynew)));
    const double ratio = max_abs(err) / scale;
    if (ratio <= 1.0) {
      t += h;
      y = ynew;
      k1 = k7;
    }
    const double grow = ratio > 0 ? 0.9 * std::pow(ratio, -0.2) : 5.0;
    h *= std::min(5.0, std::max(0.2, grow));
  }
  return y;
}

}  // namespace

EvolveResult evolve(const LindbladModel& model, const Matrix& rho0, double t,
                    const EvolveOptions& opts) {
  validate(model);
  const long d = chain_dim(model.chain.n_sites);
  if (rho0.rows() != d || rho0.cols() != d) {
    throw std::invalid_argument("evolve: dimension mismatch");
  }
  if (!(t >= 0) || !std::isfinite(t)) {
    throw std::invalid_argument("evolve: time must be finite and >= 0");
  }
  check_density(rho0, opts.tol);
  if (t == 0.0) {
    return EvolveResult{rho0, std::abs(rho0.trace() - Complex(1, 0))};
  }
  Matrix state;
  if (opts.method == EvolveMethod::expm) {
    state = unvec(ComplexVector(propagator(model, t) * vec(rho0)));
  } else {
    auto f = [&model](const Matrix& x) {
      return apply_generator(model, x, Picture::schrodinger);
    };
    state = integrate_rk45(f, rho0, t, std::max(opts.tol, 1e-13));
  }
  return EvolveResult{state, std::abs(state.trace() - Complex(1, 0))};
}

EvolveResult apply_propagator(const Matrix& prop, const Matrix& rho0) {
  if (prop.cols() != rho0.size()) {
    throw std::invalid_argument("apply_propagator: dimension mismatch");
  }
  Matrix state = unvec(ComplexVector(prop * vec(rho0)));
  return EvolveResult{state, std::abs(state.trace() - Complex(1, 0))};
}

}  // namespace spinbath
