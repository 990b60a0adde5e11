#include <doctest.h>

#include <cmath>
#include <limits>

#include "helpers.hpp"
#include "spinbath/lindblad.hpp"
#include "spinbath/sampling.hpp"

using namespace spinbath;
using testing::all_sites;
using testing::standard_model;
using testing::two_ended;

namespace {
const double kBetaQuarter = 0.5 * std::log(3.0);  // beta0 = 1/4, beta1 = 3/4
}

TEST_CASE("jump family: coefficients, labels, ordering") {
  const LindbladModel m = standard_model(3, {{1, 0.5}, {3, 0.5}});
  const auto jumps = jump_operators(m);
  REQUIRE(jumps.size() == 4);

  CHECK(jumps[0].label == "up@1");
  CHECK(jumps[1].label == "down@1");
  CHECK(jumps[2].label == "up@3");
  CHECK(jumps[3].label == "down@3");
  CHECK(jumps[0].raising);
  CHECK_FALSE(jumps[1].raising);
  CHECK(jumps[2].site == 3);

  // 2 sqrt(beta0), 2 sqrt(beta1) at beta = 1/2.
  CHECK(jumps[0].coefficient == doctest::Approx(1.0371912482661914).epsilon(1e-14));
  CHECK(jumps[1].coefficient == doctest::Approx(1.7100392728004874).epsilon(1e-14));

  CHECK(approx_equal(jumps[0].op, Matrix(jumps[0].coefficient * embed_site(sigma_plus(), 1, 3)),
                     1e-15));
  CHECK(approx_equal(jumps[3].op, Matrix(jumps[3].coefficient * embed_site(sigma_minus(), 3, 3)),
                     1e-15));

  // V*V identities: 4 beta0 n_-,  4 beta1 n_+.
  const double b0 = gibbs_weight_upper(0.5), b1 = gibbs_weight_lower(0.5);
  CHECK(approx_equal(Matrix(jumps[0].op.adjoint() * jumps[0].op),
                     Matrix(4.0 * b0 * embed_site(n_minus(), 1, 3)), 1e-14));
  CHECK(approx_equal(Matrix(jumps[1].op.adjoint() * jumps[1].op),
                     Matrix(4.0 * b1 * embed_site(n_plus(), 1, 3)), 1e-14));

  // Infinite temperature: both rates sqrt(2) * 2 * sqrt(1/2) = sqrt(2).
  const auto hot = jump_operators(standard_model(1, {{1, 0.0}}));
  CHECK(hot[0].coefficient == doctest::Approx(std::sqrt(2.0)).epsilon(1e-15));
  CHECK(hot[1].coefficient == doctest::Approx(std::sqrt(2.0)).epsilon(1e-15));
}

TEST_CASE("single-site generator on number operators") {
  const LindbladModel m = standard_model(1, {{1, kBetaQuarter}});

  // L(n_+) = 4 beta0 n_- - 4 beta1 n_+ = n_- - 3 n_+ at beta0 = 1/4.
  const Matrix ln = apply_generator(m, n_plus(), Picture::heisenberg);
  CHECK(approx_equal(ln, Matrix(n_minus() - 3.0 * n_plus()), 1e-13));

  // L(sigma_z) = 4 (beta0 - beta1) I - 4 sigma_z = -2 I - 4 sigma_z.
  const Matrix lz = apply_generator(m, sigma_z(), Picture::heisenberg);
  CHECK(approx_equal(lz, Matrix(-2.0 * id2() - 4.0 * sigma_z()), 1e-13));

  // Unitality and trace preservation.
  CHECK(max_abs(apply_generator(m, id2(), Picture::heisenberg)) < 1e-14);
  SplitMix64 rng(3);
  const Matrix x = random_ginibre(2, rng);
  CHECK(std::abs(apply_generator(m, x, Picture::schrodinger).trace()) < 1e-13);
}

TEST_CASE("generator matches direct jump-family assembly") {
  SplitMix64 rng(5);
  const std::vector<LindbladModel> models = {
      standard_model(1, {{1, 0.7}}),
      two_ended(2, 0.5, 1.0),
      two_ended(3, 0.3, 2.0),
      all_sites(3, 0.8),
      standard_model(4, {{2, 1.5}}),
  };
  for (const auto& m : models) {
    const int d = chain_dim(m.chain.n_sites);
    for (const Picture pic : {Picture::heisenberg, Picture::schrodinger}) {
      const Matrix x = random_ginibre(d, rng);
      const Matrix got = apply_generator(m, x, pic);
      const Matrix want = testing::vform_generator(m, x, pic);
      CHECK(max_abs(got - want) < 1e-12 * std::max(1.0, max_abs(want)));
    }
  }
}

TEST_CASE("generator preserves Hermiticity and trace") {
  SplitMix64 rng(9);
  const LindbladModel m = two_ended(3, 0.5, 1.2);
  for (int it = 0; it < 5; ++it) {
    const Matrix x = random_hermitian(8, rng);
    const Matrix lh = apply_generator(m, x, Picture::heisenberg);
    const Matrix ls = apply_generator(m, x, Picture::schrodinger);
    CHECK(is_hermitian(lh, 1e-11));
    CHECK(is_hermitian(ls, 1e-11));
    CHECK(std::abs(ls.trace()) < 1e-12);
  }
  CHECK(max_abs(apply_generator(m, identity(3), Picture::heisenberg)) < 1e-13);
}

TEST_CASE("Heisenberg and Schrodinger generators are trace duals") {
  SplitMix64 rng(13);
  const LindbladModel m = two_ended(2, 0.4, 1.1);
  for (int it = 0; it < 5; ++it) {
    const Matrix x = random_ginibre(4, rng);
    const Matrix rho = random_ginibre(4, rng);
    const Complex lhs = (apply_generator(m, x, Picture::heisenberg) * rho).trace();
    const Complex rhs = (x * apply_generator(m, rho, Picture::schrodinger)).trace();
    CHECK(std::abs(lhs - rhs) < 1e-11 * std::max(1.0, std::abs(lhs)));
  }
}

TEST_CASE("vec and unvec use column stacking") {
  SplitMix64 rng(17);
  const Matrix a = random_ginibre(3, rng);
  const Matrix b = random_ginibre(3, rng);
  const Matrix x = random_ginibre(3, rng);

  // vec reads columns first.
  Matrix probe = Matrix::Zero(2, 2);
  probe(0, 0) = 1;
  probe(1, 0) = 2;
  probe(0, 1) = 3;
  probe(1, 1) = 4;
  const ComplexVector v = vec(probe);
  CHECK(v(0) == Complex(1, 0));
  CHECK(v(1) == Complex(2, 0));
  CHECK(v(2) == Complex(3, 0));
  CHECK(v(3) == Complex(4, 0));
  CHECK(approx_equal(unvec(v), probe, 0.0));

  // vec(A X B) = (B^T kron A) vec(X)
  const ComplexVector lhs = vec(Matrix(a * x * b));
  const ComplexVector rhs = kron(b.transpose(), a) * vec(x);
  CHECK((lhs - rhs).cwiseAbs().maxCoeff() < 1e-13);

  CHECK_THROWS_AS(unvec(ComplexVector::Zero(3)), std::invalid_argument);
}

TEST_CASE("dense superoperator agrees with direct application") {
  SplitMix64 rng(19);
  for (const Picture pic : {Picture::heisenberg, Picture::schrodinger}) {
    const LindbladModel m = two_ended(2, 0.5, 1.0);
    const SuperOperator sup = superoperator(m, pic);
    CHECK(sup.mat.rows() == 16);
    CHECK(sup.n_sites == 2);
    for (int it = 0; it < 4; ++it) {
      const Matrix x = random_ginibre(4, rng);
      const Matrix via_mat = unvec(ComplexVector(sup.mat * vec(x)));
      const Matrix direct = apply_generator(m, x, pic);
      CHECK(max_abs(via_mat - direct) < 1e-12 * std::max(1.0, max_abs(direct)));
    }
  }

  // The two pictures are adjoint on the vectorized space.
  const LindbladModel m3 = all_sites(2, 0.9);
  const Matrix heis = superoperator(m3, Picture::heisenberg).mat;
  const Matrix schro = superoperator(m3, Picture::schrodinger).mat;
  CHECK(max_abs(Matrix(heis - schro.adjoint())) < 1e-12);

  LindbladModel big = standard_model(8, {{1, 1.0}});
  CHECK_THROWS_AS(superoperator(big, Picture::schrodinger), std::invalid_argument);
}

TEST_CASE("single qubit relaxes at rate 4 toward its Gibbs state") {
  const LindbladModel m = standard_model(1, {{1, kBetaQuarter}});
  const Matrix rho0 = 0.5 * id2();

  // p(t) = 1/4 + (1/4) e^{-4t} for the upper-level population.
  const double expect = 0.25 + 0.25 * std::exp(-1.0);

  EvolveOptions expm_opts;
  expm_opts.method = EvolveMethod::expm;
  const auto via_expm = evolve(m, rho0, 0.25, expm_opts);
  CHECK(std::abs(via_expm.state(0, 0).real() - expect) < 1e-12);
  CHECK(via_expm.trace_drift < 1e-12);

  EvolveOptions rk_opts;
  rk_opts.method = EvolveMethod::adaptive_rk;
  rk_opts.tol = 1e-10;
  const auto via_rk = evolve(m, rho0, 0.25, rk_opts);
  CHECK(std::abs(via_rk.state(0, 0).real() - expect) < 1e-8);
  CHECK(max_abs(via_rk.state - via_expm.state) < 1e-8);

  // t = 0 returns the input unchanged.
  const auto frozen = evolve(m, rho0, 0.0);
  CHECK(max_abs(frozen.state - rho0) == 0.0);
}

TEST_CASE("integrators agree on a two-site chain") {
  SplitMix64 rng(21);
  const LindbladModel m = two_ended(2, 0.5, 1.0);
  const Matrix rho0 = random_density(4, rng);

  EvolveOptions rk_opts;
  rk_opts.method = EvolveMethod::adaptive_rk;
  rk_opts.tol = 1e-11;
  const auto a = evolve(m, rho0, 1.5, rk_opts);
  const auto b = evolve(m, rho0, 1.5);  // expm default
  CHECK(trace_distance(a.state, b.state) < 1e-8);
  CHECK(a.trace_drift < 1e-9);
  CHECK(b.trace_drift < 1e-12);
  CHECK(is_hermitian(a.state, 1e-9));

  // Positivity along the flow.
  const auto eig = herm_eig(Matrix(0.5 * (a.state + a.state.adjoint())));
  CHECK(eig.eigenvalues.minCoeff() > -1e-9);
}

TEST_CASE("propagator semigroup and trace preservation") {
  const LindbladModel m = two_ended(2, 0.3, 2.0);
  const Matrix p1 = propagator(m, 0.4);
  const Matrix p2 = propagator(m, 0.7);
  const Matrix p12 = propagator(m, 1.1);
  CHECK(max_abs(Matrix(p2 * p1 - p12)) < 1e-11);
  CHECK(approx_equal(propagator(m, 0.0), Matrix::Identity(16, 16), 1e-14));

  // Trace functional is a fixed point of the dual flow.
  const ComplexVector tr = vec(identity(2));
  CHECK((p1.adjoint() * tr - tr).cwiseAbs().maxCoeff() < 1e-12);

  SplitMix64 rng(23);
  const Matrix rho0 = random_density(4, rng);
  const auto stepped = apply_propagator(p1, rho0);
  CHECK(stepped.trace_drift < 1e-12);

  CHECK_THROWS_AS(propagator(m, -1.0), std::invalid_argument);
  CHECK_THROWS_AS(propagator(m, std::numeric_limits<double>::infinity()),
                  std::invalid_argument);
  LindbladModel big = standard_model(6, {{1, 1.0}});
  CHECK_THROWS_AS(propagator(big, 1.0), std::invalid_argument);
}

TEST_CASE("propagator is completely positive") {
  const LindbladModel m = standard_model(1, {{1, 0.8}});
  const Matrix p = propagator(m, 0.6);

  // Choi matrix of the map X -> unvec(P vec(X)).
  Matrix choi = Matrix::Zero(4, 4);
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) {
      Matrix eij = Matrix::Zero(2, 2);
      eij(i, j) = 1.0;
      choi += kron(eij, unvec(ComplexVector(p * vec(eij))));
    }
  }
  const auto eig = herm_eig(Matrix(0.5 * (choi + choi.adjoint())));
  CHECK(eig.eigenvalues.minCoeff() > -1e-10);
  CHECK(max_abs(Matrix(choi - choi.adjoint())) < 1e-12);
}

TEST_CASE("evolve validates its inputs") {
  const LindbladModel m = standard_model(1, {{1, 1.0}});
  SplitMix64 rng(29);

  CHECK_THROWS_AS(evolve(m, sigma_plus(), 1.0), std::invalid_argument);  // not Hermitian
  CHECK_THROWS_AS(evolve(m, Matrix(2.0 * id2()), 1.0), std::invalid_argument);  // trace 4
  Matrix neg = Matrix::Zero(2, 2);
  neg(0, 0) = 1.5;
  neg(1, 1) = -0.5;
  CHECK_THROWS_AS(evolve(m, neg, 1.0), std::invalid_argument);
  const Matrix ok = random_density(2, rng);
  CHECK_THROWS_AS(evolve(m, ok, -0.1), std::invalid_argument);
  CHECK_THROWS_AS(evolve(m, ok, std::nan("")), std::invalid_argument);
  CHECK_THROWS_AS(evolve(m, random_density(4, rng), 1.0), std::invalid_argument);
}

TEST_CASE("zero-temperature baths freeze the all-down state") {
  const double inf = std::numeric_limits<double>::infinity();
  const LindbladModel m = standard_model(2, {{1, inf}, {2, inf}});
  const Matrix frozen = product_gibbs(inf, 2);
  CHECK(max_abs(apply_generator(m, frozen, Picture::schrodinger)) < 1e-13);

  // Raising jumps carry zero weight at beta = +inf.
  for (const auto& j : jump_operators(m)) {
    if (j.raising) CHECK(j.coefficient == 0.0);
  }
}
