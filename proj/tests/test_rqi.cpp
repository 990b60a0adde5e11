#include <doctest.h>

#include <cmath>
#include <limits>

#include "helpers.hpp"
#include "spinbath/rqi.hpp"
#include "spinbath/steady.hpp"

using namespace spinbath;
using testing::standard_model;
using testing::two_ended;

namespace {
const double kBetaQuarter = 0.5 * std::log(3.0);  // beta0 = 1/4, beta1 = 3/4

InteractionSetup setup_for(const LindbladModel& m, double h) {
  return make_setup(m.chain, m.baths, h);
}
}  // namespace

TEST_CASE("setup validation") {
  const LindbladModel m = standard_model(1, {{1, 0.5}});
  CHECK_NOTHROW(setup_for(m, 0.1));
  CHECK_THROWS_AS(setup_for(m, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(setup_for(m, -0.1), std::invalid_argument);
  CHECK_THROWS_AS(setup_for(m, std::numeric_limits<double>::infinity()),
                  std::invalid_argument);
  // Infinite-temperature and zero-temperature baths have no GNS expansion here.
  CHECK_THROWS_AS(make_setup(default_chain(1), {make_bath(1, 0.0)}, 0.1),
                  std::invalid_argument);
  CHECK_THROWS_AS(
      make_setup(default_chain(1), {make_bath(1, std::numeric_limits<double>::infinity())}, 0.1),
      std::invalid_argument);
  CHECK_THROWS_AS(make_setup(default_chain(1), {make_bath(1, -0.5)}, 0.1),
                  std::invalid_argument);
  CHECK_THROWS_AS(make_setup(default_chain(2), {make_bath(1, 0.5), make_bath(1, 0.5)}, 0.1),
                  std::invalid_argument);
}

TEST_CASE("GNS basis is orthonormal for the qubit Gibbs state") {
  for (const double beta : {0.3, 1.0, 3.0}) {
    const auto basis = gns_basis(beta);
    const Matrix rho = gibbs_qubit(beta);
    for (int i = 0; i < 4; ++i) {
      for (int j = 0; j < 4; ++j) {
        const Complex g = gns_inner(rho, basis[i], basis[j]);
        const Complex want = i == j ? Complex(1, 0) : Complex(0, 0);
        CHECK(std::abs(g - want) < 1e-13);
      }
    }
    CHECK(approx_equal(basis[0], id2(), 0.0));
    // X3 is traceless against rho and Hermitian.
    CHECK(std::abs((rho * basis[3]).trace()) < 1e-14);
    CHECK(is_hermitian(basis[3], 1e-14));
  }
}

TEST_CASE("interaction Hamiltonian block structure for one site and one bath") {
  const LindbladModel m = standard_model(1, {{1, kBetaQuarter}});
  const double h = 0.01;
  const InteractionSetup setup = setup_for(m, h);
  const Matrix full = interaction_hamiltonian(setup);
  REQUIRE(full.rows() == 4);

  // In the bath-qubit basis the Hamiltonian is
  //   [ H_S + I      (2/sqrt(h)) sigma_- ]
  //   [ (2/sqrt(h)) sigma_+   H_S - I    ]
  // because sx sx + sy sy = 2(sigma_+ sigma_- + sigma_- sigma_+) across the pair.
  const double c = 2.0 / std::sqrt(h);
  const Matrix hs = chain_hamiltonian(m.chain);
  Matrix expected = Matrix::Zero(4, 4);
  expected.block(0, 0, 2, 2) = hs + id2();
  expected.block(0, 2, 2, 2) = c * sigma_minus();
  expected.block(2, 0, 2, 2) = c * sigma_plus();
  expected.block(2, 2, 2, 2) = hs - id2();
  CHECK(max_abs(full - expected) < 1e-12);
  CHECK(is_hermitian(full, 1e-12));

  // Coupling scales like 1/sqrt(h).
  const Matrix full4 = interaction_hamiltonian(setup_for(m, 4.0 * h));
  CHECK(std::abs(full4(0, 2)) == doctest::Approx(0.5 * std::abs(full(0, 2))).epsilon(1e-12));
}

TEST_CASE("one-step unitary is unitary") {
  const LindbladModel m = two_ended(2, 0.5, 1.0);
  for (const double h : {0.1, 1e-3}) {
    const Matrix u = one_step_unitary(setup_for(m, h));
    REQUIRE(u.rows() == 16);  // chain (4) x two bath qubits (4)
    CHECK(max_abs(Matrix(u.adjoint() * u - Matrix::Identity(16, 16))) < 1e-12);
  }
}

TEST_CASE("GNS blocks: counting, isometry, and leading order") {
  const LindbladModel m1 = standard_model(1, {{1, kBetaQuarter}});
  const LindbladModel m2 = two_ended(2, 0.5, 1.0);

  for (const double h : {1e-1, 1e-2, 1e-3, 1e-4}) {
    const auto b1 = gns_blocks(setup_for(m1, h));
    CHECK(b1.blocks.size() == 4);
    CHECK(isometry_residual(b1) < 1e-12);

    const auto b2 = gns_blocks(setup_for(m2, h));
    CHECK(b2.blocks.size() == 16);
    CHECK(isometry_residual(b2) < 1e-12);
  }

  // At leading order the off-diagonal blocks reproduce the jump operators:
  // B_1 ~ -i sqrt(h) 2 sqrt(beta0) sigma_+ for the single-site model.
  const double h = 1e-4;
  const auto blocks = gns_blocks(setup_for(m1, h));
  const double b0 = gibbs_weight_upper(kBetaQuarter);
  const Matrix lead = blocks.blocks[1] / std::sqrt(h);
  CHECK(max_abs(lead - Matrix(Complex(0, -2.0 * std::sqrt(b0)) * sigma_plus())) < 1e-2);

  // B_0 = I - h (i H_eff + K) + O(h^2): the anti-Hermitian part of
  // (B_0 - I)/h recovers -i (H_S + (beta0 - beta1) I).
  const Matrix d = (blocks.blocks[0] - id2()) / h;
  const Matrix anti = 0.5 * (d - d.adjoint());
  const Matrix heff = Complex(0, 1) * anti;
  const double b1w = gibbs_weight_lower(kBetaQuarter);
  const Matrix want = chain_hamiltonian(m1.chain) + (b0 - b1w) * id2();
  CHECK(max_abs(heff - want) < 5e-2);
}

TEST_CASE("discrete map is unital and contractive") {
  const LindbladModel m = two_ended(2, 0.5, 1.0);
  const auto blocks = gns_blocks(setup_for(m, 0.05));

  CHECK(max_abs(discrete_map(blocks, identity(2)) - identity(2)) < 1e-12);
  CHECK(max_abs(repeated_map(blocks, identity(2), 40) - identity(2)) < 1e-10);

  SplitMix64 rng(3);
  const Matrix x = random_hermitian(4, rng);
  CHECK(max_abs(repeated_map(blocks, x, 0) - x) == 0.0);

  // Unital CP maps contract the operator norm.
  const Matrix y = discrete_map(blocks, x);
  const auto ex = herm_eig(x);
  const auto ey = herm_eig(Matrix(0.5 * (y + y.adjoint())));
  const double nx = std::max(std::abs(ex.eigenvalues(0)), std::abs(ex.eigenvalues(3)));
  const double ny = std::max(std::abs(ey.eigenvalues(0)), std::abs(ey.eigenvalues(3)));
  CHECK(ny <= nx + 1e-12);
}

TEST_CASE("discrete map converges to the generator at first order") {
  const std::vector<double> grid = {1e-1, 1e-2, 1e-3, 1e-4};

  struct Case {
    LindbladModel model;
    Matrix observable;
  };
  const std::vector<Case> cases = {
      {standard_model(1, {{1, kBetaQuarter}}), n_plus()},
      {standard_model(2, {{1, 0.7}}), embed_site(sigma_z(), 1, 2)},
      {two_ended(2, 0.5, 1.0), Matrix(embed_site(sigma_x(), 1, 2) * embed_site(sigma_x(), 2, 2))},
  };

  for (const auto& c : cases) {
    const auto points = convergence_probe(c.model, c.observable, grid);
    REQUIRE(points.size() == grid.size());
    for (size_t i = 0; i < points.size(); ++i) {
      CHECK(points[i].h == grid[i]);
      CHECK(points[i].isometry_residual < 1e-11);
      if (i > 0) CHECK(points[i].residual < points[i - 1].residual);
    }
    const double scale = max_abs(apply_generator(c.model, c.observable, Picture::heisenberg));
    CHECK(points.back().residual < 1e-2 * std::max(1.0, scale));

    const double order = probe_order(points);
    CHECK(order > 0.5);
    CHECK(order < 1.15);
  }

  // The identity is fixed by both maps: the probe is numerically zero.
  const auto trivial =
      convergence_probe(standard_model(1, {{1, 1.0}}), id2(), {1e-2, 1e-3});
  for (const auto& p : trivial) CHECK(p.residual < 1e-10);
}

TEST_CASE("repeated discrete map shadows the semigroup") {
  const LindbladModel m = standard_model(1, {{1, kBetaQuarter}});
  const double h = 1e-3;
  const double t = 0.5;
  const long n = static_cast<long>(t / h);
  const auto blocks = gns_blocks(setup_for(m, h));

  const Matrix x = n_plus();
  const Matrix discrete = repeated_map(blocks, x, n);

  // Heisenberg flow: dual propagator applied to the observable.
  const Matrix prop = propagator(m, t);
  const Matrix continuous = unvec(ComplexVector(prop.adjoint() * vec(x)));

  CHECK(max_abs(discrete - continuous) < 0.02);
}
