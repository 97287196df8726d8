#include "entdist/dur_states.hpp"

#include <doctest.h>

#include "test_support.hpp"

using namespace entdist;

namespace {

// Mixture assembled directly from explicit basis vectors; independent of the
// builder under test.
Matrix mixture_oracle(const DurParams& p) {
  auto projector = [](int j, int sign) {
    Vector v = Vector::Zero(8);
    v(2 * j) = Complex(1 / std::sqrt(2.0), 0);
    v(7 - 2 * j) = Complex(sign / std::sqrt(2.0), 0);
    return Matrix(v * v.adjoint());
  };
  Matrix m = p.lam0p * projector(0, +1) + p.lam0m * projector(0, -1);
  m += p.lam1 * (projector(1, +1) + projector(1, -1));
  m += p.lam2 * (projector(2, +1) + projector(2, -1));
  m += p.lam3 * (projector(3, +1) + projector(3, -1));
  return m;
}

// The displayed form of the partial transpose on the carrier qubit: the
// double pair weights on the diagonal and the gap coherence moved to the
// (1,6) corner pair.
Matrix carrier_transpose_display(const DurParams& p) {
  Matrix m = Matrix::Zero(8, 8);
  const double half_sum = p.delta_sum() / 2;
  m(0, 0) = m(7, 7) = half_sum;
  m(1, 1) = m(6, 6) = p.lam3;
  m(2, 2) = m(5, 5) = p.lam1;
  m(3, 3) = m(4, 4) = p.lam2;
  m(1, 6) = m(6, 1) = p.delta() / 2;
  return m;
}

}  // namespace

TEST_CASE("ghz basis states match explicit projectors") {
  const double s = 1 / std::sqrt(2.0);
  Vector v0 = Vector::Zero(8);
  v0(0) = s;
  v0(7) = s;
  CHECK(max_abs_diff(ghz_basis_state(0, +1).matrix(), Matrix(v0 * v0.adjoint())) == 0.0);

  Vector v3 = Vector::Zero(8);
  v3(6) = s;
  v3(1) = -s;
  CHECK(max_abs_diff(ghz_basis_state(3, -1).matrix(), Matrix(v3 * v3.adjoint())) <=
        1e-16);

  for (int j = 0; j <= 3; ++j) {
    for (int sign : {+1, -1}) {
      CHECK(std::abs(ghz_basis_state(j, sign).matrix().trace().real() - 1.0) <=
            1e-15);
    }
  }
  CHECK_THROWS_AS(ghz_basis_state(4, +1), contract_error);
  CHECK_THROWS_AS(ghz_basis_state(0, 2), contract_error);
}

TEST_CASE("ghz basis is orthonormal") {
  for (int j = 0; j <= 3; ++j) {
    for (int sign : {+1, -1}) {
      for (int k = 0; k <= 3; ++k) {
        for (int sign2 : {+1, -1}) {
          const double overlap = (ghz_basis_state(j, sign).matrix() *
                                  ghz_basis_state(k, sign2).matrix())
                                     .trace()
                                     .real();
          const double expected = (j == k && sign == sign2) ? 1.0 : 0.0;
          CHECK(std::abs(overlap - expected) <= 1e-12);
        }
      }
    }
  }
}

TEST_CASE("params validation names the violated invariant") {
  CHECK_THROWS_WITH_AS(DurParams::validated(0.5, 0.5, 0.5, 0.0, 0.0),
                       doctest::Contains("lam0p + lam0m + 2*(lam1+lam2+lam3)"),
                       validation_error);
  CHECK_THROWS_WITH_AS(DurParams::validated(-0.1, 0.0, 0.0, 0.0, 0.55),
                       doctest::Contains("lam0p"), validation_error);
  CHECK_THROWS_WITH_AS(DurParams::validated(0.1, 0.0, 0.4, 0.0, 0.05),
                       doctest::Contains("maximal"), validation_error);
  // Trace constraint re-pinned through lam0m.
  const DurParams p = DurParams::validated(0.4, 0.2, 0.1, 0.05, 0.05);
  CHECK(p.trace_sum() == doctest::Approx(1.0).epsilon(1e-15));
  // Equal-weight boundary (zero gap) is valid; the lam0m adjustment may
  // shift the gap by an ulp.
  const DurParams flat = DurParams::validated(0.2, 0.2, 0.1, 0.1, 0.1);
  CHECK(std::abs(flat.delta()) <= 1e-15);
}

TEST_CASE("fixture point matches the defining mixture") {
  const DurParams p = rho_prime_params();
  CHECK(p.lam0p == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
  CHECK(p.lam0m == 0.0);
  CHECK(std::abs(p.delta() - 1.0 / 3.0) <= 1e-15);

  const Matrix expected = (1.0 / 3.0) * ghz_basis_state(0, +1).matrix() +
                          (1.0 / 6.0) * (ghz_basis_state(1, +1).matrix() +
                                         ghz_basis_state(1, -1).matrix() +
                                         ghz_basis_state(3, +1).matrix() +
                                         ghz_basis_state(3, -1).matrix());
  CHECK(max_abs_diff(build_rho(p).matrix(), expected) <= 1e-15);
}

TEST_CASE("single-term mixture collapses to one basis state") {
  const DurParams p = DurParams::validated(1.0, 0.0, 0.0, 0.0, 0.0);
  CHECK(max_abs_diff(build_rho(p).matrix(), ghz_basis_state(0, +1).matrix()) ==
        0.0);
}

TEST_CASE("mixture matches the independent assembly on samples") {
  for (const DurParams& p : sample_params(7, 50)) {
    CHECK(max_abs_diff(build_rho(p).matrix(), mixture_oracle(p)) <= 1e-15);
  }
}

TEST_CASE("carrier-qubit partial transpose matches its displayed form") {
  for (const DurParams& p : sample_params(11, 100)) {
    const Matrix pt = partial_transpose(build_rho(p).matrix(), {2});
    CHECK(max_abs_diff(pt, carrier_transpose_display(p)) <= 1e-12);
  }
}

TEST_CASE("fixture carrier transpose sits exactly on the PSD boundary") {
  const DurParams p = rho_prime_params();
  const Matrix pt = partial_transpose(build_rho(p).matrix(), {2});
  CHECK(max_abs_diff(pt, carrier_transpose_display(p)) <= 1e-15);
  CHECK(is_psd(pt, 1e-10));
  // min eigenvalue lam3 - delta/2 vanishes at the fixture
  CHECK(std::abs(hermitian_eigenvalues(pt).minCoeff()) <= 1e-15);
}

TEST_CASE("prepared-state blocks at the fixture") {
  const DurParams p = rho_prime_params();
  Matrix block0 = Matrix::Zero(4, 4);
  block0(0, 0) = block0(3, 3) = 1.0 / 6.0;
  block0(0, 3) = block0(3, 0) = 1.0 / 6.0;
  block0(1, 1) = block0(2, 2) = 1.0 / 6.0;
  CHECK(max_abs_diff(sigma_block(p, 0), block0) <= 1e-15);

  Matrix block1 = Matrix::Zero(4, 4);
  block1(0, 0) = block1(3, 3) = 1.0 / 6.0;
  CHECK(max_abs_diff(sigma_block(p, 1), block1) <= 1e-15);
}

TEST_CASE("receiver-state blocks at the fixture") {
  const DurParams p = rho_prime_params();
  // Weighted maximally entangled pair on the kept sector.
  CHECK(max_abs_diff(tau_block(p, 0), Matrix((1.0 / 3.0) * test_support::phi_plus())) <=
        1e-15);
  Matrix block1 = Matrix::Zero(4, 4);
  block1(0, 0) = block1(3, 3) = 1.0 / 6.0;
  block1(1, 1) = block1(2, 2) = 1.0 / 6.0;
  CHECK(max_abs_diff(tau_block(p, 1), block1) <= 1e-15);
}

TEST_CASE("block builders agree with CNOT conjugation on samples") {
  const Matrix cnot_ac = [] {
    Matrix u = Matrix::Zero(8, 8);
    for (Eigen::Index i = 0; i < 8; ++i) u((i & 4) ? (i ^ 1) : i, i) = 1;
    return u;
  }();
  const Matrix cnot_bc = [] {
    Matrix u = Matrix::Zero(8, 8);
    for (Eigen::Index i = 0; i < 8; ++i) u((i & 2) ? (i ^ 1) : i, i) = 1;
    return u;
  }();
  for (const DurParams& p : sample_params(13, 100)) {
    const Matrix rho = build_rho(p).matrix();
    CHECK(max_abs_diff(build_sigma(p).matrix(),
                       Matrix(cnot_ac * rho * cnot_ac.adjoint())) <= 1e-12);
    CHECK(max_abs_diff(build_tau(p).matrix(),
                       Matrix(cnot_bc * rho * cnot_bc.adjoint())) <= 1e-12);
  }
}

TEST_CASE("two-qubit marginal is diagonal hence separable") {
  for (const DurParams& p : sample_params(17, 50)) {
    const Matrix reduced = partial_trace(build_rho(p).matrix(), {2});
    for (Eigen::Index r = 0; r < 4; ++r)
      for (Eigen::Index c = 0; c < 4; ++c)
        if (r != c) CHECK(std::abs(reduced(r, c)) <= 1e-14);
    CHECK(is_psd(partial_transpose(reduced, {0}), 1e-10));
  }
}

TEST_CASE("extremal family") {
  const DurParams top = extremal_params(1.0 / 3.0);
  const DurParams fixture = rho_prime_params();
  CHECK(std::abs(top.lam0p - fixture.lam0p) <= 1e-15);
  CHECK(std::abs(top.lam0m - fixture.lam0m) <= 1e-15);
  CHECK(std::abs(top.lam1 - fixture.lam1) <= 1e-15);
  CHECK(top.lam2 == 0.0);
  CHECK(std::abs(top.lam3 - fixture.lam3) <= 1e-15);

  const DurParams p = extremal_params(0.1);
  CHECK(p.lam0p == doctest::Approx(0.45).epsilon(1e-15));
  CHECK(p.lam0m == doctest::Approx(0.35).epsilon(1e-15));
  CHECK(p.lam1 == doctest::Approx(0.05).epsilon(1e-15));
  CHECK(p.lam2 == 0.0);
  CHECK(p.lam3 == doctest::Approx(0.05).epsilon(1e-15));

  CHECK_THROWS_AS(extremal_params(0.0), std::domain_error);
  CHECK_THROWS_AS(extremal_params(-0.1), std::domain_error);
  CHECK_THROWS_AS(extremal_params(0.34), std::domain_error);
}

TEST_CASE("sampler is deterministic and respects the constraints") {
  const auto a = sample_params(99, 500);
  const auto b = sample_params(99, 500);
  REQUIRE(a.size() == b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(a[i].lam0p == b[i].lam0p);
    CHECK(a[i].lam0m == b[i].lam0m);
    CHECK(a[i].lam1 == b[i].lam1);
    CHECK(a[i].lam2 == b[i].lam2);
    CHECK(a[i].lam3 == b[i].lam3);
  }
  double mean_trace = 0.0;
  for (const DurParams& p : a) {
    CHECK(p.lam0p >= std::max({p.lam0m, p.lam1, p.lam2, p.lam3}) - 1e-15);
    CHECK(p.lam0p >= 0.0);
    CHECK(p.lam0p <= 1.0);
    CHECK(std::abs(p.trace_sum() - 1.0) <= 1e-12);
    mean_trace += p.trace_sum();
  }
  CHECK(std::abs(mean_trace / static_cast<double>(a.size()) - 1.0) <= 1e-12);

  // Interior coverage: no coordinate vanishes across all samples.
  double max_lam0m = 0, max_lam1 = 0, max_lam2 = 0, max_lam3 = 0;
  for (const DurParams& p : a) {
    max_lam0m = std::max(max_lam0m, p.lam0m);
    max_lam1 = std::max(max_lam1, p.lam1);
    max_lam2 = std::max(max_lam2, p.lam2);
    max_lam3 = std::max(max_lam3, p.lam3);
  }
  CHECK(max_lam0m > 0.0);
  CHECK(max_lam1 > 0.0);
  CHECK(max_lam2 > 0.0);
  CHECK(max_lam3 > 0.0);

  CHECK_THROWS_AS(sample_params(1, 0), contract_error);
}
