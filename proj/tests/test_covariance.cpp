#include <Eigen/Dense>
#include <cmath>
#include <random>
#include <vector>

#include "doctest.h"
#include "oracles.hpp"
#include "steerkit/covariance.hpp"
#include "steerkit/states.hpp"

using namespace steerkit;

namespace {

CovarianceMatrix tmsv(double r) {
  const double c = std::cosh(2.0 * r);
  const double s = std::sinh(2.0 * r);
  Eigen::MatrixXd m(4, 4);
  m << c, 0, s, 0,
       0, c, 0, -s,
       s, 0, c, 0,
       0, -s, 0, c;
  return CovarianceMatrix(m);
}

}  // namespace

TEST_CASE("symplectic form has the paired skew structure") {
  const Eigen::MatrixXd omega = symplectic_form(3);
  CHECK(omega.rows() == 6);
  CHECK(omega(0, 1) == 1.0);
  CHECK(omega(1, 0) == -1.0);
  CHECK(omega(2, 3) == 1.0);
  CHECK(omega(0, 2) == 0.0);
  CHECK((omega * omega + Eigen::MatrixXd::Identity(6, 6)).norm() == 0.0);
  CHECK_THROWS_AS(symplectic_form(0), DomainError);
}

TEST_CASE("covariance matrix construction validates and symmetrizes") {
  CHECK(CovarianceMatrix::vacuum(2).data() ==
        Eigen::MatrixXd::Identity(4, 4));
  CHECK(CovarianceMatrix::vacuum(3).n_modes() == 3);
  CHECK(CovarianceMatrix::vacuum(3).dim() == 6);

  SUBCASE("tiny asymmetry is averaged away") {
    Eigen::MatrixXd m = Eigen::MatrixXd::Identity(2, 2);
    m(0, 1) = 3e-13;
    const CovarianceMatrix cm(m);
    CHECK(cm(0, 1) == cm(1, 0));
    CHECK(cm(0, 1) == doctest::Approx(1.5e-13).epsilon(1e-3));
  }
  SUBCASE("gross asymmetry is rejected") {
    Eigen::MatrixXd m = Eigen::MatrixXd::Identity(2, 2);
    m(0, 1) = 0.1;
    CHECK_THROWS_AS((void)CovarianceMatrix(m), DomainError);
  }
  SUBCASE("odd dimension is rejected") {
    CHECK_THROWS_AS(CovarianceMatrix(Eigen::MatrixXd::Identity(3, 3)),
                    DomainError);
  }
  SUBCASE("non-square is rejected") {
    CHECK_THROWS_AS(CovarianceMatrix(Eigen::MatrixXd::Identity(2, 4)),
                    DomainError);
  }
  SUBCASE("non-finite entries are rejected") {
    Eigen::MatrixXd m = Eigen::MatrixXd::Identity(2, 2);
    m(1, 1) = std::nan("");
    CHECK_THROWS_AS((void)CovarianceMatrix(m), DomainError);
  }
}

TEST_CASE("symplectic transforms are validated on construction") {
  CHECK(SymplecticTransform::identity(2).matrix() ==
        Eigen::MatrixXd::Identity(4, 4));
  // Uniform scaling by 2 does not preserve the form.
  CHECK_THROWS_AS(SymplecticTransform(2.0 * Eigen::MatrixXd::Identity(4, 4)),
                  DomainError);

  SUBCASE("composition is matrix product") {
    std::mt19937_64 rng(11);
    const SymplecticTransform s1 = oracles::random_symplectic(2, rng);
    const SymplecticTransform s2 = oracles::random_symplectic(2, rng);
    CHECK(((s1 * s2).matrix() - s1.matrix() * s2.matrix()).norm() == 0.0);
  }
  SUBCASE("apply is congruence") {
    std::mt19937_64 rng(12);
    const SymplecticTransform s = oracles::random_symplectic(2, rng);
    const CovarianceMatrix cm = oracles::random_physical_cm(2, rng);
    const Eigen::MatrixXd expected =
        s.matrix() * cm.data() * s.matrix().transpose();
    CHECK((s.apply(cm).data() - expected).cwiseAbs().maxCoeff() <= 1e-12);
  }
  SUBCASE("mode count mismatches are rejected") {
    CHECK_THROWS_AS(SymplecticTransform::identity(2) *
                        SymplecticTransform::identity(3),
                    DomainError);
    CHECK_THROWS_AS(
        SymplecticTransform::identity(2).apply(CovarianceMatrix::vacuum(3)),
        DomainError);
  }
}

TEST_CASE("mode partitions reject malformed input") {
  const ModePartition ok({0, 2}, {1});
  CHECK(ok.steering == std::vector<int>{0, 2});
  CHECK(ok.steered == std::vector<int>{1});
  CHECK_NOTHROW(ok.check_range(3));
  CHECK_THROWS_AS(ok.check_range(2), DomainError);

  CHECK_THROWS_AS(ModePartition({}, {1}), DomainError);
  CHECK_THROWS_AS(ModePartition({0}, {}), DomainError);
  CHECK_THROWS_AS(ModePartition({0, 0}, {1}), DomainError);
  CHECK_THROWS_AS(ModePartition({0}, {0}), DomainError);
  CHECK_THROWS_AS(ModePartition({-1}, {0}), DomainError);
}

TEST_CASE("restriction selects and reorders mode blocks") {
  // Distinct entries make silent index mix-ups visible.
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(6, 6);
  for (int i = 0; i < 6; ++i) {
    for (int j = 0; j < 6; ++j) {
      m(i, j) = 10.0 * std::min(i, j) + std::max(i, j) + (i == j ? 100.0 : 0.0);
    }
  }
  const CovarianceMatrix cm(0.5 * (m + m.transpose()));

  const CovarianceMatrix sub = restrict_modes(cm, {2, 0});
  CHECK(sub.n_modes() == 2);
  // First block of the result is mode 2 of the input.
  CHECK(sub(0, 0) == cm(4, 4));
  CHECK(sub(1, 1) == cm(5, 5));
  CHECK(sub(2, 2) == cm(0, 0));
  CHECK(sub(0, 2) == cm(4, 0));
  CHECK(sub(1, 3) == cm(5, 1));

  CHECK_THROWS_AS(restrict_modes(cm, {}), DomainError);
  CHECK_THROWS_AS(restrict_modes(cm, {0, 0}), DomainError);
  CHECK_THROWS_AS(restrict_modes(cm, {3}), DomainError);
}

TEST_CASE("Schur complement matches the closed form for a TMSV") {
  const double r = 0.5;
  const CovarianceMatrix cm = tmsv(r);
  const CovarianceMatrix cond = schur_complement(cm, ModePartition({0}, {1}));
  const Eigen::MatrixXd expected =
      Eigen::MatrixXd::Identity(2, 2) / std::cosh(2.0 * r);
  CHECK((cond.data() - expected).cwiseAbs().maxCoeff() <= 1e-12);
}

TEST_CASE("Schur complement traces out unlisted modes first") {
  std::mt19937_64 rng(21);
  const CovarianceMatrix cm = oracles::random_physical_cm(3, rng);
  const CovarianceMatrix direct =
      schur_complement(cm, ModePartition({2}, {0}));
  const CovarianceMatrix via_restrict = schur_complement(
      restrict_modes(cm, {2, 0}), ModePartition({0}, {1}));
  CHECK((direct.data() - via_restrict.data()).cwiseAbs().maxCoeff() <= 1e-12);
}

TEST_CASE("singular steering blocks are reported with the eigenvalue") {
  Eigen::MatrixXd m = Eigen::MatrixXd::Identity(4, 4);
  m(0, 0) = 1e-12;
  m(1, 1) = 1e-12;
  const CovarianceMatrix cm(m);
  try {
    schur_complement(cm, ModePartition({0}, {1}));
    FAIL("expected SingularBlockError");
  } catch (const SingularBlockError& e) {
    CHECK(e.min_eigenvalue() <= 1e-10);
    CHECK(std::string(e.what()).find("singular") != std::string::npos);
  }
}

TEST_CASE("symplectic eigenvalues of canonical states") {
  SUBCASE("vacuum") {
    const auto nus = symplectic_eigenvalues(CovarianceMatrix::vacuum(3));
    for (double nu : nus) {
      CHECK(nu == doctest::Approx(1.0).epsilon(1e-12));
    }
  }
  SUBCASE("squeezed vacuum stays pure") {
    const auto nus = symplectic_eigenvalues(
        squeezed_vacuum({0.7, SqueezedQuadrature::amplitude}));
    REQUIRE(nus.size() == 1);
    CHECK(std::abs(nus[0] - 1.0) <= 1e-12);
  }
  SUBCASE("thermal state") {
    const auto nus =
        symplectic_eigenvalues(CovarianceMatrix(3.0 * Eigen::MatrixXd::Identity(2, 2)));
    REQUIRE(nus.size() == 1);
    CHECK(std::abs(nus[0] - 3.0) <= 1e-12);
  }
  SUBCASE("unbalanced single mode has nu = sqrt(det)") {
    Eigen::MatrixXd m(2, 2);
    m << 4.0, 0.0, 0.0, 1.0;
    const auto nus = symplectic_eigenvalues(CovarianceMatrix(m));
    REQUIRE(nus.size() == 1);
    CHECK(std::abs(nus[0] - 2.0) <= 1e-12);
  }
  SUBCASE("TMSV is pure") {
    for (double nu : symplectic_eigenvalues(tmsv(0.345))) {
      CHECK(std::abs(nu - 1.0) <= 1e-12);
    }
  }
  SUBCASE("results come back ascending") {
    Eigen::MatrixXd m = Eigen::MatrixXd::Identity(4, 4);
    m(0, 0) = m(1, 1) = 5.0;
    m(2, 2) = m(3, 3) = 2.0;
    const auto nus = symplectic_eigenvalues(CovarianceMatrix(m));
    REQUIRE(nus.size() == 2);
    CHECK(nus[0] == doctest::Approx(2.0));
    CHECK(nus[1] == doctest::Approx(5.0));
  }
}

TEST_CASE("physicality detects sub-vacuum spectra") {
  CHECK(is_physical(CovarianceMatrix::vacuum(2)).physical);
  const PhysicalityReport bad =
      is_physical(CovarianceMatrix(0.5 * Eigen::MatrixXd::Identity(2, 2)));
  CHECK_FALSE(bad.physical);
  CHECK(bad.min_symplectic_eigenvalue == doctest::Approx(0.5).epsilon(1e-12));

  // Squeezing alone never breaks physicality.
  CHECK(is_physical(squeezed_vacuum({1.5, SqueezedQuadrature::phase})).physical);
}

TEST_CASE("quadrature ordering conversions invert each other") {
  std::mt19937_64 rng(31);
  const Eigen::MatrixXd m = oracles::random_physical_cm(3, rng).data();
  CHECK((block_to_interleaved(interleaved_to_block(m)) - m).norm() == 0.0);
  CHECK((interleaved_to_block(block_to_interleaved(m)) - m).norm() == 0.0);

  // Spot-check the slot mapping: with n = 3 the block order is
  // (x0, x1, x2, p0, p1, p2), so block (1, 4) is the interleaved (x1, p1).
  const Eigen::MatrixXd b = interleaved_to_block(m);
  CHECK(b(1, 4) == m(2, 3));
  CHECK(b(0, 3) == m(0, 1));
  CHECK(b(2, 2) == m(4, 4));
}

TEST_CASE("library spectra and Schur complements agree with the oracle") {
  std::mt19937_64 rng(41);
  for (int trial = 0; trial < 50; ++trial) {
    const int n = 2 + static_cast<int>(rng() % 3);
    const CovarianceMatrix cm = oracles::random_physical_cm(n, rng);

    const auto lib = symplectic_eigenvalues(cm);
    const auto ref = oracles::symplectic_eigenvalues(cm.data());
    REQUIRE(lib.size() == ref.size());
    for (std::size_t i = 0; i < lib.size(); ++i) {
      CHECK(std::abs(lib[i] - ref[i]) <= 1e-9 * std::max(1.0, ref[i]));
    }

    if (n >= 2) {
      const ModePartition part({0}, {n - 1});
      const Eigen::MatrixXd lib_cond = schur_complement(cm, part).data();
      const Eigen::MatrixXd a = restrict_modes(cm, {0}).data();
      const Eigen::MatrixXd full = restrict_modes(cm, {0, n - 1}).data();
      const Eigen::MatrixXd c = full.topRightCorner(2, 2);
      const Eigen::MatrixXd b = full.bottomRightCorner(2, 2);
      const Eigen::MatrixXd ref_cond =
          b - c.transpose() * oracles::gauss_jordan_inverse(a) * c;
      CHECK((lib_cond - ref_cond).cwiseAbs().maxCoeff() <= 1e-10);
    }
  }
}
