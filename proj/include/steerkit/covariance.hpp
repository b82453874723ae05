#pragma once

#include <Eigen/Dense>
#include <vector>

#include "steerkit/errors.hpp"

// Core phase-space objects. Conventions used throughout the library:
//  - quadratures x = a + a^dag, p = (a - a^dag)/i, so the vacuum variance is 1;
//  - quadrature ordering is interleaved, (x1, p1, x2, p2, ...);
//  - states are zero-mean Gaussians, fully described by their covariance matrix.

namespace steerkit {

// Numerical tolerances shared by the phase-space layer.
inline constexpr double kSymmetryTol = 1e-12;    // max asymmetry accepted silently
inline constexpr double kSymplecticTol = 1e-10;  // max |S Omega S^T - Omega| entry
inline constexpr double kPhysicalityTol = 1e-9;  // slack below 1 for min nu
inline constexpr double kPairingTol = 1e-9;      // relative +/- pairing mismatch
inline constexpr double kSingularCutoff = 1e-10; // min eigenvalue of steering block

/// Symplectic form Omega = direct sum of [[0,1],[-1,0]] in interleaved ordering.
Eigen::MatrixXd symplectic_form(int n_modes);

/// Real symmetric 2n x 2n covariance matrix of an n-mode zero-mean Gaussian
/// state. Construction symmetrizes (averaging with the transpose) provided the
/// asymmetry does not exceed kSymmetryTol, and requires finite entries and an
/// even dimension >= 2. Physicality is *not* enforced here: Schur complements
/// and sampled reconstructions legitimately live below the vacuum floor.
class CovarianceMatrix {
 public:
  explicit CovarianceMatrix(Eigen::MatrixXd data);

  /// n-mode vacuum: the identity.
  static CovarianceMatrix vacuum(int n_modes);

  int n_modes() const { return n_modes_; }
  int dim() const { return 2 * n_modes_; }
  const Eigen::MatrixXd& data() const { return data_; }
  double operator()(int i, int j) const { return data_(i, j); }

 private:
  int n_modes_;
  Eigen::MatrixXd data_;
};

/// Linear phase-space transform S with S Omega S^T = Omega (checked on
/// construction to kSymplecticTol in the max norm).
class SymplecticTransform {
 public:
  explicit SymplecticTransform(Eigen::MatrixXd matrix);

  static SymplecticTransform identity(int n_modes);

  int n_modes() const { return n_modes_; }
  const Eigen::MatrixXd& matrix() const { return matrix_; }

  /// Composition: (*this) after other.
  SymplecticTransform operator*(const SymplecticTransform& other) const;

  /// sigma -> S sigma S^T.
  CovarianceMatrix apply(const CovarianceMatrix& cm) const;

 private:
  int n_modes_;
  Eigen::MatrixXd matrix_;
};

/// An ordered bipartition of (a subset of) the modes into a steering party and
/// a steered party. Indices are 0-based; the two lists must be non-empty,
/// internally duplicate-free and mutually disjoint.
struct ModePartition {
  std::vector<int> steering;
  std::vector<int> steered;

  ModePartition(std::vector<int> steering_modes, std::vector<int> steered_modes);

  /// Throws DomainError if any index falls outside [0, n_modes).
  void check_range(int n_modes) const;
};

/// Reduced state on the listed modes (partial trace is a submatrix selection
/// for Gaussian states). Modes must be distinct and in range; their order
/// determines the ordering of the result.
CovarianceMatrix restrict_modes(const CovarianceMatrix& cm,
                                const std::vector<int>& modes);

/// Conditional covariance of the steered party after an optimal Gaussian
/// measurement on the steering party: sigma_B - C^T A^{-1} C in the block
/// decomposition [[A, C], [C^T, B]] with A on the steering modes. Modes not
/// listed in the partition are traced out first. Throws SingularBlockError if
/// the steering block's minimum eigenvalue is <= kSingularCutoff.
CovarianceMatrix schur_complement(const CovarianceMatrix& cm,
                                  const ModePartition& partition);

/// Symplectic eigenvalues: the n moduli of the +/- i nu eigenvalue pairs of
/// Omega * sigma, returned ascending. Throws NumericalError if the sorted
/// moduli fail to pair up within kPairingTol (relative).
std::vector<double> symplectic_eigenvalues(const CovarianceMatrix& cm);

struct PhysicalityReport {
  bool physical;
  double min_symplectic_eigenvalue;
};

/// Uncertainty-principle check: physical iff min nu >= 1 - kPhysicalityTol.
PhysicalityReport is_physical(const CovarianceMatrix& cm);

/// Reorder a 2n x 2n matrix between interleaved (x1,p1,x2,p2,...) and
/// block (x1,...,xn,p1,...,pn) quadrature orderings.
Eigen::MatrixXd interleaved_to_block(const Eigen::MatrixXd& m);
Eigen::MatrixXd block_to_interleaved(const Eigen::MatrixXd& m);

}  // namespace steerkit
