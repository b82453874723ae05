#pragma once

#include <Eigen/Dense>
#include <array>
#include <vector>

#include "steerkit/covariance.hpp"

// Deterministic construction of the Gaussian states and channels under study:
// squeezed inputs, passive linear-optics networks, the four-mode square
// cluster state, and single-mode transmission loss.

namespace steerkit {

/// Squeezing parameter of the experimental resource states (~ -3 dB).
inline constexpr double kDefaultSqueezing = 0.345;

enum class SqueezedQuadrature { amplitude, phase };

struct SqueezedInputSpec {
  double r;                            // squeezing parameter, >= 0
  SqueezedQuadrature squeezed;         // which quadrature has variance e^{-2r}
};

/// Single-mode squeezed vacuum: diag(e^{-2r}, e^{2r}) for amplitude squeezing,
/// diag(e^{2r}, e^{-2r}) for phase squeezing.
CovarianceMatrix squeezed_vacuum(const SqueezedInputSpec& spec);

/// Tensor product: block-diagonal concatenation of covariance matrices.
CovarianceMatrix tensor(const std::vector<CovarianceMatrix>& states);

/// Lift an n x n complex unitary on the mode operators, a -> U a, to the
/// 2n x 2n real symplectic transform acting on interleaved quadratures. Each
/// mode pair (j,k) contributes the 2x2 block [[Re U_jk, -Im U_jk],
/// [Im U_jk, Re U_jk]]. Throws DomainError if U is not unitary to 1e-10.
SymplecticTransform unitary_to_symplectic(const Eigen::MatrixXcd& u);

/// Beam splitter between modes k and l with power transmittance t in [0,1]:
/// mode matrix entries (k,k) = sqrt(1-t), (k,l) = (l,k) = sqrt(t),
/// (l,l) = -sqrt(1-t), identity elsewhere.
SymplecticTransform beamsplitter(int n_modes, int k, int l, double transmittance);

/// Phase rotation a_k -> e^{i theta} a_k on mode k (90 degrees = Fourier).
SymplecticTransform phase_rotation(int n_modes, int k, double theta);

/// The 4x4 mode unitary that turns the squeezed inputs into the square
/// cluster state (modes ordered A, B, C, D).
Eigen::MatrixXcd square_cluster_unitary();

/// Four-mode square cluster state: inputs 1 and 4 phase-squeezed, 2 and 3
/// amplitude-squeezed, all with parameter r, sent through
/// square_cluster_unitary(). Pure by construction. Mode order is A, B, C, D;
/// A is diagonally opposite D (and B opposite C), so the nullifiers are
/// p_A - x_C - x_D, p_B - x_C - x_D, p_C - x_A - x_B, p_D - x_A - x_B.
CovarianceMatrix square_cluster(double r = kDefaultSqueezing);

/// The equivalent beam-splitter network: F4 F3 I1(-1) B34(1/2) F4 B12(1/2)
/// B23(1/5) F3 as an operator product (rightmost factor applied first), where
/// F_k = phase_rotation(4, k, pi/2) and I1(-1) = phase_rotation(4, 0, pi).
SymplecticTransform square_cluster_network(double t1 = 0.2, double t2 = 0.5,
                                           double t3 = 0.5);

/// Max elementwise deviation between square_cluster_network() and the lift of
/// square_cluster_unitary(); ~1e-15 for the canonical transmittances.
double verify_network_decomposition(double t1 = 0.2, double t2 = 0.5,
                                    double t3 = 0.5);

/// Pure transmission loss on one mode: sigma -> X sigma X^T + Y with
/// X = sqrt(eta) and Y = (1 - eta) * I on the lossy mode's block, identity /
/// zero elsewhere. eta = 1 is lossless, eta = 0 replaces the mode by vacuum.
struct LossChannel {
  int mode;
  double eta;

  LossChannel(int mode, double eta);  // throws DomainError if eta outside [0,1]

  Eigen::MatrixXd x_matrix(int n_modes) const;
  Eigen::MatrixXd y_matrix(int n_modes) const;
};

CovarianceMatrix apply_loss(const CovarianceMatrix& cm, const LossChannel& channel);

}  // namespace steerkit
