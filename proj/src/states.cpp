#include "steerkit/states.hpp"

#include <cmath>
#include <complex>
#include <sstream>

namespace steerkit {

namespace {

void check_mode_index(int mode, int n_modes) {
  if (mode < 0 || mode >= n_modes) {
    std::ostringstream msg;
    msg << "mode index " << mode << " out of range for " << n_modes
        << "-mode system";
    throw DomainError(msg.str());
  }
}

}  // namespace

CovarianceMatrix squeezed_vacuum(const SqueezedInputSpec& spec) {
  if (!std::isfinite(spec.r) || spec.r < 0.0) {
    throw DomainError("squeezing parameter must be finite and non-negative");
  }
  Eigen::MatrixXd cm(2, 2);
  const double squeezed = std::exp(-2.0 * spec.r);
  const double antisqueezed = std::exp(2.0 * spec.r);
  if (spec.squeezed == SqueezedQuadrature::amplitude) {
    cm << squeezed, 0.0, 0.0, antisqueezed;
  } else {
    cm << antisqueezed, 0.0, 0.0, squeezed;
  }
  return CovarianceMatrix(cm);
}

CovarianceMatrix tensor(const std::vector<CovarianceMatrix>& states) {
  if (states.empty()) {
    throw DomainError("tensor product needs at least one state");
  }
  int dim = 0;
  for (const auto& s : states) {
    dim += s.dim();
  }
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(dim, dim);
  int offset = 0;
  for (const auto& s : states) {
    out.block(offset, offset, s.dim(), s.dim()) = s.data();
    offset += s.dim();
  }
  return CovarianceMatrix(out);
}

SymplecticTransform unitary_to_symplectic(const Eigen::MatrixXcd& u) {
  if (u.rows() != u.cols() || u.rows() < 1) {
    throw DomainError("mode unitary must be square and non-empty");
  }
  if (!u.allFinite()) {
    throw DomainError("mode unitary has non-finite entries");
  }
  const int n = static_cast<int>(u.rows());
  const double defect =
      (u.adjoint() * u - Eigen::MatrixXcd::Identity(n, n)).cwiseAbs().maxCoeff();
  if (defect > 1e-10) {
    std::ostringstream msg;
    msg << "mode matrix is not unitary (defect " << defect << ")";
    throw DomainError(msg.str());
  }

  // a -> U a lifts to x' = Re(U) x - Im(U) p, p' = Im(U) x + Re(U) p.
  Eigen::MatrixXd s(2 * n, 2 * n);
  for (int j = 0; j < n; ++j) {
    for (int k = 0; k < n; ++k) {
      const double re = u(j, k).real();
      const double im = u(j, k).imag();
      s(2 * j, 2 * k) = re;
      s(2 * j, 2 * k + 1) = -im;
      s(2 * j + 1, 2 * k) = im;
      s(2 * j + 1, 2 * k + 1) = re;
    }
  }
  return SymplecticTransform(std::move(s));
}

SymplecticTransform beamsplitter(int n_modes, int k, int l,
                                 double transmittance) {
  if (n_modes < 2) {
    throw DomainError("beam splitter needs at least two modes");
  }
  check_mode_index(k, n_modes);
  check_mode_index(l, n_modes);
  if (k == l) {
    throw DomainError("beam splitter ports must be distinct modes");
  }
  if (!std::isfinite(transmittance) || transmittance < 0.0 ||
      transmittance > 1.0) {
    throw DomainError("beam splitter transmittance must lie in [0, 1]");
  }
  Eigen::MatrixXcd u = Eigen::MatrixXcd::Identity(n_modes, n_modes);
  const double root_t = std::sqrt(transmittance);
  const double root_r = std::sqrt(1.0 - transmittance);
  u(k, k) = root_r;
  u(k, l) = root_t;
  u(l, k) = root_t;
  u(l, l) = -root_r;
  return unitary_to_symplectic(u);
}

SymplecticTransform phase_rotation(int n_modes, int k, double theta) {
  if (n_modes < 1) {
    throw DomainError("mode count must be positive");
  }
  check_mode_index(k, n_modes);
  if (!std::isfinite(theta)) {
    throw DomainError("rotation angle must be finite");
  }
  Eigen::MatrixXcd u = Eigen::MatrixXcd::Identity(n_modes, n_modes);
  u(k, k) = std::polar(1.0, theta);
  return unitary_to_symplectic(u);
}

Eigen::MatrixXcd square_cluster_unitary() {
  using namespace std::complex_literals;
  const double r2 = std::sqrt(0.5);   // 1/sqrt(2)
  const double r25 = std::sqrt(0.4);  // sqrt(2/5)
  const double r10 = std::sqrt(0.1);  // 1/sqrt(10)
  Eigen::MatrixXcd u(4, 4);
  u << -r2, -r25, -1i * r10, 0.0,
       r2, -r25, -1i * r10, 0.0,
       0.0, 1i * r10, r25, -r2,
       0.0, 1i * r10, r25, r2;
  return u;
}

CovarianceMatrix square_cluster(double r) {
  const std::vector<CovarianceMatrix> inputs{
      squeezed_vacuum({r, SqueezedQuadrature::phase}),
      squeezed_vacuum({r, SqueezedQuadrature::amplitude}),
      squeezed_vacuum({r, SqueezedQuadrature::amplitude}),
      squeezed_vacuum({r, SqueezedQuadrature::phase}),
  };
  return unitary_to_symplectic(square_cluster_unitary()).apply(tensor(inputs));
}

SymplecticTransform square_cluster_network(double t1, double t2, double t3) {
  const double half_pi = std::acos(0.0);
  const SymplecticTransform f3 = phase_rotation(4, 2, half_pi);
  const SymplecticTransform f4 = phase_rotation(4, 3, half_pi);
  const SymplecticTransform flip1 = phase_rotation(4, 0, 2.0 * half_pi);
  // Operator product, rightmost factor applied first.
  return f4 * f3 * flip1 * beamsplitter(4, 2, 3, t3) * f4 *
         beamsplitter(4, 0, 1, t2) * beamsplitter(4, 1, 2, t1) * f3;
}

double verify_network_decomposition(double t1, double t2, double t3) {
  const SymplecticTransform network = square_cluster_network(t1, t2, t3);
  const SymplecticTransform direct =
      unitary_to_symplectic(square_cluster_unitary());
  return (network.matrix() - direct.matrix()).cwiseAbs().maxCoeff();
}

LossChannel::LossChannel(int mode_index, double transmittance)
    : mode(mode_index), eta(transmittance) {
  if (mode < 0) {
    throw DomainError("mode index must be non-negative");
  }
  if (!std::isfinite(eta) || eta < 0.0 || eta > 1.0) {
    throw DomainError("transmittance must lie in [0, 1]");
  }
}

Eigen::MatrixXd LossChannel::x_matrix(int n_modes) const {
  check_mode_index(mode, n_modes);
  Eigen::MatrixXd x = Eigen::MatrixXd::Identity(2 * n_modes, 2 * n_modes);
  x(2 * mode, 2 * mode) = std::sqrt(eta);
  x(2 * mode + 1, 2 * mode + 1) = std::sqrt(eta);
  return x;
}

Eigen::MatrixXd LossChannel::y_matrix(int n_modes) const {
  check_mode_index(mode, n_modes);
  Eigen::MatrixXd y = Eigen::MatrixXd::Zero(2 * n_modes, 2 * n_modes);
  y(2 * mode, 2 * mode) = 1.0 - eta;
  y(2 * mode + 1, 2 * mode + 1) = 1.0 - eta;
  return y;
}

CovarianceMatrix apply_loss(const CovarianceMatrix& cm,
                            const LossChannel& channel) {
  const Eigen::MatrixXd x = channel.x_matrix(cm.n_modes());
  const Eigen::MatrixXd y = channel.y_matrix(cm.n_modes());
  return CovarianceMatrix(x * cm.data() * x.transpose() + y);
}

}  // namespace steerkit
