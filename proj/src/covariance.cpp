#include "steerkit/covariance.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

namespace steerkit {

namespace {

void check_even_square_finite(const Eigen::MatrixXd& m, const char* what) {
  if (m.rows() != m.cols()) {
    std::ostringstream msg;
    msg << what << " must be square, got " << m.rows() << "x" << m.cols();
    throw DomainError(msg.str());
  }
  if (m.rows() < 2 || m.rows() % 2 != 0) {
    std::ostringstream msg;
    msg << what << " dimension must be even and at least 2, got " << m.rows();
    throw DomainError(msg.str());
  }
  if (!m.allFinite()) {
    throw DomainError(std::string(what) + " has non-finite entries");
  }
}

}  // namespace

Eigen::MatrixXd symplectic_form(int n_modes) {
  if (n_modes < 1) {
    throw DomainError("mode count must be positive");
  }
  Eigen::MatrixXd omega = Eigen::MatrixXd::Zero(2 * n_modes, 2 * n_modes);
  for (int k = 0; k < n_modes; ++k) {
    omega(2 * k, 2 * k + 1) = 1.0;
    omega(2 * k + 1, 2 * k) = -1.0;
  }
  return omega;
}

CovarianceMatrix::CovarianceMatrix(Eigen::MatrixXd data) {
  check_even_square_finite(data, "covariance matrix");
  const double asymmetry = (data - data.transpose()).cwiseAbs().maxCoeff();
  if (asymmetry > kSymmetryTol) {
    std::ostringstream msg;
    msg << "covariance matrix is not symmetric (max asymmetry " << asymmetry
        << ")";
    throw DomainError(msg.str());
  }
  n_modes_ = static_cast<int>(data.rows()) / 2;
  data_ = 0.5 * (data + data.transpose());
}

CovarianceMatrix CovarianceMatrix::vacuum(int n_modes) {
  if (n_modes < 1) {
    throw DomainError("mode count must be positive");
  }
  return CovarianceMatrix(Eigen::MatrixXd::Identity(2 * n_modes, 2 * n_modes));
}

SymplecticTransform::SymplecticTransform(Eigen::MatrixXd matrix) {
  check_even_square_finite(matrix, "symplectic transform");
  n_modes_ = static_cast<int>(matrix.rows()) / 2;
  const Eigen::MatrixXd omega = symplectic_form(n_modes_);
  const double defect =
      (matrix * omega * matrix.transpose() - omega).cwiseAbs().maxCoeff();
  if (defect > kSymplecticTol) {
    std::ostringstream msg;
    msg << "matrix does not preserve the symplectic form (defect " << defect
        << ")";
    throw DomainError(msg.str());
  }
  matrix_ = std::move(matrix);
}

SymplecticTransform SymplecticTransform::identity(int n_modes) {
  if (n_modes < 1) {
    throw DomainError("mode count must be positive");
  }
  return SymplecticTransform(
      Eigen::MatrixXd::Identity(2 * n_modes, 2 * n_modes));
}

SymplecticTransform SymplecticTransform::operator*(
    const SymplecticTransform& other) const {
  if (n_modes_ != other.n_modes_) {
    throw DomainError("cannot compose symplectic transforms of different size");
  }
  return SymplecticTransform(matrix_ * other.matrix_);
}

CovarianceMatrix SymplecticTransform::apply(const CovarianceMatrix& cm) const {
  if (cm.n_modes() != n_modes_) {
    throw DomainError("transform and state mode counts differ");
  }
  return CovarianceMatrix(matrix_ * cm.data() * matrix_.transpose());
}

ModePartition::ModePartition(std::vector<int> steering_modes,
                             std::vector<int> steered_modes)
    : steering(std::move(steering_modes)), steered(std::move(steered_modes)) {
  if (steering.empty() || steered.empty()) {
    throw DomainError("both partition sides must be non-empty");
  }
  std::set<int> seen;
  for (const auto& side : {steering, steered}) {
    for (int m : side) {
      if (m < 0) {
        throw DomainError("mode indices must be non-negative");
      }
      if (!seen.insert(m).second) {
        std::ostringstream msg;
        msg << "mode " << m << " appears more than once in the partition";
        throw DomainError(msg.str());
      }
    }
  }
}

void ModePartition::check_range(int n_modes) const {
  for (const auto& side : {steering, steered}) {
    for (int m : side) {
      if (m >= n_modes) {
        std::ostringstream msg;
        msg << "mode index " << m << " out of range for " << n_modes
            << "-mode state";
        throw DomainError(msg.str());
      }
    }
  }
}

CovarianceMatrix restrict_modes(const CovarianceMatrix& cm,
                                const std::vector<int>& modes) {
  if (modes.empty()) {
    throw DomainError("mode list must be non-empty");
  }
  std::set<int> seen;
  std::vector<int> rows;
  rows.reserve(2 * modes.size());
  for (int m : modes) {
    if (m < 0 || m >= cm.n_modes()) {
      std::ostringstream msg;
      msg << "mode index " << m << " out of range for " << cm.n_modes()
          << "-mode state";
      throw DomainError(msg.str());
    }
    if (!seen.insert(m).second) {
      std::ostringstream msg;
      msg << "duplicate mode " << m << " in restriction";
      throw DomainError(msg.str());
    }
    rows.push_back(2 * m);
    rows.push_back(2 * m + 1);
  }
  return CovarianceMatrix(cm.data()(rows, rows));
}

CovarianceMatrix schur_complement(const CovarianceMatrix& cm,
                                  const ModePartition& partition) {
  partition.check_range(cm.n_modes());
  // Unlisted modes are traced out by the restriction itself.
  std::vector<int> combined = partition.steering;
  combined.insert(combined.end(), partition.steered.begin(),
                  partition.steered.end());
  const Eigen::MatrixXd reduced = restrict_modes(cm, combined).data();

  const int na = 2 * static_cast<int>(partition.steering.size());
  const int nb = 2 * static_cast<int>(partition.steered.size());
  const Eigen::MatrixXd a = reduced.topLeftCorner(na, na);
  const Eigen::MatrixXd c = reduced.topRightCorner(na, nb);
  const Eigen::MatrixXd b = reduced.bottomRightCorner(nb, nb);

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(a);
  const double min_eig = es.eigenvalues().minCoeff();
  if (min_eig <= kSingularCutoff) {
    std::ostringstream msg;
    msg << "steering block is numerically singular (min eigenvalue " << min_eig
        << ")";
    throw SingularBlockError(msg.str(), min_eig);
  }

  const Eigen::MatrixXd conditional = b - c.transpose() * a.llt().solve(c);
  return CovarianceMatrix(0.5 * (conditional + conditional.transpose()));
}

std::vector<double> symplectic_eigenvalues(const CovarianceMatrix& cm) {
  const int n = cm.n_modes();
  const Eigen::MatrixXd m = symplectic_form(n) * cm.data();
  Eigen::EigenSolver<Eigen::MatrixXd> es(m, /*computeEigenvectors=*/false);
  if (es.info() != Eigen::Success) {
    throw NumericalError("eigendecomposition of Omega*sigma failed");
  }

  std::vector<double> moduli(2 * n);
  for (int i = 0; i < 2 * n; ++i) {
    moduli[i] = std::abs(es.eigenvalues()(i));
  }
  std::sort(moduli.begin(), moduli.end());

  // Eigenvalues of Omega*sigma come in +/- pairs; consecutive sorted moduli
  // must therefore agree.
  std::vector<double> nus(n);
  for (int k = 0; k < n; ++k) {
    const double lo = moduli[2 * k];
    const double hi = moduli[2 * k + 1];
    if (hi - lo > kPairingTol * std::max(1.0, hi)) {
      std::ostringstream msg;
      msg << "symplectic eigenvalue pairing mismatch: moduli " << lo << " and "
          << hi << " differ beyond tolerance";
      throw NumericalError(msg.str());
    }
    nus[k] = 0.5 * (lo + hi);
  }
  return nus;
}

PhysicalityReport is_physical(const CovarianceMatrix& cm) {
  const std::vector<double> nus = symplectic_eigenvalues(cm);
  const double min_nu = *std::min_element(nus.begin(), nus.end());
  return PhysicalityReport{min_nu >= 1.0 - kPhysicalityTol, min_nu};
}

namespace {

// Positions of the interleaved quadratures when listed in block order.
std::vector<int> block_order_map(const Eigen::MatrixXd& m) {
  check_even_square_finite(m, "quadrature matrix");
  const int n = static_cast<int>(m.rows()) / 2;
  std::vector<int> map(2 * n);
  for (int i = 0; i < n; ++i) {
    map[i] = 2 * i;          // x_i
    map[n + i] = 2 * i + 1;  // p_i
  }
  return map;
}

}  // namespace

Eigen::MatrixXd interleaved_to_block(const Eigen::MatrixXd& m) {
  const std::vector<int> map = block_order_map(m);
  return m(map, map);
}

Eigen::MatrixXd block_to_interleaved(const Eigen::MatrixXd& m) {
  const std::vector<int> map = block_order_map(m);
  Eigen::MatrixXd out(m.rows(), m.cols());
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      out(map[i], map[j]) = m(i, j);
    }
  }
  return out;
}

}  // namespace steerkit
