#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "steerkit/covariance.hpp"

// Signed sums of single-mode quadratures, e.g. p_A - x_C - x_D. These are the
// observables measured in homodyne tomography and the nullifiers of cluster
// states. Modes are named by capital letters: mode 0 = A, mode 1 = B, ...

namespace steerkit {

enum class Quadrature { x, p };

struct QuadratureTerm {
  int mode;               // 0-based mode index
  Quadrature quad;
  int coefficient;        // +1 or -1

  bool operator==(const QuadratureTerm&) const = default;
};

using QuadratureCombo = std::vector<QuadratureTerm>;

/// Letter label for a mode index ("A".."Z").
std::string mode_label(int mode);

/// Coefficient vector v with combo variance = v^T sigma v, in interleaved
/// ordering. Validates coefficients (+/-1), mode range and duplicate terms.
Eigen::VectorXd combo_vector(const QuadratureCombo& combo, int n_modes);

/// Variance of the combined quadrature in the given state: v^T sigma v.
double combo_variance(const CovarianceMatrix& cm, const QuadratureCombo& combo);

/// Canonical text form, e.g. "pA-xC-xD" or "xB+pD". A leading '+' is omitted.
std::string combo_name(const QuadratureCombo& combo);

/// Inverse of combo_name. Throws ParseError on malformed input.
QuadratureCombo parse_combo(const std::string& text);

}  // namespace steerkit
