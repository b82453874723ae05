#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "steerkit/covariance.hpp"
#include "steerkit/quadrature.hpp"

// Homodyne tomography of a four-mode zero-mean Gaussian state: a fixed plan
// of 32 variance measurements determines every covariance matrix entry
// without joint multi-mode detection.

namespace steerkit {

struct MeasurementRecord {
  QuadratureCombo combo;
  double variance = 0.0;
  std::optional<std::int64_t> samples;  // nullopt = exact (infinite statistics)
};

/// The canonical measurement plan: the 8 single quadrature variances, the 12
/// intra-quadrature differences x_i - x_j and p_i - p_j, and the 12
/// cross-quadrature sums x_i + p_j and p_i + x_j over all mode pairs i < j.
/// Only n_modes = 4 is supported (ArityError otherwise).
std::vector<MeasurementRecord> measurement_plan(int n_modes);

struct SamplingSpec {
  std::int64_t n;        // samples per combination, > 0
  std::uint64_t seed;    // master seed; each combination gets a derived stream
};

/// Fill in the variances of a plan from a state. Without sampling the exact
/// values v^T sigma v are returned; with sampling, each combination's variance
/// is the empirical mean square of n outcomes drawn from the corresponding
/// marginal normal distribution on an independent deterministic substream.
/// The state must be physical (DomainError otherwise).
std::vector<MeasurementRecord> simulate_variances(
    const CovarianceMatrix& cm, const std::vector<MeasurementRecord>& plan,
    const std::optional<SamplingSpec>& sampling = std::nullopt);

struct ReconstructionResult {
  CovarianceMatrix cm;
  double min_symplectic_eigenvalue;     // physicality diagnostic
  bool sampled;                         // any record with finite statistics
  std::optional<std::int64_t> samples;  // largest per-record count if sampled
  std::optional<std::uint64_t> seed;    // provenance, when the caller knows it
  double identity_discrepancy;          // max gap between +/- slot estimates
};

/// Assemble a covariance matrix from measured variances: diagonal entries from
/// the single-quadrature records, same-mode x-p covariances fixed to 0, and
/// every other entry from Cov(u,v) = +/- [Var(u +/- v) - Var(u) - Var(v)] / 2,
/// averaging over all records that determine the same entry. Records beyond
/// the canonical plan contribute extra estimates; a missing plan entry raises
/// IncompletePlanError naming the absent combination.
ReconstructionResult reconstruct(
    const std::vector<MeasurementRecord>& records,
    std::optional<std::uint64_t> seed_provenance = std::nullopt);

}  // namespace steerkit
