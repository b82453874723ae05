#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "steerkit/covariance.hpp"

// Gaussian EPR steering: the quantifier itself, critical-loss searches,
// monogamy-relation audits, and the cluster-state witnesses (nullifier
// variances and the van Loock-Furusawa inseparability combinations).

namespace steerkit {

// A symplectic eigenvalue of the conditional state contributes to steering
// when it is below 1 - kSteeringEigTol; a steering value counts as non-zero
// when it exceeds kSteeringThreshold.
inline constexpr double kSteeringEigTol = 1e-10;
inline constexpr double kSteeringThreshold = 1e-9;

struct SteeringReport {
  ModePartition partition;
  double value;                                 // sum of -ln nu over the list
  std::vector<double> contributing_eigenvalues; // conditional nus below 1
  std::string direction_label;                  // e.g. "BC->A"
};

/// How strongly the steering party can steer the steered party by Gaussian
/// measurements: G = max(0, -sum_{nu_j < 1} ln nu_j) over the symplectic
/// eigenvalues nu_j of the steered party's conditional covariance matrix.
/// Positive iff the conditional state is unphysical, i.e. iff steering is
/// possible. Singular steering blocks propagate SingularBlockError.
SteeringReport gaussian_steering(const CovarianceMatrix& cm,
                                 const ModePartition& partition);

/// "BC->A" for steering = {1,2}, steered = {0}.
std::string partition_label(const ModePartition& partition);

/// Parse "BC->A" into a partition over n_modes modes. Letters A.. map to mode
/// indices 0..; both sides must be non-empty, duplicate-free and disjoint.
ModePartition parse_partition(const std::string& text, int n_modes);

/// Critical transmittance for the square cluster state at squeezing r with
/// loss on one mode: scans G(eta) on 101 uniform points in [1e-4, 1], then
/// bisects the single sign change of (G > kSteeringThreshold) to an absolute
/// eta resolution of 1e-4. Returns nullopt if steering never appears or never
/// disappears on the grid; throws MultiCrossingError (with all bracketing
/// intervals) if the predicate changes more than once.
std::optional<double> critical_eta(double r, const ModePartition& partition,
                                   int lossy_mode);

// Monogamy relations of Gaussian steering between three disjoint parties
// A, B, C (C is the steered party in types I-II and IIIb/IVb, the steering
// party in IIIa/IVa):
//   I    (all parties single-mode):      not both G^{A->C} > 0 and G^{B->C} > 0
//   II   (C single-mode, A,B arbitrary): same exclusion
//   IIIa (all single-mode):              G^{C->(AB)} >= G^{C->A} + G^{C->B}
//   IIIb (all single-mode):              G^{(AB)->C} >= G^{A->C} + G^{B->C}
//   IVa  (arbitrary arity):              same as IIIa
//   IVb  (C single-mode):                same as IIIb
enum class MonogamyType { I, II, IIIa, IIIb, IVa, IVb };

MonogamyType parse_monogamy_type(const std::string& name);
std::string monogamy_type_name(MonogamyType type);

struct MonogamyParties {
  std::vector<int> a;
  std::vector<int> b;
  std::vector<int> c;
};

struct NamedValue {
  std::string name;   // direction label, e.g. "C->AB"
  double value;
};

struct MonogamyReport {
  MonogamyType type;
  MonogamyParties parties;
  std::vector<NamedValue> terms;     // every steering value entering the relation
  std::optional<double> residual;    // joint - sum of parts (types III/IV only)
  bool satisfied;
};

/// Evaluate one monogamy relation instance. Throws ArityError when the party
/// sizes violate the relation's applicability (see the table above) or the
/// parties are not disjoint.
MonogamyReport audit_monogamy(const CovarianceMatrix& cm, MonogamyType type,
                              const MonogamyParties& parties);

/// The four pairwise nullifier-variance sums whose values below 4 certify
/// full four-partite inseparability of the square cluster state.
struct InseparabilityReport {
  std::array<double, 4> combination_values;
  bool fully_inseparable;      // all four below the bound
};

InseparabilityReport vlf_inseparability(const CovarianceMatrix& cm);

/// Variances of the four cluster nullifiers (3 e^{-2r} for the ideal state)
/// and their squeezing levels in dB relative to the 3-unit vacuum floor.
struct NullifierReport {
  std::array<std::string, 4> names;
  std::array<double, 4> variances;
  std::array<double, 4> squeezing_db;
};

NullifierReport nullifier_variances(const CovarianceMatrix& cm);

}  // namespace steerkit
