#include "steerkit/tomography.hpp"

#include <Eigen/Cholesky>
#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>

namespace steerkit {

namespace {

// splitmix64: tiny, seedable, and identical on every platform. Used both as
// the uniform source and to derive independent per-combination substreams.
std::uint64_t splitmix64_next(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

std::uint64_t derive_stream_seed(std::uint64_t master, std::size_t index) {
  std::uint64_t state = master;
  std::uint64_t seed = 0;
  for (std::size_t i = 0; i <= index; ++i) {
    seed = splitmix64_next(state);
  }
  return seed;
}

// Standard-normal stream via the Marsaglia polar method; avoids the
// implementation-defined std::normal_distribution so that seeded results are
// reproducible across standard libraries.
class GaussianStream {
 public:
  explicit GaussianStream(std::uint64_t seed) : state_(seed) {}

  double next() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    double u, v, s;
    do {
      u = 2.0 * next_uniform() - 1.0;
      v = 2.0 * next_uniform() - 1.0;
      s = u * u + v * v;
    } while (s >= 1.0 || s == 0.0);
    const double f = std::sqrt(-2.0 * std::log(s) / s);
    spare_ = v * f;
    have_spare_ = true;
    return u * f;
  }

 private:
  double next_uniform() {
    return static_cast<double>(splitmix64_next(state_) >> 11) * 0x1.0p-53;
  }

  std::uint64_t state_;
  double spare_ = 0.0;
  bool have_spare_ = false;
};

}  // namespace

std::vector<MeasurementRecord> measurement_plan(int n_modes) {
  if (n_modes != 4) {
    std::ostringstream msg;
    msg << "the measurement plan is defined for four-mode states, got "
        << n_modes << " modes";
    throw ArityError(msg.str());
  }
  using Q = Quadrature;
  std::vector<MeasurementRecord> plan;
  plan.reserve(32);
  // Single quadrature variances pin the diagonal.
  for (int m = 0; m < n_modes; ++m) {
    plan.push_back({{{m, Q::x, 1}}, 0.0, std::nullopt});
    plan.push_back({{{m, Q::p, 1}}, 0.0, std::nullopt});
  }
  // Differences within a quadrature and sums across quadratures fix every
  // cross-mode covariance through the polarization identities.
  for (int i = 0; i < n_modes; ++i) {
    for (int j = i + 1; j < n_modes; ++j) {
      plan.push_back({{{i, Q::x, 1}, {j, Q::x, -1}}, 0.0, std::nullopt});
    }
  }
  for (int i = 0; i < n_modes; ++i) {
    for (int j = i + 1; j < n_modes; ++j) {
      plan.push_back({{{i, Q::p, 1}, {j, Q::p, -1}}, 0.0, std::nullopt});
    }
  }
  for (int i = 0; i < n_modes; ++i) {
    for (int j = i + 1; j < n_modes; ++j) {
      plan.push_back({{{i, Q::x, 1}, {j, Q::p, 1}}, 0.0, std::nullopt});
    }
  }
  for (int i = 0; i < n_modes; ++i) {
    for (int j = i + 1; j < n_modes; ++j) {
      plan.push_back({{{i, Q::p, 1}, {j, Q::x, 1}}, 0.0, std::nullopt});
    }
  }
  return plan;
}

std::vector<MeasurementRecord> simulate_variances(
    const CovarianceMatrix& cm, const std::vector<MeasurementRecord>& plan,
    const std::optional<SamplingSpec>& sampling) {
  if (plan.empty()) {
    throw DomainError("measurement plan must be non-empty");
  }
  const PhysicalityReport phys = is_physical(cm);
  if (!phys.physical) {
    std::ostringstream msg;
    msg << "cannot simulate measurements of a non-physical state "
        << "(min symplectic eigenvalue " << phys.min_symplectic_eigenvalue
        << ")";
    throw DomainError(msg.str());
  }

  std::vector<MeasurementRecord> out = plan;
  if (!sampling) {
    for (auto& record : out) {
      record.variance = combo_variance(cm, record.combo);
      record.samples = std::nullopt;
    }
    return out;
  }

  if (sampling->n <= 0) {
    throw DomainError("sample count must be positive");
  }
  Eigen::LLT<Eigen::MatrixXd> llt(cm.data());
  if (llt.info() != Eigen::Success) {
    throw NumericalError("Cholesky factorization of the state failed");
  }
  const Eigen::MatrixXd l = llt.matrixL();

  // A sample of the combo outcome is v . (L z) = (L^T v) . z with z standard
  // normal, so each combination only needs its projected weight vector.
  for (std::size_t i = 0; i < out.size(); ++i) {
    const Eigen::VectorXd v = combo_vector(out[i].combo, cm.n_modes());
    const Eigen::VectorXd w = l.transpose() * v;
    GaussianStream stream(derive_stream_seed(sampling->seed, i));
    double acc = 0.0;
    for (std::int64_t s = 0; s < sampling->n; ++s) {
      double outcome = 0.0;
      for (Eigen::Index k = 0; k < w.size(); ++k) {
        outcome += w(k) * stream.next();
      }
      acc += outcome * outcome;
    }
    out[i].variance = acc / static_cast<double>(sampling->n);
    out[i].samples = sampling->n;
  }
  return out;
}

namespace {

// Canonical form of a combination: terms sorted by (mode, quadrature), overall
// sign chosen so the first coefficient is +1. Variances are invariant under
// both changes, so equivalent records collapse onto one key.
QuadratureCombo normalize_combo(QuadratureCombo combo) {
  std::sort(combo.begin(), combo.end(), [](const auto& a, const auto& b) {
    return std::pair(a.mode, a.quad == Quadrature::p)
         < std::pair(b.mode, b.quad == Quadrature::p);
  });
  if (!combo.empty() && combo.front().coefficient == -1) {
    for (auto& term : combo) {
      term.coefficient = -term.coefficient;
    }
  }
  return combo;
}

int slot_index(const QuadratureTerm& term) {
  return 2 * term.mode + (term.quad == Quadrature::p ? 1 : 0);
}

}  // namespace

ReconstructionResult reconstruct(const std::vector<MeasurementRecord>& records,
                                 std::optional<std::uint64_t> seed_provenance) {
  constexpr int kModes = 4;

  struct KeyData {
    double variance_sum = 0.0;
    int count = 0;
  };
  std::map<std::string, KeyData> by_key;
  bool any_sampled = false;
  std::optional<std::int64_t> max_samples;
  for (const auto& record : records) {
    combo_vector(record.combo, kModes);  // validates terms and mode range
    if (!(record.variance >= 0.0) || !std::isfinite(record.variance)) {
      throw DomainError("measured variance for '" + combo_name(record.combo) +
                        "' must be finite and non-negative");
    }
    if (record.samples) {
      if (*record.samples <= 0) {
        throw DomainError("sample count must be positive");
      }
      any_sampled = true;
      max_samples = std::max(max_samples.value_or(0), *record.samples);
    }
    auto& data = by_key[combo_name(normalize_combo(record.combo))];
    data.variance_sum += record.variance;
    data.count += 1;
  }

  // Every entry of the canonical plan must be present (extra records beyond
  // the plan are welcome and simply contribute more estimates).
  for (const auto& required : measurement_plan(kModes)) {
    const std::string key = combo_name(normalize_combo(required.combo));
    if (!by_key.contains(key)) {
      throw IncompletePlanError(
          "measurement records are missing combination '" + key + "'", key);
    }
  }

  const auto key_mean = [&](const std::string& key) {
    const KeyData& data = by_key.at(key);
    return data.variance_sum / data.count;
  };

  Eigen::MatrixXd sigma = Eigen::MatrixXd::Zero(2 * kModes, 2 * kModes);
  std::array<double, 8> singles{};
  for (int m = 0; m < kModes; ++m) {
    for (Quadrature q : {Quadrature::x, Quadrature::p}) {
      const QuadratureTerm term{m, q, 1};
      const int slot = slot_index(term);
      singles[slot] = key_mean(combo_name({term}));
      sigma(slot, slot) = singles[slot];
    }
  }

  // Off-diagonal estimates from the polarization identities
  //   Var(u + v) = Var(u) + Var(v) + 2 Cov(u, v)
  //   Var(u - v) = Var(u) + Var(v) - 2 Cov(u, v)
  // pooled per matrix entry; same-mode x-p covariances stay pinned at zero.
  struct SlotEstimates {
    std::vector<double> plus;   // from u + v records
    std::vector<double> minus;  // from u - v records
  };
  std::map<std::pair<int, int>, SlotEstimates> estimates;
  for (const auto& record : records) {
    const QuadratureCombo combo = normalize_combo(record.combo);
    if (combo.size() != 2 || combo[0].mode == combo[1].mode) {
      continue;
    }
    const int i = slot_index(combo[0]);
    const int j = slot_index(combo[1]);
    const int sign = combo[0].coefficient * combo[1].coefficient;
    const double var = by_key.at(combo_name(combo)).variance_sum /
                       by_key.at(combo_name(combo)).count;
    const double cov = sign * 0.5 * (var - singles[i] - singles[j]);
    auto& slot = estimates[{std::min(i, j), std::max(i, j)}];
    (sign > 0 ? slot.plus : slot.minus).push_back(cov);
  }

  double identity_discrepancy = 0.0;
  for (const auto& [slot, est] : estimates) {
    double total = 0.0;
    for (double c : est.plus) total += c;
    for (double c : est.minus) total += c;
    const double value =
        total / static_cast<double>(est.plus.size() + est.minus.size());
    sigma(slot.first, slot.second) = value;
    sigma(slot.second, slot.first) = value;
    if (!est.plus.empty() && !est.minus.empty()) {
      const auto mean = [](const std::vector<double>& v) {
        double s = 0.0;
        for (double c : v) s += c;
        return s / static_cast<double>(v.size());
      };
      identity_discrepancy = std::max(
          identity_discrepancy, std::abs(mean(est.plus) - mean(est.minus)));
    }
  }

  CovarianceMatrix cm(sigma);
  const std::vector<double> nus = symplectic_eigenvalues(cm);
  return ReconstructionResult{
      std::move(cm),
      *std::min_element(nus.begin(), nus.end()),
      any_sampled,
      max_samples,
      seed_provenance,
      identity_discrepancy,
  };
}

}  // namespace steerkit
