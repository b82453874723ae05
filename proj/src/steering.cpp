#include "steerkit/steering.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

#include "steerkit/quadrature.hpp"
#include "steerkit/states.hpp"

namespace steerkit {

std::string partition_label(const ModePartition& partition) {
  std::string label;
  for (int m : partition.steering) {
    label += mode_label(m);
  }
  label += "->";
  for (int m : partition.steered) {
    label += mode_label(m);
  }
  return label;
}

ModePartition parse_partition(const std::string& text, int n_modes) {
  const std::size_t arrow = text.find("->");
  if (arrow == std::string::npos) {
    throw ParseError("partition '" + text + "' must contain '->'");
  }
  const auto side_modes = [&](const std::string& side) {
    std::vector<int> modes;
    for (char ch : side) {
      if (ch < 'A' || ch >= 'A' + n_modes) {
        std::ostringstream msg;
        msg << "unknown mode label '" << ch << "' in partition '" << text
            << "' (expected A-" << static_cast<char>('A' + n_modes - 1) << ")";
        throw ParseError(msg.str());
      }
      modes.push_back(ch - 'A');
    }
    return modes;
  };
  const std::vector<int> steering = side_modes(text.substr(0, arrow));
  const std::vector<int> steered = side_modes(text.substr(arrow + 2));
  try {
    return ModePartition(steering, steered);
  } catch (const DomainError& e) {
    throw ParseError("invalid partition '" + text + "': " + e.what());
  }
}

SteeringReport gaussian_steering(const CovarianceMatrix& cm,
                                 const ModePartition& partition) {
  partition.check_range(cm.n_modes());
  const CovarianceMatrix conditional = schur_complement(cm, partition);
  const std::vector<double> nus = symplectic_eigenvalues(conditional);

  SteeringReport report{partition, 0.0, {}, partition_label(partition)};
  for (double nu : nus) {
    if (nu < 1.0 - kSteeringEigTol) {
      report.contributing_eigenvalues.push_back(nu);
      report.value -= std::log(nu);
    }
  }
  report.value = std::max(0.0, report.value);
  return report;
}

std::optional<double> critical_eta(double r, const ModePartition& partition,
                                   int lossy_mode) {
  const CovarianceMatrix base = square_cluster(r);
  partition.check_range(base.n_modes());
  if (lossy_mode < 0 || lossy_mode >= base.n_modes()) {
    throw DomainError("lossy mode index out of range");
  }

  const auto steers = [&](double eta) {
    const CovarianceMatrix lossy =
        apply_loss(base, LossChannel(lossy_mode, eta));
    return gaussian_steering(lossy, partition).value > kSteeringThreshold;
  };

  // Scan a fixed grid, then bisect the unique predicate flip.
  constexpr int kGridPoints = 101;
  constexpr double kEtaMin = 1e-4;
  constexpr double kEtaMax = 1.0;
  constexpr double kEtaResolution = 1e-4;

  std::array<double, kGridPoints> etas;
  std::array<bool, kGridPoints> positive;
  for (int i = 0; i < kGridPoints; ++i) {
    etas[i] = kEtaMin + (kEtaMax - kEtaMin) * i / (kGridPoints - 1);
    positive[i] = steers(etas[i]);
  }

  std::vector<std::pair<double, double>> brackets;
  for (int i = 0; i + 1 < kGridPoints; ++i) {
    if (positive[i] != positive[i + 1]) {
      brackets.emplace_back(etas[i], etas[i + 1]);
    }
  }
  if (brackets.empty()) {
    return std::nullopt;
  }
  if (brackets.size() > 1) {
    std::ostringstream msg;
    msg << "steering threshold crosses " << brackets.size()
        << " times on the scan grid:";
    for (const auto& [lo, hi] : brackets) {
      msg << " [" << lo << ", " << hi << "]";
    }
    throw MultiCrossingError(msg.str(), brackets);
  }

  auto [lo, hi] = brackets.front();
  const bool lo_positive = steers(lo);
  while (hi - lo > kEtaResolution) {
    const double mid = 0.5 * (lo + hi);
    if (steers(mid) == lo_positive) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

MonogamyType parse_monogamy_type(const std::string& name) {
  if (name == "I") return MonogamyType::I;
  if (name == "II") return MonogamyType::II;
  if (name == "IIIa") return MonogamyType::IIIa;
  if (name == "IIIb") return MonogamyType::IIIb;
  if (name == "IVa") return MonogamyType::IVa;
  if (name == "IVb") return MonogamyType::IVb;
  throw ParseError("unknown monogamy relation type '" + name + "'");
}

std::string monogamy_type_name(MonogamyType type) {
  switch (type) {
    case MonogamyType::I: return "I";
    case MonogamyType::II: return "II";
    case MonogamyType::IIIa: return "IIIa";
    case MonogamyType::IIIb: return "IIIb";
    case MonogamyType::IVa: return "IVa";
    case MonogamyType::IVb: return "IVb";
  }
  throw DomainError("invalid monogamy type");
}

namespace {

void require_single_mode(const std::vector<int>& party, const char* role,
                         MonogamyType type) {
  if (party.size() != 1) {
    std::ostringstream msg;
    msg << "monogamy relation " << monogamy_type_name(type) << " requires a "
        << "single-mode " << role << " party, got " << party.size() << " modes";
    throw ArityError(msg.str());
  }
}

std::vector<int> concat(const std::vector<int>& a, const std::vector<int>& b) {
  std::vector<int> out = a;
  out.insert(out.end(), b.begin(), b.end());
  return out;
}

}  // namespace

MonogamyReport audit_monogamy(const CovarianceMatrix& cm, MonogamyType type,
                              const MonogamyParties& parties) {
  if (parties.a.empty() || parties.b.empty() || parties.c.empty()) {
    throw ArityError("all three monogamy parties must be non-empty");
  }
  std::set<int> seen;
  for (const auto* party : {&parties.a, &parties.b, &parties.c}) {
    for (int m : *party) {
      if (!seen.insert(m).second) {
        std::ostringstream msg;
        msg << "monogamy parties must be disjoint; mode " << mode_label(m)
            << " is shared";
        throw ArityError(msg.str());
      }
    }
  }

  switch (type) {
    case MonogamyType::I:
    case MonogamyType::IIIa:
    case MonogamyType::IIIb:
      require_single_mode(parties.a, "A", type);
      require_single_mode(parties.b, "B", type);
      require_single_mode(parties.c, "C", type);
      break;
    case MonogamyType::II:
    case MonogamyType::IVb:
      require_single_mode(parties.c, "steered", type);
      break;
    case MonogamyType::IVa:
      break;
  }

  const auto steering_value = [&](const std::vector<int>& from,
                                  const std::vector<int>& to) {
    const SteeringReport rep = gaussian_steering(cm, ModePartition(from, to));
    return NamedValue{rep.direction_label, rep.value};
  };

  MonogamyReport report{type, parties, {}, std::nullopt, false};
  switch (type) {
    case MonogamyType::I:
    case MonogamyType::II: {
      // Two disjoint parties can never both steer the same target.
      const NamedValue ga = steering_value(parties.a, parties.c);
      const NamedValue gb = steering_value(parties.b, parties.c);
      report.terms = {ga, gb};
      report.satisfied = !(ga.value > kSteeringThreshold &&
                           gb.value > kSteeringThreshold);
      break;
    }
    case MonogamyType::IIIa:
    case MonogamyType::IVa: {
      // Steering the union is at least the sum of steering the halves.
      const NamedValue joint =
          steering_value(parties.c, concat(parties.a, parties.b));
      const NamedValue ga = steering_value(parties.c, parties.a);
      const NamedValue gb = steering_value(parties.c, parties.b);
      report.terms = {joint, ga, gb};
      report.residual = joint.value - ga.value - gb.value;
      report.satisfied = *report.residual >= -kSteeringThreshold;
      break;
    }
    case MonogamyType::IIIb:
    case MonogamyType::IVb: {
      // The union steers at least as strongly as its halves combined.
      const NamedValue joint =
          steering_value(concat(parties.a, parties.b), parties.c);
      const NamedValue ga = steering_value(parties.a, parties.c);
      const NamedValue gb = steering_value(parties.b, parties.c);
      report.terms = {joint, ga, gb};
      report.residual = joint.value - ga.value - gb.value;
      report.satisfied = *report.residual >= -kSteeringThreshold;
      break;
    }
  }
  return report;
}

namespace {

// The four cluster nullifiers, in mode order A, B, C, D.
std::array<QuadratureCombo, 4> cluster_nullifiers() {
  using Q = Quadrature;
  return {
      QuadratureCombo{{0, Q::p, 1}, {2, Q::x, -1}, {3, Q::x, -1}},  // pA-xC-xD
      QuadratureCombo{{1, Q::p, 1}, {2, Q::x, -1}, {3, Q::x, -1}},  // pB-xC-xD
      QuadratureCombo{{2, Q::p, 1}, {0, Q::x, -1}, {1, Q::x, -1}},  // pC-xA-xB
      QuadratureCombo{{3, Q::p, 1}, {0, Q::x, -1}, {1, Q::x, -1}},  // pD-xA-xB
  };
}

void require_four_modes(const CovarianceMatrix& cm, const char* what) {
  if (cm.n_modes() != 4) {
    std::ostringstream msg;
    msg << what << " is defined for four-mode states, got " << cm.n_modes()
        << " modes";
    throw ArityError(msg.str());
  }
}

}  // namespace

NullifierReport nullifier_variances(const CovarianceMatrix& cm) {
  require_four_modes(cm, "the nullifier set");
  const auto nullifiers = cluster_nullifiers();
  NullifierReport report;
  for (std::size_t i = 0; i < nullifiers.size(); ++i) {
    report.names[i] = combo_name(nullifiers[i]);
    report.variances[i] = combo_variance(cm, nullifiers[i]);
    // 0 dB corresponds to the three-unit shot-noise floor of a 3-term combo.
    report.squeezing_db[i] = 10.0 * std::log10(report.variances[i] / 3.0);
  }
  return report;
}

InseparabilityReport vlf_inseparability(const CovarianceMatrix& cm) {
  require_four_modes(cm, "the inseparability criterion");
  const NullifierReport nulls = nullifier_variances(cm);
  // Pairings (A,C), (A,D), (B,C), (B,D); each sum must stay below 4.
  constexpr std::array<std::pair<int, int>, 4> pairs{
      {{0, 2}, {0, 3}, {1, 2}, {1, 3}}};
  InseparabilityReport report{{}, true};
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    report.combination_values[i] =
        nulls.variances[pairs[i].first] + nulls.variances[pairs[i].second];
    if (!(report.combination_values[i] < 4.0)) {
      report.fully_inseparable = false;
    }
  }
  return report;
}

}  // namespace steerkit
