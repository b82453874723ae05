// Command-line front end: prepares lossy cluster states, sweeps and audits
// their steering properties, and runs the homodyne tomography pipeline.

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "steerkit/io.hpp"
#include "steerkit/states.hpp"
#include "steerkit/steering.hpp"
#include "steerkit/tomography.hpp"

namespace {

using namespace steerkit;

std::string fmt(double value, int precision) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*g", precision, value);
  return buf;
}

// Round through the textual representation so JSON reports honour --precision.
double rounded(double value, int precision) {
  return std::stod(fmt(value, precision));
}

int parse_mode_letter(const std::string& text, int n_modes) {
  if (text.size() != 1 || text[0] < 'A' || text[0] >= 'A' + n_modes) {
    throw ParseError("invalid mode '" + text + "' (expected a letter A-" +
                     std::string(1, static_cast<char>('A' + n_modes - 1)) +
                     ")");
  }
  return text[0] - 'A';
}

void write_text_output(const std::string& path, const std::string& text,
                       const char* what) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out || !(out << text)) {
    throw Error(std::string("cannot write ") + what + " to '" + path + "'");
  }
  std::cerr << "wrote " << what << " to " << path << "\n";
}

// ---------------------------------------------------------------------------
// prepare

void run_prepare(double r, const std::string& output, int precision) {
  const CovarianceMatrix cm = square_cluster(r);
  write_covariance_json(output, cm);
  std::cout << "wrote 4-mode square cluster state (r = " << fmt(r, precision)
            << ") to " << output << "\n";

  const NullifierReport nulls = nullifier_variances(cm);
  std::cout << "nullifier variances (3-unit vacuum floor):\n";
  for (std::size_t i = 0; i < nulls.names.size(); ++i) {
    std::cout << "  " << nulls.names[i] << ": "
              << fmt(nulls.variances[i], precision) << " ("
              << fmt(nulls.squeezing_db[i], precision) << " dB)\n";
  }

  const PhysicalityReport phys = is_physical(cm);
  std::cout << "purity check: min symplectic eigenvalue "
            << fmt(phys.min_symplectic_eigenvalue, precision) << " -> "
            << (phys.physical ? "physical" : "NOT physical") << "\n";

  const InseparabilityReport insep = vlf_inseparability(cm);
  std::cout << "inseparability combinations (bound 4):";
  for (double v : insep.combination_values) {
    std::cout << " " << fmt(v, precision);
  }
  std::cout << " -> "
            << (insep.fully_inseparable ? "fully inseparable"
                                        : "NOT fully inseparable")
            << "\n";
}

// ---------------------------------------------------------------------------
// sweep

void run_sweep(double r, double eta_min, double eta_max, int steps,
               const std::string& lossy, std::vector<std::string> partitions,
               const std::string& output, int precision) {
  if (!(eta_min >= 0.0) || !(eta_max <= 1.0) || !(eta_min <= eta_max)) {
    throw DomainError("sweep range must satisfy 0 <= eta-min <= eta-max <= 1");
  }
  if (steps < 1) {
    throw DomainError("eta-steps must be at least 1");
  }
  if (steps == 1 && eta_min != eta_max) {
    throw DomainError("a single-step sweep needs eta-min == eta-max");
  }
  if (partitions.empty()) {
    partitions = {"A->B",  "C->D",   "A->BC", "A->BCD",
                  "B->ACD", "C->ABD", "AB->CD"};
  }

  const CovarianceMatrix base = square_cluster(r);
  const int lossy_mode = parse_mode_letter(lossy, base.n_modes());

  struct Row {
    ModePartition forward;
    ModePartition reverse;
    std::string label;
  };
  std::vector<Row> rows;
  for (const auto& text : partitions) {
    ModePartition forward = parse_partition(text, base.n_modes());
    ModePartition reverse(forward.steered, forward.steering);
    std::string label = partition_label(forward);
    rows.push_back({std::move(forward), std::move(reverse), std::move(label)});
  }

  std::string csv = "eta,partition,G_forward,G_reverse\n";
  for (int i = 0; i < steps; ++i) {
    const double eta =
        steps == 1 ? eta_min
                   : eta_min + (eta_max - eta_min) * i / (steps - 1);
    const CovarianceMatrix state =
        apply_loss(base, LossChannel(lossy_mode, eta));
    for (const auto& row : rows) {
      csv += fmt(eta, precision);
      csv += ',';
      csv += row.label;
      csv += ',';
      csv += fmt(gaussian_steering(state, row.forward).value, precision);
      csv += ',';
      csv += fmt(gaussian_steering(state, row.reverse).value, precision);
      csv += '\n';
    }
  }
  write_text_output(output, csv, "sweep CSV");
}

// ---------------------------------------------------------------------------
// critical

void run_critical(double r, const std::string& partition_text,
                  const std::string& lossy) {
  const ModePartition partition = parse_partition(partition_text, 4);
  const int lossy_mode = parse_mode_letter(lossy, 4);
  const std::optional<double> eta = critical_eta(r, partition, lossy_mode);
  if (eta) {
    std::printf("eta* = %.4f\n", *eta);
  } else {
    std::printf("eta* = none\n");
  }
}

// ---------------------------------------------------------------------------
// audit

std::vector<int> mask_modes(unsigned mask) {
  std::vector<int> modes;
  for (int m = 0; mask != 0; ++m, mask >>= 1) {
    if (mask & 1u) {
      modes.push_back(m);
    }
  }
  return modes;
}

// All unordered pairs of disjoint non-empty sub-parties of `pool_mask`.
std::vector<std::pair<unsigned, unsigned>> party_pairs(unsigned pool_mask) {
  std::vector<std::pair<unsigned, unsigned>> pairs;
  for (unsigned p = pool_mask; p != 0; p = (p - 1) & pool_mask) {
    const unsigned rest = pool_mask & ~p;
    for (unsigned q = rest; q != 0; q = (q - 1) & rest) {
      if (p < q) {
        pairs.emplace_back(p, q);
      }
    }
  }
  return pairs;
}

std::vector<MonogamyParties> enumerate_instances(MonogamyType type,
                                                 int n_modes) {
  const unsigned all = (1u << n_modes) - 1u;
  std::vector<MonogamyParties> instances;
  switch (type) {
    case MonogamyType::I:
    case MonogamyType::IIIb:
      for (int i = 0; i < n_modes; ++i)
        for (int j = i + 1; j < n_modes; ++j)
          for (int k = 0; k < n_modes; ++k)
            if (k != i && k != j)
              instances.push_back({{i}, {j}, {k}});
      break;
    case MonogamyType::IIIa:
      for (int k = 0; k < n_modes; ++k)
        for (int i = 0; i < n_modes; ++i)
          for (int j = i + 1; j < n_modes; ++j)
            if (i != k && j != k)
              instances.push_back({{i}, {j}, {k}});
      break;
    case MonogamyType::II:
    case MonogamyType::IVb:
      for (int k = 0; k < n_modes; ++k)
        for (const auto& [p, q] : party_pairs(all & ~(1u << k)))
          instances.push_back({mask_modes(p), mask_modes(q), {k}});
      break;
    case MonogamyType::IVa:
      for (unsigned c = all; c != 0; c = (c - 1) & all)
        for (const auto& [p, q] : party_pairs(all & ~c))
          instances.push_back({mask_modes(p), mask_modes(q), mask_modes(c)});
      break;
  }
  return instances;
}

std::vector<int> parse_party(const std::string& text, int n_modes) {
  if (text.empty()) {
    throw ParseError("empty party in relation instance");
  }
  std::vector<int> modes;
  for (char ch : text) {
    modes.push_back(parse_mode_letter(std::string(1, ch), n_modes));
  }
  return modes;
}

// Explicit instance syntax: "X|Y->C" for relations whose steering side splits
// (I, II, IIIb, IVb), "C->X|Y" for those whose steered side splits (IIIa,
// IVa).
MonogamyParties parse_instance(MonogamyType type, const std::string& text,
                               int n_modes) {
  const std::size_t arrow = text.find("->");
  if (arrow == std::string::npos) {
    throw ParseError("relation instance '" + text + "' must contain '->'");
  }
  const std::string lhs = text.substr(0, arrow);
  const std::string rhs = text.substr(arrow + 2);
  const bool steered_splits =
      type == MonogamyType::IIIa || type == MonogamyType::IVa;
  const std::string& split_side = steered_splits ? rhs : lhs;
  const std::string& whole_side = steered_splits ? lhs : rhs;
  const std::size_t bar = split_side.find('|');
  if (bar == std::string::npos) {
    throw ParseError("relation instance '" + text +
                     "' must separate the two parties with '|' on the " +
                     (steered_splits ? "steered" : "steering") + " side");
  }
  MonogamyParties parties;
  parties.a = parse_party(split_side.substr(0, bar), n_modes);
  parties.b = parse_party(split_side.substr(bar + 1), n_modes);
  parties.c = parse_party(whole_side, n_modes);
  return parties;
}

std::string party_text(const std::vector<int>& modes) {
  std::string text;
  for (int m : modes) {
    text += mode_label(m);
  }
  return text;
}

int run_audit(const std::string& input,
              const std::vector<std::string>& relations,
              const std::string& output, int precision) {
  const CovarianceDocument doc = read_covariance_json(input);
  const int n = doc.cm.n_modes();

  nlohmann::json results = nlohmann::json::array();
  int violations = 0;
  int invalid = 0;
  int audited = 0;

  const auto audit_one = [&](MonogamyType type, const MonogamyParties& parties,
                             const std::string& instance_text) {
    nlohmann::json entry;
    entry["type"] = monogamy_type_name(type);
    try {
      const MonogamyReport report = audit_monogamy(doc.cm, type, parties);
      entry["parties"] = {{"a", party_text(report.parties.a)},
                          {"b", party_text(report.parties.b)},
                          {"c", party_text(report.parties.c)}};
      nlohmann::json terms = nlohmann::json::array();
      for (const auto& term : report.terms) {
        terms.push_back(
            {{"name", term.name}, {"value", rounded(term.value, precision)}});
      }
      entry["terms"] = std::move(terms);
      if (report.residual) {
        entry["residual"] = rounded(*report.residual, precision);
      }
      entry["satisfied"] = report.satisfied;
      ++audited;
      if (!report.satisfied) {
        ++violations;
      }
    } catch (const ArityError& e) {
      entry["instance"] = instance_text;
      entry["error"] = e.what();
      ++invalid;
    }
    results.push_back(std::move(entry));
  };

  for (const auto& spec : relations) {
    const std::size_t colon = spec.find(':');
    const MonogamyType type = parse_monogamy_type(spec.substr(0, colon));
    if (colon == std::string::npos) {
      for (const auto& parties : enumerate_instances(type, n)) {
        audit_one(type, parties, spec);
      }
    } else {
      const std::string instance = spec.substr(colon + 1);
      audit_one(type, parse_instance(type, instance, n), spec);
    }
  }

  write_text_output(output, results.dump(2) + "\n", "audit report");
  std::cerr << "audited " << audited << " instances: "
            << (violations == 0 ? "all satisfied"
                                : std::to_string(violations) + " VIOLATED");
  if (invalid > 0) {
    std::cerr << " (" << invalid << " invalid)";
  }
  std::cerr << "\n";

  if (violations > 0) {
    return 4;
  }
  return invalid > 0 ? 2 : 0;
}

// ---------------------------------------------------------------------------
// tomo

void run_tomo(const std::string& input, std::int64_t samples,
              std::uint64_t seed, const std::string& measurements_in,
              const std::string& dump_path, const std::string& output,
              int precision) {
  const CovarianceDocument doc = read_covariance_json(input);

  std::vector<MeasurementRecord> records;
  std::optional<std::uint64_t> seed_provenance;
  if (!measurements_in.empty()) {
    records = read_measurements_csv(measurements_in);
  } else {
    std::optional<SamplingSpec> sampling;
    if (samples > 0) {
      sampling = SamplingSpec{samples, seed};
      seed_provenance = seed;
    }
    records =
        simulate_variances(doc.cm, measurement_plan(doc.cm.n_modes()), sampling);
  }
  if (!dump_path.empty()) {
    write_measurements_csv(dump_path, records);
    std::cerr << "wrote measurement records to " << dump_path << "\n";
  }

  const ReconstructionResult recon = reconstruct(records, seed_provenance);

  const Eigen::MatrixXd diff = recon.cm.data() - doc.cm.data();
  const double frobenius = diff.norm();
  const double relative = frobenius / doc.cm.data().norm();

  nlohmann::json report;
  if (recon.sampled) {
    report["source"]["mode"] = "sampled";
    if (recon.samples) {
      report["source"]["samples"] = *recon.samples;
    }
    if (recon.seed) {
      report["source"]["seed"] = *recon.seed;
    }
  } else {
    report["source"]["mode"] = "exact";
  }
  report["frobenius_error"] = rounded(frobenius, precision);
  report["relative_frobenius_error"] = rounded(relative, precision);
  report["min_symplectic_eigenvalue"] =
      rounded(recon.min_symplectic_eigenvalue, precision);
  report["identity_discrepancy"] =
      rounded(recon.identity_discrepancy, precision);

  nlohmann::json steering = nlohmann::json::array();
  for (const char* text :
       {"A->B", "B->A", "C->D", "D->C", "A->BC", "BC->A", "CD->A"}) {
    const ModePartition partition = parse_partition(text, doc.cm.n_modes());
    steering.push_back(
        {{"partition", text},
         {"direct", rounded(gaussian_steering(doc.cm, partition).value,
                            precision)},
         {"reconstructed",
          rounded(gaussian_steering(recon.cm, partition).value, precision)}});
  }
  report["steering"] = std::move(steering);

  write_text_output(output, report.dump(2) + "\n", "tomography report");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "Gaussian EPR steering toolkit: four-mode cluster states under loss"};
  app.require_subcommand(1);
  app.set_config("--config", "",
                 "Read options from a key=value config file (sections or "
                 "dotted keys select subcommands; flags override the file)");

  int precision = 6;
  app.add_option("-p,--precision", precision,
                 "Significant digits for printed values")
      ->capture_default_str()
      ->check(CLI::Range(1, 17));

  // prepare ------------------------------------------------------------
  auto* prepare = app.add_subcommand(
      "prepare", "Build the square cluster state and write its CM JSON");
  prepare->fallthrough();
  double prepare_r = kDefaultSqueezing;
  std::string prepare_output = "cluster.json";
  prepare->add_option("--r", prepare_r, "Squeezing parameter")
      ->capture_default_str();
  prepare->add_option("-o,--output", prepare_output, "Output CM JSON path")
      ->capture_default_str();

  // sweep --------------------------------------------------------------
  auto* sweep = app.add_subcommand(
      "sweep", "Steering values vs transmittance, as plot-ready CSV");
  sweep->fallthrough();
  double sweep_r = kDefaultSqueezing;
  double eta_min = 1e-4;
  double eta_max = 1.0;
  int eta_steps = 101;
  std::string sweep_lossy = "A";
  std::vector<std::string> sweep_partitions;
  std::string sweep_output;
  sweep->add_option("--r", sweep_r, "Squeezing parameter")
      ->capture_default_str();
  sweep->add_option("--eta-min", eta_min, "Lowest transmittance")
      ->capture_default_str();
  sweep->add_option("--eta-max", eta_max, "Highest transmittance")
      ->capture_default_str();
  sweep->add_option("--eta-steps", eta_steps, "Number of grid points")
      ->capture_default_str();
  sweep->add_option("--lossy-mode", sweep_lossy, "Mode the loss acts on")
      ->capture_default_str();
  sweep->add_option("--partition", sweep_partitions,
                    "Bipartition(s) like BC->A (repeatable)")
      ->delimiter(',');
  sweep->add_option("-o,--output", sweep_output,
                    "CSV output path (stdout if omitted)");

  // critical -----------------------------------------------------------
  auto* critical = app.add_subcommand(
      "critical", "Critical transmittance where steering (dis)appears");
  critical->fallthrough();
  double critical_r = kDefaultSqueezing;
  std::string critical_partition;
  std::string critical_lossy = "A";
  critical->add_option("--r", critical_r, "Squeezing parameter")
      ->capture_default_str();
  critical->add_option("--partition", critical_partition,
                       "Bipartition like A->BC")
      ->required();
  critical->add_option("--lossy-mode", critical_lossy, "Mode the loss acts on")
      ->capture_default_str();

  // audit --------------------------------------------------------------
  auto* audit = app.add_subcommand(
      "audit", "Check steering monogamy relations on a CM JSON file");
  audit->fallthrough();
  std::string audit_input;
  std::vector<std::string> audit_relations = {"I",    "II",  "IIIa",
                                              "IIIb", "IVa", "IVb"};
  std::string audit_output;
  audit->add_option("-i,--input", audit_input, "CM JSON path")->required();
  audit
      ->add_option("--relations", audit_relations,
                   "Relation types, optionally with an explicit instance "
                   "(e.g. IVb:C|D->B or IVa:AB->C|D)")
      ->delimiter(',')
      ->capture_default_str();
  audit->add_option("-o,--output", audit_output,
                    "JSON report path (stdout if omitted)");

  // tomo ---------------------------------------------------------------
  auto* tomo = app.add_subcommand(
      "tomo", "Simulate or ingest homodyne variances and reconstruct the CM");
  tomo->fallthrough();
  std::string tomo_input;
  std::int64_t tomo_samples = 0;
  std::uint64_t tomo_seed = 1;
  std::string tomo_measurements;
  std::string tomo_dump;
  std::string tomo_output;
  tomo->add_option("-i,--input", tomo_input, "Reference CM JSON path")
      ->required();
  auto* samples_opt =
      tomo->add_option("--samples", tomo_samples,
                       "Samples per combination (0 = exact variances)")
          ->capture_default_str();
  tomo->add_option("--seed", tomo_seed, "Master RNG seed")
      ->capture_default_str();
  tomo->add_option("--measurements", tomo_measurements,
                   "Ingest a measurement CSV instead of simulating")
      ->excludes(samples_opt);
  tomo->add_option("--dump-measurements", tomo_dump,
                   "Also write the measurement records as CSV");
  tomo->add_option("-o,--output", tomo_output,
                   "JSON report path (stdout if omitted)");

  int exit_code = 0;
  prepare->callback(
      [&] { run_prepare(prepare_r, prepare_output, precision); });
  sweep->callback([&] {
    run_sweep(sweep_r, eta_min, eta_max, eta_steps, sweep_lossy,
              sweep_partitions, sweep_output, precision);
  });
  critical->callback(
      [&] { run_critical(critical_r, critical_partition, critical_lossy); });
  audit->callback([&] {
    exit_code = run_audit(audit_input, audit_relations, audit_output,
                          precision);
  });
  tomo->callback([&] {
    run_tomo(tomo_input, tomo_samples, tomo_seed, tomo_measurements, tomo_dump,
             tomo_output, precision);
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  } catch (const steerkit::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const steerkit::ArityError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const steerkit::IncompletePlanError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const steerkit::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
  return exit_code;
}
