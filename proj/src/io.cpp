#include "steerkit/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "steerkit/quadrature.hpp"

namespace steerkit {

namespace {

constexpr const char* kOrdering = "interleaved-xp";

std::string full_precision(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw ParseError("cannot open '" + path.string() + "' for reading");
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw Error("cannot open '" + path.string() + "' for writing");
  }
  out << text;
  if (!out) {
    throw Error("failed to write '" + path.string() + "'");
  }
}

}  // namespace

std::vector<std::string> default_labels(int n_modes) {
  std::vector<std::string> labels;
  labels.reserve(n_modes);
  for (int m = 0; m < n_modes; ++m) {
    labels.push_back(mode_label(m));
  }
  return labels;
}

std::string covariance_to_json(const CovarianceMatrix& cm,
                               const std::vector<std::string>& labels) {
  std::vector<std::string> effective =
      labels.empty() ? default_labels(cm.n_modes()) : labels;
  if (static_cast<int>(effective.size()) != cm.n_modes()) {
    throw DomainError("label count does not match the number of modes");
  }
  nlohmann::json j;
  j["n_modes"] = cm.n_modes();
  j["ordering"] = kOrdering;
  j["labels"] = effective;
  std::vector<double> flat;
  flat.reserve(cm.dim() * cm.dim());
  for (int i = 0; i < cm.dim(); ++i) {
    for (int k = 0; k < cm.dim(); ++k) {
      flat.push_back(cm(i, k));
    }
  }
  j["matrix"] = flat;
  return j.dump(2) + "\n";
}

CovarianceDocument covariance_from_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("invalid JSON: ") + e.what());
  }
  try {
    if (!j.contains("n_modes") || !j["n_modes"].is_number_integer()) {
      throw ParseError("covariance document needs an integer 'n_modes'");
    }
    const int n = j["n_modes"].get<int>();
    if (n < 1) {
      throw ParseError("'n_modes' must be positive");
    }
    if (!j.contains("ordering") || !j["ordering"].is_string()) {
      throw ParseError("covariance document needs an 'ordering' string");
    }
    const std::string ordering = j["ordering"].get<std::string>();
    if (ordering != kOrdering) {
      throw ParseError("unsupported quadrature ordering '" + ordering +
                       "' (expected '" + kOrdering + "')");
    }
    if (!j.contains("matrix") || !j["matrix"].is_array()) {
      throw ParseError("covariance document needs a 'matrix' array");
    }
    const auto& flat = j["matrix"];
    const int dim = 2 * n;
    if (static_cast<int>(flat.size()) != dim * dim) {
      std::ostringstream msg;
      msg << "'matrix' must hold " << dim * dim << " row-major entries, got "
          << flat.size();
      throw ParseError(msg.str());
    }
    Eigen::MatrixXd m(dim, dim);
    for (int i = 0; i < dim; ++i) {
      for (int k = 0; k < dim; ++k) {
        const auto& entry = flat[i * dim + k];
        if (!entry.is_number()) {
          throw ParseError("'matrix' entries must be numbers");
        }
        m(i, k) = entry.get<double>();
      }
    }
    std::vector<std::string> labels;
    if (j.contains("labels")) {
      if (!j["labels"].is_array() ||
          static_cast<int>(j["labels"].size()) != n) {
        throw ParseError("'labels' must list one label per mode");
      }
      for (const auto& l : j["labels"]) {
        if (!l.is_string()) {
          throw ParseError("'labels' entries must be strings");
        }
        labels.push_back(l.get<std::string>());
      }
    } else {
      labels = default_labels(n);
    }
    try {
      return CovarianceDocument{CovarianceMatrix(std::move(m)),
                                std::move(labels)};
    } catch (const DomainError& e) {
      throw ParseError(std::string("invalid covariance data: ") + e.what());
    }
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("invalid covariance document: ") + e.what());
  }
}

void write_covariance_json(const std::filesystem::path& path,
                           const CovarianceMatrix& cm,
                           const std::vector<std::string>& labels) {
  write_file(path, covariance_to_json(cm, labels));
}

CovarianceDocument read_covariance_json(const std::filesystem::path& path) {
  return covariance_from_json(read_file(path));
}

std::string measurements_to_csv(const std::vector<MeasurementRecord>& records) {
  std::string csv = "combo,variance,samples\n";
  for (const auto& record : records) {
    csv += combo_name(record.combo);
    csv += ',';
    csv += full_precision(record.variance);
    csv += ',';
    csv += record.samples ? std::to_string(*record.samples) : "exact";
    csv += '\n';
  }
  return csv;
}

std::vector<MeasurementRecord> measurements_from_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  std::vector<MeasurementRecord> records;
  int line_no = 0;
  bool header_seen = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') {
      line.pop_back();
    }
    if (line.empty()) {
      continue;
    }
    if (!header_seen) {
      if (line != "combo,variance,samples") {
        throw ParseError("line 1: expected header 'combo,variance,samples'");
      }
      header_seen = true;
      continue;
    }
    std::vector<std::string> fields;
    std::size_t start = 0;
    while (true) {
      const std::size_t comma = line.find(',', start);
      fields.push_back(line.substr(start, comma - start));
      if (comma == std::string::npos) {
        break;
      }
      start = comma + 1;
    }
    if (fields.size() != 3) {
      std::ostringstream msg;
      msg << "line " << line_no << ": expected 3 fields, got " << fields.size();
      throw ParseError(msg.str());
    }
    MeasurementRecord record;
    try {
      record.combo = parse_combo(fields[0]);
    } catch (const ParseError& e) {
      std::ostringstream msg;
      msg << "line " << line_no << ": " << e.what();
      throw ParseError(msg.str());
    }
    try {
      std::size_t used = 0;
      record.variance = std::stod(fields[1], &used);
      if (used != fields[1].size()) {
        throw std::invalid_argument("trailing characters");
      }
    } catch (const std::exception&) {
      std::ostringstream msg;
      msg << "line " << line_no << ": invalid variance '" << fields[1] << "'";
      throw ParseError(msg.str());
    }
    if (fields[2] == "exact") {
      record.samples = std::nullopt;
    } else {
      try {
        std::size_t used = 0;
        const long long n = std::stoll(fields[2], &used);
        if (used != fields[2].size() || n <= 0) {
          throw std::invalid_argument("not a positive count");
        }
        record.samples = n;
      } catch (const std::exception&) {
        std::ostringstream msg;
        msg << "line " << line_no << ": invalid sample count '" << fields[2]
            << "' (expected a positive integer or 'exact')";
        throw ParseError(msg.str());
      }
    }
    records.push_back(std::move(record));
  }
  if (!header_seen) {
    throw ParseError("empty measurement file");
  }
  return records;
}

void write_measurements_csv(const std::filesystem::path& path,
                            const std::vector<MeasurementRecord>& records) {
  write_file(path, measurements_to_csv(records));
}

std::vector<MeasurementRecord> read_measurements_csv(
    const std::filesystem::path& path) {
  return measurements_from_csv(read_file(path));
}

}  // namespace steerkit
