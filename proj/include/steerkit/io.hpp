#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "steerkit/covariance.hpp"
#include "steerkit/tomography.hpp"

// On-disk formats: covariance matrices as JSON documents, measurement records
// as CSV. Both round-trip losslessly.

namespace steerkit {

struct CovarianceDocument {
  CovarianceMatrix cm;
  std::vector<std::string> labels;  // one per mode
};

/// Default mode labels "A", "B", ...
std::vector<std::string> default_labels(int n_modes);

/// JSON document: {"n_modes", "ordering": "interleaved-xp", "labels",
/// "matrix" (row-major, 2n x 2n entries)}.
std::string covariance_to_json(const CovarianceMatrix& cm,
                               const std::vector<std::string>& labels = {});
CovarianceDocument covariance_from_json(const std::string& text);

void write_covariance_json(const std::filesystem::path& path,
                           const CovarianceMatrix& cm,
                           const std::vector<std::string>& labels = {});
CovarianceDocument read_covariance_json(const std::filesystem::path& path);

/// CSV with header "combo,variance,samples"; the samples column holds an
/// integer count or the word "exact". This is also the ingestion format for
/// externally measured variance files.
std::string measurements_to_csv(const std::vector<MeasurementRecord>& records);
std::vector<MeasurementRecord> measurements_from_csv(const std::string& text);

void write_measurements_csv(const std::filesystem::path& path,
                            const std::vector<MeasurementRecord>& records);
std::vector<MeasurementRecord> read_measurements_csv(
    const std::filesystem::path& path);

}  // namespace steerkit
