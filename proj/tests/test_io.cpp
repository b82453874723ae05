#include <cstdio>
#include <filesystem>
#include <string>

#include "doctest.h"
#include "steerkit/io.hpp"
#include "steerkit/states.hpp"
#include "steerkit/tomography.hpp"

using namespace steerkit;

namespace {

// Unique scratch file that cleans up after itself.
struct TempFile {
  std::filesystem::path path;
  explicit TempFile(const char* name)
      : path(std::filesystem::temp_directory_path() /
             (std::string("steerkit_test_") + name)) {}
  ~TempFile() { std::filesystem::remove(path); }
};

}  // namespace

TEST_CASE("covariance JSON round-trips bit-exactly") {
  const CovarianceMatrix cm =
      apply_loss(square_cluster(), LossChannel(0, 0.7351));
  const CovarianceDocument doc = covariance_from_json(covariance_to_json(cm));
  // The serializer emits shortest-round-trip doubles, so this is bit-exact.
  CHECK((doc.cm.data() - cm.data()).cwiseAbs().maxCoeff() == 0.0);
  CHECK(doc.labels == std::vector<std::string>{"A", "B", "C", "D"});

  const std::string with_labels =
      covariance_to_json(CovarianceMatrix::vacuum(2), {"sig", "idl"});
  const CovarianceDocument named = covariance_from_json(with_labels);
  CHECK(named.labels == std::vector<std::string>{"sig", "idl"});
}

TEST_CASE("covariance JSON file round-trip") {
  TempFile tmp("cm.json");
  const CovarianceMatrix cm = square_cluster(0.2);
  write_covariance_json(tmp.path, cm);
  const CovarianceDocument doc = read_covariance_json(tmp.path);
  CHECK((doc.cm.data() - cm.data()).cwiseAbs().maxCoeff() == 0.0);

  CHECK_THROWS_AS(read_covariance_json("/nonexistent/steerkit.json"), Error);
}

TEST_CASE("covariance JSON rejects malformed documents") {
  CHECK_THROWS_AS(covariance_from_json("not json at all"), ParseError);
  CHECK_THROWS_AS(covariance_from_json("[1,2,3]"), ParseError);
  CHECK_THROWS_AS(covariance_from_json("{}"), ParseError);

  // Start from a valid document and break one field at a time.
  const std::string good = covariance_to_json(CovarianceMatrix::vacuum(1));
  const auto broken = [&](const std::string& from, const std::string& to) {
    std::string text = good;
    const std::size_t at = text.find(from);
    REQUIRE(at != std::string::npos);
    text.replace(at, from.size(), to);
    return text;
  };

  // Wrong ordering tag.
  CHECK_THROWS_AS(covariance_from_json(broken("interleaved-xp", "block-xxpp")),
                  ParseError);
  // Mode count disagrees with the matrix size.
  CHECK_THROWS_AS(covariance_from_json(broken("\"n_modes\": 1", "\"n_modes\": 2")),
                  ParseError);
  // Non-numeric matrix entry.
  CHECK_THROWS_AS(covariance_from_json(broken("1.0", "\"one\"")), ParseError);
  // Label count disagrees with the mode count.
  const std::string extra_label =
      broken("\"labels\": [\n    \"A\"\n  ]", "\"labels\": [\"A\", \"B\"]");
  CHECK_THROWS_AS(covariance_from_json(extra_label), ParseError);
}

TEST_CASE("asymmetric JSON matrices surface as parse errors") {
  const std::string text = R"({
    "n_modes": 1,
    "ordering": "interleaved-xp",
    "matrix": [1.0, 0.5, -0.5, 1.0]
  })";
  CHECK_THROWS_AS(covariance_from_json(text), ParseError);
}

TEST_CASE("measurement CSV round-trips exact and sampled records") {
  const CovarianceMatrix cm = apply_loss(square_cluster(), LossChannel(0, 0.6));

  SUBCASE("exact records") {
    const auto records = simulate_variances(cm, measurement_plan(4));
    const auto back = measurements_from_csv(measurements_to_csv(records));
    REQUIRE(back.size() == records.size());
    for (std::size_t i = 0; i < records.size(); ++i) {
      CHECK(combo_name(back[i].combo) == combo_name(records[i].combo));
      CHECK(back[i].variance == records[i].variance);
      CHECK_FALSE(back[i].samples.has_value());
    }
  }
  SUBCASE("sampled records keep their counts") {
    const auto records =
        simulate_variances(cm, measurement_plan(4), SamplingSpec{500, 9});
    const auto back = measurements_from_csv(measurements_to_csv(records));
    for (std::size_t i = 0; i < records.size(); ++i) {
      CHECK(back[i].variance == records[i].variance);
      REQUIRE(back[i].samples.has_value());
      CHECK(*back[i].samples == 500);
    }
  }
  SUBCASE("file round-trip") {
    TempFile tmp("meas.csv");
    const auto records = simulate_variances(cm, measurement_plan(4));
    write_measurements_csv(tmp.path, records);
    const auto back = read_measurements_csv(tmp.path);
    REQUIRE(back.size() == records.size());
    CHECK(back[10].variance == records[10].variance);

    CHECK_THROWS_AS(read_measurements_csv("/nonexistent/steerkit.csv"), Error);
  }
}

TEST_CASE("measurement CSV rejects malformed input") {
  const std::string header = "combo,variance,samples\n";
  CHECK_THROWS_AS(measurements_from_csv(""), ParseError);
  CHECK_THROWS_AS(measurements_from_csv("wrong,header,line\nxA,1.0,exact\n"),
                  ParseError);
  // Field count.
  CHECK_THROWS_AS(measurements_from_csv(header + "xA,1.0\n"), ParseError);
  CHECK_THROWS_AS(measurements_from_csv(header + "xA,1.0,exact,extra\n"),
                  ParseError);
  // Unparsable combo, variance, sample count.
  CHECK_THROWS_AS(measurements_from_csv(header + "qA,1.0,exact\n"), ParseError);
  CHECK_THROWS_AS(measurements_from_csv(header + "xA,abc,exact\n"), ParseError);
  CHECK_THROWS_AS(measurements_from_csv(header + "xA,1.0,soon\n"), ParseError);
  CHECK_THROWS_AS(measurements_from_csv(header + "xA,1.0,12.5\n"), ParseError);
}
