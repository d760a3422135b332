#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "zigzag/bitstream.hpp"

namespace zigzag::stats {

struct BatteryConfig {
    double alpha = 0.01;
    int block_frequency_block = 128;
    int serial_m = 16;
    int apen_m = 10;
    int linear_complexity_block = 500;
    int template_m = 9;
    /// Battery pass threshold on the non-overlapping-template pass fraction.
    double template_pass_threshold = 0.98;
};

struct SubTestResult {
    std::string name;
    std::vector<double> p_values;
    double pass_fraction = -1.0;  ///< only for non-overlapping templates
    bool skipped = false;
    std::string note;

    bool passed(const BatteryConfig& cfg) const;
};

struct BiasEstimate {
    double fraction;  ///< |#ones/n - 1/2|
    double percent;   ///< fraction * 100
};

struct TestReport {
    std::vector<SubTestResult> tests;
    std::size_t length = 0;
    double alpha = 0.01;
    BiasEstimate bias{};
    double bias_percent_x2 = 0.0;  ///< |fraction of ones - 0.5| * 100 * 2
    nlohmann::json meta;

    bool all_pass() const;
    int n_failed() const;
    int n_skipped() const;

    nlohmann::json to_json() const;
    /// Plain-text two-column table, one row per reported p-value plus bias.
    std::string to_table() const;
};

/// Runs the SP 800-22 subset (apen, block frequency, cumulative sums x2, FFT,
/// frequency, linear complexity, longest run, non-overlapping templates,
/// overlapping templates, rank, runs, serial x2) plus the direct bias
/// estimate. Sub-tests below their standard minimum length are reported as
/// skipped ("insufficient data"). Sub-tests run in parallel; the report is
/// deterministic for a given stream.
TestReport run_battery(const dynamics::BitStream& bits, const BatteryConfig& cfg = {});

/// |#ones/n - 1/2|. Requires length >= 10^4.
BiasEstimate bias_estimate(const dynamics::BitStream& bits);

/// Individual tests on an unpacked 0/1 sequence, exposed for reference-vector
/// checks. Each returns a SubTestResult (possibly skipped).
namespace tests {

using Bits = std::span<const std::uint8_t>;

SubTestResult frequency(Bits e);
SubTestResult block_frequency(Bits e, int M = 128);
SubTestResult cumulative_sums(Bits e);
SubTestResult runs(Bits e);
SubTestResult longest_run(Bits e);
SubTestResult rank(Bits e);
SubTestResult dft(Bits e);
SubTestResult non_overlapping_templates(Bits e, int m, double alpha);
SubTestResult overlapping_templates(Bits e, int m = 9);
SubTestResult serial(Bits e, int m = 16);
SubTestResult approximate_entropy(Bits e, int m = 10);
SubTestResult linear_complexity(Bits e, int M = 500);

}  // namespace tests

}  // namespace zigzag::stats
