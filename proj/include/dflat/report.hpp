#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace dflat {

struct FirstViolation {
    std::vector<double> where; // sample point (x then y, or (b^2, s))
    double value = 0;
};

struct VerificationReport {
    std::string task;
    long samples = 0;
    double max_residual = 0.0;
    double sum_residual = 0.0;
    double tolerance = 0.0;
    bool pass = false;
    std::optional<FirstViolation> first_violation;
    double wall_time_ms = 0.0;

    void add(double abs_residual, std::vector<double> where) {
        ++samples;
        sum_residual += abs_residual;
        if (abs_residual > max_residual) max_residual = abs_residual;
        if (abs_residual > tolerance && !first_violation)
            first_violation = FirstViolation{std::move(where), abs_residual};
    }

    double mean_residual() const { return samples ? sum_residual / samples : 0.0; }
    void finalize() { pass = max_residual <= tolerance; }
};

// Ordered key/value configuration echo; values already formatted.
using ConfigEcho = std::vector<std::pair<std::string, std::string>>;

// 17-significant-digit number formatting shared by all emitters; JSON output
// must be byte-identical for identical (argv, seed), so wall_time_ms is
// reported in text only.
std::string format_double(double v);
std::string json_quote(const std::string& s);

std::string report_to_json(const std::string& task, const ConfigEcho& config,
                           const std::vector<VerificationReport>& reports);
std::string report_to_text(const std::string& task, const ConfigEcho& config,
                           const std::vector<VerificationReport>& reports);

} // namespace dflat
