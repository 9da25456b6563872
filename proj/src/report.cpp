#include "dflat/report.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

namespace dflat {

std::string format_double(double v) {
    if (std::isnan(v)) return "\"nan\"";
    if (std::isinf(v)) return v > 0 ? "\"inf\"" : "\"-inf\"";
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::string json_quote(const std::string& s) {
    std::string out = "\"";
    for (char c : s) {
        switch (c) {
            case '"': out += "\\\""; break;
            case '\\': out += "\\\\"; break;
            case '\n': out += "\\n"; break;
            case '\t': out += "\\t"; break;
            default: out += c;
        }
    }
    out += "\"";
    return out;
}

namespace {

std::string report_json(const VerificationReport& r) {
    std::ostringstream os;
    os << "{";
    os << "\"name\":" << json_quote(r.task);
    os << ",\"samples\":" << r.samples;
    os << ",\"max_residual\":" << format_double(r.max_residual);
    os << ",\"mean_residual\":" << format_double(r.mean_residual());
    os << ",\"tolerance\":" << format_double(r.tolerance);
    os << ",\"pass\":" << (r.pass ? "true" : "false");
    os << ",\"first_violation\":";
    if (r.first_violation) {
        os << "{\"where\":[";
        for (size_t i = 0; i < r.first_violation->where.size(); ++i)
            os << (i ? "," : "") << format_double(r.first_violation->where[i]);
        os << "],\"value\":" << format_double(r.first_violation->value) << "}";
    } else {
        os << "null";
    }
    os << "}";
    return os.str();
}

} // namespace

std::string report_to_json(const std::string& task, const ConfigEcho& config,
                           const std::vector<VerificationReport>& reports) {
    // aggregate over the checks; each element of "checks" preserves the
    // pass == (max_residual <= tolerance) invariant on its own
    long samples = 0;
    double max_res = 0.0, sum_res = 0.0, tol = 0.0;
    bool pass = true;
    for (const auto& r : reports) {
        samples += r.samples;
        sum_res += r.sum_residual;
        max_res = std::max(max_res, r.max_residual);
        tol = std::max(tol, r.tolerance);
        pass = pass && r.pass;
    }
    std::ostringstream os;
    os << "{\"task\":" << json_quote(task) << ",\"config\":{";
    for (size_t i = 0; i < config.size(); ++i) {
        os << (i ? "," : "") << json_quote(config[i].first) << ":" << config[i].second;
    }
    os << "},\"report\":{";
    os << "\"samples\":" << samples;
    os << ",\"max_residual\":" << format_double(max_res);
    os << ",\"mean_residual\":" << format_double(samples ? sum_res / samples : 0.0);
    os << ",\"tolerance\":" << format_double(tol);
    os << ",\"pass\":" << (pass ? "true" : "false");
    os << ",\"checks\":[";
    for (size_t i = 0; i < reports.size(); ++i)
        os << (i ? "," : "") << report_json(reports[i]);
    os << "]}}\n";
    return os.str();
}

std::string report_to_text(const std::string& task, const ConfigEcho& config,
                           const std::vector<VerificationReport>& reports) {
    std::ostringstream os;
    os << "task: " << task << "\n";
    for (const auto& [k, v] : config) os << "  " << k << " = " << v << "\n";
    for (const auto& r : reports) {
        os << (r.pass ? "PASS" : "FAIL") << "  " << r.task << ": max " << format_double(r.max_residual)
           << "  mean " << format_double(r.mean_residual()) << "  tol "
           << format_double(r.tolerance) << "  samples " << r.samples << "  ("
           << r.wall_time_ms << " ms)\n";
        if (r.first_violation) {
            os << "      first violation " << format_double(r.first_violation->value)
               << " at (";
            for (size_t i = 0; i < r.first_violation->where.size(); ++i)
                os << (i ? ", " : "") << r.first_violation->where[i];
            os << ")\n";
        }
    }
    return os.str();
}

} // namespace dflat
