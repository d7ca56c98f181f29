#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "hua/core/complex_matrix.hpp"

namespace hua {

inline constexpr int report_schema = 1;
inline constexpr const char *library_version = "0.1.0";

/// Running max / mean of nonnegative residuals, accumulated in call order.
class ResidualStats {
public:
    void add(double r)
    {
        if (std::isnan(r)) {
            nan_ = true;
        }
        max_ = std::max(max_, r);
        sum_ += r;
        ++count_;
    }
    double max() const { return nan_ ? std::numeric_limits<double>::quiet_NaN() : max_; }
    double mean() const { return count_ == 0 ? 0.0 : sum_ / static_cast<double>(count_); }
    std::size_t count() const { return count_; }

private:
    double max_ = 0.0;
    double sum_ = 0.0;
    std::size_t count_ = 0;
    bool nan_ = false;
};

/// How a record's residual is judged against its tolerance.
enum class Comparison {
    /// pass iff max residual < tolerance
    below,
    /// pass iff max residual >= tolerance (negative controls)
    at_least,
};

struct CheckRecord {
    std::string name;
    /// Plain-language statement of the identity being checked.
    std::string anchor;
    double residual_max = 0.0;
    double residual_mean = 0.0;
    std::size_t samples = 0;
    double tolerance = 0.0;
    Comparison comparison = Comparison::below;
    bool pass = false;
    /// Extra fields (labels, witnesses); complex numbers as [re, im].
    nlohmann::json details = nlohmann::json::object();
};

inline CheckRecord make_record(std::string name, std::string anchor, const ResidualStats &stats, double tolerance,
                               Comparison cmp = Comparison::below)
{
    CheckRecord r;
    r.name = std::move(name);
    r.anchor = std::move(anchor);
    r.residual_max = stats.max();
    r.residual_mean = stats.mean();
    r.samples = stats.count();
    r.tolerance = tolerance;
    r.comparison = cmp;
    const bool finite = !std::isnan(r.residual_max);
    r.pass = finite && stats.count() > 0
             && (cmp == Comparison::below ? r.residual_max < tolerance : r.residual_max >= tolerance);
    return r;
}

inline nlohmann::json complex_json(Complex z)
{
    return nlohmann::json::array({z.real(), z.imag()});
}

inline Complex complex_from_json(const nlohmann::json &j)
{
    if (!j.is_array() || j.size() != 2) {
        throw std::invalid_argument("complex number must be a [re, im] pair");
    }
    return {j[0].get<double>(), j[1].get<double>()};
}

namespace detail {

inline nlohmann::json number_json(double x)
{
    // JSON has no NaN / infinity; spell them out.
    if (std::isnan(x)) {
        return "nan";
    }
    if (std::isinf(x)) {
        return x > 0 ? "inf" : "-inf";
    }
    return x;
}

inline double number_from_json(const nlohmann::json &j)
{
    if (j.is_string()) {
        const auto s = j.get<std::string>();
        if (s == "nan") {
            return std::numeric_limits<double>::quiet_NaN();
        }
        if (s == "inf") {
            return std::numeric_limits<double>::infinity();
        }
        if (s == "-inf") {
            return -std::numeric_limits<double>::infinity();
        }
        throw std::invalid_argument("bad number: " + s);
    }
    return j.get<double>();
}

inline std::string format_g(double x, int digits = 3)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*g", digits, x);
    return buf;
}

} // namespace detail

struct VerificationReport {
    std::string campaign;
    std::vector<CheckRecord> records;

    bool pass() const
    {
        return !records.empty()
               && std::all_of(records.begin(), records.end(), [](const CheckRecord &r) { return r.pass; });
    }

    nlohmann::json to_json() const
    {
        nlohmann::json j;
        j["schema"] = report_schema;
        j["campaign"] = campaign;
        j["environment"] = {{"precision", "binary64"}, {"version", library_version}};
        j["pass"] = pass();
        nlohmann::json recs = nlohmann::json::array();
        for (const auto &r : records) {
            recs.push_back({{"name", r.name},
                            {"anchor", r.anchor},
                            {"residual", {{"max", detail::number_json(r.residual_max)},
                                          {"mean", detail::number_json(r.residual_mean)}}},
                            {"samples", r.samples},
                            {"tolerance", r.tolerance},
                            {"comparison", r.comparison == Comparison::below ? "below" : "at_least"},
                            {"pass", r.pass},
                            {"details", r.details}});
        }
        j["records"] = recs;
        return j;
    }

    static VerificationReport from_json(const nlohmann::json &j)
    {
        if (!j.contains("schema") || j.at("schema").get<int>() != report_schema) {
            throw std::invalid_argument("unsupported report schema");
        }
        VerificationReport rep;
        rep.campaign = j.at("campaign").get<std::string>();
        for (const auto &r : j.at("records")) {
            CheckRecord c;
            c.name = r.at("name").get<std::string>();
            c.anchor = r.at("anchor").get<std::string>();
            c.residual_max = detail::number_from_json(r.at("residual").at("max"));
            c.residual_mean = detail::number_from_json(r.at("residual").at("mean"));
            c.samples = r.at("samples").get<std::size_t>();
            c.tolerance = r.at("tolerance").get<double>();
            c.comparison = r.at("comparison").get<std::string>() == "at_least" ? Comparison::at_least : Comparison::below;
            c.pass = r.at("pass").get<bool>();
            c.details = r.value("details", nlohmann::json::object());
            rep.records.push_back(std::move(c));
        }
        return rep;
    }

    std::string to_text() const
    {
        std::ostringstream os;
        os << "campaign " << campaign << ": " << (pass() ? "PASS" : "FAIL") << " (" << records.size() << " checks)\n";
        for (const auto &r : records) {
            os << (r.pass ? "  PASS  " : "  FAIL  ") << r.name << "\n"
               << "        " << r.anchor << "\n"
               << "        max " << detail::format_g(r.residual_max) << ", mean " << detail::format_g(r.residual_mean)
               << (r.comparison == Comparison::below ? ", need < " : ", need >= ") << detail::format_g(r.tolerance)
               << ", n = " << r.samples << "\n";
            if (!r.details.empty()) {
                os << "        " << r.details.dump() << "\n";
            }
        }
        return os.str();
    }
};

/// Concatenates records; the campaign id lists the inputs.
inline VerificationReport merge_reports(const std::vector<VerificationReport> &reports)
{
    if (reports.empty()) {
        throw std::invalid_argument("merge_reports needs at least one report");
    }
    VerificationReport out;
    out.campaign = "merge(";
    for (std::size_t i = 0; i < reports.size(); ++i) {
        out.campaign += (i ? "," : "") + reports[i].campaign;
        for (auto r : reports[i].records) {
            r.name = reports[i].campaign + ": " + r.name;
            out.records.push_back(std::move(r));
        }
    }
    out.campaign += ")";
    return out;
}

} // namespace hua
