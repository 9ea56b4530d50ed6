#include "patsched/report.hpp"

#include <algorithm>
#include <fstream>
#include <stdexcept>

#include "patsched/scenario.hpp"

namespace patsched {

std::optional<TardinessMode> parse_tardiness_mode(std::string_view text) {
    if (text == "literal") return TardinessMode::Literal;
    if (text == "clamped") return TardinessMode::Clamped;
    if (text == "both") return TardinessMode::Both;
    return std::nullopt;
}

MetricRow to_row(const MetricsReport& report) {
    MetricRow row;
    row.cmax = report.cmax;
    row.tmax = report.tmax;
    row.sum_completion = report.sum_completion;
    row.sum_tardiness = report.sum_tardiness;
    row.sum_weighted_completion = report.sum_weighted_completion;
    row.sum_weighted_tardiness = report.sum_weighted_tardiness;
    row.messages = report.message_count;
    row.idle_ticks = report.idle_ticks;
    row.tmax_clamped = report.clamped.tmax;
    row.sum_tardiness_clamped = report.clamped.sum_tardiness;
    row.sum_weighted_tardiness_clamped = report.clamped.sum_weighted_tardiness;
    return row;
}

MetricRow mean_row(std::span<const MetricRow> rows) {
    if (rows.empty()) {
        throw std::invalid_argument("mean of zero rows");
    }
    MetricRow sum;
    for (const auto& r : rows) {
        sum.cmax += r.cmax;
        sum.tmax += r.tmax;
        sum.sum_completion += r.sum_completion;
        sum.sum_tardiness += r.sum_tardiness;
        sum.sum_weighted_completion += r.sum_weighted_completion;
        sum.sum_weighted_tardiness += r.sum_weighted_tardiness;
        sum.messages += r.messages;
        sum.idle_ticks += r.idle_ticks;
        sum.tmax_clamped += r.tmax_clamped;
        sum.sum_tardiness_clamped += r.sum_tardiness_clamped;
        sum.sum_weighted_tardiness_clamped += r.sum_weighted_tardiness_clamped;
    }
    const Rational n(static_cast<std::int64_t>(rows.size()));
    for (auto* field :
         {&sum.cmax, &sum.tmax, &sum.sum_completion, &sum.sum_tardiness,
          &sum.sum_weighted_completion, &sum.sum_weighted_tardiness, &sum.messages,
          &sum.idle_ticks, &sum.tmax_clamped, &sum.sum_tardiness_clamped,
          &sum.sum_weighted_tardiness_clamped}) {
        *field /= n;
    }
    return sum;
}

std::string render_report(std::span<const ReportEntry> entries, TardinessMode mode) {
    std::vector<const ReportEntry*> ordered;
    for (const auto& e : entries) {
        ordered.push_back(&e);
    }
    std::stable_sort(ordered.begin(), ordered.end(), [](const auto* a, const auto* b) {
        return a->policy < b->policy;
    });

    const bool clamped = mode == TardinessMode::Clamped;
    std::string out(kReportHeader);
    out += '\n';
    for (const auto* e : ordered) {
        const auto& r = e->row;
        out += e->label;
        for (const auto* value :
             {&r.cmax, clamped ? &r.tmax_clamped : &r.tmax, &r.sum_completion,
              clamped ? &r.sum_tardiness_clamped : &r.sum_tardiness, &r.sum_weighted_completion,
              clamped ? &r.sum_weighted_tardiness_clamped : &r.sum_weighted_tardiness,
              &r.messages, &r.idle_ticks}) {
            out += ',';
            out += to_decimal(*value);
        }
        out += '\n';
    }
    return out;
}

void write_report(std::span<const ReportEntry> entries, const std::filesystem::path& path,
                  TardinessMode mode) {
    if (entries.empty()) {
        throw std::invalid_argument("write_report needs at least one report");
    }
    const auto text = render_report(entries, mode);
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw IoError("cannot write report " + path.string());
    }
    out << text;
    if (!out) {
        throw IoError("failed writing report " + path.string());
    }
}

void write_report(std::span<const std::pair<PolicyLabel, MetricsReport>> reports,
                  const std::filesystem::path& path) {
    std::vector<ReportEntry> entries;
    for (const auto& [policy, report] : reports) {
        entries.push_back(ReportEntry{policy, std::string(to_string(policy)), to_row(report)});
    }
    write_report(entries, path);
}

std::string percent_delta(const Rational& value, const Rational& baseline) {
    if (baseline == Rational(0)) {
        return value == Rational(0) ? "0.0%" : "n/a";
    }
    const Rational ratio = (value - baseline) / baseline;
    // Tenths of a percent, half away from zero.
    std::int64_t num = ratio.numerator();
    const std::int64_t den = ratio.denominator();
    const bool negative = num < 0;
    if (negative) {
        num = -num;
    }
    const std::int64_t tenths = (num * 2000 + den) / (den * 2);
    std::string out = (negative && tenths != 0) ? "-" : "";
    out += std::to_string(tenths / 10) + "." + std::to_string(tenths % 10) + "%";
    return out;
}

}  // namespace patsched
