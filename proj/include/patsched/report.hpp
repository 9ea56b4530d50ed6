#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "patsched/metrics.hpp"
#include "patsched/policy.hpp"

namespace patsched {

enum class TardinessMode : std::uint8_t { Literal, Clamped, Both };

std::optional<TardinessMode> parse_tardiness_mode(std::string_view text);

/// One CSV row's worth of values. Rationals so that means over seeds stay exact.
struct MetricRow {
    Rational cmax{0};
    Rational tmax{0};
    Rational sum_completion{0};
    Rational sum_tardiness{0};
    Rational sum_weighted_completion{0};
    Rational sum_weighted_tardiness{0};
    Rational messages{0};
    Rational idle_ticks{0};
    // Clamped tardiness, carried alongside for display.
    Rational tmax_clamped{0};
    Rational sum_tardiness_clamped{0};
    Rational sum_weighted_tardiness_clamped{0};

    bool operator==(const MetricRow&) const = default;
};

MetricRow to_row(const MetricsReport& report);

/// Element-wise mean. Requires a non-empty input.
MetricRow mean_row(std::span<const MetricRow> rows);

struct ReportEntry {
    PolicyLabel policy = PolicyLabel::FCFS;
    std::string label;
    MetricRow row;
};

inline constexpr std::string_view kReportHeader =
    "policy,cmax,tmax,sum_c,sum_t,sum_wc,sum_wt,messages,idle_ticks";

/// CSV text: header, then rows stably ordered FCFS, WSPT, DOPS, DOPSG.
/// Literal tardiness unless mode is Clamped. LF line endings.
std::string render_report(std::span<const ReportEntry> entries,
                          TardinessMode mode = TardinessMode::Literal);

/// Throws std::invalid_argument for an empty list, IoError if the file
/// cannot be written.
void write_report(std::span<const ReportEntry> entries, const std::filesystem::path& path,
                  TardinessMode mode = TardinessMode::Literal);

/// Rows labelled with the bare policy name.
void write_report(std::span<const std::pair<PolicyLabel, MetricsReport>> reports,
                  const std::filesystem::path& path);

/// (value - baseline) / baseline in percent, rounded to one decimal, e.g.
/// "-25.0%". "n/a" when the baseline is zero and the value is not.
std::string percent_delta(const Rational& value, const Rational& baseline);

}  // namespace patsched
