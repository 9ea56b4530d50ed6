#pragma once

#include <cstdint>
#include <stdexcept>

#include "patsched/domain.hpp"
#include "patsched/engine.hpp"

namespace patsched {

class Incomplete : public std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Tardiness columns with per-patient tardiness floored at zero.
struct ClampedTardiness {
    Tick tmax = 0;
    Tick sum_tardiness = 0;
    Rational sum_weighted_tardiness{0};

    bool operator==(const ClampedTardiness&) const = default;
};

/// Per-run metrics. Tardiness is completion minus due time and may be
/// negative; `clamped` carries the floored variants. An empty run is all zeros.
struct MetricsReport {
    Tick cmax = 0;
    Tick tmax = 0;
    Tick sum_completion = 0;
    Tick sum_tardiness = 0;
    Rational sum_weighted_completion{0};
    Rational sum_weighted_tardiness{0};
    std::int64_t message_count = 0;
    MessageCounts messages_by_kind;
    std::int64_t idle_ticks = 0;
    ClampedTardiness clamped;

    bool operator==(const MetricsReport&) const = default;
};

/// Absolute tick at which the patient's last task ended.
/// Throws Incomplete if the patient is unknown or has pending tasks.
Tick completion_time(const SimulationTrace& trace, const PatientId& patient);

constexpr Tick tardiness(Tick completion, Tick due) { return completion - due; }
constexpr Tick clamped_tardiness(Tick completion, Tick due) {
    return completion > due ? completion - due : 0;
}

/// Idle ticks: for each activated resource, last completion tick minus
/// activation tick minus busy ticks.
MetricsReport aggregate(const SimulationTrace& trace);

}  // namespace patsched
