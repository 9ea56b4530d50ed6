#include "patsched/metrics.hpp"

#include <algorithm>

namespace patsched {

Tick completion_time(const SimulationTrace& trace, const PatientId& patient) {
    auto it = std::find_if(trace.patients.begin(), trace.patients.end(),
                           [&](const PatientOutcome& p) { return p.id == patient; });
    if (it == trace.patients.end()) {
        throw Incomplete("patient '" + patient + "' is not in the trace");
    }
    if (!it->completion) {
        throw Incomplete("patient '" + patient + "' has pending tasks");
    }
    return *it->completion;
}

MetricsReport aggregate(const SimulationTrace& trace) {
    MetricsReport report;
    bool first = true;
    for (const auto& patient : trace.patients) {
        if (!patient.completion) {
            throw Incomplete("patient '" + patient.id + "' has pending tasks");
        }
        const Tick completion = *patient.completion;
        const Tick late = tardiness(completion, patient.due);
        const Tick late0 = clamped_tardiness(completion, patient.due);

        report.cmax = first ? completion : std::max(report.cmax, completion);
        report.tmax = first ? late : std::max(report.tmax, late);
        report.clamped.tmax = std::max(report.clamped.tmax, late0);
        first = false;

        report.sum_completion += completion;
        report.sum_tardiness += late;
        report.clamped.sum_tardiness += late0;
        report.sum_weighted_completion += patient.weight * completion;
        report.sum_weighted_tardiness += patient.weight * late;
        report.clamped.sum_weighted_tardiness += patient.weight * late0;
    }

    report.messages_by_kind = trace.messages;
    report.message_count = trace.messages.total();

    const Tick horizon = report.cmax;
    for (const auto& resource : trace.resources) {
        if (resource.activated_at) {
            report.idle_ticks += horizon - *resource.activated_at - resource.busy_ticks;
        }
    }
    return report;
}

}  // namespace patsched
