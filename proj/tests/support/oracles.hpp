#pragma once

// Independent reference computations used only by tests. Nothing here calls
// into the metric or policy code it is used to check.

#include <algorithm>
#include <cstdint>
#include <limits>
#include <map>
#include <numeric>
#include <vector>

#include "patsched/engine.hpp"
#include "patsched/rational.hpp"
#include "patsched/scenario.hpp"

namespace patsched::oracle {

struct Job {
    std::int64_t weight;
    std::int64_t duration;
};

/// Minimum sum of w_j C_j over every sequence of the jobs on one machine,
/// all released at time zero.
inline std::int64_t min_weighted_completion(std::vector<Job> jobs) {
    std::vector<std::size_t> order(jobs.size());
    std::iota(order.begin(), order.end(), 0);
    std::int64_t best = std::numeric_limits<std::int64_t>::max();
    do {
        std::int64_t clock = 0;
        std::int64_t total = 0;
        for (auto j : order) {
            clock += jobs[j].duration;
            total += jobs[j].weight * clock;
        }
        best = std::min(best, total);
    } while (std::next_permutation(order.begin(), order.end()));
    return jobs.empty() ? 0 : best;
}

struct Recomputed {
    std::int64_t cmax = 0;
    std::int64_t tmax = 0;
    std::int64_t sum_c = 0;
    std::int64_t sum_t = 0;
    Rational sum_wc{0};
    Rational sum_wt{0};
    std::int64_t tmax0 = 0;
    std::int64_t sum_t0 = 0;
    Rational sum_wt0{0};
    std::int64_t messages = 0;
    std::int64_t idle = 0;
};

/// Straight-line recomputation from the scenario and the raw event log only:
/// completions come from SERVICE_COMPLETE entries flagged as final, due times
/// from the scenario's task lists, messages from DELIVER entries, busy time
/// from service intervals and activation from the first arrival or move.
inline Recomputed recompute(const ScenarioSpec& spec, const SimulationTrace& trace) {
    std::map<PatientId, std::int64_t> completion;
    std::map<ResourceId, std::int64_t> busy;
    std::map<ResourceId, std::int64_t> first_seen;
    Recomputed r;
    for (const auto& e : trace.events) {
        if (e.kind == LoggedKind::ServiceComplete && e.patient_finished) {
            completion[e.patient] = e.service_end;
        }
        if (e.kind == LoggedKind::Delivery) {
            ++r.messages;
        }
        const bool lands = e.kind == LoggedKind::Arrival ||
                           (e.kind == LoggedKind::Delivery && e.message == MessageKind::Move);
        if (lands && first_seen.find(e.resource) == first_seen.end()) {
            first_seen[e.resource] = e.at;
        }
    }
    // Busy time from the log: each SERVICE_COMPLETE carries its own interval in
    // the details text ("start=S end=E"); parse it back out.
    for (const auto& e : trace.events) {
        if (e.kind != LoggedKind::ServiceComplete) {
            continue;
        }
        const auto s = e.details.find("start=");
        const auto end = e.details.find(" end=");
        const std::int64_t start = std::stoll(e.details.substr(s + 6, end - s - 6));
        busy[e.resource] += e.service_end - start;
    }

    bool first = true;
    for (const auto& p : spec.patients) {
        std::int64_t due = p.hospital_arrival;
        for (const auto& t : p.tasks) {
            due += t.duration;
        }
        const std::int64_t c = completion.at(p.id);
        const std::int64_t t = c - due;
        const std::int64_t t0 = t > 0 ? t : 0;
        if (first) {
            r.cmax = c;
            r.tmax = t;
            first = false;
        } else {
            r.cmax = std::max(r.cmax, c);
            r.tmax = std::max(r.tmax, t);
        }
        r.tmax0 = std::max(r.tmax0, t0);
        r.sum_c += c;
        r.sum_t += t;
        r.sum_t0 += t0;
        r.sum_wc += p.weight * Rational(c);
        r.sum_wt += p.weight * Rational(t);
        r.sum_wt0 += p.weight * Rational(t0);
    }
    for (const auto& [resource, seen] : first_seen) {
        r.idle += r.cmax - seen - busy[resource];
    }
    return r;
}

}  // namespace patsched::oracle
