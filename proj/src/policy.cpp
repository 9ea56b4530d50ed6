#include "patsched/policy.hpp"

#include <algorithm>
#include <cctype>
#include <string>

namespace patsched {

namespace {

bool arrived_earlier(const PatientRecord& a, const PatientRecord& b) {
    if (a.queue_arrival != b.queue_arrival) {
        return a.queue_arrival < b.queue_arrival;
    }
    return a.id < b.id;
}

}  // namespace

std::string_view to_string(PolicyLabel label) {
    switch (label) {
        case PolicyLabel::FCFS: return "FCFS";
        case PolicyLabel::WSPT: return "WSPT";
        case PolicyLabel::DOPS: return "DOPS";
        case PolicyLabel::DOPSG: return "DOPSG";
    }
    return "?";
}

std::optional<PolicyLabel> parse_policy(std::string_view text) {
    std::string upper(text);
    std::transform(upper.begin(), upper.end(), upper.begin(),
                   [](unsigned char c) { return static_cast<char>(std::toupper(c)); });
    for (auto label : kAllPolicies) {
        if (upper == to_string(label)) {
            return label;
        }
    }
    return std::nullopt;
}

bool ranks_before(PolicyLabel label, const PatientRecord& a, const PatientRecord& b) {
    if (label == PolicyLabel::FCFS) {
        return arrived_earlier(a, b);
    }
    const Task* task_a = a.next_task();
    const Task* task_b = b.next_task();
    if (task_a != nullptr && task_b != nullptr) {
        // w_a / p_a > w_b / p_b  <=>  w_a * p_b > w_b * p_a
        const Rational lhs = a.weight * task_b->duration;
        const Rational rhs = b.weight * task_a->duration;
        if (lhs != rhs) {
            return lhs > rhs;
        }
    } else if (task_a != task_b) {
        return task_a != nullptr;
    }
    return arrived_earlier(a, b);
}

std::vector<PatientRecord> order_queue(PolicyLabel label, std::span<const PatientRecord> queue,
                                       Tick /*now*/) {
    std::vector<PatientRecord> ordered(queue.begin(), queue.end());
    std::stable_sort(ordered.begin(), ordered.end(),
                     [label](const PatientRecord& a, const PatientRecord& b) {
                         return ranks_before(label, a, b);
                     });
    return ordered;
}

std::optional<PatientRecord> select_next(PolicyLabel label, ResourceState& resource,
                                         Tick /*now*/) {
    auto& queue = resource.waiting_queue;
    auto best = queue.end();
    for (auto it = queue.begin(); it != queue.end(); ++it) {
        const Task* task = it->next_task();
        if (task == nullptr || !resource.capabilities.serves(task->kind)) {
            continue;
        }
        if (best == queue.end() || ranks_before(label, *it, *best)) {
            best = it;
        }
    }
    if (best == queue.end()) {
        return std::nullopt;
    }
    PatientRecord chosen = std::move(*best);
    queue.erase(best);
    return chosen;
}

}  // namespace patsched
