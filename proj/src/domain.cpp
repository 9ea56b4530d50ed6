#include "patsched/domain.hpp"

#include <algorithm>
#include <stdexcept>

#include "patsched/policy.hpp"

namespace patsched {

const Task* PatientRecord::next_task() const {
    if (finished()) {
        return nullptr;
    }
    return &tasks[completed_tasks.size()];
}

bool Capabilities::serves(std::string_view kind) const {
    if (!kinds_) {
        return true;
    }
    return kinds_->find(std::string(kind)) != kinds_->end();
}

const std::set<std::string>& Capabilities::kinds() const {
    if (!kinds_) {
        throw std::logic_error("capabilities serve every task kind");
    }
    return *kinds_;
}

Tick due_time(const PatientRecord& patient) {
    Tick due = patient.hospital_arrival;
    for (const auto& task : patient.tasks) {
        due += task.duration;
    }
    return due;
}

Tick remaining_processing(const PatientRecord& patient) {
    Tick remaining = 0;
    for (std::size_t i = patient.completed_tasks.size(); i < patient.tasks.size(); ++i) {
        remaining += patient.tasks[i].duration;
    }
    return remaining;
}

std::vector<PatientRecord> exceeded_patients(const ResourceState& resource, PolicyLabel policy) {
    const std::int64_t excess = resource.occupancy() - resource.fixed_capacity;
    if (excess <= 0) {
        return {};
    }
    auto ordered = order_queue(policy, resource.waiting_queue, 0);
    const auto take = std::min<std::size_t>(static_cast<std::size_t>(excess), ordered.size());
    return {std::make_move_iterator(ordered.end() - static_cast<std::ptrdiff_t>(take)),
            std::make_move_iterator(ordered.end())};
}

}  // namespace patsched
