#include "patsched/migration.hpp"

#include <algorithm>

namespace patsched {

std::string_view to_string(EpisodeState state) {
    switch (state) {
        case EpisodeState::Idle: return "idle";
        case EpisodeState::AwaitingReply: return "awaiting-reply";
        case EpisodeState::Moving: return "moving";
        case EpisodeState::Exhausted: return "exhausted";
    }
    return "?";
}

std::string_view to_string(MessageKind kind) {
    switch (kind) {
        case MessageKind::Request: return "REQUEST";
        case MessageKind::Accept: return "ACCEPT";
        case MessageKind::Reject: return "REJECT";
        case MessageKind::Move: return "MOVE";
    }
    return "?";
}

std::optional<MigrationRequest> detect_overload(const ResourceState& resource) {
    const auto excess = resource.occupancy() - resource.fixed_capacity;
    if (excess <= 0) {
        return std::nullopt;
    }
    return MigrationRequest{excess};
}

std::variant<Accept, Reject> evaluate_request(const LocalView& acceptor,
                                              const MigrationRequest& request) {
    const auto& self = acceptor.self();
    const auto committed = acceptor.committed_occupancy();
    if (committed >= self.fixed_capacity || request.exceeded_count <= 0) {
        return Reject{};
    }
    return Accept{std::min(self.fixed_capacity - committed, request.exceeded_count),
                  self.capabilities};
}

std::vector<PatientRecord> form_group(std::span<const PatientRecord> exceeded,
                                      std::int64_t granted_slots,
                                      const Capabilities& destination_capabilities) {
    std::vector<PatientRecord> group;
    for (const auto& patient : exceeded) {
        const Task* next = patient.next_task();
        if (next != nullptr && destination_capabilities.serves(next->kind)) {
            group.push_back(patient);
        }
    }
    std::stable_sort(group.begin(), group.end(), [](const PatientRecord& a, const PatientRecord& b) {
        if (a.weight != b.weight) {
            return a.weight > b.weight;
        }
        if (a.queue_arrival != b.queue_arrival) {
            return a.queue_arrival < b.queue_arrival;
        }
        return a.id < b.id;
    });
    const auto keep = static_cast<std::size_t>(std::max<std::int64_t>(granted_slots, 0));
    if (group.size() > keep) {
        group.resize(keep);
    }
    return group;
}

std::int64_t group_size_limit(PolicyLabel label, std::int64_t granted_slots) {
    if (label == PolicyLabel::DOPS) {
        return std::min<std::int64_t>(granted_slots, 1);
    }
    return granted_slots;
}

std::size_t next_neighbor(std::size_t ring_index, std::size_t resource_count, std::size_t attempt) {
    if (resource_count < 2 || attempt + 1 >= resource_count) {
        throw NeighborsExhausted();
    }
    return (ring_index + attempt + 1) % resource_count;
}

std::vector<PatientRecord> detach_group(ResourceState& source,
                                        std::span<const PatientId> members) {
    auto& queue = source.waiting_queue;
    std::vector<std::size_t> positions;
    positions.reserve(members.size());
    for (const auto& id : members) {
        auto it = std::find_if(queue.begin(), queue.end(),
                               [&](const PatientRecord& p) { return p.id == id; });
        if (it == queue.end()) {
            throw MemberMissing(id);
        }
        positions.push_back(static_cast<std::size_t>(it - queue.begin()));
    }
    std::vector<PatientRecord> detached;
    detached.reserve(members.size());
    for (auto pos : positions) {
        detached.push_back(queue[pos]);
    }
    std::sort(positions.begin(), positions.end(), std::greater<>());
    for (auto pos : positions) {
        queue.erase(queue.begin() + static_cast<std::ptrdiff_t>(pos));
    }
    return detached;
}

void admit_group(ResourceState& destination, std::vector<PatientRecord> patients, Tick now) {
    for (auto& patient : patients) {
        patient.queue_arrival = now;
        destination.waiting_queue.push_back(std::move(patient));
    }
}

void apply_move(ResourceState& source, ResourceState& destination, const MigrationGroup& group,
                Tick now) {
    std::vector<PatientId> ids;
    ids.reserve(group.patients.size());
    for (const auto& p : group.patients) {
        ids.push_back(p.id);
    }
    admit_group(destination, detach_group(source, ids), now);
}

}  // namespace patsched
