#include "patsched/resource_agent.hpp"

#include <algorithm>
#include <stdexcept>

namespace patsched {

ResourceAgent::ResourceAgent(ResourceState initial, PolicyLabel policy,
                             std::vector<ResourceId> ring_directory)
    : state_(std::move(initial)), policy_(policy), ring_(std::move(ring_directory)) {
    episode_.source_id = state_.id;
}

std::vector<PatientRecord> ResourceAgent::migratable_exceeded() const {
    auto exceeded = exceeded_patients(state_, policy_);
    std::erase_if(exceeded, [&](const PatientRecord& p) {
        auto it = cooldown_.find(p.id);
        return it != cooldown_.end() && services_completed_ <= it->second;
    });
    return exceeded;
}

std::vector<PatientId> ResourceAgent::resident_ids() const {
    std::vector<PatientId> ids;
    for (const auto& p : state_.waiting_queue) {
        ids.push_back(p.id);
    }
    if (state_.in_service) {
        ids.push_back(state_.in_service->patient.id);
    }
    for (const auto& p : intake_) {
        ids.push_back(p.id);
    }
    return ids;
}

void ResourceAgent::mark_active(Tick now) {
    if (!activated_at_) {
        activated_at_ = now;
    }
}

void ResourceAgent::drain_intake() {
    // Inbound groups own their reserved slots; arrivals wait until a slot is free of promises.
    while (!intake_.empty() &&
           (reserved_total_ == 0 ||
            state_.occupancy() + 1 + reserved_total_ <= state_.fixed_capacity)) {
        state_.waiting_queue.push_back(std::move(intake_.front()));
        intake_.erase(intake_.begin());
    }
}

void ResourceAgent::request_start_if_idle(AgentEffects& effects) {
    if (state_.in_service || start_pending_ || state_.waiting_queue.empty()) {
        return;
    }
    start_pending_ = true;
    effects.start_service = true;
}

void ResourceAgent::rearm_if_exhausted() {
    if (episode_.state == EpisodeState::Exhausted) {
        episode_.state = EpisodeState::Idle;
        episode_.attempt_index = 0;
    }
}

void ResourceAgent::maybe_start_episode(Tick now, AgentEffects& effects) {
    if (!migrates(policy_) || ring_.size() < 2 || episode_.state != EpisodeState::Idle) {
        return;
    }
    const auto request = detect_overload(state_);
    if (!request) {
        return;
    }
    const auto eligible = migratable_exceeded();
    if (eligible.empty()) {
        return;
    }
    episode_.attempt_index = 0;
    episode_.granted.reset();
    send_request(now,
                 std::min<std::int64_t>(request->exceeded_count,
                                        static_cast<std::int64_t>(eligible.size())),
                 effects);
}

void ResourceAgent::send_request(Tick now, std::int64_t exceeded, AgentEffects& effects) {
    const auto target = next_neighbor(state_.ring_index, ring_.size(), episode_.attempt_index);
    episode_.cycle = CycleId{state_.ring_index, next_cycle_serial_++};
    episode_.state = EpisodeState::AwaitingReply;
    effects.outbox.push_back(ProtocolMessage{state_.id, ring_[target], now, episode_.cycle,
                                             MigrationRequest{exceeded}});
}

void ResourceAgent::advance_after_refusal(Tick now, AgentEffects& effects) {
    ++episode_.attempt_index;
    if (episode_.attempt_index + 1 >= ring_.size()) {
        episode_.state = EpisodeState::Exhausted;
        return;
    }
    const auto request = detect_overload(state_);
    const auto eligible = migratable_exceeded();
    if (!request || eligible.empty()) {
        episode_.state = EpisodeState::Idle;
        return;
    }
    send_request(now,
                 std::min<std::int64_t>(request->exceeded_count,
                                        static_cast<std::int64_t>(eligible.size())),
                 effects);
}

void ResourceAgent::settle(Tick now, AgentEffects& effects) {
    request_start_if_idle(effects);
    maybe_start_episode(now, effects);
}

ProtocolMessage ResourceAgent::reply(const ProtocolMessage& to, Tick now, Payload payload) const {
    return ProtocolMessage{state_.id, to.from_id, now, to.cycle, std::move(payload)};
}

AgentEffects ResourceAgent::on_arrival(PatientRecord patient, Tick now) {
    AgentEffects effects;
    mark_active(now);
    patient.queue_arrival = now;
    intake_.push_back(std::move(patient));
    drain_intake();
    rearm_if_exhausted();
    settle(now, effects);
    return effects;
}

AgentEffects ResourceAgent::on_service_start(Tick now) {
    AgentEffects effects;
    start_pending_ = false;
    if (!state_.in_service) {
        if (auto next = select_next(policy_, state_, now)) {
            const Task& task = *next->next_task();
            const Tick end = now + task.duration;
            effects.started = ServiceRecord{next->id, task.kind, now, end, false};
            effects.service_complete_at = end;
            state_.in_service = InService{std::move(*next), now, end};
        }
    }
    settle(now, effects);
    return effects;
}

AgentEffects ResourceAgent::on_service_complete(Tick now) {
    if (!state_.in_service) {
        throw std::logic_error("service completion at idle resource " + state_.id);
    }
    AgentEffects effects;
    InService done = std::move(*state_.in_service);
    state_.in_service.reset();

    PatientRecord patient = std::move(done.patient);
    const Task task = *patient.next_task();
    patient.completed_tasks.push_back(CompletedTask{task.kind, done.service_start, now});
    state_.busy_ticks += now - done.service_start;
    ++services_completed_;
    cooldown_.erase(patient.id);

    effects.service = ServiceRecord{patient.id, task.kind, done.service_start, now,
                                    patient.finished()};
    if (patient.finished()) {
        effects.finished.push_back(std::move(patient));
    } else if (state_.capabilities.serves(patient.next_task()->kind)) {
        patient.queue_arrival = now;
        state_.waiting_queue.push_back(std::move(patient));
    } else {
        effects.handoffs.push_back(std::move(patient));
    }

    rearm_if_exhausted();
    settle(now, effects);
    return effects;
}

AgentEffects ResourceAgent::on_message(const ProtocolMessage& message, Tick now) {
    if (message.to_id != state_.id) {
        throw std::logic_error("message for " + message.to_id + " delivered to " + state_.id);
    }
    AgentEffects effects;
    std::visit(
        [&](const auto& payload) {
            using T = std::decay_t<decltype(payload)>;
            if constexpr (std::is_same_v<T, MigrationRequest>) {
                handle_request(message, payload, now, effects);
            } else if constexpr (std::is_same_v<T, Accept>) {
                handle_accept(message, payload, now, effects);
            } else if constexpr (std::is_same_v<T, Reject>) {
                handle_reject(message, now, effects);
            } else {
                handle_move(message, payload, now, effects);
            }
        },
        message.payload);
    return effects;
}

void ResourceAgent::handle_request(const ProtocolMessage& message, const MigrationRequest& request,
                                   Tick now, AgentEffects& effects) {
    auto decision = evaluate_request(local_view(now), request);
    if (auto* accept = std::get_if<Accept>(&decision)) {
        reservations_[message.cycle] = accept->granted_slots;
        reserved_total_ += accept->granted_slots;
        effects.outbox.push_back(reply(message, now, *accept));
    } else {
        effects.outbox.push_back(reply(message, now, Reject{}));
    }
}

void ResourceAgent::handle_accept(const ProtocolMessage& message, const Accept& accept, Tick now,
                                  AgentEffects& effects) {
    if (episode_.state != EpisodeState::AwaitingReply || episode_.cycle != message.cycle) {
        throw std::logic_error("unexpected accept at " + state_.id);
    }
    const auto eligible = migratable_exceeded();
    auto members = form_group(eligible, group_size_limit(policy_, accept.granted_slots),
                              accept.capabilities);
    CycleOutcome outcome{message.cycle, state_.id, message.from_id, accept.granted_slots, 0};

    if (members.empty()) {
        effects.outbox.push_back(reply(message, now, Reject{}));
        effects.cycle_outcome = outcome;
        advance_after_refusal(now, effects);
        settle(now, effects);
        return;
    }

    std::vector<PatientId> ids;
    ids.reserve(members.size());
    for (const auto& p : members) {
        ids.push_back(p.id);
    }
    MigrationGroup group{state_.id, message.from_id, detach_group(state_, ids), now};
    outcome.moved = static_cast<std::int64_t>(group.patients.size());
    effects.cycle_outcome = outcome;

    episode_.state = EpisodeState::Moving;
    episode_.granted = std::make_pair(message.from_id, accept.granted_slots);
    effects.outbox.push_back(reply(message, now, GroupMove{std::move(group)}));

    // The transfer is fire-and-forget; the episode ends here and a new one
    // starts below if patients are still in excess.
    episode_.state = EpisodeState::Idle;
    episode_.granted.reset();
    settle(now, effects);
}

void ResourceAgent::handle_reject(const ProtocolMessage& message, Tick now, AgentEffects& effects) {
    if (auto it = reservations_.find(message.cycle); it != reservations_.end()) {
        // The source declined our grant.
        reserved_total_ -= it->second;
        reservations_.erase(it);
        drain_intake();
        settle(now, effects);
        return;
    }
    if (episode_.state != EpisodeState::AwaitingReply || episode_.cycle != message.cycle) {
        throw std::logic_error("unexpected reject at " + state_.id);
    }
    advance_after_refusal(now, effects);
    settle(now, effects);
}

void ResourceAgent::handle_move(const ProtocolMessage& message, const GroupMove& move, Tick now,
                                AgentEffects& effects) {
    auto it = reservations_.find(message.cycle);
    if (it == reservations_.end()) {
        throw std::logic_error("group move without a reservation at " + state_.id);
    }
    const auto& patients = move.group.patients;
    if (patients.empty() || static_cast<std::int64_t>(patients.size()) > it->second) {
        throw std::logic_error("group move exceeds the granted slots at " + state_.id);
    }
    reserved_total_ -= it->second;
    reservations_.erase(it);

    mark_active(now);
    AdmittedMove admitted{message.cycle, message.from_id, state_.id, {}, 0, state_.fixed_capacity};
    for (const auto& p : patients) {
        admitted.patients.push_back(p.id);
        cooldown_[p.id] = services_completed_;
    }
    admit_group(state_, patients, now);
    admitted.occupancy_after = state_.occupancy();
    effects.admitted = std::move(admitted);

    drain_intake();
    settle(now, effects);
}

}  // namespace patsched
