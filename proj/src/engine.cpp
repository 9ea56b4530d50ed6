#include "patsched/engine.hpp"

#include <algorithm>
#include <sstream>

namespace patsched {

namespace {

bool later(const SimEvent& a, const SimEvent& b) {
    if (a.at != b.at) {
        return a.at > b.at;
    }
    return a.seq > b.seq;
}

std::optional<std::size_t> route(const std::vector<Capabilities>& capabilities,
                                 std::string_view kind, std::size_t k) {
    const auto m = capabilities.size();
    for (std::size_t i = 0; i < m; ++i) {
        const auto ring = (k + i) % m;
        if (capabilities[ring].serves(kind)) {
            return ring;
        }
    }
    return std::nullopt;
}

std::vector<Capabilities> capabilities_by_ring(const ScenarioSpec& spec) {
    std::vector<Capabilities> caps(spec.resources.size());
    for (const auto& r : spec.resources) {
        caps.at(r.ring_index) = r.capabilities;
    }
    return caps;
}

PatientRecord to_record(const PatientSpec& p) {
    PatientRecord record;
    record.id = p.id;
    record.weight = p.weight;
    record.hospital_arrival = p.hospital_arrival;
    record.queue_arrival = p.hospital_arrival;
    record.tasks = p.tasks;
    return record;
}

std::string cycle_text(const CycleId& cycle) {
    return std::to_string(cycle.source_ring) + "." + std::to_string(cycle.serial);
}

std::string describe(const ProtocolMessage& message) {
    std::ostringstream out;
    out << to_string(message.kind()) << ' ' << message.from_id << "->" << message.to_id
        << " cycle=" << cycle_text(message.cycle);
    std::visit(
        [&](const auto& payload) {
            using T = std::decay_t<decltype(payload)>;
            if constexpr (std::is_same_v<T, MigrationRequest>) {
                out << " exceeded=" << payload.exceeded_count;
            } else if constexpr (std::is_same_v<T, Accept>) {
                out << " slots=" << payload.granted_slots;
            } else if constexpr (std::is_same_v<T, GroupMove>) {
                out << " patients=";
                const auto& patients = payload.group.patients;
                for (std::size_t i = 0; i < patients.size(); ++i) {
                    out << (i ? "," : "") << patients[i].id;
                }
            }
        },
        message.payload);
    return out.str();
}

}  // namespace

void MessageCounts::add(MessageKind kind) {
    switch (kind) {
        case MessageKind::Request: ++request; break;
        case MessageKind::Accept: ++accept; break;
        case MessageKind::Reject: ++reject; break;
        case MessageKind::Move: ++move; break;
    }
}

std::vector<PatientArrival> initial_assignment(const ScenarioSpec& spec) {
    const auto caps = capabilities_by_ring(spec);
    std::vector<PatientArrival> arrivals;
    arrivals.reserve(spec.patients.size());
    for (std::size_t k = 0; k < spec.patients.size(); ++k) {
        const auto& patient = spec.patients[k];
        if (patient.tasks.empty()) {
            throw NoCompatibleResource("patient '" + patient.id + "' has no tasks");
        }
        auto ring = route(caps, patient.tasks.front().kind, k);
        if (!ring) {
            throw NoCompatibleResource("no resource serves task '" + patient.tasks.front().kind +
                                       "' of patient '" + patient.id + "'");
        }
        arrivals.push_back(PatientArrival{to_record(patient), *ring});
    }
    return arrivals;
}

Simulation::Simulation(const ScenarioSpec& spec, PolicyLabel policy, EngineOptions options)
    : spec_(&spec), policy_(policy), options_(options), capabilities_(capabilities_by_ring(spec)) {
    const auto m = spec.resources.size();
    std::vector<ResourceId> ring(m);
    for (const auto& r : spec.resources) {
        ring.at(r.ring_index) = r.id;
        ring_of_[r.id] = r.ring_index;
    }
    std::vector<const ResourceSpec*> by_ring(m);
    for (const auto& r : spec.resources) {
        by_ring[r.ring_index] = &r;
    }
    agents_.reserve(m);
    for (const auto* r : by_ring) {
        ResourceState state;
        state.id = r->id;
        state.ring_index = r->ring_index;
        state.fixed_capacity = r->fixed_capacity;
        state.capabilities = r->capabilities;
        agents_.emplace_back(std::move(state), policy, ring);
    }

    for (std::size_t k = 0; k < spec.patients.size(); ++k) {
        patient_index_[spec.patients[k].id] = k;
        all_patients_sorted_.push_back(spec.patients[k].id);
    }
    std::sort(all_patients_sorted_.begin(), all_patients_sorted_.end());

    for (auto& arrival : initial_assignment(spec)) {
        const Tick at = arrival.patient.hospital_arrival;
        schedule(at, std::move(arrival));
    }
    trace_.policy = policy;
}

void Simulation::schedule(Tick at,
                          std::variant<PatientArrival, ServiceStart, ServiceComplete, MessageDelivery> kind) {
    queue_.push_back(SimEvent{at, next_seq_++, std::move(kind)});
    std::push_heap(queue_.begin(), queue_.end(), later);
}

void Simulation::step() {
    if (queue_.empty()) {
        throw std::logic_error("step() on an empty event queue");
    }
    std::pop_heap(queue_.begin(), queue_.end(), later);
    SimEvent event = std::move(queue_.back());
    queue_.pop_back();

    if (options_.check_invariants && last_dispatched_ &&
        std::make_pair(event.at, event.seq) <= *last_dispatched_) {
        throw InvariantViolation("events dispatched out of (at, seq) order");
    }
    last_dispatched_ = std::make_pair(event.at, event.seq);
    now_ = event.at;

    LoggedEvent logged{event.at, event.seq, LoggedKind::Arrival, {}, {}, 0, false, {}, 0, {}};
    std::optional<AdmittedMove> admitted;

    std::visit(
        [&](auto& kind) {
            using T = std::decay_t<decltype(kind)>;
            if constexpr (std::is_same_v<T, PatientArrival>) {
                auto& agent = agents_.at(kind.resource);
                logged.kind = LoggedKind::Arrival;
                logged.resource = agent.state().id;
                logged.patient = kind.patient.id;
                logged.details = "ARRIVAL " + kind.patient.id + " -> " + agent.state().id;
                absorb(kind.resource, agent.on_arrival(std::move(kind.patient), now_));
            } else if constexpr (std::is_same_v<T, ServiceStart>) {
                auto& agent = agents_.at(kind.resource);
                auto effects = agent.on_service_start(now_);
                logged.kind = LoggedKind::ServiceStart;
                logged.resource = agent.state().id;
                if (effects.started) {
                    const auto& started = *effects.started;
                    logged.patient = started.patient;
                    logged.details = "SERVICE_START " + agent.state().id + ' ' + started.patient +
                                     ' ' + started.task_kind + " end=" +
                                     std::to_string(started.end);
                } else {
                    logged.details = "SERVICE_START " + agent.state().id + " idle";
                }
                absorb(kind.resource, std::move(effects));
            } else if constexpr (std::is_same_v<T, ServiceComplete>) {
                auto& agent = agents_.at(kind.resource);
                auto effects = agent.on_service_complete(now_);
                const auto& service = *effects.service;
                logged.kind = LoggedKind::ServiceComplete;
                logged.resource = agent.state().id;
                logged.patient = service.patient;
                logged.service_end = service.end;
                logged.patient_finished = service.patient_finished;
                std::ostringstream details;
                details << "SERVICE_COMPLETE " << agent.state().id << ' ' << service.patient << ' '
                        << service.task_kind << " start=" << service.start
                        << " end=" << service.end
                        << (service.patient_finished ? " finished" : " continuing");
                logged.details = details.str();
                absorb(kind.resource, std::move(effects));
            } else {
                const auto& message = kind.message;
                trace_.messages.add(message.kind());
                if (auto it = cycles_.find(message.cycle); it != cycles_.end()) {
                    it->second.delivered.add(message.kind());
                } else {
                    CycleAudit audit;
                    audit.cycle = message.cycle;
                    audit.delivered.add(message.kind());
                    cycles_.emplace(message.cycle, audit);
                }
                logged.kind = LoggedKind::Delivery;
                logged.resource = message.to_id;
                logged.message = message.kind();
                logged.sent_at = message.sent_at;
                logged.details = "DELIVER " + describe(message);
                const auto ring = ring_of_.at(message.to_id);
                auto effects = agents_.at(ring).on_message(message, now_);
                admitted = effects.admitted;
                absorb(ring, std::move(effects));
            }
        },
        event.kind);

    if (options_.record_events) {
        trace_.events.push_back(std::move(logged));
    }
    if (admitted) {
        trace_.moves.push_back(MoveAudit{now_, *admitted});
    }
    if (options_.check_invariants) {
        check_invariants(admitted);
    }
}

void Simulation::absorb(std::size_t ring, AgentEffects effects) {
    for (auto& message : effects.outbox) {
        const Tick at = now_ + spec_->message_latency;
        schedule(at, MessageDelivery{std::move(message)});
    }
    if (effects.start_service) {
        schedule(now_, ServiceStart{ring});
    }
    if (effects.service_complete_at) {
        schedule(*effects.service_complete_at, ServiceComplete{ring});
    }
    for (auto& patient : effects.finished) {
        finished_.push_back(std::move(patient));
    }
    for (auto& patient : effects.handoffs) {
        route_handoff(std::move(patient));
    }
    if (effects.cycle_outcome) {
        const auto& outcome = *effects.cycle_outcome;
        auto& audit = cycles_[outcome.cycle];
        audit.cycle = outcome.cycle;
        audit.source = outcome.source;
        audit.acceptor = outcome.acceptor;
        audit.granted = outcome.granted;
        audit.moved = outcome.moved;
    }
}

void Simulation::route_handoff(PatientRecord patient) {
    const auto k = patient_index_.at(patient.id) + patient.completed_tasks.size();
    auto ring = route(capabilities_, patient.next_task()->kind, k);
    if (!ring) {
        unroutable_.push_back(std::move(patient));
        return;
    }
    schedule(now_, PatientArrival{std::move(patient), *ring});
}

std::vector<PatientId> Simulation::accounted_patients() const {
    std::vector<PatientId> ids;
    ids.reserve(all_patients_sorted_.size());
    for (const auto& agent : agents_) {
        auto resident = agent.resident_ids();
        ids.insert(ids.end(), resident.begin(), resident.end());
    }
    for (const auto& event : queue_) {
        if (const auto* arrival = std::get_if<PatientArrival>(&event.kind)) {
            ids.push_back(arrival->patient.id);
        } else if (const auto* delivery = std::get_if<MessageDelivery>(&event.kind)) {
            if (const auto* move = std::get_if<GroupMove>(&delivery->message.payload)) {
                for (const auto& p : move->group.patients) {
                    ids.push_back(p.id);
                }
            }
        }
    }
    for (const auto& p : finished_) {
        ids.push_back(p.id);
    }
    for (const auto& p : unroutable_) {
        ids.push_back(p.id);
    }
    std::sort(ids.begin(), ids.end());
    return ids;
}

void Simulation::check_invariants(const std::optional<AdmittedMove>& admitted) {
    ++trace_.invariant_checks;
    if (accounted_patients() != all_patients_sorted_) {
        throw InvariantViolation("patient conservation broken at tick " + std::to_string(now_) +
                                 "\n" + snapshot());
    }
    for (const auto& agent : agents_) {
        const auto& state = agent.state();
        if (!state.in_service && !state.waiting_queue.empty() && !agent.start_pending()) {
            throw InvariantViolation("resource " + state.id + " idle with a non-empty queue");
        }
    }
    if (admitted && admitted->occupancy_after > admitted->capacity) {
        throw InvariantViolation("move into " + admitted->destination + " left occupancy " +
                                 std::to_string(admitted->occupancy_after) + " above capacity " +
                                 std::to_string(admitted->capacity));
    }
}

std::string Simulation::snapshot() const {
    std::ostringstream out;
    out << "tick " << now_ << ", " << queue_.size() << " pending events\n";
    for (const auto& agent : agents_) {
        const auto& s = agent.state();
        out << "  " << s.id << ": occupancy " << s.occupancy() << "/" << s.fixed_capacity
            << ", reserved " << agent.reserved_slots() << ", intake " << agent.intake().size()
            << ", episode " << to_string(agent.episode().state) << ", queue [";
        for (std::size_t i = 0; i < s.waiting_queue.size(); ++i) {
            out << (i ? " " : "") << s.waiting_queue[i].id;
        }
        out << "]";
        if (s.in_service) {
            out << ", serving " << s.in_service->patient.id;
        }
        out << '\n';
    }
    if (!unroutable_.empty()) {
        out << "  unroutable:";
        for (const auto& p : unroutable_) {
            out << ' ' << p.id << "(" << p.next_task()->kind << ")";
        }
        out << '\n';
    }
    return out.str();
}

SimulationTrace Simulation::finish() && {
    if (!queue_.empty()) {
        throw std::logic_error("finish() with events still pending");
    }
    if (finished_.size() != spec_->patients.size()) {
        throw StallError("event queue drained with " +
                             std::to_string(spec_->patients.size() - finished_.size()) +
                             " unfinished patients",
                         snapshot());
    }

    std::unordered_map<PatientId, const PatientRecord*> done;
    for (const auto& p : finished_) {
        done[p.id] = &p;
    }
    trace_.patients.reserve(spec_->patients.size());
    for (const auto& spec_patient : spec_->patients) {
        const auto& record = *done.at(spec_patient.id);
        PatientOutcome outcome;
        outcome.id = record.id;
        outcome.weight = record.weight;
        outcome.hospital_arrival = record.hospital_arrival;
        outcome.due = due_time(record);
        outcome.completed_tasks = record.completed_tasks;
        if (!record.completed_tasks.empty()) {
            outcome.completion = record.completed_tasks.back().end;
        }
        trace_.patients.push_back(std::move(outcome));
    }
    for (const auto& agent : agents_) {
        trace_.resources.push_back(
            ResourceUsage{agent.state().id, agent.state().busy_ticks, agent.activated_at()});
    }
    for (auto& [id, audit] : cycles_) {
        // Only exchanges that got an Accept; plain rejections are not transfers.
        if (audit.delivered.accept > 0) {
            trace_.cycles.push_back(audit);
        }
    }
    return std::move(trace_);
}

SimulationTrace run(const ScenarioSpec& spec, PolicyLabel policy, EngineOptions options) {
    Simulation simulation(spec, policy, options);
    while (!simulation.done()) {
        simulation.step();
    }
    return std::move(simulation).finish();
}

std::string dump_trace(const SimulationTrace& trace) {
    std::string out;
    for (const auto& event : trace.events) {
        out += std::to_string(event.at);
        out += ' ';
        out += std::to_string(event.seq);
        out += ' ';
        out += event.details;
        out += '\n';
    }
    return out;
}

}  // namespace patsched
