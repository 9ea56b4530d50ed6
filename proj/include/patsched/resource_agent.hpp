#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <vector>

#include "patsched/domain.hpp"
#include "patsched/migration.hpp"
#include "patsched/policy.hpp"
#include "patsched/protocol.hpp"

namespace patsched {

struct ServiceRecord {
    PatientId patient;
    std::string task_kind;
    Tick start = 0;
    Tick end = 0;
    bool patient_finished = false;
};

/// A group landing at its acceptor, with the occupancy it left behind.
struct AdmittedMove {
    CycleId cycle;
    ResourceId source;
    ResourceId destination;
    std::vector<PatientId> patients;
    std::int64_t occupancy_after = 0;
    std::int64_t capacity = 0;
};

/// What a source did with an Accept: moved `moved` patients, or declined.
struct CycleOutcome {
    CycleId cycle;
    ResourceId source;
    ResourceId acceptor;
    std::int64_t granted = 0;
    std::int64_t moved = 0;
};

/// Everything a handler wants the engine to do on its behalf.
struct AgentEffects {
    std::vector<ProtocolMessage> outbox;
    std::optional<Tick> service_complete_at;
    std::optional<ServiceRecord> service;
    /// Ask the engine for a ServiceStart at the current tick, after any other
    /// events already queued for this tick.
    bool start_service = false;
    std::optional<ServiceRecord> started;
    std::vector<PatientRecord> finished;
    /// Patients whose next task this resource cannot serve; the admission
    /// agent routes them elsewhere.
    std::vector<PatientRecord> handoffs;
    std::optional<AdmittedMove> admitted;
    std::optional<CycleOutcome> cycle_outcome;
};

/// One resource station plus its scheduling logic.
///
/// The agent owns its ResourceState and nothing else. It learns about the rest
/// of the system only through the ring directory (peer ids, fixed at
/// construction) and the messages the engine delivers to it.
class ResourceAgent {
public:
    ResourceAgent(ResourceState initial, PolicyLabel policy, std::vector<ResourceId> ring_directory);

    AgentEffects on_arrival(PatientRecord patient, Tick now);
    AgentEffects on_service_start(Tick now);
    AgentEffects on_service_complete(Tick now);
    AgentEffects on_message(const ProtocolMessage& message, Tick now);

    LocalView local_view(Tick now) const { return LocalView(state_, reserved_total_, now); }

    const ResourceState& state() const { return state_; }
    const MigrationEpisode& episode() const { return episode_; }
    PolicyLabel policy() const { return policy_; }
    std::int64_t reserved_slots() const { return reserved_total_; }
    /// Arrivals parked while inbound groups hold reserved slots.
    std::span<const PatientRecord> intake() const { return intake_; }
    std::optional<Tick> activated_at() const { return activated_at_; }
    std::uint64_t services_completed() const { return services_completed_; }
    bool start_pending() const { return start_pending_; }

    /// Waiting patients that may leave now: exceeded and not cooling down.
    std::vector<PatientRecord> migratable_exceeded() const;

    std::vector<PatientId> resident_ids() const;

private:
    void mark_active(Tick now);
    void drain_intake();
    void request_start_if_idle(AgentEffects& effects);
    void rearm_if_exhausted();
    void maybe_start_episode(Tick now, AgentEffects& effects);
    void send_request(Tick now, std::int64_t exceeded, AgentEffects& effects);
    void advance_after_refusal(Tick now, AgentEffects& effects);
    void settle(Tick now, AgentEffects& effects);
    ProtocolMessage reply(const ProtocolMessage& to, Tick now, Payload payload) const;

    void handle_request(const ProtocolMessage& message, const MigrationRequest& request, Tick now,
                        AgentEffects& effects);
    void handle_accept(const ProtocolMessage& message, const Accept& accept, Tick now,
                       AgentEffects& effects);
    void handle_reject(const ProtocolMessage& message, Tick now, AgentEffects& effects);
    void handle_move(const ProtocolMessage& message, const GroupMove& move, Tick now,
                     AgentEffects& effects);

    ResourceState state_;
    PolicyLabel policy_;
    std::vector<ResourceId> ring_;
    MigrationEpisode episode_;
    std::uint64_t next_cycle_serial_ = 0;

    std::map<CycleId, std::int64_t> reservations_;
    std::int64_t reserved_total_ = 0;
    std::vector<PatientRecord> intake_;

    // patient id -> services_completed_ at admission; the patient may not
    // migrate again until this resource completes another service.
    std::map<PatientId, std::uint64_t> cooldown_;
    std::uint64_t services_completed_ = 0;
    std::optional<Tick> activated_at_;
    bool start_pending_ = false;
};

}  // namespace patsched
