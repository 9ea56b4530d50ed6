#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <variant>
#include <vector>

#include "patsched/domain.hpp"
#include "patsched/policy.hpp"
#include "patsched/protocol.hpp"
#include "patsched/resource_agent.hpp"
#include "patsched/scenario.hpp"

namespace patsched {

/// The event queue drained with patients still unfinished.
class StallError : public std::runtime_error {
public:
    StallError(const std::string& what, std::string snapshot)
        : std::runtime_error(what + "\n" + snapshot), snapshot(std::move(snapshot)) {}

    std::string snapshot;
};

/// A run broke one of its own invariants (conservation, clock order, move
/// safety, work conservation).
class InvariantViolation : public std::logic_error {
    using std::logic_error::logic_error;
};

class NoCompatibleResource : public std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct PatientArrival {
    PatientRecord patient;
    std::size_t resource = 0;  // ring index
};

/// Same-tick wake-up for an idle resource with waiting patients. Scheduled
/// behind everything already queued for the tick, so the pick sees every
/// patient arriving at that tick.
struct ServiceStart {
    std::size_t resource = 0;
};

struct ServiceComplete {
    std::size_t resource = 0;
};

struct MessageDelivery {
    ProtocolMessage message;
};

struct SimEvent {
    Tick at = 0;
    std::uint64_t seq = 0;
    std::variant<PatientArrival, ServiceStart, ServiceComplete, MessageDelivery> kind;
};

enum class LoggedKind : std::uint8_t { Arrival, ServiceStart, ServiceComplete, Delivery };

/// One dispatched event. The structured fields are filled per kind; `details`
/// is the human-readable remainder of the dump line.
struct LoggedEvent {
    Tick at = 0;
    std::uint64_t seq = 0;
    LoggedKind kind = LoggedKind::Arrival;
    ResourceId resource;
    PatientId patient;
    Tick service_end = 0;
    bool patient_finished = false;
    std::optional<MessageKind> message;
    Tick sent_at = 0;
    std::string details;
};

struct PatientOutcome {
    PatientId id;
    Rational weight{1};
    Tick hospital_arrival = 0;
    Tick due = 0;
    std::optional<Tick> completion;
    std::vector<CompletedTask> completed_tasks;
};

struct ResourceUsage {
    ResourceId id;
    Tick busy_ticks = 0;
    std::optional<Tick> activated_at;
};

struct MessageCounts {
    std::int64_t request = 0;
    std::int64_t accept = 0;
    std::int64_t reject = 0;
    std::int64_t move = 0;

    std::int64_t total() const { return request + accept + reject + move; }
    void add(MessageKind kind);
    bool operator==(const MessageCounts&) const = default;
};

/// One accepted request and what came of it, with the messages actually
/// delivered under its cycle id.
struct CycleAudit {
    CycleId cycle;
    ResourceId source;
    ResourceId acceptor;
    std::int64_t granted = 0;
    std::int64_t moved = 0;
    MessageCounts delivered;
};

struct MoveAudit {
    Tick at = 0;
    AdmittedMove move;
};

struct SimulationTrace {
    PolicyLabel policy = PolicyLabel::FCFS;
    std::vector<LoggedEvent> events;
    /// Scenario order.
    std::vector<PatientOutcome> patients;
    /// Ring order.
    std::vector<ResourceUsage> resources;
    MessageCounts messages;
    std::vector<MoveAudit> moves;
    std::vector<CycleAudit> cycles;
    /// Number of event boundaries at which invariants were checked.
    std::uint64_t invariant_checks = 0;
};

struct EngineOptions {
    /// Check conservation, clock order, move safety and work conservation
    /// after every event; throws InvariantViolation on failure.
    bool check_invariants = true;
    bool record_events = true;
};

/// Patients in scenario order with their first resource. Round robin: patient
/// k goes to the first resource at ring position k, k+1, ... (mod m) that
/// serves its first task.
std::vector<PatientArrival> initial_assignment(const ScenarioSpec& spec);

/// A single deterministic run, advanced one event at a time.
class Simulation {
public:
    Simulation(const ScenarioSpec& spec, PolicyLabel policy, EngineOptions options = {});

    bool done() const { return queue_.empty(); }
    /// Dispatches the (at, seq)-minimal event. Requires !done().
    void step();
    Tick now() const { return now_; }

    std::size_t pending_events() const { return queue_.size(); }
    const ResourceAgent& agent(std::size_t ring_index) const { return agents_.at(ring_index); }
    std::size_t resource_count() const { return agents_.size(); }

    /// Requires done(). Throws StallError if any patient is unfinished.
    SimulationTrace finish() &&;

    /// Ids held by resources, in-flight groups, pending arrivals, finished or
    /// unroutable patients; sorted.
    std::vector<PatientId> accounted_patients() const;

private:
    void schedule(Tick at, std::variant<PatientArrival, ServiceStart, ServiceComplete, MessageDelivery> kind);
    void absorb(std::size_t ring, AgentEffects effects);
    void route_handoff(PatientRecord patient);
    void check_invariants(const std::optional<AdmittedMove>& admitted);
    std::string snapshot() const;

    const ScenarioSpec* spec_;
    PolicyLabel policy_;
    EngineOptions options_;
    std::vector<ResourceAgent> agents_;
    std::vector<Capabilities> capabilities_;
    std::unordered_map<ResourceId, std::size_t> ring_of_;
    std::unordered_map<PatientId, std::size_t> patient_index_;
    std::vector<PatientId> all_patients_sorted_;

    std::vector<SimEvent> queue_;  // min-heap on (at, seq)
    std::uint64_t next_seq_ = 0;
    Tick now_ = 0;
    std::optional<std::pair<Tick, std::uint64_t>> last_dispatched_;

    std::vector<PatientRecord> finished_;
    std::vector<PatientRecord> unroutable_;
    std::map<CycleId, CycleAudit> cycles_;
    SimulationTrace trace_;
};

/// Runs to completion. Pure function of (spec, policy).
SimulationTrace run(const ScenarioSpec& spec, PolicyLabel policy, EngineOptions options = {});

/// `tick seq kind details`, one line per event, LF-terminated.
std::string dump_trace(const SimulationTrace& trace);

}  // namespace patsched
