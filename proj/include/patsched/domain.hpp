#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "patsched/rational.hpp"

namespace patsched {

/// Simulation time. One tick is one minute.
using Tick = std::int64_t;
using PatientId = std::string;
using ResourceId = std::string;

enum class PolicyLabel : std::uint8_t;

struct Task {
    std::string kind;
    Tick duration = 0;

    bool operator==(const Task&) const = default;
};

struct CompletedTask {
    std::string kind;
    Tick start = 0;
    Tick end = 0;

    bool operator==(const CompletedTask&) const = default;
};

/// A patient and its progress. Tasks are served in list order; the record
/// travels with the patient when it migrates.
struct PatientRecord {
    PatientId id;
    Rational weight{1};
    Tick hospital_arrival = 0;
    /// Arrival at the current resource; reset on every (re)entry to a queue.
    Tick queue_arrival = 0;
    std::vector<Task> tasks;
    std::vector<CompletedTask> completed_tasks;

    const Task* next_task() const;
    bool finished() const { return completed_tasks.size() >= tasks.size(); }
};

/// Set of task kinds a resource can serve. Default-constructed serves all.
class Capabilities {
public:
    Capabilities() = default;
    explicit Capabilities(std::set<std::string> kinds) : kinds_(std::move(kinds)) {}

    static Capabilities all() { return {}; }

    bool serves(std::string_view kind) const;
    bool serves_everything() const { return !kinds_.has_value(); }
    /// Only meaningful when !serves_everything().
    const std::set<std::string>& kinds() const;

    bool operator==(const Capabilities&) const = default;

private:
    std::optional<std::set<std::string>> kinds_;
};

struct InService {
    PatientRecord patient;
    Tick service_start = 0;
    Tick service_end = 0;
};

/// A resource agent's local view of itself.
struct ResourceState {
    ResourceId id;
    std::size_t ring_index = 0;
    std::int64_t fixed_capacity = 1;
    std::vector<PatientRecord> waiting_queue;
    std::optional<InService> in_service;
    Tick busy_ticks = 0;
    Capabilities capabilities;

    /// Current occupancy: waiting patients plus the one in service.
    std::int64_t occupancy() const {
        return static_cast<std::int64_t>(waiting_queue.size()) + (in_service ? 1 : 0);
    }
};

struct MigrationGroup {
    ResourceId source_id;
    ResourceId destination_id;
    std::vector<PatientRecord> patients;
    Tick formed_at = 0;
};

/// hospital_arrival plus total processing, completed and pending alike.
Tick due_time(const PatientRecord& patient);

/// Sum of durations of tasks not yet completed.
Tick remaining_processing(const PatientRecord& patient);

/// The last max(0, occupancy - capacity) waiting patients under the policy's
/// queue order. The patient in service is never included.
std::vector<PatientRecord> exceeded_patients(const ResourceState& resource, PolicyLabel policy);

}  // namespace patsched
