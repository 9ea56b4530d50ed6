#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <variant>
#include <vector>

#include "patsched/domain.hpp"
#include "patsched/policy.hpp"
#include "patsched/protocol.hpp"

namespace patsched {

class ResourceAgent;

enum class EpisodeState : std::uint8_t { Idle, AwaitingReply, Moving, Exhausted };

std::string_view to_string(EpisodeState state);

/// Source-side negotiation state. At most one per resource.
struct MigrationEpisode {
    ResourceId source_id;
    std::size_t attempt_index = 0;
    CycleId cycle;
    EpisodeState state = EpisodeState::Idle;
    /// Set while Moving: where the group went and how many slots were granted.
    std::optional<std::pair<ResourceId, std::int64_t>> granted;
};

/// Read-only view handed to protocol decisions. Only a ResourceAgent can make
/// one, and only of itself, so a decision cannot be fed a peer's state.
class LocalView {
public:
    const ResourceState& self() const { return *self_; }
    /// Slots this resource has already promised to inbound groups.
    std::int64_t reserved_slots() const { return reserved_; }
    /// occupancy() + reserved_slots(); what acceptance is judged against.
    std::int64_t committed_occupancy() const { return self_->occupancy() + reserved_; }
    Tick now() const { return now_; }

private:
    friend class ResourceAgent;
    LocalView(const ResourceState& self, std::int64_t reserved, Tick now)
        : self_(&self), reserved_(reserved), now_(now) {}

    const ResourceState* self_;
    std::int64_t reserved_;
    Tick now_;
};

class NeighborsExhausted : public std::runtime_error {
public:
    NeighborsExhausted() : std::runtime_error("every neighbour has been tried") {}
};

class MemberMissing : public std::runtime_error {
public:
    explicit MemberMissing(const PatientId& id)
        : std::runtime_error("migration group member '" + id + "' is not waiting at the source"),
          patient_id(id) {}

    PatientId patient_id;
};

/// Strict excess: a request for occupancy - capacity patients, or nothing.
std::optional<MigrationRequest> detect_overload(const ResourceState& resource);

/// Accept while committed occupancy is strictly below capacity, granting
/// min(headroom, requested). Equality rejects.
std::variant<Accept, Reject> evaluate_request(const LocalView& acceptor,
                                              const MigrationRequest& request);

/// Keeps patients whose next task the destination serves, orders them by
/// (weight desc, queue_arrival asc, id asc) and takes up to granted_slots.
/// May return an empty group.
std::vector<PatientRecord> form_group(std::span<const PatientRecord> exceeded,
                                      std::int64_t granted_slots,
                                      const Capabilities& destination_capabilities);

/// Largest group one accepted request may carry: the grant for DOPSG, one
/// patient for DOPS.
std::int64_t group_size_limit(PolicyLabel label, std::int64_t granted_slots);

/// Ring position of the attempt-th neighbour after ring_index.
/// Throws NeighborsExhausted once attempt reaches m - 1.
std::size_t next_neighbor(std::size_t ring_index, std::size_t resource_count, std::size_t attempt);

/// Source half of a move. All-or-nothing: throws MemberMissing and leaves the
/// queue unchanged if any member is not waiting there.
std::vector<PatientRecord> detach_group(ResourceState& source,
                                        std::span<const PatientId> members);

/// Destination half of a move: members join the queue with queue_arrival = now.
void admit_group(ResourceState& destination, std::vector<PatientRecord> patients, Tick now);

/// Both halves back to back, for callers holding both states.
void apply_move(ResourceState& source, ResourceState& destination, const MigrationGroup& group,
                Tick now);

}  // namespace patsched
