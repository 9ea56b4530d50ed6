#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <string_view>
#include <variant>

#include "patsched/domain.hpp"

namespace patsched {

/// Identifies one request/reply exchange. Every message of the exchange
/// (request, accept or reject, move or decline) carries the same id.
struct CycleId {
    std::size_t source_ring = 0;
    std::uint64_t serial = 0;

    auto operator<=>(const CycleId&) const = default;
};

struct MigrationRequest {
    std::int64_t exceeded_count = 0;
};

/// Grants slots and tells the source what the acceptor can serve, so the
/// source can filter its group without knowing anything else about it.
struct Accept {
    std::int64_t granted_slots = 0;
    Capabilities capabilities;
};

/// Sent by an acceptor that has no headroom, or by a source declining a grant
/// it can no longer use.
struct Reject {};

struct GroupMove {
    MigrationGroup group;
};

using Payload = std::variant<MigrationRequest, Accept, Reject, GroupMove>;

enum class MessageKind : std::uint8_t { Request, Accept, Reject, Move };

struct ProtocolMessage {
    ResourceId from_id;
    ResourceId to_id;
    Tick sent_at = 0;
    CycleId cycle;
    Payload payload;

    MessageKind kind() const { return static_cast<MessageKind>(payload.index()); }
};

std::string_view to_string(MessageKind kind);

}  // namespace patsched
