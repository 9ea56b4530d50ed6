#pragma once

#include <array>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "patsched/domain.hpp"

namespace patsched {

enum class PolicyLabel : std::uint8_t { FCFS = 0, WSPT = 1, DOPS = 2, DOPSG = 3 };

/// Presentation order used by reports and sweeps.
inline constexpr std::array<PolicyLabel, 4> kAllPolicies{PolicyLabel::FCFS, PolicyLabel::WSPT,
                                                         PolicyLabel::DOPS, PolicyLabel::DOPSG};

std::string_view to_string(PolicyLabel label);

/// Case-insensitive; "all" is not a label and yields nullopt.
std::optional<PolicyLabel> parse_policy(std::string_view text);

/// DOPS and DOPSG run the migration protocol; FCFS and WSPT never migrate.
constexpr bool migrates(PolicyLabel label) {
    return label == PolicyLabel::DOPS || label == PolicyLabel::DOPSG;
}

/// Strict total order over distinct patients.
///
/// FCFS: ascending queue_arrival, then id. The other three labels share the
/// weighted-shortest-processing-time order: descending weight / next-task
/// duration, compared by exact cross-multiplication, then queue_arrival, then id.
bool ranks_before(PolicyLabel label, const PatientRecord& a, const PatientRecord& b);

/// A sorted copy of `queue`; the input is untouched.
std::vector<PatientRecord> order_queue(PolicyLabel label, std::span<const PatientRecord> queue,
                                       Tick now);

/// Removes and returns the best-ranked waiting patient whose next task the
/// resource serves. Requires an empty service slot.
std::optional<PatientRecord> select_next(PolicyLabel label, ResourceState& resource, Tick now);

}  // namespace patsched
