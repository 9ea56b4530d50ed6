#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "patsched/domain.hpp"

namespace patsched {

/// Document is malformed: bad JSON, wrong type, missing or unknown field.
class SchemaError : public std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Document is well-formed but breaks a scenario invariant.
class ValidationError : public std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Generator parameters out of range.
class RangeError : public std::runtime_error {
    using std::runtime_error::runtime_error;
};

class IoError : public std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ResourceSpec {
    ResourceId id;
    std::int64_t fixed_capacity = 1;
    Capabilities capabilities;
    std::size_t ring_index = 0;

    bool operator==(const ResourceSpec&) const = default;
};

struct PatientSpec {
    PatientId id;
    Rational weight{1};
    Tick hospital_arrival = 0;
    std::vector<Task> tasks;

    bool operator==(const PatientSpec&) const = default;
};

struct ScenarioSpec {
    std::vector<ResourceSpec> resources;
    std::vector<PatientSpec> patients;
    Tick message_latency = 1;
    std::string assignment_policy = "round_robin";
    std::uint64_t rng_seed = 0;

    bool operator==(const ScenarioSpec&) const = default;
};

/// Throws ValidationError naming the offending element.
void validate_scenario(const ScenarioSpec& spec);

/// Parses and validates a `.scn.json` document.
ScenarioSpec parse_scenario(std::string_view text);

/// Line-oriented JSON: top-level fields one per line, one resource or patient
/// per line. parse_scenario(render_scenario(s)) == s.
std::string render_scenario(const ScenarioSpec& spec);

ScenarioSpec load_scenario(const std::filesystem::path& path);
void save_scenario(const ScenarioSpec& spec, const std::filesystem::path& path);

struct IntRange {
    std::int64_t lo = 0;
    std::int64_t hi = 0;

    bool operator==(const IntRange&) const = default;
};

/// Parses "A..B" (inclusive). Throws std::invalid_argument.
IntRange parse_int_range(std::string_view text);

struct GeneratorParams {
    std::size_t resources = 3;
    std::size_t patients = 50;
    IntRange duration{5, 30};
    IntRange weight{1, 5};
    IntRange arrival{0, 120};
    IntRange task_count{1, 1};
    /// Defaults to default_capacity(patients, resources).
    std::optional<std::int64_t> capacity;
    Tick message_latency = 1;
};

/// ceil(n / 2m), at least 1.
std::int64_t default_capacity(std::size_t patients, std::size_t resources);

/// Task kinds drawn by the generator. Generated resources serve all of them.
inline constexpr std::array<std::string_view, 3> kGeneratedTaskKinds{"ECG", "XRAY", "LAB"};

/// Pure function of (params, seed). Throws RangeError on bad parameters.
ScenarioSpec generate_scenario(const GeneratorParams& params, std::uint64_t seed);

}  // namespace patsched
