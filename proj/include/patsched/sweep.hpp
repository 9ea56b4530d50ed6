#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "patsched/engine.hpp"
#include "patsched/metrics.hpp"
#include "patsched/policy.hpp"
#include "patsched/scenario.hpp"

namespace patsched {

struct SweepJob {
    PolicyLabel policy = PolicyLabel::FCFS;
    std::uint64_t seed = 0;

    bool operator==(const SweepJob&) const = default;
};

enum class SweepFailure : std::uint8_t { None, Invalid, Stall };

struct SweepResult {
    SweepJob job;
    MetricsReport metrics;
    std::optional<SimulationTrace> trace;
    SweepFailure failure = SweepFailure::None;
    std::string error;
};

struct SweepPlan {
    /// Called concurrently; must be a pure function of the seed.
    std::function<ScenarioSpec(std::uint64_t)> scenario_for_seed;
    std::vector<PolicyLabel> policies;
    std::vector<std::uint64_t> seeds;
    EngineOptions engine;
    bool keep_traces = false;

    /// (policy, seed) pairs, policies in kAllPolicies order, seeds as given.
    std::vector<SweepJob> jobs() const;
};

SweepResult run_job(const SweepPlan& plan, const SweepJob& job);

/// Runs every job across OpenMP threads. Results are in jobs() order.
std::vector<SweepResult> run_sweep(const SweepPlan& plan);

/// Reference implementation: the same jobs, one after another.
std::vector<SweepResult> run_sweep_serial(const SweepPlan& plan);

}  // namespace patsched
