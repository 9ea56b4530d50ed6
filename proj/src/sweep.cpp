#include "patsched/sweep.hpp"

#include <algorithm>
#include <cstddef>

namespace patsched {

std::vector<SweepJob> SweepPlan::jobs() const {
    std::vector<SweepJob> out;
    for (auto label : kAllPolicies) {
        if (std::find(policies.begin(), policies.end(), label) == policies.end()) {
            continue;
        }
        for (auto seed : seeds) {
            out.push_back(SweepJob{label, seed});
        }
    }
    return out;
}

SweepResult run_job(const SweepPlan& plan, const SweepJob& job) {
    SweepResult result;
    result.job = job;
    try {
        const ScenarioSpec spec = plan.scenario_for_seed(job.seed);
        SimulationTrace trace = run(spec, job.policy, plan.engine);
        result.metrics = aggregate(trace);
        if (plan.keep_traces) {
            result.trace = std::move(trace);
        }
    } catch (const StallError& e) {
        result.failure = SweepFailure::Stall;
        result.error = e.what();
    } catch (const std::exception& e) {
        result.failure = SweepFailure::Invalid;
        result.error = e.what();
    }
    return result;
}

std::vector<SweepResult> run_sweep(const SweepPlan& plan) {
    const auto jobs = plan.jobs();
    std::vector<SweepResult> results(jobs.size());
    const auto count = static_cast<std::ptrdiff_t>(jobs.size());
#pragma omp parallel for schedule(dynamic)
    for (std::ptrdiff_t i = 0; i < count; ++i) {
        results[static_cast<std::size_t>(i)] = run_job(plan, jobs[static_cast<std::size_t>(i)]);
    }
    return results;
}

std::vector<SweepResult> run_sweep_serial(const SweepPlan& plan) {
    std::vector<SweepResult> results;
    for (const auto& job : plan.jobs()) {
        results.push_back(run_job(plan, job));
    }
    return results;
}

}  // namespace patsched
