#include <doctest.h>

#include <random>

#include "helpers.hpp"
#include "patsched/metrics.hpp"
#include "support/oracles.hpp"

using namespace patsched;
using patsched::testing::patient_spec;

namespace {

// Hand-built trace: only the fields aggregate() reads.
SimulationTrace finished(std::vector<std::tuple<PatientId, std::int64_t, Tick, Tick>> rows) {
    SimulationTrace trace;
    for (const auto& [id, weight, due, completion] : rows) {
        PatientOutcome p;
        p.id = id;
        p.weight = Rational(weight);
        p.due = due;
        p.completion = completion;
        trace.patients.push_back(p);
    }
    return trace;
}

void check_matches_oracle(const ScenarioSpec& spec, const SimulationTrace& trace) {
    const auto m = aggregate(trace);
    const auto o = oracle::recompute(spec, trace);
    CHECK(m.cmax == o.cmax);
    CHECK(m.tmax == o.tmax);
    CHECK(m.sum_completion == o.sum_c);
    CHECK(m.sum_tardiness == o.sum_t);
    CHECK(m.sum_weighted_completion == o.sum_wc);
    CHECK(m.sum_weighted_tardiness == o.sum_wt);
    CHECK(m.clamped.tmax == o.tmax0);
    CHECK(m.clamped.sum_tardiness == o.sum_t0);
    CHECK(m.clamped.sum_weighted_tardiness == o.sum_wt0);
    CHECK(m.message_count == o.messages);
    CHECK(m.idle_ticks == o.idle);
}

}  // namespace

TEST_CASE("tardiness is literal with a clamped companion") {
    CHECK(tardiness(50, 35) == 15);
    CHECK(tardiness(35, 35) == 0);
    CHECK(tardiness(30, 35) == -5);
    CHECK(clamped_tardiness(30, 35) == 0);
    CHECK(clamped_tardiness(50, 35) == 15);
}

TEST_CASE("aggregate hand example") {
    const auto m = aggregate(finished({{"a", 2, 3, 3}, {"b", 1, 5, 8}}));
    CHECK(m.cmax == 8);
    CHECK(m.tmax == 3);
    CHECK(m.sum_completion == 11);
    CHECK(m.sum_tardiness == 3);
    CHECK(m.sum_weighted_completion == Rational(14));
    CHECK(m.sum_weighted_tardiness == Rational(3));
}

TEST_CASE("tmax is taken per patient, not from the last finisher") {
    const auto m = aggregate(finished({{"late", 1, 2, 10}, {"last", 1, 19, 20}}));
    CHECK(m.cmax == 20);
    CHECK(m.tmax == 8);
}

TEST_CASE("early finishers give negative literal and zero clamped tardiness") {
    const auto m = aggregate(finished({{"a", 3, 35, 30}, {"b", 1, 10, 8}}));
    CHECK(m.tmax == -2);
    CHECK(m.sum_tardiness == -7);
    CHECK(m.sum_weighted_tardiness == Rational(-17));
    CHECK(m.clamped == ClampedTardiness{});
}

TEST_CASE("the empty run is all zeros") {
    CHECK(aggregate(SimulationTrace{}) == MetricsReport{});
}

TEST_CASE("completion_time") {
    const auto spec = testing::one_station(1, {patient_spec("a", 1, 0, {{"ECG", 5}})});
    CHECK(completion_time(run(spec, PolicyLabel::FCFS), "a") == 5);

    const auto two = testing::one_station(
        1, {patient_spec("a", 1, 0, {{"ECG", 8}, {"LAB", 12}})});
    CHECK(completion_time(run(two, PolicyLabel::FCFS), "a") == 20);

    auto pending = finished({{"a", 1, 5, 5}});
    pending.patients[0].completion.reset();
    CHECK_THROWS_AS(completion_time(pending, "a"), Incomplete);
    CHECK_THROWS_AS(aggregate(pending), Incomplete);
    CHECK_THROWS_AS(completion_time(pending, "nobody"), Incomplete);
}

TEST_CASE("unit weights make weighted sums equal plain sums") {
    std::mt19937_64 rng(9);
    for (int trial = 0; trial < 20; ++trial) {
        GeneratorParams params;
        params.patients = 1 + rng() % 20;
        params.weight = {1, 1};
        params.task_count = {1, 3};
        const auto spec = generate_scenario(params, rng());
        for (auto policy : kAllPolicies) {
            const auto m = aggregate(run(spec, policy));
            CHECK(m.sum_weighted_completion == Rational(m.sum_completion));
            CHECK(m.sum_weighted_tardiness == Rational(m.sum_tardiness));
        }
    }
}

TEST_CASE("adding a patient never lowers cmax or the completion sum") {
    std::mt19937_64 rng(4);
    for (int trial = 0; trial < 30; ++trial) {
        auto rows = std::vector<std::tuple<PatientId, std::int64_t, Tick, Tick>>{};
        const auto n = 1 + rng() % 10;
        for (std::size_t i = 0; i < n; ++i) {
            rows.emplace_back("p" + std::to_string(i), 1 + rng() % 5, rng() % 50, rng() % 100);
        }
        const auto before = aggregate(finished(rows));
        rows.emplace_back("extra", 1 + rng() % 5, rng() % 50, rng() % 100);
        const auto after = aggregate(finished(rows));
        CHECK(after.cmax >= before.cmax);
        CHECK(after.sum_completion >= before.sum_completion);
        CHECK(after.sum_completion >= after.cmax);
        CHECK(after.clamped.tmax == std::max<Tick>(0, after.tmax));
    }
}

TEST_CASE("aggregate agrees with the straight-line recomputation") {
    std::mt19937_64 rng(2024);
    for (int trial = 0; trial < 40; ++trial) {
        GeneratorParams params;
        params.resources = 1 + rng() % 4;
        params.patients = 1 + rng() % 20;
        params.task_count = {1, 1 + static_cast<std::int64_t>(rng() % 3)};
        const auto spec = generate_scenario(params, rng());
        for (auto policy : kAllPolicies) {
            check_matches_oracle(spec, run(spec, policy));
        }
    }
}

TEST_CASE("fractional weights stay exact") {
    auto spec = testing::one_station(1, {patient_spec("a", 1, 0, {{"ECG", 3}}),
                                         patient_spec("b", 1, 0, {{"ECG", 3}})});
    spec.patients[0].weight = Rational(1, 3);
    spec.patients[1].weight = Rational(2, 3);
    const auto m = aggregate(run(spec, PolicyLabel::WSPT));
    // b (2/3) first: 2/3*3 + 1/3*6 = 4
    CHECK(m.sum_weighted_completion == Rational(4));
    CHECK(m.sum_weighted_tardiness == Rational(1));
}
