#include <doctest.h>

#include <random>

#include "helpers.hpp"
#include "patsched/policy.hpp"
#include "support/oracles.hpp"

using namespace patsched;
using patsched::testing::ids;
using patsched::testing::patient;

namespace {

std::int64_t sequence_cost(const std::vector<PatientRecord>& order) {
    std::int64_t clock = 0;
    std::int64_t total = 0;
    for (const auto& p : order) {
        clock += p.tasks.front().duration;
        total += p.weight.numerator() * clock;
    }
    return total;
}

std::vector<PatientRecord> random_queue(std::mt19937_64& rng, std::size_t n) {
    std::uniform_int_distribution<std::int64_t> w(1, 4), d(1, 6), at(0, 5);
    std::vector<PatientRecord> queue;
    for (std::size_t i = 0; i < n; ++i) {
        queue.push_back(patient("p" + std::to_string(i), w(rng), at(rng), {d(rng)}));
    }
    std::shuffle(queue.begin(), queue.end(), rng);
    return queue;
}

}  // namespace

TEST_CASE("policy labels parse case-insensitively") {
    CHECK(parse_policy("fcfs") == PolicyLabel::FCFS);
    CHECK(parse_policy("Wspt") == PolicyLabel::WSPT);
    CHECK(parse_policy("DOPSG") == PolicyLabel::DOPSG);
    CHECK(parse_policy("dops") == PolicyLabel::DOPS);
    CHECK_FALSE(parse_policy("edd").has_value());
    CHECK_FALSE(migrates(PolicyLabel::FCFS));
    CHECK_FALSE(migrates(PolicyLabel::WSPT));
    CHECK(migrates(PolicyLabel::DOPS));
    CHECK(migrates(PolicyLabel::DOPSG));
}

TEST_CASE("FCFS orders by queue arrival then id") {
    std::vector<PatientRecord> queue{patient("x", 1, 5, {1}), patient("y", 1, 3, {1}),
                                     patient("z", 1, 7, {1})};
    CHECK(ids(order_queue(PolicyLabel::FCFS, queue, 0)) == std::vector<PatientId>{"y", "x", "z"});

    std::vector<PatientRecord> tied{patient("b", 1, 0, {1}), patient("a", 1, 0, {1})};
    CHECK(ids(order_queue(PolicyLabel::FCFS, tied, 0)) == std::vector<PatientId>{"a", "b"});
}

TEST_CASE("WSPT orders by weight over next-task duration") {
    std::vector<PatientRecord> queue{patient("w2p4", 2, 0, {4}), patient("w3p3", 3, 0, {3}),
                                     patient("w1p5", 1, 0, {5})};
    const auto ordered = order_queue(PolicyLabel::WSPT, queue, 0);
    CHECK(ids(ordered) == std::vector<PatientId>{"w3p3", "w2p4", "w1p5"});

    // Brute force over all six sequences agrees that this order is optimal.
    const auto best = oracle::min_weighted_completion({{2, 4}, {3, 3}, {1, 5}});
    CHECK(best == 3 * 3 + 2 * 7 + 1 * 12);
    CHECK(sequence_cost(ordered) == best);

    SUBCASE("equal ratios fall back to queue arrival") {
        std::vector<PatientRecord> tied{patient("late", 1, 9, {2}), patient("early", 2, 4, {4})};
        CHECK(ids(order_queue(PolicyLabel::WSPT, tied, 0)) ==
              std::vector<PatientId>{"early", "late"});
    }
    SUBCASE("DOPS and DOPSG share the WSPT order") {
        CHECK(ids(order_queue(PolicyLabel::DOPS, queue, 0)) == ids(ordered));
        CHECK(ids(order_queue(PolicyLabel::DOPSG, queue, 0)) == ids(ordered));
    }
    SUBCASE("ratio uses the next task, not the first") {
        auto a = patient("a", 1, 0, {1, 10});
        a.completed_tasks.push_back({"ECG", 0, 1});
        auto b = patient("b", 1, 0, {5});
        std::vector<PatientRecord> q{a, b};
        CHECK(ids(order_queue(PolicyLabel::WSPT, q, 0)) == std::vector<PatientId>{"b", "a"});
    }
    SUBCASE("fractional weights compare exactly") {
        auto a = patient("a", 1, 0, {3});
        a.weight = Rational(1, 3);  // ratio 1/9
        auto b = patient("b", 1, 1, {9});  // ratio 1/9, later arrival
        std::vector<PatientRecord> q{b, a};
        CHECK(ids(order_queue(PolicyLabel::WSPT, q, 0)) == std::vector<PatientId>{"a", "b"});
    }
}

TEST_CASE("order_queue is a permutation, idempotent and leaves its input alone") {
    std::mt19937_64 rng(2024);
    for (int trial = 0; trial < 200; ++trial) {
        const auto queue = random_queue(rng, static_cast<std::size_t>(trial % 9));
        for (auto label : kAllPolicies) {
            const auto before = ids(queue);
            const auto once = order_queue(label, queue, 0);
            CHECK(ids(queue) == before);

            auto sorted_in = ids(queue);
            auto sorted_out = ids(once);
            std::sort(sorted_in.begin(), sorted_in.end());
            std::sort(sorted_out.begin(), sorted_out.end());
            CHECK(sorted_in == sorted_out);

            CHECK(ids(order_queue(label, once, 0)) == ids(once));
            for (std::size_t i = 0; i + 1 < once.size(); ++i) {
                CHECK(ranks_before(label, once[i], once[i + 1]));
                CHECK_FALSE(ranks_before(label, once[i + 1], once[i]));
            }
        }
    }
}

TEST_CASE("WSPT sequence cost matches the exhaustive minimum") {
    std::mt19937_64 rng(99);
    for (int trial = 0; trial < 60; ++trial) {
        auto queue = random_queue(rng, 1 + static_cast<std::size_t>(trial % 7));
        std::vector<oracle::Job> jobs;
        for (const auto& p : queue) {
            jobs.push_back({p.weight.numerator(), p.tasks.front().duration});
        }
        CHECK(sequence_cost(order_queue(PolicyLabel::WSPT, queue, 0)) ==
              oracle::min_weighted_completion(jobs));
    }
}

TEST_CASE("select_next removes the head of the order") {
    auto r = testing::resource("R0", 5);
    CHECK_FALSE(select_next(PolicyLabel::WSPT, r, 0).has_value());

    r.waiting_queue.push_back(patient("only", 1, 0, {3}));
    auto one = select_next(PolicyLabel::WSPT, r, 0);
    REQUIRE(one.has_value());
    CHECK(one->id == "only");
    CHECK(r.waiting_queue.empty());

    r.waiting_queue = {patient("w2p4", 2, 0, {4}), patient("w3p3", 3, 0, {3}),
                       patient("w1p5", 1, 0, {5})};
    const auto expected_head = order_queue(PolicyLabel::WSPT, r.waiting_queue, 0).front().id;
    auto head = select_next(PolicyLabel::WSPT, r, 0);
    REQUIRE(head.has_value());
    CHECK(head->id == expected_head);
    CHECK(head->id == "w3p3");
    CHECK(r.waiting_queue.size() == 2);

    SUBCASE("skips patients whose next task the station cannot serve") {
        auto station = testing::resource("R1", 5);
        station.capabilities = Capabilities({"ECG"});
        station.waiting_queue = {patient("xray", 9, 0, {1}, "XRAY"), patient("ecg", 1, 0, {9})};
        auto chosen = select_next(PolicyLabel::WSPT, station, 0);
        REQUIRE(chosen.has_value());
        CHECK(chosen->id == "ecg");
    }
}
