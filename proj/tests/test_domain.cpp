#include <doctest.h>

#include "helpers.hpp"
#include "patsched/domain.hpp"
#include "patsched/policy.hpp"

using namespace patsched;
using patsched::testing::ids;
using patsched::testing::patient;

TEST_CASE("due_time is arrival plus total processing") {
    CHECK(due_time(patient("a", 1, 0, {10})) == 10);
    CHECK(due_time(patient("a", 1, 5, {10, 20})) == 35);
    CHECK(due_time(patient("a", 1, 7, {})) == 7);

    auto p = patient("a", 1, 5, {10, 20});
    p.completed_tasks.push_back({"ECG", 5, 15});
    p.queue_arrival = 40;
    CHECK(due_time(p) == 35);  // unaffected by progress or migration
}

TEST_CASE("remaining_processing counts uncompleted tasks only") {
    auto p = patient("a", 1, 0, {10, 20});
    CHECK(remaining_processing(p) == 30);
    p.completed_tasks.push_back({"ECG", 0, 10});
    CHECK(remaining_processing(p) == 20);
    CHECK(remaining_processing(patient("b", 1, 0, {})) == 0);
}

TEST_CASE("next_task walks the task list") {
    auto p = patient("a", 1, 0, {10, 20});
    REQUIRE(p.next_task() != nullptr);
    CHECK(p.next_task()->duration == 10);
    p.completed_tasks.push_back({"ECG", 0, 10});
    CHECK(p.next_task()->duration == 20);
    p.completed_tasks.push_back({"ECG", 10, 30});
    CHECK(p.next_task() == nullptr);
    CHECK(p.finished());
}

TEST_CASE("capabilities default to every kind") {
    Capabilities all;
    CHECK(all.serves("MRI"));
    CHECK(all.serves_everything());
    CHECK_THROWS_AS((void)all.kinds(), std::logic_error);

    Capabilities ecg({"ECG"});
    CHECK(ecg.serves("ECG"));
    CHECK_FALSE(ecg.serves("XRAY"));
    CHECK(ecg.kinds().size() == 1);
}

TEST_CASE("occupancy counts the waiting queue and the service slot") {
    auto r = testing::resource("R0", 5);
    CHECK(r.occupancy() == 0);
    r.waiting_queue.push_back(patient("a", 1, 0, {5}));
    CHECK(r.occupancy() == 1);
    r.in_service = InService{patient("b", 1, 0, {5}), 0, 5};
    CHECK(r.occupancy() == 2);
}

TEST_CASE("exceeded_patients takes the tail of the policy order") {
    auto r = testing::resource("R0", 5);
    // FCFS order is by queue_arrival; insert out of order to make the sort matter.
    for (auto [id, at] : std::vector<std::pair<std::string, Tick>>{
             {"c", 3}, {"a", 1}, {"f", 6}, {"b", 2}, {"e", 5}, {"d", 4}}) {
        r.waiting_queue.push_back(patient(id, 1, at, {5}));
    }
    r.in_service = InService{patient("s", 1, 0, {5}), 0, 5};
    REQUIRE(r.occupancy() == 7);
    CHECK(ids(exceeded_patients(r, PolicyLabel::FCFS)) == std::vector<PatientId>{"e", "f"});

    SUBCASE("at capacity") {
        r.waiting_queue.resize(4);
        CHECK(r.occupancy() == 5);
        CHECK(exceeded_patients(r, PolicyLabel::FCFS).empty());
    }
    SUBCASE("empty resource") {
        auto empty = testing::resource("R1", 5);
        CHECK(exceeded_patients(empty, PolicyLabel::FCFS).empty());
    }
    SUBCASE("the patient in service is never eligible") {
        auto tight = testing::resource("R1", 1);
        tight.in_service = InService{patient("s", 1, 0, {5}), 0, 5};
        tight.waiting_queue.push_back(patient("w", 1, 1, {5}));
        CHECK(ids(exceeded_patients(tight, PolicyLabel::FCFS)) == std::vector<PatientId>{"w"});
    }
}

TEST_CASE("exceeded_patients is empty exactly when occupancy is within capacity") {
    for (std::int64_t capacity = 1; capacity <= 6; ++capacity) {
        for (std::size_t queued = 0; queued <= 8; ++queued) {
            for (bool serving : {false, true}) {
                auto r = testing::resource("R0", capacity);
                for (std::size_t i = 0; i < queued; ++i) {
                    r.waiting_queue.push_back(
                        patient("p" + std::to_string(i), 1, static_cast<Tick>(i), {3}));
                }
                if (serving) {
                    r.in_service = InService{patient("s", 1, 0, {3}), 0, 3};
                }
                const auto exceeded = exceeded_patients(r, PolicyLabel::WSPT);
                CHECK(exceeded.empty() == (r.occupancy() <= capacity));
                if (!exceeded.empty()) {
                    CHECK(static_cast<std::int64_t>(exceeded.size()) == r.occupancy() - capacity);
                }
            }
        }
    }
}
