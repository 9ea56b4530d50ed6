#pragma once

#include <string>
#include <vector>

#include "patsched/domain.hpp"
#include "patsched/scenario.hpp"

namespace patsched::testing {

inline PatientRecord patient(std::string id, std::int64_t weight, Tick arrival,
                             std::vector<Tick> durations, std::string kind = "ECG") {
    PatientRecord p;
    p.id = std::move(id);
    p.weight = Rational(weight);
    p.hospital_arrival = arrival;
    p.queue_arrival = arrival;
    for (auto d : durations) {
        p.tasks.push_back(Task{kind, d});
    }
    return p;
}

inline std::vector<PatientId> ids(const std::vector<PatientRecord>& patients) {
    std::vector<PatientId> out;
    for (const auto& p : patients) {
        out.push_back(p.id);
    }
    return out;
}

inline ResourceState resource(std::string id, std::int64_t capacity, std::size_t ring = 0) {
    ResourceState r;
    r.id = std::move(id);
    r.fixed_capacity = capacity;
    r.ring_index = ring;
    return r;
}

inline PatientSpec patient_spec(std::string id, std::int64_t weight, Tick arrival,
                                std::vector<Task> tasks) {
    return PatientSpec{std::move(id), Rational(weight), arrival, std::move(tasks)};
}

inline ScenarioSpec one_station(std::int64_t capacity, std::vector<PatientSpec> patients) {
    ScenarioSpec spec;
    spec.resources.push_back(ResourceSpec{"R0", capacity, {}, 0});
    spec.patients = std::move(patients);
    return spec;
}

}  // namespace patsched::testing
