#include "patsched/scenario.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <random>
#include <set>
#include <sstream>

#include <json.hpp>

namespace patsched {

namespace {

using nlohmann::json;

void reject_unknown(const json& object, std::initializer_list<std::string_view> allowed,
                    const std::string& where) {
    for (const auto& [key, value] : object.items()) {
        if (std::find(allowed.begin(), allowed.end(), key) == allowed.end()) {
            throw SchemaError(where + ": unknown field '" + key + "'");
        }
    }
}

const json& require(const json& object, const char* key, const std::string& where) {
    auto it = object.find(key);
    if (it == object.end()) {
        throw SchemaError(where + ": missing field '" + key + "'");
    }
    return *it;
}

std::int64_t as_int(const json& value, const std::string& where) {
    if (!value.is_number_integer()) {
        throw SchemaError(where + ": expected an integer");
    }
    if (value.is_number_unsigned() &&
        value.get<std::uint64_t>() > static_cast<std::uint64_t>(INT64_MAX)) {
        throw SchemaError(where + ": integer out of range");
    }
    return value.get<std::int64_t>();
}

std::string as_string(const json& value, const std::string& where) {
    if (!value.is_string()) {
        throw SchemaError(where + ": expected a string");
    }
    return value.get<std::string>();
}

const json& as_array(const json& value, const std::string& where) {
    if (!value.is_array()) {
        throw SchemaError(where + ": expected an array");
    }
    return value;
}

const json& as_object(const json& value, const std::string& where) {
    if (!value.is_object()) {
        throw SchemaError(where + ": expected an object");
    }
    return value;
}

Rational as_weight(const json& value, const std::string& where) {
    if (value.is_number_integer()) {
        return Rational(as_int(value, where));
    }
    if (value.is_string()) {
        try {
            return parse_rational(value.get<std::string>());
        } catch (const std::invalid_argument& e) {
            throw SchemaError(where + ": " + e.what());
        }
    }
    throw SchemaError(where + ": expected an integer or a \"p/q\" string");
}

ResourceSpec parse_resource(const json& value, const std::string& where) {
    as_object(value, where);
    reject_unknown(value, {"id", "fixed_capacity", "ring_index", "capabilities"}, where);
    ResourceSpec r;
    r.id = as_string(require(value, "id", where), where + ".id");
    r.fixed_capacity = as_int(require(value, "fixed_capacity", where), where + ".fixed_capacity");
    const auto ring = as_int(require(value, "ring_index", where), where + ".ring_index");
    if (ring < 0) {
        throw ValidationError(where + ".ring_index: must be non-negative");
    }
    r.ring_index = static_cast<std::size_t>(ring);
    if (auto it = value.find("capabilities"); it != value.end()) {
        const auto path = where + ".capabilities";
        std::set<std::string> kinds;
        std::size_t i = 0;
        for (const auto& kind : as_array(*it, path)) {
            kinds.insert(as_string(kind, path + "[" + std::to_string(i++) + "]"));
        }
        r.capabilities = Capabilities(std::move(kinds));
    }
    return r;
}

PatientSpec parse_patient(const json& value, const std::string& where) {
    as_object(value, where);
    reject_unknown(value, {"id", "weight", "hospital_arrival", "tasks"}, where);
    PatientSpec p;
    p.id = as_string(require(value, "id", where), where + ".id");
    if (auto it = value.find("weight"); it != value.end()) {
        p.weight = as_weight(*it, where + ".weight");
    }
    p.hospital_arrival =
        as_int(require(value, "hospital_arrival", where), where + ".hospital_arrival");
    const auto tasks_path = where + ".tasks";
    std::size_t i = 0;
    for (const auto& task : as_array(require(value, "tasks", where), tasks_path)) {
        const auto path = tasks_path + "[" + std::to_string(i++) + "]";
        as_object(task, path);
        reject_unknown(task, {"kind", "duration"}, path);
        p.tasks.push_back(Task{as_string(require(task, "kind", path), path + ".kind"),
                               as_int(require(task, "duration", path), path + ".duration")});
    }
    return p;
}

json resource_json(const ResourceSpec& r) {
    json out = json::object();
    out["id"] = r.id;
    out["fixed_capacity"] = r.fixed_capacity;
    out["ring_index"] = r.ring_index;
    if (!r.capabilities.serves_everything()) {
        out["capabilities"] = r.capabilities.kinds();
    }
    return out;
}

json patient_json(const PatientSpec& p) {
    json out = json::object();
    out["id"] = p.id;
    if (p.weight.denominator() == 1) {
        out["weight"] = p.weight.numerator();
    } else {
        out["weight"] = to_fraction_text(p.weight);
    }
    out["hospital_arrival"] = p.hospital_arrival;
    json tasks = json::array();
    for (const auto& t : p.tasks) {
        tasks.push_back(json{{"kind", t.kind}, {"duration", t.duration}});
    }
    out["tasks"] = std::move(tasks);
    return out;
}

std::int64_t draw(std::mt19937_64& rng, const IntRange& range) {
    return std::uniform_int_distribution<std::int64_t>(range.lo, range.hi)(rng);
}

void check_range(const IntRange& range, std::int64_t floor, const char* name) {
    if (range.lo > range.hi) {
        throw RangeError(std::string(name) + ": inverted range " + std::to_string(range.lo) +
                         ".." + std::to_string(range.hi));
    }
    if (range.lo < floor) {
        throw RangeError(std::string(name) + ": lower bound must be at least " +
                         std::to_string(floor));
    }
}

}  // namespace

void validate_scenario(const ScenarioSpec& spec) {
    if (spec.resources.empty()) {
        throw ValidationError("resources: at least one resource is required");
    }
    if (spec.message_latency < 0) {
        throw ValidationError("message_latency: must be non-negative");
    }
    if (spec.assignment_policy != "round_robin") {
        throw ValidationError("assignment_policy: unsupported policy '" + spec.assignment_policy +
                              "'");
    }

    std::set<ResourceId> resource_ids;
    std::vector<bool> ring_seen(spec.resources.size(), false);
    for (const auto& r : spec.resources) {
        if (!resource_ids.insert(r.id).second) {
            throw ValidationError("resource '" + r.id + "': duplicate id");
        }
        if (r.fixed_capacity < 1) {
            throw ValidationError("resource '" + r.id + "': fixed_capacity must be positive");
        }
        if (r.ring_index >= spec.resources.size() || ring_seen[r.ring_index]) {
            throw ValidationError("resource '" + r.id + "': ring_index " +
                                  std::to_string(r.ring_index) + " is not a unique value in 0.." +
                                  std::to_string(spec.resources.size() - 1));
        }
        ring_seen[r.ring_index] = true;
    }

    std::set<PatientId> patient_ids;
    for (const auto& p : spec.patients) {
        if (!patient_ids.insert(p.id).second) {
            throw ValidationError("patient '" + p.id + "': duplicate id");
        }
        if (p.weight <= 0) {
            throw ValidationError("patient '" + p.id + "': weight must be positive");
        }
        if (p.hospital_arrival < 0) {
            throw ValidationError("patient '" + p.id + "': hospital_arrival must be non-negative");
        }
        if (p.tasks.empty()) {
            throw ValidationError("patient '" + p.id + "': at least one task is required");
        }
        for (const auto& t : p.tasks) {
            if (t.duration <= 0) {
                throw ValidationError("patient '" + p.id + "': task '" + t.kind +
                                      "' has non-positive duration");
            }
            const bool served = std::any_of(spec.resources.begin(), spec.resources.end(),
                                            [&](const ResourceSpec& r) {
                                                return r.capabilities.serves(t.kind);
                                            });
            if (!served) {
                throw ValidationError("patient '" + p.id + "': no resource serves task kind '" +
                                      t.kind + "'");
            }
        }
    }
}

ScenarioSpec parse_scenario(std::string_view text) {
    json doc;
    try {
        doc = json::parse(text.begin(), text.end());
    } catch (const json::parse_error& e) {
        throw SchemaError(std::string("malformed document: ") + e.what());
    }
    as_object(doc, "scenario");
    reject_unknown(doc,
                   {"resources", "patients", "message_latency", "assignment_policy", "rng_seed"},
                   "scenario");

    ScenarioSpec spec;
    std::size_t i = 0;
    for (const auto& r : as_array(require(doc, "resources", "scenario"), "resources")) {
        spec.resources.push_back(parse_resource(r, "resources[" + std::to_string(i++) + "]"));
    }
    i = 0;
    for (const auto& p : as_array(require(doc, "patients", "scenario"), "patients")) {
        spec.patients.push_back(parse_patient(p, "patients[" + std::to_string(i++) + "]"));
    }
    if (auto it = doc.find("message_latency"); it != doc.end()) {
        spec.message_latency = as_int(*it, "message_latency");
    }
    if (auto it = doc.find("assignment_policy"); it != doc.end()) {
        spec.assignment_policy = as_string(*it, "assignment_policy");
    }
    if (auto it = doc.find("rng_seed"); it != doc.end()) {
        if (!it->is_number_integer() || (it->is_number_integer() && !it->is_number_unsigned() &&
                                         it->get<std::int64_t>() < 0)) {
            throw SchemaError("rng_seed: expected a non-negative integer");
        }
        spec.rng_seed = it->get<std::uint64_t>();
    }
    validate_scenario(spec);
    return spec;
}

std::string render_scenario(const ScenarioSpec& spec) {
    std::ostringstream out;
    out << "{\n";
    out << "  \"message_latency\": " << spec.message_latency << ",\n";
    out << "  \"assignment_policy\": " << json(spec.assignment_policy).dump() << ",\n";
    out << "  \"rng_seed\": " << spec.rng_seed << ",\n";
    auto list = [&](const char* name, const auto& items, auto to_json, bool last) {
        out << "  \"" << name << "\": [";
        for (std::size_t i = 0; i < items.size(); ++i) {
            out << (i ? ",\n    " : "\n    ") << to_json(items[i]).dump();
        }
        out << (items.empty() ? "]" : "\n  ]") << (last ? "\n" : ",\n");
    };
    list("resources", spec.resources, resource_json, false);
    list("patients", spec.patients, patient_json, true);
    out << "}\n";
    return out.str();
}

ScenarioSpec load_scenario(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw IoError("cannot read scenario file " + path.string());
    }
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parse_scenario(buffer.str());
}

void save_scenario(const ScenarioSpec& spec, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw IoError("cannot write scenario file " + path.string());
    }
    out << render_scenario(spec);
    if (!out) {
        throw IoError("failed writing scenario file " + path.string());
    }
}

IntRange parse_int_range(std::string_view text) {
    const auto dots = text.find("..");
    auto parse = [&](std::string_view part) {
        std::int64_t value = 0;
        auto [ptr, ec] = std::from_chars(part.data(), part.data() + part.size(), value);
        if (part.empty() || ec != std::errc{} || ptr != part.data() + part.size()) {
            throw std::invalid_argument("not a range: '" + std::string(text) + "'");
        }
        return value;
    };
    if (dots == std::string_view::npos) {
        const auto v = parse(text);
        return {v, v};
    }
    return {parse(text.substr(0, dots)), parse(text.substr(dots + 2))};
}

std::int64_t default_capacity(std::size_t patients, std::size_t resources) {
    if (resources == 0) {
        return 1;
    }
    const auto n = static_cast<std::int64_t>(patients);
    const auto twice_m = 2 * static_cast<std::int64_t>(resources);
    return std::max<std::int64_t>(1, (n + twice_m - 1) / twice_m);
}

ScenarioSpec generate_scenario(const GeneratorParams& params, std::uint64_t seed) {
    if (params.resources < 1) {
        throw RangeError("resources: at least one resource is required");
    }
    check_range(params.duration, 1, "duration");
    check_range(params.weight, 1, "weight");
    check_range(params.arrival, 0, "arrival");
    check_range(params.task_count, 1, "task count");
    if (params.capacity && *params.capacity < 1) {
        throw RangeError("capacity: must be positive");
    }
    if (params.message_latency < 0) {
        throw RangeError("latency: must be non-negative");
    }

    ScenarioSpec spec;
    spec.rng_seed = seed;
    spec.message_latency = params.message_latency;
    const auto capacity =
        params.capacity.value_or(default_capacity(params.patients, params.resources));
    for (std::size_t i = 0; i < params.resources; ++i) {
        spec.resources.push_back(ResourceSpec{"R" + std::to_string(i), capacity, {}, i});
    }

    const auto width = std::max<std::size_t>(3, std::to_string(params.patients).size());
    std::mt19937_64 rng(seed);
    const IntRange kind_range{0, static_cast<std::int64_t>(kGeneratedTaskKinds.size()) - 1};
    for (std::size_t j = 0; j < params.patients; ++j) {
        PatientSpec p;
        std::string number = std::to_string(j);
        p.id = "P" + std::string(width - number.size(), '0') + number;
        p.hospital_arrival = draw(rng, params.arrival);
        p.weight = Rational(draw(rng, params.weight));
        const auto count = draw(rng, params.task_count);
        for (std::int64_t t = 0; t < count; ++t) {
            const auto kind = kGeneratedTaskKinds[static_cast<std::size_t>(draw(rng, kind_range))];
            p.tasks.push_back(Task{std::string(kind), draw(rng, params.duration)});
        }
        spec.patients.push_back(std::move(p));
    }
    return spec;
}

}  // namespace patsched
