#include "patsched/cli.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <map>
#include <ostream>
#include <stdexcept>

#include <CLI11.hpp>

#include "patsched/sweep.hpp"

namespace patsched::cli {

namespace {

struct Column {
    std::string name;
    std::vector<std::string> cells;
};

void print_table(std::ostream& out, const std::vector<Column>& columns) {
    if (columns.empty()) {
        return;
    }
    std::vector<std::size_t> widths;
    for (const auto& c : columns) {
        std::size_t w = c.name.size();
        for (const auto& cell : c.cells) {
            w = std::max(w, cell.size());
        }
        widths.push_back(w);
    }
    auto emit = [&](auto cell_of) {
        for (std::size_t i = 0; i < columns.size(); ++i) {
            const std::string cell = cell_of(columns[i]);
            if (i == 0) {
                out << cell << std::string(widths[i] - cell.size(), ' ');
            } else {
                out << "  " << std::string(widths[i] - cell.size(), ' ') << cell;
            }
        }
        out << '\n';
    };
    emit([](const Column& c) { return c.name; });
    for (std::size_t row = 0; row < columns.front().cells.size(); ++row) {
        emit([row](const Column& c) { return c.cells[row]; });
    }
}

struct MetricField {
    const char* name;
    Rational MetricRow::*field;
};

std::vector<MetricField> display_fields(TardinessMode mode) {
    std::vector<MetricField> fields{{"cmax", &MetricRow::cmax}};
    if (mode != TardinessMode::Clamped) {
        fields.push_back({"tmax", &MetricRow::tmax});
    }
    if (mode != TardinessMode::Literal) {
        fields.push_back({"tmax0", &MetricRow::tmax_clamped});
    }
    fields.push_back({"sum_c", &MetricRow::sum_completion});
    if (mode != TardinessMode::Clamped) {
        fields.push_back({"sum_t", &MetricRow::sum_tardiness});
    }
    if (mode != TardinessMode::Literal) {
        fields.push_back({"sum_t0", &MetricRow::sum_tardiness_clamped});
    }
    fields.push_back({"sum_wc", &MetricRow::sum_weighted_completion});
    if (mode != TardinessMode::Clamped) {
        fields.push_back({"sum_wt", &MetricRow::sum_weighted_tardiness});
    }
    if (mode != TardinessMode::Literal) {
        fields.push_back({"sum_wt0", &MetricRow::sum_weighted_tardiness_clamped});
    }
    fields.push_back({"messages", &MetricRow::messages});
    fields.push_back({"idle_ticks", &MetricRow::idle_ticks});
    return fields;
}

std::string seed_span_label(const std::vector<std::uint64_t>& seeds) {
    if (seeds.size() == 1) {
        return "seed=" + std::to_string(seeds.front());
    }
    return "mean[" + std::to_string(seeds.front()) + ".." + std::to_string(seeds.back()) + "]";
}

std::filesystem::path sibling(const std::filesystem::path& out, const std::string& suffix) {
    return out.parent_path() / (out.stem().string() + suffix);
}

struct Prepared {
    SweepPlan plan;
    std::vector<SweepResult> results;
    std::vector<ReportEntry> per_run;
    std::vector<ReportEntry> summary;
};

/// Shared front half of run/compare. Returns an exit code on failure.
std::variant<Prepared, int> prepare(const RunConfig& config, std::ostream& err) {
    Prepared p;
    p.plan.policies = config.policies;
    p.plan.keep_traces = config.dump_trace;

    if (config.policies.empty()) {
        err << "error: no policies selected\n";
        return kExitInvalid;
    }

    try {
        if (config.scenario_path) {
            auto spec = load_scenario(*config.scenario_path);
            if (config.latency) {
                spec.message_latency = *config.latency;
            }
            if (config.capacity) {
                for (auto& r : spec.resources) {
                    r.fixed_capacity = *config.capacity;
                }
            }
            validate_scenario(spec);
            p.plan.seeds = {spec.rng_seed};
            p.plan.scenario_for_seed = [spec](std::uint64_t) { return spec; };
        } else {
            auto params = config.generator;
            if (config.latency) {
                params.message_latency = *config.latency;
            }
            if (config.capacity) {
                params.capacity = *config.capacity;
            }
            generate_scenario(params, 0);  // surfaces RangeError before the sweep
            p.plan.seeds = config.seeds.empty() ? std::vector<std::uint64_t>{1} : config.seeds;
            p.plan.scenario_for_seed = [params](std::uint64_t seed) {
                return generate_scenario(params, seed);
            };
        }
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kExitInvalid;
    }

    p.results = run_sweep(p.plan);
    int code = kExitOk;
    for (const auto& r : p.results) {
        if (r.failure == SweepFailure::None) {
            continue;
        }
        err << "error: " << to_string(r.job.policy) << " seed=" << r.job.seed << ": " << r.error
            << '\n';
        code = std::max(code, r.failure == SweepFailure::Stall ? kExitStall : kExitInvalid);
    }
    if (code != kExitOk) {
        return code;
    }

    std::map<PolicyLabel, std::vector<MetricRow>> by_policy;
    for (const auto& r : p.results) {
        const auto row = to_row(r.metrics);
        p.per_run.push_back(ReportEntry{
            r.job.policy,
            std::string(to_string(r.job.policy)) + "@seed=" + std::to_string(r.job.seed), row});
        by_policy[r.job.policy].push_back(row);
    }
    for (const auto& [policy, rows] : by_policy) {
        p.summary.push_back(ReportEntry{
            policy, std::string(to_string(policy)) + "@" + seed_span_label(p.plan.seeds),
            mean_row(rows)});
    }
    return p;
}

void emit_summary_table(std::ostream& out, const std::vector<ReportEntry>& rows,
                        TardinessMode mode) {
    std::vector<Column> columns{{"policy", {}}};
    for (const auto& f : display_fields(mode)) {
        columns.push_back({f.name, {}});
    }
    for (const auto& e : rows) {
        columns[0].cells.push_back(e.label);
        std::size_t i = 1;
        for (const auto& f : display_fields(mode)) {
            columns[i++].cells.push_back(to_decimal(e.row.*f.field));
        }
    }
    print_table(out, columns);
}

int emit_outputs(const RunConfig& config, const Prepared& p, std::ostream& out,
                 std::ostream& err) {
    try {
        if (config.out) {
            write_report(p.summary, *config.out, config.tardiness);
            write_report(p.per_run, sibling(*config.out, ".runs.csv"), config.tardiness);
        }
        if (config.dump_trace) {
            for (const auto& r : p.results) {
                const auto text = dump_trace(*r.trace);
                const std::string tag =
                    std::string(to_string(r.job.policy)) + ".seed" + std::to_string(r.job.seed);
                if (config.out) {
                    const auto path = sibling(*config.out, "." + tag + ".trace");
                    std::ofstream file(path, std::ios::binary | std::ios::trunc);
                    if (!(file << text)) {
                        throw IoError("cannot write trace " + path.string());
                    }
                } else {
                    out << "# trace " << to_string(r.job.policy) << " seed=" << r.job.seed
                        << '\n'
                        << text;
                }
            }
        }
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kExitInvalid;
    }
    return kExitOk;
}

}  // namespace

GeneratorParams parse_generator_tokens(const std::vector<std::string>& tokens) {
    GeneratorParams params;
    for (const auto& token : tokens) {
        const auto eq = token.find('=');
        if (eq == std::string::npos) {
            throw std::invalid_argument("generator token '" + token + "' is not key=value");
        }
        const auto key = token.substr(0, eq);
        const auto value = token.substr(eq + 1);
        try {
            if (key == "m" || key == "n") {
                const auto range = parse_int_range(value);
                if (range.lo != range.hi || range.lo < 0) {
                    throw std::invalid_argument("expected a non-negative integer");
                }
                (key == "m" ? params.resources : params.patients) =
                    static_cast<std::size_t>(range.lo);
            } else if (key == "dur") {
                params.duration = parse_int_range(value);
            } else if (key == "w") {
                params.weight = parse_int_range(value);
            } else if (key == "arr") {
                params.arrival = parse_int_range(value);
            } else if (key == "tasks") {
                params.task_count = parse_int_range(value);
            } else {
                throw std::invalid_argument("unknown key");
            }
        } catch (const std::invalid_argument& e) {
            throw std::invalid_argument("generator token '" + token + "': " + e.what());
        }
    }
    return params;
}

std::vector<PolicyLabel> parse_policy_list(const std::vector<std::string>& tokens) {
    std::vector<PolicyLabel> chosen;
    for (const auto& token : tokens) {
        std::size_t start = 0;
        while (start <= token.size()) {
            const auto comma = std::min(token.find(',', start), token.size());
            const auto item = token.substr(start, comma - start);
            start = comma + 1;
            if (item.empty()) {
                continue;
            }
            std::string lower = item;
            std::transform(lower.begin(), lower.end(), lower.begin(),
                           [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
            if (lower == "all") {
                chosen.insert(chosen.end(), kAllPolicies.begin(), kAllPolicies.end());
            } else if (auto label = parse_policy(item)) {
                chosen.push_back(*label);
            } else {
                throw std::invalid_argument("unknown policy '" + item + "'");
            }
        }
    }
    std::sort(chosen.begin(), chosen.end());
    chosen.erase(std::unique(chosen.begin(), chosen.end()), chosen.end());
    return chosen;
}

std::vector<std::uint64_t> parse_seed_list(const std::string& text) {
    const auto range = parse_int_range(text);
    if (range.lo < 0 || range.lo > range.hi) {
        throw std::invalid_argument("bad seed range '" + text + "'");
    }
    std::vector<std::uint64_t> seeds;
    for (auto s = range.lo; s <= range.hi; ++s) {
        seeds.push_back(static_cast<std::uint64_t>(s));
    }
    return seeds;
}

int cmd_run(const RunConfig& config, std::ostream& out, std::ostream& err) {
    auto prepared = prepare(config, err);
    if (auto* code = std::get_if<int>(&prepared)) {
        return *code;
    }
    const auto& p = std::get<Prepared>(prepared);
    out << "runs: " << p.results.size() << " (" << p.plan.seeds.size() << " seed"
        << (p.plan.seeds.size() == 1 ? "" : "s") << " x " << p.summary.size() << " polic"
        << (p.summary.size() == 1 ? "y" : "ies") << ")\n";
    emit_summary_table(out, p.summary, config.tardiness);
    return emit_outputs(config, p, out, err);
}

int cmd_compare(const RunConfig& config, std::ostream& out, std::ostream& err) {
    if (config.policies.size() < 2) {
        err << "error: compare needs at least two policies\n";
        return kExitInvalid;
    }
    auto prepared = prepare(config, err);
    if (auto* code = std::get_if<int>(&prepared)) {
        return *code;
    }
    const auto& p = std::get<Prepared>(prepared);
    emit_summary_table(out, p.summary, config.tardiness);

    // Summary rows are in policy order, so FCFS is first whenever it is present.
    const auto& baseline = p.summary.front();
    const auto fields = display_fields(config.tardiness);
    auto delta_columns = [&](const ReportEntry& base, const std::vector<const ReportEntry*>& rows) {
        std::vector<Column> columns{{"vs " + std::string(to_string(base.policy)), {}}};
        for (const auto& f : fields) {
            columns.push_back({f.name, {}});
        }
        for (const auto* e : rows) {
            columns[0].cells.push_back(std::string(to_string(e->policy)));
            std::size_t i = 1;
            for (const auto& f : fields) {
                columns[i++].cells.push_back(percent_delta(e->row.*f.field, base.row.*f.field));
            }
        }
        return columns;
    };

    std::vector<const ReportEntry*> all;
    for (const auto& e : p.summary) {
        all.push_back(&e);
    }
    out << "\npercentage change relative to " << to_string(baseline.policy) << '\n';
    const auto deltas = delta_columns(baseline, all);
    print_table(out, deltas);

    if (config.pairwise) {
        for (std::size_t i = 0; i < p.summary.size(); ++i) {
            std::vector<const ReportEntry*> others;
            for (std::size_t j = 0; j < p.summary.size(); ++j) {
                if (j != i) {
                    others.push_back(&p.summary[j]);
                }
            }
            out << "\npercentage change relative to " << to_string(p.summary[i].policy) << '\n';
            print_table(out, delta_columns(p.summary[i], others));
        }
    }

    if (config.out) {
        try {
            const auto path = sibling(*config.out, ".deltas.csv");
            std::ofstream file(path, std::ios::binary | std::ios::trunc);
            file << "policy,baseline";
            for (const auto& f : fields) {
                file << ',' << f.name;
            }
            file << '\n';
            for (std::size_t row = 0; row < all.size(); ++row) {
                file << deltas[0].cells[row] << ',' << to_string(baseline.policy);
                for (std::size_t c = 1; c < deltas.size(); ++c) {
                    file << ',' << deltas[c].cells[row];
                }
                file << '\n';
            }
            if (!file) {
                throw IoError("cannot write " + path.string());
            }
        } catch (const std::exception& e) {
            err << "error: " << e.what() << '\n';
            return kExitInvalid;
        }
    }
    return emit_outputs(config, p, out, err);
}

int main(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Multi-agent patient scheduling simulator"};
    app.require_subcommand(1);

    RunConfig config;
    std::string scenario;
    std::vector<std::string> generate;
    std::vector<std::string> policies{"all"};
    std::string seeds;
    std::string seed;
    std::string out_path;
    std::string tardiness = "literal";
    Tick latency = 0;
    std::int64_t capacity = 0;

    auto add_common = [&](CLI::App* sub) {
        auto* scn = sub->add_option("--scenario", scenario, "Scenario file (.scn.json)");
        auto* gen = sub->add_option("--generate", generate,
                                    "Generated scenario: m=INT n=INT [dur=A..B] [w=A..B] "
                                    "[arr=A..B] [tasks=A..B]");
        scn->excludes(gen);
        sub->add_option("--policies", policies, "fcfs,wspt,dops,dopsg or all")
            ->delimiter(',');
        auto* many = sub->add_option("--seeds", seeds, "Seed range A..B (inclusive)");
        auto* one = sub->add_option("--seed", seed, "Single seed");
        many->excludes(one);
        sub->add_option("--out", out_path, "CSV report path");
        sub->add_flag("--dump-trace", config.dump_trace, "Write per-run event traces");
        sub->add_option("--tardiness", tardiness, "literal, clamped or both");
        sub->add_option("--latency", latency, "Message latency in ticks");
        sub->add_option("--capacity", capacity, "Fixed capacity for every resource");
    };
    auto* run = app.add_subcommand("run", "Run policies over seeds and report metrics");
    auto* compare = app.add_subcommand("compare", "Compare policies with percentage deltas");
    add_common(run);
    add_common(compare);
    compare->add_flag("--pairwise", config.pairwise, "Also print every pairwise delta table");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitInvalid;
    }

    CLI::App* active = run->parsed() ? run : compare;
    config.command = run->parsed() ? Command::Run : Command::Compare;
    try {
        if (!scenario.empty()) {
            config.scenario_path = scenario;
        }
        config.generator = parse_generator_tokens(generate);
        config.policies = parse_policy_list(policies);
        if (!seeds.empty()) {
            config.seeds = parse_seed_list(seeds);
        } else if (!seed.empty()) {
            config.seeds = parse_seed_list(seed);
        }
        if (!out_path.empty()) {
            config.out = out_path;
        }
        auto mode = parse_tardiness_mode(tardiness);
        if (!mode) {
            throw std::invalid_argument("--tardiness must be literal, clamped or both");
        }
        config.tardiness = *mode;
        if (active->count("--latency") > 0) {
            config.latency = latency;
        }
        if (active->count("--capacity") > 0) {
            config.capacity = capacity;
        }
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kExitInvalid;
    }

    return config.command == Command::Run ? cmd_run(config, out, err)
                                          : cmd_compare(config, out, err);
}

}  // namespace patsched::cli
