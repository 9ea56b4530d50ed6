#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "patsched/policy.hpp"
#include "patsched/report.hpp"
#include "patsched/scenario.hpp"

namespace patsched::cli {

enum class Command : std::uint8_t { Run, Compare };

struct RunConfig {
    Command command = Command::Run;
    std::optional<std::filesystem::path> scenario_path;
    GeneratorParams generator;
    std::vector<PolicyLabel> policies;
    std::vector<std::uint64_t> seeds;
    std::optional<std::filesystem::path> out;
    bool dump_trace = false;
    TardinessMode tardiness = TardinessMode::Literal;
    std::optional<Tick> latency;
    std::optional<std::int64_t> capacity;
    bool pairwise = false;
};

inline constexpr int kExitOk = 0;
inline constexpr int kExitInvalid = 1;
inline constexpr int kExitStall = 2;

/// Parses `--generate` tokens such as "m=3", "n=50", "dur=5..30".
/// Throws std::invalid_argument naming the bad token.
GeneratorParams parse_generator_tokens(const std::vector<std::string>& tokens);

/// Parses "fcfs", "DOPSG", "all", comma lists. Result in kAllPolicies order,
/// duplicates removed.
std::vector<PolicyLabel> parse_policy_list(const std::vector<std::string>& tokens);

/// "7" or "1..10" inclusive.
std::vector<std::uint64_t> parse_seed_list(const std::string& text);

int cmd_run(const RunConfig& config, std::ostream& out, std::ostream& err);
int cmd_compare(const RunConfig& config, std::ostream& out, std::ostream& err);

/// Full command line: parses, dispatches, maps errors to exit codes.
int main(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace patsched::cli
