#pragma once

// Command-line front end: parsing, the three commands and their CSV/JSON
// writers. Everything except process setup lives here so tests can drive
// the commands in-process.

#include "morsewell/potentials.hpp"

#include "json.hpp"

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace morsewell::cli {

enum class Command { spectrum, wavefunction, compare };
enum class PotentialKind { morse, sym_morse, single_well, chain_file };
enum class ParityChoice { even, odd, both };
enum class Format { csv, json };

/// Exit codes of the tool.
inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitMissingLevel = 2;
inline constexpr int kExitFail = 3;

struct RunConfig {
    Command command = Command::spectrum;
    PotentialKind potential = PotentialKind::sym_morse;
    /// Unused for chain files.
    MorseParams params = MorseParams::symmetric(1.0, 1.8, 1.0);
    std::string chain_path;
    int levels = 1;
    ParityChoice parity = ParityChoice::both;
    double k_tol = 1e-6;
    /// Explicit trial k values for wavefunction; empty selects the level brackets.
    std::vector<double> k;
    /// Offset h: wavefunction profiles are drawn at k - h and k + h.
    double perturb = 0.0;
    double x_max = 10.0;
    int grid = 401;
    /// Numerov step of the compare oracle.
    double oracle_step = 1e-4;
    /// Energy tolerance of the compare checks.
    double tolerance = 1e-8;
    /// Largest Whittaker coordinate admitted at the origin.
    double t_max = 200.0;
    /// Worker threads for independent levels; 0 uses the hardware count.
    int threads = 0;
    Format format = Format::csv;
    std::string out;

    /// Throws PreconditionError when the fields are inconsistent.
    void validate() const;

    bool operator==(const RunConfig&) const = default;
};

struct LevelRow {
    int index = 0;
    std::string parity;  // even, odd, or none for potentials without the reflection symmetry
    double k_lo = 0.0;
    double k_hi = 0.0;
    double E_lo = 0.0;
    double E_hi = 0.0;
    int nodes = 0;  // nodes of the level on the whole line
    int evaluations = 0;
    std::optional<double> E_exact;

    bool operator==(const LevelRow&) const = default;
};

struct ProfileRow {
    double k = 0.0;
    std::string parity;
    double x = 0.0;
    double psi = 0.0;
    double dpsi = 0.0;

    bool operator==(const ProfileRow&) const = default;
};

struct CompareRow {
    int index = 0;
    std::string parity;
    double k_lo = 0.0;
    double k_hi = 0.0;
    double k_oracle = 0.0;
    double E_oracle = 0.0;
    /// |E(h/2) - E(h)| of the oracle.
    double oracle_shift = 0.0;
    /// oracle_shift within the compare tolerance.
    bool oracle_converged = false;
    std::optional<double> E_exact;
    bool pass = false;

    bool operator==(const CompareRow&) const = default;
};

struct RunResult {
    Command command = Command::spectrum;
    std::vector<LevelRow> levels;
    std::vector<ProfileRow> profiles;
    std::vector<CompareRow> comparisons;
    std::vector<std::string> warnings;
    int missing_levels = 0;

    int exit_code() const;

    bool operator==(const RunResult&) const = default;
};

struct Provenance {
    std::string version;
    std::string timestamp;  // UTC, ISO 8601
};

/// Version string and the current UTC time, or SOURCE_DATE_EPOCH when set.
Provenance current_provenance();

/// Parsed configuration, or the exit code when parsing ended the run
/// (help output, or a usage error already reported on `err`).
struct ParseOutcome {
    std::optional<RunConfig> config;
    int exit_code = kExitOk;
};

/// args excludes the program name.
ParseOutcome parse_command_line(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

RunResult cmd_spectrum(const RunConfig& cfg);
RunResult cmd_wavefunction(const RunConfig& cfg);
RunResult cmd_compare(const RunConfig& cfg);
RunResult execute(const RunConfig& cfg);

/// Header row plus one line per row, 17 significant digits, LF endings.
void write_csv(const RunResult& result, std::ostream& os);

nlohmann::json to_json(const RunConfig& cfg);
RunConfig config_from_json(const nlohmann::json& j);
nlohmann::json to_json(const RunResult& result);
RunResult result_from_json(const nlohmann::json& j);
/// {config, results, provenance{version, timestamp}}.
nlohmann::json document(const RunConfig& cfg, const RunResult& result, const Provenance& prov);

/// Whole run: parse, execute, write to cfg.out or `out`, warnings and
/// errors to `err`. Returns the exit code.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

std::string to_string(Command c);
std::string to_string(PotentialKind p);
std::string to_string(ParityChoice p);
std::string to_string(Format f);

}  // namespace morsewell::cli
