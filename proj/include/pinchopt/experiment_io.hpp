#pragma once

// Config-file parsing and result serialization for the experiment CLI.
//
// Config files are flat `key = value` text: '#' starts a comment, blank lines
// are ignored, and keys carry their physical unit as a suffix (*_dbm, *_ghz,
// *_m).  Unknown keys are rejected so typos cannot silently fall back to
// defaults.  Results go out as a CSV table plus a manifest recording enough
// provenance (spec hash, master seed, library version) to reproduce the run.

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "pinchopt/mc_harness.hpp"

namespace pinchopt {

inline constexpr std::string_view kLibraryVersion = "pinchopt 0.1.0";

enum class ExperimentPreset { Fig2, Fig3, Fig4, Custom };

std::string_view preset_name(ExperimentPreset preset);
ExperimentPreset preset_from_name(std::string_view name);

// Spec pre-populated with the default parameter set and the sweep grid the
// preset calls for.  Custom starts from the Fig2 grid; the config file is
// expected to override the sweep.
ExperimentSpec make_preset_spec(ExperimentPreset preset);

// Explicit user layout for single-solve runs ("x:y; x:y; ...").
struct SolveInputs {
    std::optional<UserSet> explicit_users; // caps filled from max_power_dbm
};

struct ParsedConfig {
    ExperimentSpec spec;
    SolveInputs solve;
};

// Applies `key = value` lines from `path` on top of the preset's defaults.
// Throws ValidationError naming the offending key for unknown keys, malformed
// values, and out-of-range values.  A missing file is an error; an empty file
// yields the untouched default spec.
ParsedConfig parse_config(const std::filesystem::path& path, ExperimentPreset preset);

// Same, but from in-memory text (used by tests and for defaulted runs).
ParsedConfig parse_config_text(std::string_view text, ExperimentPreset preset);

// Serialized forms; emit_results writes exactly these bytes.
std::string results_csv_text(const SweepResult& result);
std::string manifest_text(const SweepResult& result);

struct EmittedFiles {
    std::filesystem::path csv_path;
    std::filesystem::path manifest_path;
};

// Writes results.csv (header `sweep_param,sweep_value,scheme,ee_mean,ee_std,
// trials,flagged`, one row per sweep value x scheme, %.17e values, LF line
// endings) and manifest.txt into `dir`, creating it if needed.  Byte-stable
// for identical inputs.
EmittedFiles emit_results(const SweepResult& result, const std::filesystem::path& dir);

struct CsvRow {
    std::string sweep_param;
    double sweep_value = 0.0;
    std::string scheme;
    double ee_mean = 0.0;
    double ee_std = 0.0;
    int trials = 0;
    int flagged = 0;
};

// Reads a results.csv back; round-trips every double bit-exactly.
std::vector<CsvRow> read_results_csv(const std::filesystem::path& path);

} // namespace pinchopt
