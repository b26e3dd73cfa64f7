#pragma once

// Batch front end behind the hopf-moduli tool: JSON run configurations, the
// analyze / connect / sample / periods commands, and run persistence.

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "hopf/connectivity.hpp"

namespace hopf {

struct RunConfig {
    std::string command;
    HopfParameter hopf = HopfParameter::standard();
    int n = 2;
    std::uint64_t seed = 0;

    double margin_threshold = 1e-10;
    int quadrature_order = 24;
    int ordering_shift = 0;
    int max_depth = 3;
    double detour_scale = 0.5;
    double min_step = 1e-6;
    int samples_per_segment = 16;
    bool strict = false;

    /// sample: number of trials, "census" or "limit", whether to emit the corpus.
    long samples = 1000;
    std::string mode = "census";
    bool corpus = true;

    /// analyze / periods input, resolved from a file reference if needed.
    nlohmann::json divisor;
    /// connect endpoints: divisors or {"divisor", "fiber"} moduli points.
    nlohmann::json start;
    nlohmann::json end;
    /// analyze: points where fibre types are reported.
    std::vector<ProjectivePoint> base_points;

    /// Files the configuration referenced, in order.
    std::vector<std::filesystem::path> input_files;

    PathConfig path_config() const;
};

/// Throws Error(Parse) on malformed or out-of-range entries. Relative file
/// references resolve against base_dir.
RunConfig parse_run_config(const nlohmann::json& j, const std::string& command,
                           const std::filesystem::path& base_dir = ".");
/// Full configuration echo, defaults included.
nlohmann::json encode(const RunConfig& cfg);

struct CommandResult {
    /// The main document; always carries "schema": "v1" and the config echo.
    nlohmann::json document;
    /// Extra files (plot data, corpus) by file name.
    std::map<std::string, std::string> files;
    std::string summary;
};

CommandResult cmd_analyze(const RunConfig& cfg);
CommandResult cmd_connect(const RunConfig& cfg);
CommandResult cmd_sample(const RunConfig& cfg);
CommandResult cmd_periods(const RunConfig& cfg);
CommandResult run_command(const RunConfig& cfg);

struct CensusRecord {
    int n = 0;
    long trials = 0;
    /// counts[k]: trials in stratum S_k, k = 0..n.
    std::vector<long> counts;
    /// Trials in S_0 whose spectral curve is singular.
    long irregular = 0;
    double regular_fraction = 0.0;
};

/// Trial i draws i.i.d. complex Gaussian coefficients from the stream
/// (seed, "census", i); the result does not depend on `threads`.
CensusRecord census(int n, long trials, const HopfParameter& h, std::uint64_t seed, unsigned threads,
                    std::vector<GraphDivisor>* corpus = nullptr);

struct LimitSample {
    double t = 0.0;
    double one_minus_t = 0.0;
    int jumps = 0;
    double margin = 0.0;
    GraphDivisor divisor;
};

/// A_t = (x0 - t x1) a(x), B = (x0 - x1) b(x) with seeded random a, b of
/// degree n - 1, at 1 - t = 10^{-k/2} for k = 4..16 and then t = 1.
std::vector<LimitSample> limit_family(int n, const HopfParameter& h, std::uint64_t seed);

/// HOPF_MODULI_THREADS when set to a positive integer, else the hardware count.
unsigned thread_count();

/// FNV-1a over the given byte strings, as "fnv1a64:<hex>".
std::string inputs_hash(const std::vector<std::string>& blobs);

/// Writes config.json, the command document and extra files to
/// root/runs/<UTC timestamp>-<command>[-k]/ and returns that directory.
std::filesystem::path persist_run(const std::filesystem::path& root, const std::string& command,
                                  const nlohmann::json& config_record, const CommandResult* result,
                                  const nlohmann::json* error = nullptr);

/// Whole tool invocation; returns the process exit code.
int run_tool(const std::string& command, const std::filesystem::path& config_path,
             std::optional<std::uint64_t> seed, const std::filesystem::path& out_root, std::ostream& out,
             std::ostream& err);

}  // namespace hopf
