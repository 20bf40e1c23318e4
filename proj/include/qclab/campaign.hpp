#ifndef QCLAB_CAMPAIGN_HPP
#define QCLAB_CAMPAIGN_HPP

#include <cstdint>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

#include "qclab/optimizer.hpp"

namespace qclab {

/// Bad command line; the driver exits with status 2.
class UsageError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

struct CampaignOptions {
    DescentConfig config;
    std::uint64_t seed_first = 0;
    std::uint64_t seed_last = 0;
    std::filesystem::path out_dir = "qclab_out";
    bool trace_all_seeds = false;
    int verify_refine = 2;
    bool latex = false;
    int jobs = 1;

    friend bool operator==(const CampaignOptions&, const CampaignOptions&) = default;
};

/// "a11,a12;a21,a22"
Matrix2 parse_matrix_literal(const std::string& text);
std::string format_matrix_literal(const Matrix2& m);

/// Parses `run` flags (argv without the program name). `env_out_dir` is the
/// fallback for --out, normally the value of QCLAB_OUT_DIR.
CampaignOptions parse_config(const std::vector<std::string>& args,
                             const std::string& env_out_dir = {});

/// Flags that parse back to exactly `opts` (modulo --out, which is included).
std::vector<std::string> config_to_args(const CampaignOptions& opts);

struct CampaignRecord {
    std::uint64_t seed = 0;
    TrialRecord record;
    std::string snapshot_path;  // relative to the output directory
};

struct RunManifest {
    CampaignOptions options;
    std::string tool_version;
    std::string started_at;
    std::string finished_at;
    std::int64_t record_count = 0;
    std::int64_t verified_count = 0;
};

struct CampaignResult {
    RunManifest manifest;
    std::vector<CampaignRecord> records;  // sorted by (seed, iteration)
    std::vector<IterationTrace> traces;   // one per seed, seed_first first
};

/// Runs every seed (concurrently when jobs > 1) and verifies all records.
/// Output is independent of scheduling.
CampaignResult run_sweep(const CampaignOptions& opts);

/// run_sweep plus artifacts in opts.out_dir: records.csv, records.json,
/// trace.csv, manifest.json, snapshots/. Partial outputs are removed on failure.
RunManifest run_campaign(const CampaignOptions& opts);

std::string emit_records_csv(const std::vector<CampaignRecord>& records);
std::string emit_records_json(const std::vector<CampaignRecord>& records);
std::string emit_trace_csv(const IterationTrace& trace);
std::string emit_latex_table(const std::vector<CampaignRecord>& records);
std::string emit_manifest_json(const RunManifest& manifest);

/// Reads the options echoed in a manifest.json.
CampaignOptions load_manifest_options(const std::filesystem::path& manifest_path);

std::string tool_version();

}  // namespace qclab

#endif  // QCLAB_CAMPAIGN_HPP
