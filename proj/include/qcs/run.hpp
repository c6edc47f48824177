#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "qcs/device.hpp"
#include "qcs/metrics.hpp"
#include "qcs/rl.hpp"
#include "qcs/scheduler.hpp"
#include "qcs/workload.hpp"

namespace qcs {

// A cloud manifest names the device profile files (relative paths resolve
// against the manifest's directory) and may override the metric constants
// and error-score weights.
struct CloudConfig {
    std::vector<DeviceProfile> profiles;
    MetricsConfig metrics;
    ErrorScoreWeights weights;

    std::vector<int> capacities() const;
    long long total_capacity() const;
};

CloudConfig load_cloud_manifest(const std::filesystem::path& path);

struct WorkloadSource {
    std::optional<std::filesystem::path> trace;  // CSV or JSON job list
    std::optional<WorkloadSpec> spec;            // inline synthetic workload
};

struct RunConfig {
    std::filesystem::path manifest;
    PolicyKind mode = PolicyKind::Speed;
    WorkloadSource workload;
    std::optional<std::filesystem::path> rl_policy;
    std::filesystem::path output_dir = "out";
    std::uint64_t seed = 0;
};

// Parses and validates a run configuration; referenced input paths must
// exist, and mode rlbase requires rl_policy.
RunConfig load_run_config(const std::filesystem::path& path);

// Materializes the job list: loads the trace, or generates the inline spec
// against the cloud capacities using `seed`.
std::vector<QJob> resolve_workload(const RunConfig& config, const CloudConfig& cloud,
                                   std::uint64_t seed);

struct RunResult {
    std::vector<JobRecord> records;
    RunSummary summary;
};

// One complete simulation: builds the devices, replays arrivals through the
// broker, runs the event loop to completion, and summarizes the records.
RunResult run_simulation(const CloudConfig& cloud, PolicyKind mode, std::vector<QJob> jobs,
                         const LoadedPolicy* rl = nullptr);

struct RunMetadata {
    std::string mode;
    std::uint64_t seed = 0;
    std::string config_hash;
};

void write_summary_json(std::ostream& out, const RunSummary& summary,
                        const RunMetadata& meta);

// Everything used to train a policy from one config file.
struct TrainConfig {
    std::filesystem::path manifest;
    RlConfig rl;
    TrainingJobRanges jobs;
    std::filesystem::path policy_out;
    std::filesystem::path log_out;
};

TrainConfig load_train_config(const std::filesystem::path& path);

}  // namespace qcs
