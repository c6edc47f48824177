#include "qcs/run.hpp"

#include <fstream>
#include <memory>
#include <numeric>
#include <ostream>
#include <sstream>

#include "json_util.hpp"
#include "rl_internal.hpp"
#include "qcs/util.hpp"

namespace qcs {

std::vector<int> CloudConfig::capacities() const {
    std::vector<int> caps;
    caps.reserve(profiles.size());
    for (const DeviceProfile& p : profiles) caps.push_back(p.capacity);
    return caps;
}

long long CloudConfig::total_capacity() const {
    long long total = 0;
    for (const DeviceProfile& p : profiles) total += p.capacity;
    return total;
}

CloudConfig load_cloud_manifest(const std::filesystem::path& path) {
    using namespace jsonutil;
    const json doc = load_file(path);
    const std::string ctx = path.string();

    CloudConfig cloud;
    const json& devices = require(doc, "devices", ctx);
    if (!devices.is_array() || devices.empty()) {
        throw ConfigError(ctx + ".devices: expected a non-empty array of profile paths");
    }
    const auto base = path.parent_path();
    for (std::size_t i = 0; i < devices.size(); ++i) {
        const std::string rel =
            as_string(devices[i], ctx + ".devices[" + std::to_string(i) + "]");
        std::filesystem::path profile_path(rel);
        if (profile_path.is_relative()) profile_path = base / profile_path;
        cloud.profiles.push_back(load_device_profile_file(profile_path));
    }
    for (std::size_t i = 0; i < cloud.profiles.size(); ++i) {
        for (std::size_t j = i + 1; j < cloud.profiles.size(); ++j) {
            if (cloud.profiles[i].name == cloud.profiles[j].name) {
                throw ConfigError(ctx + ": duplicate device name '" + cloud.profiles[i].name +
                                  "'");
            }
        }
    }

    if (doc.contains("metrics")) {
        const json& m = doc["metrics"];
        const std::string mctx = ctx + ".metrics";
        MetricsConfig& cfg = cloud.metrics;
        if (m.contains("m_templates")) {
            cfg.m_templates = static_cast<int>(as_int(m["m_templates"], mctx + ".m_templates"));
        }
        if (m.contains("k_updates")) {
            cfg.k_updates = static_cast<int>(as_int(m["k_updates"], mctx + ".k_updates"));
        }
        if (m.contains("phi")) cfg.phi = as_number(m["phi"], mctx + ".phi");
        if (m.contains("lambda_per_qubit")) {
            cfg.lambda_per_qubit = as_number(m["lambda_per_qubit"], mctx + ".lambda_per_qubit");
        }
        if (m.contains("two_qubit_exponent")) {
            cfg.two_qubit_exponent = two_qubit_exponent_from_string(
                as_string(m["two_qubit_exponent"], mctx + ".two_qubit_exponent"));
        }
        if (cfg.m_templates < 1 || cfg.k_updates < 1) {
            throw ConfigError(mctx + ": m_templates and k_updates must be >= 1");
        }
        if (!(cfg.phi > 0 && cfg.phi <= 1)) throw ConfigError(mctx + ".phi: must be in (0, 1]");
        if (!(cfg.lambda_per_qubit >= 0)) {
            throw ConfigError(mctx + ".lambda_per_qubit: must be >= 0");
        }
    }

    if (doc.contains("error_score_weights")) {
        const json& w = doc["error_score_weights"];
        const std::string wctx = ctx + ".error_score_weights";
        cloud.weights.alpha = number_field(w, "alpha", wctx);
        cloud.weights.theta = number_field(w, "theta", wctx);
        cloud.weights.gamma = number_field(w, "gamma", wctx);
        if (cloud.weights.alpha < 0 || cloud.weights.theta < 0 || cloud.weights.gamma < 0) {
            throw ConfigError(wctx + ": weights must be non-negative");
        }
    }
    return cloud;
}

RunConfig load_run_config(const std::filesystem::path& path) {
    using namespace jsonutil;
    const json doc = load_file(path);
    const std::string ctx = path.string();
    const auto base = path.parent_path();
    auto resolve = [&](std::filesystem::path p) {
        return p.is_relative() ? base / p : p;
    };

    RunConfig config;
    config.manifest = resolve(string_field(doc, "manifest", ctx));
    if (!std::filesystem::exists(config.manifest)) {
        throw ConfigError(ctx + ".manifest: no such file: " + config.manifest.string());
    }
    config.mode = policy_kind_from_string(string_field(doc, "mode", ctx));

    const json& workload = require(doc, "workload", ctx);
    const std::string wctx = ctx + ".workload";
    const bool has_trace = workload.contains("trace");
    const bool has_spec = workload.contains("spec");
    if (has_trace == has_spec) {
        throw ConfigError(wctx + ": expected exactly one of 'trace' or 'spec'");
    }
    if (has_trace) {
        config.workload.trace = resolve(as_string(workload["trace"], wctx + ".trace"));
        if (!std::filesystem::exists(*config.workload.trace)) {
            throw ConfigError(wctx + ".trace: no such file: " + config.workload.trace->string());
        }
    } else {
        config.workload.spec =
            parse_workload_spec(workload["spec"].dump(), wctx + ".spec");
    }

    if (doc.contains("rl_policy") && !doc["rl_policy"].is_null()) {
        config.rl_policy = resolve(as_string(doc["rl_policy"], ctx + ".rl_policy"));
        if (!std::filesystem::exists(*config.rl_policy)) {
            throw ConfigError(ctx + ".rl_policy: no such file: " + config.rl_policy->string());
        }
    }
    if (config.mode == PolicyKind::RlBase && !config.rl_policy) {
        throw ConfigError(ctx + ": mode rlbase requires 'rl_policy'");
    }

    if (doc.contains("output_dir")) {
        config.output_dir = std::filesystem::path(
            as_string(doc["output_dir"], ctx + ".output_dir"));
    }
    if (doc.contains("seed")) {
        config.seed = static_cast<std::uint64_t>(as_int(doc["seed"], ctx + ".seed"));
    }
    return config;
}

std::vector<QJob> resolve_workload(const RunConfig& config, const CloudConfig& cloud,
                                   std::uint64_t seed) {
    std::vector<QJob> jobs;
    if (config.workload.trace) {
        const auto& path = *config.workload.trace;
        jobs = path.extension() == ".json" ? load_jobs_json(path) : load_jobs_csv(path);
    } else {
        WorkloadSpec spec = *config.workload.spec;
        spec.seed = seed;
        jobs = generate_jobs(spec, cloud.capacities());
    }
    if (jobs.empty()) {
        throw ConfigError("workload is empty: nothing to simulate");
    }
    const long long total = cloud.total_capacity();
    for (const QJob& job : jobs) {
        if (job.num_qubits > total) {
            throw ConfigError("job '" + job.job_id + "' needs " +
                              std::to_string(job.num_qubits) + " qubits but the cloud has " +
                              std::to_string(total));
        }
    }
    return jobs;
}

RunResult run_simulation(const CloudConfig& cloud, PolicyKind mode, std::vector<QJob> jobs,
                         const LoadedPolicy* rl) {
    SimEnv env;
    std::vector<std::unique_ptr<QDevice>> devices;
    devices.reserve(cloud.profiles.size());
    for (const DeviceProfile& profile : cloud.profiles) {
        devices.push_back(std::make_unique<QDevice>(env, profile, cloud.weights));
    }
    std::vector<QDevice*> device_ptrs;
    device_ptrs.reserve(devices.size());
    for (auto& d : devices) device_ptrs.push_back(d.get());

    RlPlanFn rl_plan;
    if (mode == PolicyKind::RlBase) {
        if (rl == nullptr) throw ConfigError("mode rlbase requires a trained policy");
        if (static_cast<int>(device_ptrs.size()) > rl->config.num_device_slots) {
            throw ConfigError("policy was trained for " +
                              std::to_string(rl->config.num_device_slots) +
                              " device slots but the cloud has " +
                              std::to_string(device_ptrs.size()) + " devices");
        }
        rl_plan = make_rl_plan_fn(std::make_shared<GaussianPolicy>(rl->policy), rl->config);
    }

    JobRecordsManager records;
    Broker broker(env, device_ptrs, mode, cloud.metrics, records, std::move(rl_plan));
    env.spawn(arrival_process(env, std::move(jobs),
                              [&broker](const QJob& job) { broker.submit(job); }));
    env.run();

    RunResult result;
    result.records = records.records();
    result.summary = summarize(result.records, std::string(to_string(mode)));
    return result;
}

void write_summary_json(std::ostream& out, const RunSummary& summary,
                        const RunMetadata& meta) {
    jsonutil::json doc{{"mode", meta.mode},
                       {"seed", meta.seed},
                       {"config_hash", meta.config_hash},
                       {"t_sim", summary.t_sim},
                       {"mean_fidelity", summary.mean_fidelity},
                       {"std_fidelity", summary.std_fidelity},
                       {"total_comm", summary.total_comm},
                       {"num_jobs", summary.num_jobs}};
    out << doc.dump(2) << '\n';
}

TrainConfig load_train_config(const std::filesystem::path& path) {
    using namespace jsonutil;
    const json doc = load_file(path);
    const std::string ctx = path.string();
    const auto base = path.parent_path();
    auto resolve = [&](std::filesystem::path p) {
        return p.is_relative() ? base / p : p;
    };

    TrainConfig config;
    config.manifest = resolve(string_field(doc, "manifest", ctx));
    if (!std::filesystem::exists(config.manifest)) {
        throw ConfigError(ctx + ".manifest: no such file: " + config.manifest.string());
    }
    config.rl = doc.contains("rl") ? parse_rl_config_json(doc["rl"], ctx + ".rl") : RlConfig{};

    const json& jobs = require(doc, "jobs", ctx);
    const std::string jctx = ctx + ".jobs";
    auto range_field = [&](const char* field) {
        const json& arr = require(jobs, field, jctx);
        const std::string rctx = jctx + "." + field;
        if (!arr.is_array() || arr.size() != 2) throw ConfigError(rctx + ": expected [lo, hi]");
        return IntRange{as_int(arr[0], rctx), as_int(arr[1], rctx)};
    };
    config.jobs.qubit_range = range_field("qubit_range");
    config.jobs.depth_range = range_field("depth_range");
    config.jobs.shots_range = range_field("shots_range");
    if (jobs.contains("two_qubit_range") && !jobs["two_qubit_range"].is_null()) {
        config.jobs.two_qubit_range = range_field("two_qubit_range");
    }

    // Output paths are left as written, resolving against the working
    // directory like the run config's output_dir.
    config.policy_out = std::filesystem::path(string_field(doc, "policy_out", ctx));
    config.log_out = std::filesystem::path(string_field(doc, "log_out", ctx));
    return config;
}

}  // namespace qcs
