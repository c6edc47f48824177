// qcs: simulate multi-device quantum clouds under different allocation
// policies, generate synthetic workloads, train the RL allocation policy,
// and compare result files.
//
// Exit codes: 0 success, 1 runtime failure, 2 configuration error.

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "qcs/rl.hpp"
#include "qcs/run.hpp"
#include "qcs/scheduler.hpp"
#include "qcs/util.hpp"
#include "qcs/workload.hpp"

namespace {

using namespace qcs;

std::string read_file_bytes(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot open file: " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ConfigError("cannot write file: " + path.string());
    out << text;
    if (!out) throw std::runtime_error("failed while writing " + path.string());
}

std::string hash_run_inputs(const RunConfig& config, PolicyKind mode, std::uint64_t seed) {
    std::string blob = read_file_bytes(config.manifest);
    blob += '|';
    blob += to_string(mode);
    blob += '|';
    blob += std::to_string(seed);
    blob += '|';
    if (config.workload.trace) {
        blob += read_file_bytes(*config.workload.trace);
    } else {
        const WorkloadSpec& s = *config.workload.spec;
        blob += "spec:" + std::to_string(s.count) + ':' + std::to_string(s.qubit_range.lo) +
                '-' + std::to_string(s.qubit_range.hi) + ':' +
                std::to_string(s.depth_range.lo) + '-' + std::to_string(s.depth_range.hi) +
                ':' + std::to_string(s.shots_range.lo) + '-' +
                std::to_string(s.shots_range.hi);
        if (s.two_qubit_range) {
            blob += ':' + std::to_string(s.two_qubit_range->lo) + '-' +
                    std::to_string(s.two_qubit_range->hi);
        }
        blob += s.arrival == ArrivalModel::Poisson
                    ? ":poisson:" + format_double(s.poisson_rate)
                    : ":all_at_zero";
    }
    char hex[32];
    std::snprintf(hex, sizeof(hex), "%016llx",
                  static_cast<unsigned long long>(fnv1a64(blob)));
    return hex;
}

std::string summary_line(const RunSummary& s) {
    char buf[160];
    std::snprintf(buf, sizeof(buf), "%s %.2f %.5f %.5f %.2f", s.label.c_str(), s.t_sim,
                  s.mean_fidelity, s.std_fidelity, s.total_comm);
    return buf;
}

void write_run_outputs(const std::filesystem::path& dir, const RunResult& result,
                       const RunMetadata& meta) {
    std::filesystem::create_directories(dir);
    {
        std::ostringstream csv;
        write_records_csv(csv, result.records);
        write_text_file(dir / "records.csv", csv.str());
    }
    {
        std::ostringstream json;
        write_summary_json(json, result.summary, meta);
        write_text_file(dir / "summary.json", json.str());
    }
    {
        std::ostringstream csv;
        const auto bins = fidelity_histogram(result.records, 0.005);
        write_histogram_csv(csv, bins);
        write_text_file(dir / "fidelity_hist.csv", csv.str());
    }
}

struct CommonFlags {
    std::string config_path;
    std::optional<std::uint64_t> seed;
    std::optional<std::string> output;
    std::optional<std::string> modes;
};

int cmd_simulate(const CommonFlags& flags) {
    RunConfig config = load_run_config(flags.config_path);
    if (flags.seed) config.seed = *flags.seed;
    if (flags.output) config.output_dir = *flags.output;

    std::vector<PolicyKind> modes;
    if (flags.modes) {
        for (const auto& token : split(*flags.modes, ',')) {
            modes.push_back(policy_kind_from_string(trim(token)));
        }
    } else {
        modes.push_back(config.mode);
    }

    const CloudConfig cloud = load_cloud_manifest(config.manifest);
    const std::vector<QJob> jobs = resolve_workload(config, cloud, config.seed);

    std::unique_ptr<LoadedPolicy> rl;
    const bool wants_rl =
        std::find(modes.begin(), modes.end(), PolicyKind::RlBase) != modes.end();
    if (wants_rl) {
        if (!config.rl_policy) {
            throw ConfigError("mode rlbase requires 'rl_policy' in the run config");
        }
        rl = std::make_unique<LoadedPolicy>(load_policy(*config.rl_policy));
    }

    for (PolicyKind mode : modes) {
        RunResult result = run_simulation(cloud, mode, jobs,
                                          mode == PolicyKind::RlBase ? rl.get() : nullptr);
        RunMetadata meta{std::string(to_string(mode)), config.seed,
                         hash_run_inputs(config, mode, config.seed)};
        const auto dir = modes.size() == 1
                             ? config.output_dir
                             : config.output_dir / std::string(to_string(mode));
        write_run_outputs(dir, result, meta);
        std::cout << summary_line(result.summary) << '\n';
    }
    return 0;
}

int cmd_gen_jobs(const std::string& spec_path, const std::string& manifest_path,
                 const std::string& out_csv, std::optional<std::uint64_t> seed) {
    WorkloadSpec spec = load_workload_spec_file(spec_path);
    if (seed) spec.seed = *seed;
    const CloudConfig cloud = load_cloud_manifest(manifest_path);
    const auto jobs = generate_jobs(spec, cloud.capacities());
    std::ostringstream csv;
    write_jobs_csv(csv, jobs);
    write_text_file(out_csv, csv.str());
    std::cout << "wrote " << jobs.size() << " jobs to " << out_csv << '\n';
    return 0;
}

int cmd_train_rl(const CommonFlags& flags) {
    TrainConfig config = load_train_config(flags.config_path);
    if (flags.seed) config.rl.seed = *flags.seed;

    const CloudConfig cloud = load_cloud_manifest(config.manifest);
    SimEnv env;
    std::vector<std::unique_ptr<QDevice>> devices;
    for (const DeviceProfile& profile : cloud.profiles) {
        devices.push_back(std::make_unique<QDevice>(env, profile, cloud.weights));
    }
    std::vector<QDevice*> device_ptrs;
    for (auto& d : devices) device_ptrs.push_back(d.get());

    const JobSampler sampler = make_job_sampler(config.jobs);
    TrainResult result = train_ppo(sampler, device_ptrs, config.rl, cloud.metrics);

    save_policy(result.policy, config.rl, config.policy_out);
    {
        std::ostringstream csv;
        write_training_log_csv(csv, result.log);
        write_text_file(config.log_out, csv.str());
    }
    if (result.log.empty()) {
        std::cout << "no training batches (timesteps = 0); wrote initialized policy to "
                  << config.policy_out.string() << '\n';
    } else {
        char buf[64];
        std::snprintf(buf, sizeof(buf), "%.5f", result.log.back().mean_reward);
        std::cout << "final mean reward " << buf << "; wrote policy to "
                  << config.policy_out.string() << '\n';
    }
    return 0;
}

// Rows are labeled by file stem; the canonical per-mode layout names every
// file records.csv, so fall back to the containing directory, and suffix
// any remaining collisions.
std::string report_label(const std::filesystem::path& file, std::map<std::string, int>& used) {
    std::string label = file.stem().string();
    if (label == "records" && file.has_parent_path() &&
        !file.parent_path().filename().empty()) {
        label = file.parent_path().filename().string();
    }
    const int n = ++used[label];
    if (n > 1) label += "_" + std::to_string(n);
    return label;
}

int cmd_report(const std::vector<std::string>& records_files, const std::string& output,
               double bin_width) {
    std::filesystem::create_directories(output);
    std::printf("%-24s %14s %10s %10s %14s\n", "label", "t_sim", "mean_fid", "std_fid",
                "total_comm");
    std::map<std::string, int> used_labels;
    for (const std::string& file : records_files) {
        const auto records = read_records_csv(file);
        if (records.empty()) {
            throw ConfigError(file + ": no records to report");
        }
        const std::string label = report_label(file, used_labels);
        const RunSummary s = summarize(records, label);
        std::printf("%-24s %14.2f %10.5f %10.5f %14.2f\n", s.label.c_str(), s.t_sim,
                    s.mean_fidelity, s.std_fidelity, s.total_comm);
        const auto bins = fidelity_histogram(records, bin_width);
        std::ostringstream csv;
        write_histogram_csv(csv, bins);
        write_text_file(std::filesystem::path(output) / (label + "_hist.csv"), csv.str());
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"quantum cloud scheduling simulator"};
    app.require_subcommand(1);

    CommonFlags sim_flags;
    auto* simulate = app.add_subcommand(
        "simulate", "run one simulation per mode and write records/summary/histogram");
    simulate->add_option("--config", sim_flags.config_path, "run configuration (JSON)")
        ->required();
    simulate->add_option("--seed", sim_flags.seed, "override the configured seed");
    simulate->add_option("--output", sim_flags.output, "override the output directory");
    simulate->add_option("--modes", sim_flags.modes,
                         "comma-separated list of modes to run (speed,fidelity,fair,rlbase)");

    std::string gen_spec;
    std::string gen_manifest;
    std::string gen_out;
    std::optional<std::uint64_t> gen_seed;
    auto* gen = app.add_subcommand("gen-jobs", "generate a synthetic job trace CSV");
    gen->add_option("--spec", gen_spec, "workload spec (JSON)")->required();
    gen->add_option("--manifest", gen_manifest, "cloud manifest (JSON)")->required();
    gen->add_option("--out", gen_out, "output CSV path")->required();
    gen->add_option("--seed", gen_seed, "override the spec seed");

    CommonFlags train_flags;
    auto* train = app.add_subcommand("train-rl", "train the allocation policy with PPO");
    train->add_option("--config", train_flags.config_path, "training configuration (JSON)")
        ->required();
    train->add_option("--seed", train_flags.seed, "override the configured seed");

    std::vector<std::string> report_files;
    std::string report_output = ".";
    double bin_width = 0.005;
    auto* report = app.add_subcommand("report",
                                      "summarize one or more records.csv files side by side");
    report->add_option("records", report_files, "records.csv files")->required();
    report->add_option("--output", report_output, "directory for histogram CSVs");
    report->add_option("--bin-width", bin_width, "fidelity histogram bin width");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (simulate->parsed()) return cmd_simulate(sim_flags);
        if (gen->parsed()) return cmd_gen_jobs(gen_spec, gen_manifest, gen_out, gen_seed);
        if (train->parsed()) return cmd_train_rl(train_flags);
        if (report->parsed()) return cmd_report(report_files, report_output, bin_width);
    } catch (const qcs::ConfigError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 2;
}
