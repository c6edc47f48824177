#include "qcs/workload.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <ostream>
#include <unordered_set>

#include "json_util.hpp"
#include "qcs/rng.hpp"
#include "qcs/util.hpp"

namespace qcs {

namespace {

void check_range(const IntRange& r, const char* name) {
    if (r.lo > r.hi) {
        throw ConfigError(std::string(name) + ": lower bound " + std::to_string(r.lo) +
                          " exceeds upper bound " + std::to_string(r.hi));
    }
}

void validate_job(const QJob& job, const std::string& ctx) {
    if (!valid_identifier(job.job_id)) {
        throw ConfigError(ctx + ": job_id '" + job.job_id +
                          "' must be non-empty and use only [A-Za-z0-9_.-]");
    }
    if (job.num_qubits < 1) throw ConfigError(ctx + ": num_qubits must be >= 1");
    if (job.depth < 1) throw ConfigError(ctx + ": depth must be >= 1");
    if (job.num_shots < 1) throw ConfigError(ctx + ": num_shots must be >= 1");
    if (job.two_qubit_gates < 0) throw ConfigError(ctx + ": two_qubit_gates must be >= 0");
    if (!(job.arrival_time >= 0)) throw ConfigError(ctx + ": arrival_time must be >= 0");
}

void check_duplicate_ids(const std::vector<QJob>& jobs, std::string_view source) {
    std::unordered_set<std::string> seen;
    for (const QJob& j : jobs) {
        if (!seen.insert(j.job_id).second) {
            throw ConfigError(std::string(source) + ": duplicate job_id '" + j.job_id + "'");
        }
    }
}

}  // namespace

std::vector<QJob> generate_jobs(const WorkloadSpec& spec,
                                const std::vector<int>& device_capacities) {
    if (spec.count < 0) throw ConfigError("workload count must be >= 0");
    check_range(spec.qubit_range, "qubit_range");
    check_range(spec.depth_range, "depth_range");
    check_range(spec.shots_range, "shots_range");
    if (spec.two_qubit_range) check_range(*spec.two_qubit_range, "two_qubit_range");
    if (spec.depth_range.lo < 1) throw ConfigError("depth_range: depth must be >= 1");
    if (spec.shots_range.lo < 1) throw ConfigError("shots_range: shots must be >= 1");
    if (spec.arrival == ArrivalModel::Poisson && !(spec.poisson_rate > 0)) {
        throw ConfigError("arrival: poisson rate must be positive");
    }
    if (device_capacities.empty()) throw ConfigError("generate_jobs: no device capacities");

    const long long cap_max = *std::max_element(device_capacities.begin(),
                                                device_capacities.end());
    const long long cap_sum = std::accumulate(device_capacities.begin(),
                                              device_capacities.end(), 0LL);
    // Jobs must exceed the largest device and still fit in the cloud, both
    // strictly, so the sampling interval is [cap_max + 1, cap_sum - 1]
    // intersected with the requested range.
    const long long lo = std::max(spec.qubit_range.lo, cap_max + 1);
    const long long hi = std::min(spec.qubit_range.hi, cap_sum - 1);
    if (lo > hi) {
        throw ConfigError(
            "qubit_range [" + std::to_string(spec.qubit_range.lo) + ", " +
            std::to_string(spec.qubit_range.hi) +
            "] leaves no valid job size: jobs must need more qubits than the largest "
            "device (" + std::to_string(cap_max) + ") and fewer than the cloud total (" +
            std::to_string(cap_sum) + "), both strictly");
    }

    Rng rng(spec.seed);
    std::vector<QJob> jobs;
    jobs.reserve(static_cast<std::size_t>(spec.count));
    double clock = 0;
    for (long long i = 0; i < spec.count; ++i) {
        QJob job;
        job.job_id = "j" + std::to_string(i + 1);
        job.num_qubits = static_cast<int>(rng.uniform_int(lo, hi));
        job.depth = static_cast<int>(rng.uniform_int(spec.depth_range.lo, spec.depth_range.hi));
        job.num_shots = rng.uniform_int(spec.shots_range.lo, spec.shots_range.hi);
        IntRange t2 = spec.two_qubit_range.value_or(
            IntRange{static_cast<long long>(job.num_qubits) * job.depth / 4,
                     static_cast<long long>(job.num_qubits) * job.depth / 2});
        job.two_qubit_gates = rng.uniform_int(t2.lo, t2.hi);
        if (spec.arrival == ArrivalModel::Poisson) {
            clock += -std::log(rng.uniform_pos()) / spec.poisson_rate;
            job.arrival_time = clock;
        }
        jobs.push_back(std::move(job));
    }
    return jobs;
}

std::vector<QJob> load_jobs_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open job trace: " + path.string());
    std::string line;
    if (!std::getline(in, line)) throw ConfigError(path.string() + ": empty trace file");
    const std::string expected = "job_id,num_qubits,depth,num_shots,two_qubit_gates,arrival_time";
    if (trim(line) != expected) {
        throw ConfigError(path.string() + ": unexpected header '" + std::string(trim(line)) +
                          "', expected '" + expected + "'");
    }
    std::vector<QJob> jobs;
    std::size_t row = 1;
    while (std::getline(in, line)) {
        ++row;
        const auto text = trim(line);
        if (text.empty()) continue;
        const std::string ctx = path.string() + " row " + std::to_string(row);
        const auto cells = split(text, ',');
        if (cells.size() != 6) {
            throw ConfigError(ctx + ": expected 6 columns, got " + std::to_string(cells.size()));
        }
        QJob job;
        job.job_id = std::string(trim(cells[0]));
        job.num_qubits = static_cast<int>(parse_int(trim(cells[1]), ctx + " num_qubits"));
        job.depth = static_cast<int>(parse_int(trim(cells[2]), ctx + " depth"));
        job.num_shots = parse_int(trim(cells[3]), ctx + " num_shots");
        job.two_qubit_gates = parse_int(trim(cells[4]), ctx + " two_qubit_gates");
        const auto arrival = trim(cells[5]);
        job.arrival_time = arrival.empty() ? 0.0 : parse_double(arrival, ctx + " arrival_time");
        validate_job(job, ctx);
        jobs.push_back(std::move(job));
    }
    check_duplicate_ids(jobs, path.string());
    return jobs;
}

std::vector<QJob> load_jobs_json(const std::filesystem::path& path) {
    const auto doc = jsonutil::load_file(path);
    if (!doc.is_array()) {
        throw ConfigError(path.string() + ": expected a top-level array of jobs");
    }
    std::vector<QJob> jobs;
    for (std::size_t i = 0; i < doc.size(); ++i) {
        const std::string ctx = path.string() + " job[" + std::to_string(i) + "]";
        const auto& entry = doc[i];
        QJob job;
        job.job_id = jsonutil::string_field(entry, "job_id", ctx);
        job.num_qubits = static_cast<int>(jsonutil::int_field(entry, "num_qubits", ctx));
        job.depth = static_cast<int>(jsonutil::int_field(entry, "depth", ctx));
        job.num_shots = jsonutil::int_field(entry, "num_shots", ctx);
        job.two_qubit_gates = jsonutil::int_field(entry, "two_qubit_gates", ctx);
        if (entry.contains("arrival_time")) {
            job.arrival_time = jsonutil::as_number(entry["arrival_time"], ctx + ".arrival_time");
        }
        validate_job(job, ctx);
        jobs.push_back(std::move(job));
    }
    check_duplicate_ids(jobs, path.string());
    return jobs;
}

void write_jobs_csv(std::ostream& out, std::span<const QJob> jobs) {
    out << "job_id,num_qubits,depth,num_shots,two_qubit_gates,arrival_time\n";
    for (const QJob& j : jobs) {
        out << j.job_id << ',' << j.num_qubits << ',' << j.depth << ',' << j.num_shots << ','
            << j.two_qubit_gates << ',' << format_double(j.arrival_time) << '\n';
    }
}

WorkloadSpec parse_workload_spec(std::string_view json_text, std::string_view source) {
    using namespace jsonutil;
    const json doc = parse(json_text, source);
    WorkloadSpec spec;
    spec.count = int_field(doc, "count", source);
    auto range_field = [&](const char* field) {
        const json& arr = require(doc, field, source);
        const std::string ctx = std::string(source) + "." + field;
        if (!arr.is_array() || arr.size() != 2) {
            throw ConfigError(ctx + ": expected [lo, hi]");
        }
        return IntRange{as_int(arr[0], ctx), as_int(arr[1], ctx)};
    };
    spec.qubit_range = range_field("qubit_range");
    spec.depth_range = range_field("depth_range");
    spec.shots_range = range_field("shots_range");
    if (doc.contains("two_qubit_range") && !doc["two_qubit_range"].is_null()) {
        spec.two_qubit_range = range_field("two_qubit_range");
    }
    if (doc.contains("arrival")) {
        const json& arrival = doc["arrival"];
        const std::string ctx = std::string(source) + ".arrival";
        const std::string model = string_field(arrival, "model", ctx);
        if (model == "all_at_zero") {
            spec.arrival = ArrivalModel::AllAtZero;
        } else if (model == "poisson") {
            spec.arrival = ArrivalModel::Poisson;
            spec.poisson_rate = number_field(arrival, "rate", ctx);
        } else {
            throw ConfigError(ctx + ".model: expected 'all_at_zero' or 'poisson', got '" +
                              model + "'");
        }
    }
    if (doc.contains("seed")) {
        spec.seed = static_cast<std::uint64_t>(as_int(doc["seed"], std::string(source) + ".seed"));
    }
    return spec;
}

WorkloadSpec load_workload_spec_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open workload spec: " + path.string());
    std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return parse_workload_spec(text, path.string());
}

Process arrival_process(SimEnv& env, std::vector<QJob> jobs,
                        std::function<void(const QJob&)> submit) {
    std::stable_sort(jobs.begin(), jobs.end(),
                     [](const QJob& a, const QJob& b) { return a.arrival_time < b.arrival_time; });
    for (const QJob& job : jobs) {
        if (job.arrival_time > env.now()) {
            co_await Delay(env, job.arrival_time - env.now());
        }
        submit(job);
    }
}

}  // namespace qcs
