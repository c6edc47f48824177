#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "qcs/sim.hpp"

namespace qcs {

struct QJob {
    std::string job_id;
    int num_qubits = 0;
    int depth = 0;
    long long num_shots = 0;
    long long two_qubit_gates = 0;
    SimTime arrival_time = 0;
};

struct IntRange {
    long long lo = 0;
    long long hi = 0;
};

enum class ArrivalModel { AllAtZero, Poisson };

struct WorkloadSpec {
    long long count = 0;
    IntRange qubit_range;
    IntRange depth_range;
    IntRange shots_range;
    // Absent: each job draws uniformly from [q*d/4, q*d/2], proportional to
    // circuit area.
    std::optional<IntRange> two_qubit_range;
    ArrivalModel arrival = ArrivalModel::AllAtZero;
    double poisson_rate = 0;  // arrivals per second when arrival == Poisson
    std::uint64_t seed = 0;
};

// Synthesizes `count` jobs whose qubit demand is strictly larger than any
// single device and strictly smaller than the cloud total, intersected with
// the requested range. Fully reproducible from (spec, capacities): per job
// the draw order is q, depth, shots, t2, then the arrival draw if any.
std::vector<QJob> generate_jobs(const WorkloadSpec& spec,
                                const std::vector<int>& device_capacities);

// Trace files. CSV header:
//   job_id,num_qubits,depth,num_shots,two_qubit_gates,arrival_time
// arrival_time may be empty (defaults to 0, the simulation start). The JSON
// form is an array of objects with the same field names.
std::vector<QJob> load_jobs_csv(const std::filesystem::path& path);
std::vector<QJob> load_jobs_json(const std::filesystem::path& path);
void write_jobs_csv(std::ostream& out, std::span<const QJob> jobs);

WorkloadSpec parse_workload_spec(std::string_view json_text, std::string_view source);
WorkloadSpec load_workload_spec_file(const std::filesystem::path& path);

// Submits each job at its arrival time; equal arrival times preserve input
// order.
Process arrival_process(SimEnv& env, std::vector<QJob> jobs,
                        std::function<void(const QJob&)> submit);

}  // namespace qcs
