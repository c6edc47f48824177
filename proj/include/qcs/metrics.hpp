#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace qcs {

enum class TwoQubitExponent { Sqrt, FourthRoot };

TwoQubitExponent two_qubit_exponent_from_string(std::string_view name);
std::string_view to_string(TwoQubitExponent mode);

// Model constants. m_templates and k_updates are fixed benchmark parameters
// of the execution-time model, not job properties; phi is the per-link
// fidelity penalty base and lambda_per_qubit the classical communication
// latency in seconds per qubit.
struct MetricsConfig {
    int m_templates = 100;
    int k_updates = 10;
    double phi = 0.95;
    double lambda_per_qubit = 0.02;
    TwoQubitExponent two_qubit_exponent = TwoQubitExponent::Sqrt;
};

// Per-device average error channels, precomputed from calibration data.
struct CalibrationMeans {
    double single_qubit_error = 0;
    double two_qubit_error = 0;
    double readout_error = 0;
};

// M * K * shots * log2(quantum_volume) / clops, in seconds.
double execution_time(const MetricsConfig& cfg, long long shots, int quantum_volume,
                      double clops);

// (1 - eps_1q)^depth
double fidelity_1q(double eps_1q, int depth);

// (1 - eps_2q)^sqrt(n_2q), or with the fourth root of n_2q as exponent.
double fidelity_2q(double eps_2q, long long n_2q,
                   TwoQubitExponent mode = TwoQubitExponent::Sqrt);

// (1 - eps_readout)^sqrt(job_qubits / devices_used)
double fidelity_readout(double eps_readout, int job_qubits, int devices_used);

// Product of the three fidelity channels for one device of a plan.
double device_fidelity(const CalibrationMeans& means, int depth, long long t2_share,
                       int job_qubits, int devices_used, TwoQubitExponent mode);

// mean(device_fidelities) * phi^(k - 1)
double final_fidelity(std::span<const double> device_fidelities, double phi);

// Blocking classical-communication delay: zero for a single device, otherwise
// lambda * job_qubits per inter-device link, (k - 1) links in a chain.
double comm_time(int job_qubits, int devices_used, double lambda_per_qubit);

// Even split of a job's two-qubit gate count over k devices; the remainder
// goes to the first (highest-priority) device of the plan.
std::vector<long long> split_two_qubit_gates(long long t2, int k);

struct JobRecord {
    std::string job_id;
    double arrival = 0;
    double start = 0;
    double finish = 0;
    std::vector<std::pair<std::string, long long>> devices_used;  // (name, qubits)
    double exec_time = 0;
    double comm_time = 0;
    double fidelity = 0;

    int k() const { return static_cast<int>(devices_used.size()); }
};

struct RunSummary {
    std::string label;
    double t_sim = 0;          // makespan: max finish over all records
    double mean_fidelity = 0;
    double std_fidelity = 0;   // population standard deviation
    double total_comm = 0;     // sum of per-job communication delays
    std::size_t num_jobs = 0;
};

RunSummary summarize(std::span<const JobRecord> records, std::string label);

// Collects completed-job records in finish order.
class JobRecordsManager {
public:
    void add(JobRecord record) { records_.push_back(std::move(record)); }
    const std::vector<JobRecord>& records() const { return records_; }

private:
    std::vector<JobRecord> records_;
};

void write_records_csv(std::ostream& out, std::span<const JobRecord> records);
std::vector<JobRecord> read_records_csv(const std::filesystem::path& path);

struct HistogramBin {
    double lo = 0;
    double hi = 0;
    long long count = 0;
};

// Fixed-width bins over [0, 1]; only non-empty bins are returned.
std::vector<HistogramBin> fidelity_histogram(std::span<const JobRecord> records,
                                             double bin_width);
void write_histogram_csv(std::ostream& out, std::span<const HistogramBin> bins);

}  // namespace qcs
