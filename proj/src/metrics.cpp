#include "qcs/metrics.hpp"

#include <cmath>
#include <fstream>
#include <ostream>
#include <stdexcept>

#include "qcs/util.hpp"

namespace qcs {

TwoQubitExponent two_qubit_exponent_from_string(std::string_view name) {
    if (name == "sqrt") return TwoQubitExponent::Sqrt;
    if (name == "fourth_root") return TwoQubitExponent::FourthRoot;
    throw ConfigError("two_qubit_exponent: expected 'sqrt' or 'fourth_root', got '" +
                      std::string(name) + "'");
}

std::string_view to_string(TwoQubitExponent mode) {
    return mode == TwoQubitExponent::Sqrt ? "sqrt" : "fourth_root";
}

double execution_time(const MetricsConfig& cfg, long long shots, int quantum_volume,
                      double clops) {
    if (!(clops > 0)) throw std::invalid_argument("execution_time: clops must be positive");
    if (quantum_volume < 2) {
        throw std::invalid_argument("execution_time: quantum volume must be >= 2, got " +
                                    std::to_string(quantum_volume));
    }
    if (shots < 1) throw std::invalid_argument("execution_time: shots must be >= 1");
    const double layers = std::log2(static_cast<double>(quantum_volume));
    return static_cast<double>(cfg.m_templates) * static_cast<double>(cfg.k_updates) *
           static_cast<double>(shots) * layers / clops;
}

double fidelity_1q(double eps_1q, int depth) {
    return std::pow(1.0 - eps_1q, static_cast<double>(depth));
}

double fidelity_2q(double eps_2q, long long n_2q, TwoQubitExponent mode) {
    const double n = static_cast<double>(n_2q);
    const double exponent =
        mode == TwoQubitExponent::Sqrt ? std::sqrt(n) : std::pow(n, 0.25);
    return std::pow(1.0 - eps_2q, exponent);
}

double fidelity_readout(double eps_readout, int job_qubits, int devices_used) {
    if (job_qubits < 1 || devices_used < 1) {
        throw std::invalid_argument("fidelity_readout: qubits and device count must be >= 1");
    }
    const double exponent =
        std::sqrt(static_cast<double>(job_qubits) / static_cast<double>(devices_used));
    return std::pow(1.0 - eps_readout, exponent);
}

double device_fidelity(const CalibrationMeans& means, int depth, long long t2_share,
                       int job_qubits, int devices_used, TwoQubitExponent mode) {
    return fidelity_1q(means.single_qubit_error, depth) *
           fidelity_2q(means.two_qubit_error, t2_share, mode) *
           fidelity_readout(means.readout_error, job_qubits, devices_used);
}

double final_fidelity(std::span<const double> device_fidelities, double phi) {
    if (device_fidelities.empty()) {
        throw std::invalid_argument("final_fidelity: no device fidelities");
    }
    double sum = 0;
    for (double f : device_fidelities) sum += f;
    const double mean = sum / static_cast<double>(device_fidelities.size());
    const auto k = static_cast<int>(device_fidelities.size());
    return mean * std::pow(phi, static_cast<double>(k - 1));
}

double comm_time(int job_qubits, int devices_used, double lambda_per_qubit) {
    if (job_qubits < 1 || devices_used < 1) {
        throw std::invalid_argument("comm_time: qubits and device count must be >= 1");
    }
    if (devices_used == 1) return 0.0;
    return static_cast<double>(devices_used - 1) * lambda_per_qubit *
           static_cast<double>(job_qubits);
}

std::vector<long long> split_two_qubit_gates(long long t2, int k) {
    if (k < 1) throw std::invalid_argument("split_two_qubit_gates: k must be >= 1");
    std::vector<long long> shares(static_cast<std::size_t>(k), t2 / k);
    shares[0] += t2 % k;
    return shares;
}

RunSummary summarize(std::span<const JobRecord> records, std::string label) {
    if (records.empty()) throw std::invalid_argument("summarize: no records");
    RunSummary s;
    s.label = std::move(label);
    s.num_jobs = records.size();
    double fid_sum = 0;
    for (const JobRecord& r : records) {
        s.t_sim = std::max(s.t_sim, r.finish);
        s.total_comm += r.comm_time;
        fid_sum += r.fidelity;
    }
    s.mean_fidelity = fid_sum / static_cast<double>(records.size());
    double var_sum = 0;
    for (const JobRecord& r : records) {
        const double d = r.fidelity - s.mean_fidelity;
        var_sum += d * d;
    }
    s.std_fidelity = std::sqrt(var_sum / static_cast<double>(records.size()));
    return s;
}

namespace {

std::string join_names(const JobRecord& r) {
    std::string out;
    for (std::size_t i = 0; i < r.devices_used.size(); ++i) {
        if (i > 0) out += ';';
        out += r.devices_used[i].first;
    }
    return out;
}

std::string join_split(const JobRecord& r) {
    std::string out;
    for (std::size_t i = 0; i < r.devices_used.size(); ++i) {
        if (i > 0) out += ';';
        out += std::to_string(r.devices_used[i].second);
    }
    return out;
}

}  // namespace

void write_records_csv(std::ostream& out, std::span<const JobRecord> records) {
    out << "job_id,arrival,start,finish,k,devices,qubit_split,exec_time,comm_time,fidelity\n";
    for (const JobRecord& r : records) {
        out << r.job_id << ',' << format_double(r.arrival) << ',' << format_double(r.start)
            << ',' << format_double(r.finish) << ',' << r.k() << ',' << join_names(r) << ','
            << join_split(r) << ',' << format_double(r.exec_time) << ','
            << format_double(r.comm_time) << ',' << format_double(r.fidelity) << '\n';
    }
}

std::vector<JobRecord> read_records_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open records file: " + path.string());
    std::string line;
    if (!std::getline(in, line)) throw ConfigError(path.string() + ": empty records file");
    const std::string expected =
        "job_id,arrival,start,finish,k,devices,qubit_split,exec_time,comm_time,fidelity";
    if (trim(line) != expected) {
        throw ConfigError(path.string() + ": unexpected header '" + line + "'");
    }
    std::vector<JobRecord> records;
    std::size_t row = 1;
    while (std::getline(in, line)) {
        ++row;
        const auto text = trim(line);
        if (text.empty()) continue;
        const std::string ctx = path.string() + " row " + std::to_string(row);
        const auto cells = split(text, ',');
        if (cells.size() != 10) {
            throw ConfigError(ctx + ": expected 10 columns, got " + std::to_string(cells.size()));
        }
        JobRecord r;
        r.job_id = std::string(cells[0]);
        r.arrival = parse_double(cells[1], ctx + " arrival");
        r.start = parse_double(cells[2], ctx + " start");
        r.finish = parse_double(cells[3], ctx + " finish");
        const long long k = parse_int(cells[4], ctx + " k");
        const auto names = split(cells[5], ';');
        const auto amounts = split(cells[6], ';');
        if (names.size() != amounts.size() || static_cast<long long>(names.size()) != k) {
            throw ConfigError(ctx + ": device list, qubit split, and k disagree");
        }
        for (std::size_t i = 0; i < names.size(); ++i) {
            r.devices_used.emplace_back(std::string(names[i]),
                                        parse_int(amounts[i], ctx + " qubit_split"));
        }
        r.exec_time = parse_double(cells[7], ctx + " exec_time");
        r.comm_time = parse_double(cells[8], ctx + " comm_time");
        r.fidelity = parse_double(cells[9], ctx + " fidelity");
        records.push_back(std::move(r));
    }
    return records;
}

std::vector<HistogramBin> fidelity_histogram(std::span<const JobRecord> records,
                                             double bin_width) {
    if (!(bin_width > 0) || bin_width > 1) {
        throw std::invalid_argument("fidelity_histogram: bin width must be in (0, 1]");
    }
    const auto nbins = static_cast<std::size_t>(std::ceil(1.0 / bin_width));
    std::vector<long long> counts(nbins, 0);
    for (const JobRecord& r : records) {
        auto idx = static_cast<std::size_t>(r.fidelity / bin_width);
        if (idx >= nbins) idx = nbins - 1;  // fidelity == 1.0 lands in the top bin
        ++counts[idx];
    }
    std::vector<HistogramBin> bins;
    for (std::size_t i = 0; i < nbins; ++i) {
        if (counts[i] == 0) continue;
        bins.push_back({static_cast<double>(i) * bin_width,
                        static_cast<double>(i + 1) * bin_width, counts[i]});
    }
    return bins;
}

void write_histogram_csv(std::ostream& out, std::span<const HistogramBin> bins) {
    out << "bin_lo,bin_hi,count\n";
    for (const HistogramBin& b : bins) {
        out << format_double(b.lo) << ',' << format_double(b.hi) << ',' << b.count << '\n';
    }
}

}  // namespace qcs
