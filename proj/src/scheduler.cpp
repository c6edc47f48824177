#include "qcs/scheduler.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "qcs/util.hpp"

namespace qcs {

PolicyKind policy_kind_from_string(std::string_view name) {
    if (name == "speed") return PolicyKind::Speed;
    if (name == "fidelity") return PolicyKind::Fidelity;
    if (name == "fair") return PolicyKind::Fair;
    if (name == "rlbase") return PolicyKind::RlBase;
    throw ConfigError("mode: expected one of speed, fidelity, fair, rlbase; got '" +
                      std::string(name) + "'");
}

std::string_view to_string(PolicyKind kind) {
    switch (kind) {
        case PolicyKind::Speed: return "speed";
        case PolicyKind::Fidelity: return "fidelity";
        case PolicyKind::Fair: return "fair";
        case PolicyKind::RlBase: return "rlbase";
    }
    return "?";
}

long long AllocationPlan::total_qubits() const {
    long long sum = 0;
    for (const Assignment& a : assignments) sum += a.qubits;
    return sum;
}

std::vector<int> rank_devices(PolicyKind kind, std::span<QDevice* const> devices,
                              SelectionStats* stats) {
    if (kind == PolicyKind::RlBase) {
        throw std::invalid_argument("rank_devices: RlBase ordering comes from the policy net");
    }
    // Evaluate each device's key once, then sort indices; comparisons touch
    // only the precomputed keys.
    std::vector<double> keys(devices.size());
    for (std::size_t i = 0; i < devices.size(); ++i) {
        switch (kind) {
            case PolicyKind::Speed: keys[i] = -devices[i]->profile().clops; break;
            case PolicyKind::Fidelity: keys[i] = devices[i]->error_score(); break;
            case PolicyKind::Fair: keys[i] = devices[i]->utilization(); break;
            case PolicyKind::RlBase: break;
        }
    }
    if (stats) stats->key_evaluations += devices.size();
    std::vector<int> order(devices.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](int a, int b) {
        const double ka = keys[static_cast<std::size_t>(a)];
        const double kb = keys[static_cast<std::size_t>(b)];
        if (ka != kb) return ka < kb;
        return a < b;
    });
    return order;
}

std::vector<int> minimal_prefix(std::span<const int> order, std::span<QDevice* const> devices,
                                long long qubits, SelectionStats* stats) {
    std::vector<int> prefix;
    long long covered = 0;
    for (int idx : order) {
        if (stats) ++stats->capacity_scans;
        prefix.push_back(idx);
        covered += devices[static_cast<std::size_t>(idx)]->profile().capacity;
        if (covered >= qubits) return prefix;
    }
    throw std::invalid_argument("device selection: total capacity " + std::to_string(covered) +
                                " cannot cover a " + std::to_string(qubits) + "-qubit job");
}

AllocationPlan partition_qubits(long long qubits, std::span<const int> ordered_devices,
                                std::span<QDevice* const> devices) {
    if (qubits < 1) throw std::invalid_argument("partition_qubits: qubits must be >= 1");
    AllocationPlan plan;
    long long remaining = qubits;
    for (int idx : ordered_devices) {
        if (remaining == 0) break;
        const long long take =
            std::min<long long>(remaining, devices[static_cast<std::size_t>(idx)]->profile().capacity);
        if (take > 0) plan.assignments.push_back({idx, take});
        remaining -= take;
    }
    if (remaining != 0) {
        throw std::invalid_argument("partition_qubits: ordered devices cover " +
                                    std::to_string(qubits - remaining) + " of " +
                                    std::to_string(qubits) + " qubits");
    }
    return plan;
}

AllocationPlan partition_from_fractions(long long qubits, std::span<QDevice* const> devices,
                                        std::span<const double> raw_weights, double epsilon) {
    if (qubits < 1) throw std::invalid_argument("partition_from_fractions: qubits must be >= 1");
    if (raw_weights.size() != devices.size()) {
        throw std::invalid_argument("partition_from_fractions: expected one weight per device");
    }
    if (!(epsilon > 0)) throw std::invalid_argument("partition_from_fractions: epsilon must be > 0");

    double weight_sum = 0;
    for (double w : raw_weights) {
        if (!(w >= 0)) {
            throw std::invalid_argument("partition_from_fractions: weights must be non-negative");
        }
        weight_sum += w;
    }
    long long capacity_total = 0;
    for (const QDevice* d : devices) capacity_total += d->profile().capacity;
    if (capacity_total < qubits) {
        throw std::invalid_argument("partition_from_fractions: total capacity " +
                                    std::to_string(capacity_total) + " cannot hold " +
                                    std::to_string(qubits) + " qubits");
    }

    const std::size_t n = devices.size();
    std::vector<double> target(n);
    std::vector<long long> alloc(n);
    for (std::size_t i = 0; i < n; ++i) {
        target[i] = raw_weights[i] / (weight_sum + epsilon) * static_cast<double>(qubits);
        const long long cap = devices[i]->profile().capacity;
        alloc[i] = std::clamp<long long>(std::llround(target[i]), 0, cap);
    }

    long long total = std::accumulate(alloc.begin(), alloc.end(), 0LL);
    // Repair one qubit at a time. Adding goes to the largest remaining
    // under-allocation, removing comes from the largest over-allocation;
    // remainders are recomputed each step so ties rotate instead of piling
    // onto one device. Ties break to the lowest index.
    while (total != qubits) {
        const bool add = total < qubits;
        std::size_t best = n;
        double best_rem = 0;
        for (std::size_t i = 0; i < n; ++i) {
            const long long cap = devices[i]->profile().capacity;
            if (add && alloc[i] >= cap) continue;
            if (!add && alloc[i] <= 0) continue;
            const double rem = target[i] - static_cast<double>(alloc[i]);
            if (best == n || (add ? rem > best_rem : rem < best_rem)) {
                best = i;
                best_rem = rem;
            }
        }
        // A candidate always exists: total < q <= sum(cap) or total > q >= 0.
        if (best == n) {
            throw std::logic_error("partition_from_fractions: repair found no candidate");
        }
        alloc[best] += add ? 1 : -1;
        total += add ? 1 : -1;
    }

    AllocationPlan plan;
    for (std::size_t i = 0; i < n; ++i) {
        if (alloc[i] > 0) plan.assignments.push_back({static_cast<int>(i), alloc[i]});
    }
    return plan;
}

std::vector<int> select_devices(PolicyKind kind, std::span<QDevice* const> devices,
                                const QJob& job, const RlPlanFn* rl_plan,
                                SelectionStats* stats) {
    if (kind == PolicyKind::RlBase) {
        if (rl_plan == nullptr || !*rl_plan) {
            throw ConfigError("mode rlbase requires a trained allocation policy");
        }
        AllocationPlan plan = (*rl_plan)(job, devices);
        std::vector<int> order;
        order.reserve(plan.assignments.size());
        for (const Assignment& a : plan.assignments) order.push_back(a.device);
        return order;
    }
    const auto ranking = rank_devices(kind, devices, stats);
    return minimal_prefix(ranking, devices, job.num_qubits, stats);
}

std::vector<double> plan_device_fidelities(const AllocationPlan& plan,
                                           std::span<QDevice* const> devices, const QJob& job,
                                           const MetricsConfig& metrics) {
    const int k = plan.k();
    const auto t2_shares = split_two_qubit_gates(job.two_qubit_gates, k);
    std::vector<double> fidelities;
    fidelities.reserve(plan.assignments.size());
    for (int i = 0; i < k; ++i) {
        const QDevice* dev = devices[static_cast<std::size_t>(plan.assignments[static_cast<std::size_t>(i)].device)];
        fidelities.push_back(device_fidelity(dev->calibration_means(), job.depth,
                                             t2_shares[static_cast<std::size_t>(i)],
                                             job.num_qubits, k, metrics.two_qubit_exponent));
    }
    return fidelities;
}

Broker::Broker(SimEnv& env, std::vector<QDevice*> devices, PolicyKind mode,
               MetricsConfig metrics, JobRecordsManager& records, RlPlanFn rl_plan)
    : env_(env),
      devices_(std::move(devices)),
      mode_(mode),
      metrics_(metrics),
      records_(records),
      rl_plan_(std::move(rl_plan)) {
    if (devices_.empty()) throw ConfigError("broker: no devices configured");
    if (mode_ == PolicyKind::RlBase && !rl_plan_) {
        throw ConfigError("mode rlbase requires a trained allocation policy");
    }
}

AllocationPlan Broker::plan_job(const QJob& job) const {
    const std::span<QDevice* const> devices(devices_);
    if (mode_ == PolicyKind::RlBase) {
        return rl_plan_(job, devices);
    }
    const auto selected = select_devices(mode_, devices, job);
    return partition_qubits(job.num_qubits, selected, devices);
}

void Broker::submit(const QJob& job) {
    env_.spawn(job_activity(job));
}

Process Broker::job_activity(QJob job) {
    AllocationPlan plan = plan_job(job);

    // Reservations always proceed in ascending device index regardless of
    // plan priority; with FIFO stores this global order rules out circular
    // hold-and-wait between jobs whose plans interleave.
    std::vector<Assignment> acquisition(plan.assignments);
    std::sort(acquisition.begin(), acquisition.end(),
              [](const Assignment& a, const Assignment& b) { return a.device < b.device; });
    for (const Assignment& a : acquisition) {
        co_await devices_[static_cast<std::size_t>(a.device)]->qubit_store().acquire(a.qubits);
    }

    const SimTime start = env_.now();
    double exec = 0;
    for (const Assignment& a : plan.assignments) {
        QDevice* dev = devices_[static_cast<std::size_t>(a.device)];
        const double sub_time = execution_time(metrics_, job.num_shots,
                                               dev->profile().quantum_volume,
                                               dev->profile().clops);
        dev->busy_time += sub_time;
        dev->jobs_served += 1;
        exec = std::max(exec, sub_time);
    }
    co_await Delay(env_, exec);

    const double comm = comm_time(job.num_qubits, plan.k(), metrics_.lambda_per_qubit);
    if (comm > 0) {
        co_await Delay(env_, comm);
    }

    const auto fidelities = plan_device_fidelities(plan, devices_, job, metrics_);
    const double fidelity = final_fidelity(fidelities, metrics_.phi);

    for (const Assignment& a : acquisition) {
        devices_[static_cast<std::size_t>(a.device)]->qubit_store().release(a.qubits);
    }

    JobRecord record;
    record.job_id = job.job_id;
    record.arrival = job.arrival_time;
    record.start = start;
    record.finish = env_.now();
    for (const Assignment& a : plan.assignments) {
        record.devices_used.emplace_back(devices_[static_cast<std::size_t>(a.device)]->name(),
                                         a.qubits);
    }
    record.exec_time = exec;
    record.comm_time = comm;
    record.fidelity = fidelity;
    records_.add(std::move(record));
}

}  // namespace qcs
