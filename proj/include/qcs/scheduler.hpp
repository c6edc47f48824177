#pragma once

#include <functional>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "qcs/device.hpp"
#include "qcs/metrics.hpp"
#include "qcs/sim.hpp"
#include "qcs/workload.hpp"

namespace qcs {

enum class PolicyKind { Speed, Fidelity, Fair, RlBase };

PolicyKind policy_kind_from_string(std::string_view name);
std::string_view to_string(PolicyKind kind);

struct Assignment {
    int device = 0;         // index into the cloud's device list
    long long qubits = 0;   // > 0
};

// Devices and per-device qubit counts chosen for one job, in priority order.
// Invariants: the qubit counts sum to the job's demand, no count exceeds its
// device's capacity, and devices are distinct.
struct AllocationPlan {
    std::vector<Assignment> assignments;

    int k() const { return static_cast<int>(assignments.size()); }
    long long total_qubits() const;
};

// Operation counters for the selection path; each device's policy key is
// evaluated exactly once per job and the capacity prefix scan touches at
// most every device once, keeping selection linear in the device count.
struct SelectionStats {
    std::size_t key_evaluations = 0;
    std::size_t capacity_scans = 0;
};

// Priority order over all devices for the three score-based policies:
// Speed = descending clops, Fidelity = ascending error score, Fair =
// ascending live utilization. Ties keep the device-list order.
std::vector<int> rank_devices(PolicyKind kind, std::span<QDevice* const> devices,
                              SelectionStats* stats = nullptr);

// Shortest prefix of `order` whose summed capacities cover `qubits`.
std::vector<int> minimal_prefix(std::span<const int> order,
                                std::span<QDevice* const> devices, long long qubits,
                                SelectionStats* stats = nullptr);

// Greedy fill in priority order: each device takes min(remaining, capacity).
AllocationPlan partition_qubits(long long qubits, std::span<const int> ordered_devices,
                                std::span<QDevice* const> devices);

// Converts non-negative allocation weights into integer qubit counts:
// targets are weight_i / (sum + epsilon) * q, rounded to nearest and then
// repaired one qubit at a time toward the largest under-allocation (or away
// from the largest over-allocation), ties to the lowest device index,
// respecting 0 <= count <= capacity. Devices at zero are dropped.
AllocationPlan partition_from_fractions(long long qubits, std::span<QDevice* const> devices,
                                        std::span<const double> raw_weights, double epsilon);

// Produces a complete plan for one job from the learned allocation policy;
// wired up by the RL module.
using RlPlanFn = std::function<AllocationPlan(const QJob&, std::span<QDevice* const>)>;

// Devices a policy would use for `job`, in priority order. For the
// score-based policies this is the minimal covering prefix of the ranking;
// for RlBase it is the device order induced by the learned allocation
// (descending share), which requires `rl_plan`.
std::vector<int> select_devices(PolicyKind kind, std::span<QDevice* const> devices,
                                const QJob& job, const RlPlanFn* rl_plan = nullptr,
                                SelectionStats* stats = nullptr);

// One fidelity value per plan assignment, in plan order.
std::vector<double> plan_device_fidelities(const AllocationPlan& plan,
                                           std::span<QDevice* const> devices, const QJob& job,
                                           const MetricsConfig& metrics);

// Runs jobs through the shared allocation workflow: select devices, reserve
// qubits (blocking, in ascending device order so interleaved plans cannot
// deadlock), execute sub-jobs in parallel, pay the communication delay when
// the job spans devices, score fidelity, release, record.
class Broker {
public:
    Broker(SimEnv& env, std::vector<QDevice*> devices, PolicyKind mode,
           MetricsConfig metrics, JobRecordsManager& records, RlPlanFn rl_plan = {});

    void submit(const QJob& job);

    // Selection + partition only, no side effects on stores.
    AllocationPlan plan_job(const QJob& job) const;

    PolicyKind mode() const { return mode_; }

private:
    Process job_activity(QJob job);

    SimEnv& env_;
    std::vector<QDevice*> devices_;
    PolicyKind mode_;
    MetricsConfig metrics_;
    JobRecordsManager& records_;
    RlPlanFn rl_plan_;
};

}  // namespace qcs
