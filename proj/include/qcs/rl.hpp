#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <iosfwd>
#include <memory>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "qcs/device.hpp"
#include "qcs/metrics.hpp"
#include "qcs/mlp.hpp"
#include "qcs/rng.hpp"
#include "qcs/scheduler.hpp"
#include "qcs/workload.hpp"

namespace qcs {

struct RlTrainingConfig {
    long long timesteps = 100000;
    double learning_rate = 3e-4;
    double clip_ratio = 0.2;
    double entropy_coef = 0.01;
    double value_coef = 0.5;
    int batch_size = 64;
    int epochs_per_batch = 10;
    std::vector<int> hidden_sizes{64, 64};
};

struct RlConfig {
    double q_max = 50;
    double capacity_norm = 150;
    double clops_norm = 1e6;
    int num_device_slots = 5;
    double epsilon = 1e-8;  // keeps the action normalization finite at zero weight
    bool reward_includes_penalty = false;
    RlTrainingConfig training;
    std::uint64_t seed = 0;

    int state_dim() const { return 1 + 3 * num_device_slots; }
};

// Observation layout: [q / q_max], then per device slot
// [level / capacity_norm, error_score, clops / clops_norm]; unused slots stay
// zero. Values are not clamped, so q / q_max may exceed 1.
std::vector<double> build_state(const QJob& job, std::span<QDevice* const> devices,
                                const RlConfig& cfg);

// Diagonal-Gaussian actor over allocation weights plus a scalar critic. The
// log standard deviations are learned but state-independent.
struct GaussianPolicy {
    Mlp actor;
    std::vector<double> log_std;
    Mlp critic;

    static GaussianPolicy make(int state_dim, int action_dim, std::span<const int> hidden_sizes,
                               Rng& rng);

    int action_dim() const { return static_cast<int>(log_std.size()); }
    std::size_t param_count() const;

    std::vector<double> action_mean(std::span<const double> state) const;
    double state_value(std::span<const double> state) const;

    struct ActionSample {
        std::vector<double> action;
        double log_prob;
    };
    ActionSample sample_action(std::span<const double> state, Rng& rng) const;

    // Differential entropy of the action distribution:
    // sum_i(log_std_i + 0.5 * log(2 * pi * e)).
    double entropy() const;
};

double gaussian_log_prob(std::span<const double> mean, std::span<const double> log_std,
                         std::span<const double> action);

// Parameter order: actor layers (weights then bias), log_std, critic layers.
std::vector<double> flatten_params(const GaussianPolicy& policy);
void set_params(GaussianPolicy& policy, std::span<const double> params);

// Deterministic inference: mean action, negatives clamped to zero, converted
// to an integer plan; assignments ordered by descending share.
AllocationPlan rl_allocation_plan(const QJob& job, std::span<QDevice* const> devices,
                                  const GaussianPolicy& policy, const RlConfig& cfg);

RlPlanFn make_rl_plan_fn(std::shared_ptr<const GaussianPolicy> policy, RlConfig cfg);

// One bandit episode: action -> integer allocation -> mean device fidelity.
// An allocation that cannot be repaired into feasibility scores 0.
struct EnvStepResult {
    double reward = 0;
    bool feasible = false;
    AllocationPlan plan;
};
EnvStepResult env_step(const QJob& job, std::span<QDevice* const> devices,
                       std::span<const double> raw_action, const RlConfig& cfg,
                       const MetricsConfig& metrics);

// A fixed batch of single-step episodes, flattened row-major.
struct PpoBatch {
    int size = 0;
    int state_dim = 0;
    int action_dim = 0;
    std::vector<double> states;      // size x state_dim
    std::vector<double> actions;     // size x action_dim
    std::vector<double> logp_old;    // size
    std::vector<double> advantages;  // size
    std::vector<double> returns;     // size
};

struct PpoStats {
    double policy_loss = 0;
    double value_loss = 0;
    double entropy = 0;
    double total = 0;
};

// Clipped-surrogate PPO loss specialized to one-step episodes:
//   total = policy + value_coef * value - entropy_coef * entropy
// When grad_out is non-null it receives dtotal/dparams in flatten order.
PpoStats ppo_loss(const GaussianPolicy& policy, const PpoBatch& batch,
                  const RlTrainingConfig& cfg, std::vector<double>* grad_out);

using JobSampler = std::function<QJob(Rng&)>;

struct TrainingJobRanges {
    IntRange qubit_range;
    IntRange depth_range;
    IntRange shots_range;
    std::optional<IntRange> two_qubit_range;  // absent: [q*d/4, q*d/2] per job
};

JobSampler make_job_sampler(TrainingJobRanges ranges);

struct TrainLogRow {
    long long batch = 0;
    double mean_reward = 0;
    double entropy = 0;
    double policy_loss = 0;
    double value_loss = 0;
};

struct TrainResult {
    GaussianPolicy policy;
    std::vector<TrainLogRow> log;
};

// With single-step episodes the return is the reward and the advantage is
// reward minus the critic baseline; no discounting or bootstrapping exists
// to apply. Advantages are normalized per batch. Fully reproducible from
// cfg.seed.
TrainResult train_ppo(const JobSampler& sampler, std::span<QDevice* const> devices,
                      const RlConfig& cfg, const MetricsConfig& metrics);

void write_training_log_csv(std::ostream& out, std::span<const TrainLogRow> rows);

struct LoadedPolicy {
    RlConfig config;
    GaussianPolicy policy;
};

void save_policy(const GaussianPolicy& policy, const RlConfig& cfg,
                 const std::filesystem::path& path);
LoadedPolicy load_policy(const std::filesystem::path& path);

}  // namespace qcs
