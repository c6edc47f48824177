#include "qcs/rl.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <ostream>
#include <stdexcept>

#include "json_util.hpp"
#include "rl_internal.hpp"
#include "qcs/util.hpp"

namespace qcs {

namespace {

constexpr double kHalfLog2PiE = 1.4189385332046727;  // 0.5 * (1 + log(2*pi))

void check_slots(std::size_t device_count, const RlConfig& cfg) {
    if (static_cast<int>(device_count) > cfg.num_device_slots) {
        throw ConfigError("rl: " + std::to_string(device_count) +
                          " devices exceed the policy's " +
                          std::to_string(cfg.num_device_slots) + " device slots");
    }
}

}  // namespace

std::vector<double> build_state(const QJob& job, std::span<QDevice* const> devices,
                                const RlConfig& cfg) {
    check_slots(devices.size(), cfg);
    std::vector<double> state(static_cast<std::size_t>(cfg.state_dim()), 0.0);
    state[0] = static_cast<double>(job.num_qubits) / cfg.q_max;
    for (std::size_t i = 0; i < devices.size(); ++i) {
        const QDevice* dev = devices[i];
        state[1 + 3 * i] = static_cast<double>(dev->available_qubits()) / cfg.capacity_norm;
        state[2 + 3 * i] = dev->error_score();
        state[3 + 3 * i] = dev->profile().clops / cfg.clops_norm;
    }
    return state;
}

GaussianPolicy GaussianPolicy::make(int state_dim, int action_dim,
                                    std::span<const int> hidden_sizes, Rng& rng) {
    auto layer_sizes = [&](int out) {
        std::vector<int> sizes{state_dim};
        sizes.insert(sizes.end(), hidden_sizes.begin(), hidden_sizes.end());
        sizes.push_back(out);
        return sizes;
    };
    GaussianPolicy p;
    p.actor = Mlp(layer_sizes(action_dim));
    // Small output weights keep the initial action means near zero so early
    // exploration is driven by the (unit) standard deviation.
    p.actor.init_uniform(rng, 0.01);
    p.log_std.assign(static_cast<std::size_t>(action_dim), 0.0);
    p.critic = Mlp(layer_sizes(1));
    p.critic.init_uniform(rng);
    return p;
}

std::size_t GaussianPolicy::param_count() const {
    return actor.param_count() + log_std.size() + critic.param_count();
}

std::vector<double> GaussianPolicy::action_mean(std::span<const double> state) const {
    return actor.forward(state);
}

double GaussianPolicy::state_value(std::span<const double> state) const {
    return critic.forward(state)[0];
}

GaussianPolicy::ActionSample GaussianPolicy::sample_action(std::span<const double> state,
                                                           Rng& rng) const {
    const auto mean = action_mean(state);
    ActionSample s;
    s.action.resize(mean.size());
    for (std::size_t i = 0; i < mean.size(); ++i) {
        s.action[i] = mean[i] + std::exp(log_std[i]) * rng.normal();
    }
    s.log_prob = gaussian_log_prob(mean, log_std, s.action);
    return s;
}

double GaussianPolicy::entropy() const {
    double h = 0;
    for (double ls : log_std) h += ls + kHalfLog2PiE;
    return h;
}

double gaussian_log_prob(std::span<const double> mean, std::span<const double> log_std,
                         std::span<const double> action) {
    if (mean.size() != log_std.size() || mean.size() != action.size()) {
        throw std::invalid_argument("gaussian_log_prob: dimension mismatch");
    }
    double lp = 0;
    for (std::size_t i = 0; i < mean.size(); ++i) {
        const double z = (action[i] - mean[i]) / std::exp(log_std[i]);
        lp += -0.5 * z * z - log_std[i] - 0.5 * std::log(2.0 * std::numbers::pi);
    }
    return lp;
}

namespace {

void append_mlp(const Mlp& net, std::vector<double>& out) {
    for (const DenseLayer& layer : net.layers) {
        out.insert(out.end(), layer.weights.begin(), layer.weights.end());
        out.insert(out.end(), layer.bias.begin(), layer.bias.end());
    }
}

std::size_t read_mlp(Mlp& net, std::span<const double> params, std::size_t offset) {
    for (DenseLayer& layer : net.layers) {
        std::copy_n(params.begin() + static_cast<std::ptrdiff_t>(offset), layer.weights.size(),
                    layer.weights.begin());
        offset += layer.weights.size();
        std::copy_n(params.begin() + static_cast<std::ptrdiff_t>(offset), layer.bias.size(),
                    layer.bias.begin());
        offset += layer.bias.size();
    }
    return offset;
}

}  // namespace

std::vector<double> flatten_params(const GaussianPolicy& policy) {
    std::vector<double> out;
    out.reserve(policy.param_count());
    append_mlp(policy.actor, out);
    out.insert(out.end(), policy.log_std.begin(), policy.log_std.end());
    append_mlp(policy.critic, out);
    return out;
}

void set_params(GaussianPolicy& policy, std::span<const double> params) {
    if (params.size() != policy.param_count()) {
        throw std::invalid_argument("set_params: expected " +
                                    std::to_string(policy.param_count()) + " values, got " +
                                    std::to_string(params.size()));
    }
    std::size_t offset = read_mlp(policy.actor, params, 0);
    std::copy_n(params.begin() + static_cast<std::ptrdiff_t>(offset), policy.log_std.size(),
                policy.log_std.begin());
    offset += policy.log_std.size();
    read_mlp(policy.critic, params, offset);
}

namespace {

// The raw action may contain negative Gaussian samples; allocation weights
// are non-negative by definition, so negatives clamp to zero. Slots beyond
// the actual device count are padding and ignored.
std::vector<double> action_to_weights(std::span<const double> raw_action,
                                      std::size_t device_count, const RlConfig& cfg) {
    if (raw_action.size() != static_cast<std::size_t>(cfg.num_device_slots)) {
        throw std::invalid_argument("rl action has dimension " +
                                    std::to_string(raw_action.size()) + ", expected " +
                                    std::to_string(cfg.num_device_slots));
    }
    std::vector<double> weights(device_count);
    for (std::size_t i = 0; i < device_count; ++i) {
        weights[i] = std::max(0.0, raw_action[i]);
    }
    return weights;
}

}  // namespace

AllocationPlan rl_allocation_plan(const QJob& job, std::span<QDevice* const> devices,
                                  const GaussianPolicy& policy, const RlConfig& cfg) {
    const auto state = build_state(job, devices, cfg);
    const auto mean = policy.action_mean(state);
    const auto weights = action_to_weights(mean, devices.size(), cfg);
    AllocationPlan plan = partition_from_fractions(job.num_qubits, devices, weights, cfg.epsilon);
    std::stable_sort(plan.assignments.begin(), plan.assignments.end(),
                     [](const Assignment& a, const Assignment& b) { return a.qubits > b.qubits; });
    return plan;
}

RlPlanFn make_rl_plan_fn(std::shared_ptr<const GaussianPolicy> policy, RlConfig cfg) {
    return [policy = std::move(policy), cfg](const QJob& job,
                                             std::span<QDevice* const> devices) {
        return rl_allocation_plan(job, devices, *policy, cfg);
    };
}

EnvStepResult env_step(const QJob& job, std::span<QDevice* const> devices,
                       std::span<const double> raw_action, const RlConfig& cfg,
                       const MetricsConfig& metrics) {
    check_slots(devices.size(), cfg);
    const auto weights = action_to_weights(raw_action, devices.size(), cfg);
    long long capacity_total = 0;
    for (const QDevice* d : devices) capacity_total += d->profile().capacity;
    if (capacity_total < job.num_qubits) {
        return {0.0, false, {}};
    }
    EnvStepResult result;
    result.feasible = true;
    result.plan = partition_from_fractions(job.num_qubits, devices, weights, cfg.epsilon);
    const auto fidelities = plan_device_fidelities(result.plan, devices, job, metrics);
    double sum = 0;
    for (double f : fidelities) sum += f;
    result.reward = sum / static_cast<double>(fidelities.size());
    if (cfg.reward_includes_penalty) {
        result.reward *= std::pow(metrics.phi, static_cast<double>(result.plan.k() - 1));
    }
    return result;
}

PpoStats ppo_loss(const GaussianPolicy& policy, const PpoBatch& batch,
                  const RlTrainingConfig& cfg, std::vector<double>* grad_out) {
    if (batch.size <= 0) throw std::invalid_argument("ppo_loss: empty batch");
    const auto n = static_cast<std::size_t>(batch.size);
    const auto sdim = static_cast<std::size_t>(batch.state_dim);
    const auto adim = static_cast<std::size_t>(batch.action_dim);

    Mlp actor_grad = Mlp::zeros_like(policy.actor);
    Mlp critic_grad = Mlp::zeros_like(policy.critic);
    std::vector<double> log_std_grad(adim, 0.0);

    PpoStats stats;
    const double inv_n = 1.0 / static_cast<double>(batch.size);

    for (std::size_t i = 0; i < n; ++i) {
        const std::span<const double> state(batch.states.data() + i * sdim, sdim);
        const std::span<const double> action(batch.actions.data() + i * adim, adim);

        Mlp::Trace actor_trace;
        const auto mean = policy.actor.forward(state, actor_trace);
        const double logp_new = gaussian_log_prob(mean, policy.log_std, action);
        const double ratio = std::exp(logp_new - batch.logp_old[i]);
        const double adv = batch.advantages[i];
        const double unclipped = ratio * adv;
        const double clipped =
            std::clamp(ratio, 1.0 - cfg.clip_ratio, 1.0 + cfg.clip_ratio) * adv;
        const bool take_unclipped = unclipped <= clipped;
        stats.policy_loss += -(take_unclipped ? unclipped : clipped) * inv_n;

        Mlp::Trace critic_trace;
        const double value = policy.critic.forward(state, critic_trace)[0];
        const double verr = value - batch.returns[i];
        stats.value_loss += verr * verr * inv_n;

        if (grad_out) {
            // d(policy_loss)/d(logp): the clipped branch is only selected
            // when the ratio sits outside the clip interval, where its
            // derivative vanishes.
            const double dlogp = take_unclipped ? -ratio * adv * inv_n : 0.0;
            if (dlogp != 0.0) {
                std::vector<double> mean_grad(adim);
                for (std::size_t j = 0; j < adim; ++j) {
                    const double sigma = std::exp(policy.log_std[j]);
                    const double z = (action[j] - mean[j]) / sigma;
                    mean_grad[j] = dlogp * z / sigma;           // dlogp/dmean = z / sigma
                    log_std_grad[j] += dlogp * (z * z - 1.0);   // dlogp/dlog_std = z^2 - 1
                }
                policy.actor.backward(actor_trace, mean_grad, actor_grad);
            }
            const double dvalue = cfg.value_coef * 2.0 * verr * inv_n;
            const std::vector<double> value_grad{dvalue};
            policy.critic.backward(critic_trace, value_grad, critic_grad);
        }
    }

    stats.entropy = policy.entropy();
    stats.total = stats.policy_loss + cfg.value_coef * stats.value_loss -
                  cfg.entropy_coef * stats.entropy;

    if (grad_out) {
        for (double& g : log_std_grad) g -= cfg.entropy_coef;
        grad_out->clear();
        grad_out->reserve(policy.param_count());
        append_mlp(actor_grad, *grad_out);
        grad_out->insert(grad_out->end(), log_std_grad.begin(), log_std_grad.end());
        append_mlp(critic_grad, *grad_out);
    }
    return stats;
}

JobSampler make_job_sampler(TrainingJobRanges ranges) {
    if (ranges.qubit_range.lo < 1 || ranges.qubit_range.lo > ranges.qubit_range.hi ||
        ranges.depth_range.lo < 1 || ranges.depth_range.lo > ranges.depth_range.hi ||
        ranges.shots_range.lo < 1 || ranges.shots_range.lo > ranges.shots_range.hi) {
        throw ConfigError("training job ranges must be non-empty with positive lower bounds");
    }
    return [ranges](Rng& rng) {
        QJob job;
        job.job_id = "episode";
        job.num_qubits = static_cast<int>(
            rng.uniform_int(ranges.qubit_range.lo, ranges.qubit_range.hi));
        job.depth = static_cast<int>(
            rng.uniform_int(ranges.depth_range.lo, ranges.depth_range.hi));
        job.num_shots = rng.uniform_int(ranges.shots_range.lo, ranges.shots_range.hi);
        const IntRange t2 = ranges.two_qubit_range.value_or(
            IntRange{static_cast<long long>(job.num_qubits) * job.depth / 4,
                     static_cast<long long>(job.num_qubits) * job.depth / 2});
        job.two_qubit_gates = rng.uniform_int(t2.lo, t2.hi);
        return job;
    };
}

TrainResult train_ppo(const JobSampler& sampler, std::span<QDevice* const> devices,
                      const RlConfig& cfg, const MetricsConfig& metrics) {
    check_slots(devices.size(), cfg);
    if (cfg.training.batch_size < 1 || cfg.training.epochs_per_batch < 1) {
        throw ConfigError("rl training: batch_size and epochs_per_batch must be >= 1");
    }
    Rng rng(cfg.seed);
    TrainResult result{GaussianPolicy::make(cfg.state_dim(), cfg.num_device_slots,
                                            cfg.training.hidden_sizes, rng),
                       {}};
    GaussianPolicy& policy = result.policy;
    if (cfg.training.timesteps <= 0) return result;

    AdamOptimizer optimizer(policy.param_count(), cfg.training.learning_rate);
    long long collected = 0;
    long long batch_index = 0;
    while (collected < cfg.training.timesteps) {
        const int bsz = static_cast<int>(std::min<long long>(
            cfg.training.batch_size, cfg.training.timesteps - collected));

        PpoBatch batch;
        batch.size = bsz;
        batch.state_dim = cfg.state_dim();
        batch.action_dim = cfg.num_device_slots;
        double reward_sum = 0;
        for (int i = 0; i < bsz; ++i) {
            const QJob job = sampler(rng);
            const auto state = build_state(job, devices, cfg);
            const auto sample = policy.sample_action(state, rng);
            const auto step = env_step(job, devices, sample.action, cfg, metrics);
            batch.states.insert(batch.states.end(), state.begin(), state.end());
            batch.actions.insert(batch.actions.end(), sample.action.begin(),
                                 sample.action.end());
            batch.logp_old.push_back(sample.log_prob);
            batch.returns.push_back(step.reward);
            batch.advantages.push_back(step.reward - policy.state_value(state));
            reward_sum += step.reward;
        }

        // Per-batch advantage normalization.
        double adv_mean = 0;
        for (double a : batch.advantages) adv_mean += a;
        adv_mean /= static_cast<double>(bsz);
        double adv_var = 0;
        for (double a : batch.advantages) adv_var += (a - adv_mean) * (a - adv_mean);
        const double adv_std = std::sqrt(adv_var / static_cast<double>(bsz));
        for (double& a : batch.advantages) a = (a - adv_mean) / (adv_std + 1e-8);

        PpoStats stats;
        std::vector<double> grads;
        for (int epoch = 0; epoch < cfg.training.epochs_per_batch; ++epoch) {
            stats = ppo_loss(policy, batch, cfg.training, &grads);
            if (!std::isfinite(stats.total)) {
                throw std::runtime_error(
                    "PPO loss diverged (batch " + std::to_string(batch_index) +
                    "); consider lowering learning_rate below " +
                    format_double(cfg.training.learning_rate));
            }
            auto params = flatten_params(policy);
            optimizer.step(params, grads);
            set_params(policy, params);
        }

        result.log.push_back({batch_index, reward_sum / static_cast<double>(bsz),
                              policy.entropy(), stats.policy_loss, stats.value_loss});
        collected += bsz;
        ++batch_index;
    }
    return result;
}

void write_training_log_csv(std::ostream& out, std::span<const TrainLogRow> rows) {
    out << "batch,mean_reward,entropy,policy_loss,value_loss\n";
    for (const TrainLogRow& r : rows) {
        out << r.batch << ',' << format_double(r.mean_reward) << ',' << format_double(r.entropy)
            << ',' << format_double(r.policy_loss) << ',' << format_double(r.value_loss) << '\n';
    }
}

namespace {

using jsonutil::json;

json mlp_to_json(const Mlp& net) {
    json layers = json::array();
    for (const DenseLayer& layer : net.layers) {
        layers.push_back({{"rows", layer.out},
                          {"cols", layer.in},
                          {"weights", layer.weights},
                          {"bias", layer.bias}});
    }
    return {{"layers", layers}};
}

Mlp mlp_from_json(const json& doc, const std::string& ctx) {
    using namespace jsonutil;
    const json& layers = require(doc, "layers", ctx);
    if (!layers.is_array() || layers.empty()) {
        throw ConfigError(ctx + ".layers: expected a non-empty array");
    }
    Mlp net;
    for (std::size_t l = 0; l < layers.size(); ++l) {
        const std::string lctx = ctx + ".layers[" + std::to_string(l) + "]";
        const json& entry = layers[l];
        DenseLayer layer;
        layer.out = static_cast<int>(int_field(entry, "rows", lctx));
        layer.in = static_cast<int>(int_field(entry, "cols", lctx));
        if (layer.out < 1 || layer.in < 1) throw ConfigError(lctx + ": bad layer shape");
        const json& weights = require(entry, "weights", lctx);
        const json& bias = require(entry, "bias", lctx);
        if (!weights.is_array() ||
            weights.size() != static_cast<std::size_t>(layer.in) * layer.out) {
            throw ConfigError(lctx + ".weights: expected " +
                              std::to_string(static_cast<long long>(layer.in) * layer.out) +
                              " values");
        }
        if (!bias.is_array() || bias.size() != static_cast<std::size_t>(layer.out)) {
            throw ConfigError(lctx + ".bias: expected " + std::to_string(layer.out) + " values");
        }
        layer.weights = weights.get<std::vector<double>>();
        layer.bias = bias.get<std::vector<double>>();
        if (!net.layers.empty() && net.layers.back().out != layer.in) {
            throw ConfigError(lctx + ": input width " + std::to_string(layer.in) +
                              " does not match previous layer output " +
                              std::to_string(net.layers.back().out));
        }
        net.layers.push_back(std::move(layer));
    }
    return net;
}

json rl_config_to_json(const RlConfig& cfg) {
    return {{"q_max", cfg.q_max},
            {"capacity_norm", cfg.capacity_norm},
            {"clops_norm", cfg.clops_norm},
            {"num_device_slots", cfg.num_device_slots},
            {"epsilon", cfg.epsilon},
            {"reward_includes_penalty", cfg.reward_includes_penalty},
            {"seed", cfg.seed},
            {"training",
             {{"timesteps", cfg.training.timesteps},
              {"learning_rate", cfg.training.learning_rate},
              {"clip_ratio", cfg.training.clip_ratio},
              {"entropy_coef", cfg.training.entropy_coef},
              {"value_coef", cfg.training.value_coef},
              {"batch_size", cfg.training.batch_size},
              {"epochs_per_batch", cfg.training.epochs_per_batch},
              {"hidden_sizes", cfg.training.hidden_sizes}}}};
}

}  // namespace

// Shared by the policy loader and the training-config loader.
RlConfig parse_rl_config_json(const jsonutil::json& doc, const std::string& ctx) {
    using namespace jsonutil;
    RlConfig cfg;
    if (doc.contains("q_max")) cfg.q_max = as_number(doc["q_max"], ctx + ".q_max");
    if (doc.contains("capacity_norm")) {
        cfg.capacity_norm = as_number(doc["capacity_norm"], ctx + ".capacity_norm");
    }
    if (doc.contains("clops_norm")) {
        cfg.clops_norm = as_number(doc["clops_norm"], ctx + ".clops_norm");
    }
    if (doc.contains("num_device_slots")) {
        cfg.num_device_slots =
            static_cast<int>(as_int(doc["num_device_slots"], ctx + ".num_device_slots"));
    }
    if (doc.contains("epsilon")) cfg.epsilon = as_number(doc["epsilon"], ctx + ".epsilon");
    if (doc.contains("reward_includes_penalty")) {
        cfg.reward_includes_penalty =
            as_bool(doc["reward_includes_penalty"], ctx + ".reward_includes_penalty");
    }
    if (doc.contains("seed")) {
        cfg.seed = static_cast<std::uint64_t>(as_int(doc["seed"], ctx + ".seed"));
    }
    if (doc.contains("training")) {
        const json& t = doc["training"];
        const std::string tctx = ctx + ".training";
        RlTrainingConfig& tr = cfg.training;
        if (t.contains("timesteps")) tr.timesteps = as_int(t["timesteps"], tctx + ".timesteps");
        if (t.contains("learning_rate")) {
            tr.learning_rate = as_number(t["learning_rate"], tctx + ".learning_rate");
        }
        if (t.contains("clip_ratio")) {
            tr.clip_ratio = as_number(t["clip_ratio"], tctx + ".clip_ratio");
        }
        if (t.contains("entropy_coef")) {
            tr.entropy_coef = as_number(t["entropy_coef"], tctx + ".entropy_coef");
        }
        if (t.contains("value_coef")) {
            tr.value_coef = as_number(t["value_coef"], tctx + ".value_coef");
        }
        if (t.contains("batch_size")) {
            tr.batch_size = static_cast<int>(as_int(t["batch_size"], tctx + ".batch_size"));
        }
        if (t.contains("epochs_per_batch")) {
            tr.epochs_per_batch =
                static_cast<int>(as_int(t["epochs_per_batch"], tctx + ".epochs_per_batch"));
        }
        if (t.contains("hidden_sizes")) {
            const json& hs = t["hidden_sizes"];
            if (!hs.is_array() || hs.empty()) {
                throw ConfigError(tctx + ".hidden_sizes: expected a non-empty array");
            }
            tr.hidden_sizes.clear();
            for (std::size_t i = 0; i < hs.size(); ++i) {
                tr.hidden_sizes.push_back(static_cast<int>(
                    as_int(hs[i], tctx + ".hidden_sizes[" + std::to_string(i) + "]")));
            }
        }
    }
    if (cfg.num_device_slots < 1) throw ConfigError(ctx + ": num_device_slots must be >= 1");
    if (!(cfg.q_max > 0) || !(cfg.capacity_norm > 0) || !(cfg.clops_norm > 0)) {
        throw ConfigError(ctx + ": normalization constants must be positive");
    }
    if (!(cfg.epsilon > 0)) throw ConfigError(ctx + ": epsilon must be positive");
    return cfg;
}

void save_policy(const GaussianPolicy& policy, const RlConfig& cfg,
                 const std::filesystem::path& path) {
    jsonutil::json doc{{"format_version", 1},
                       {"config", rl_config_to_json(cfg)},
                       {"actor", mlp_to_json(policy.actor)},
                       {"log_std", policy.log_std},
                       {"critic", mlp_to_json(policy.critic)}};
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path);
    if (!out) throw ConfigError("cannot write policy file: " + path.string());
    out << doc.dump(2) << '\n';
}

LoadedPolicy load_policy(const std::filesystem::path& path) {
    using namespace jsonutil;
    const json doc = load_file(path);
    const std::string ctx = path.string();
    const long long version = int_field(doc, "format_version", ctx);
    if (version != 1) {
        throw ConfigError(ctx + ": unsupported format_version " + std::to_string(version));
    }
    LoadedPolicy loaded;
    loaded.config = parse_rl_config_json(require(doc, "config", ctx), ctx + ".config");
    loaded.policy.actor = mlp_from_json(require(doc, "actor", ctx), ctx + ".actor");
    const json& log_std = require(doc, "log_std", ctx);
    if (!log_std.is_array()) throw ConfigError(ctx + ".log_std: expected an array");
    loaded.policy.log_std = log_std.get<std::vector<double>>();
    loaded.policy.critic = mlp_from_json(require(doc, "critic", ctx), ctx + ".critic");

    const GaussianPolicy& p = loaded.policy;
    const RlConfig& cfg = loaded.config;
    if (p.actor.output_dim() != cfg.num_device_slots) {
        throw ConfigError(ctx + ": actor outputs " + std::to_string(p.actor.output_dim()) +
                          " weights but config has " + std::to_string(cfg.num_device_slots) +
                          " device slots");
    }
    if (static_cast<int>(p.log_std.size()) != cfg.num_device_slots) {
        throw ConfigError(ctx + ": log_std has " + std::to_string(p.log_std.size()) +
                          " entries but config has " + std::to_string(cfg.num_device_slots) +
                          " device slots");
    }
    if (p.actor.input_dim() != cfg.state_dim() || p.critic.input_dim() != cfg.state_dim()) {
        throw ConfigError(ctx + ": network input width does not match the config state size " +
                          std::to_string(cfg.state_dim()));
    }
    if (p.critic.output_dim() != 1) {
        throw ConfigError(ctx + ": critic must produce a single value");
    }
    return loaded;
}

}  // namespace qcs
