// Acceptance suite: one line per criterion, non-zero exit if any fail.

#include <sys/wait.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include "qcs/device.hpp"
#include "qcs/metrics.hpp"
#include "qcs/rl.hpp"
#include "qcs/rng.hpp"
#include "qcs/run.hpp"
#include "qcs/scheduler.hpp"
#include "qcs/sim.hpp"
#include "qcs/util.hpp"
#include "qcs/workload.hpp"

namespace fs = std::filesystem;
using namespace qcs;

namespace {

int failures = 0;
std::vector<std::string> notes;

void expect(bool ok, const std::string& detail) {
    if (!ok) {
        ++failures;
        notes.push_back(detail);
    }
}

struct Criterion {
    explicit Criterion(std::string name) : name_(std::move(name)), start_failures_(failures) {}
    ~Criterion() {
        const bool ok = failures == start_failures_;
        std::printf("[%s] %s\n", ok ? "PASS" : "FAIL", name_.c_str());
        for (const auto& n : notes) std::printf("       %s\n", n.c_str());
        notes.clear();
    }
    std::string name_;
    int start_failures_;
};

bool close_rel(double a, double b, double rel) {
    return std::abs(a - b) <= rel * std::max({std::abs(a), std::abs(b), 1.0});
}

double pow_oracle(double base, int exponent) {
    double out = 1.0;
    for (int i = 0; i < exponent; ++i) out *= base;
    return out;
}

const fs::path kDataDir = QCS_DATA_DIR;

CloudConfig case_study_cloud() {
    return load_cloud_manifest(kDataDir / "case_study" / "cloud_manifest.json");
}

std::vector<QJob> case_study_jobs_200(const CloudConfig& cloud) {
    const WorkloadSpec spec =
        load_workload_spec_file(kDataDir / "case_study" / "workload_200.json");
    return generate_jobs(spec, cloud.capacities());
}

// ---------------------------------------------------------------------------

void criterion_1_worked_example() {
    Criterion c("1. execution-time model reproduces the worked 21-minute example");
    MetricsConfig cfg;
    const double t = execution_time(cfg, 40000, 128, 220000);
    expect(std::abs(t - 1272.7272727272727) <= 1.0,
           "execution_time = " + format_double(t) + ", expected 1272.7 +/- 1 s");
    expect(std::abs(t / 60.0 - 21.21) < 0.02, "minutes = " + format_double(t / 60.0));
}

void criterion_2_formula_suite() {
    Criterion c("2. formula suite matches independent oracles at 1e-12");
    // weighted error score
    CalibrationData cal;
    cal.readout_errors = {0.02, 0.04};
    cal.single_qubit_error = 0.001;
    cal.two_qubit_errors = {0.01, 0.02};
    expect(close_rel(error_score(cal), 0.5 * 0.03 + 0.3 * 0.001 + 0.2 * 0.015, 1e-12),
           "error score");
    // gate and readout fidelities against repeated-multiplication oracles
    expect(close_rel(fidelity_1q(0.001, 10), pow_oracle(0.999, 10), 1e-12), "single-qubit");
    expect(close_rel(fidelity_2q(0.01, 100, TwoQubitExponent::Sqrt), pow_oracle(0.99, 10), 1e-12),
           "two-qubit sqrt");
    expect(close_rel(fidelity_2q(0.01, 16, TwoQubitExponent::FourthRoot), pow_oracle(0.99, 2),
                     1e-12),
           "two-qubit fourth root");
    expect(close_rel(fidelity_readout(0.02, 100, 4), pow_oracle(0.98, 5), 1e-12), "readout");
    const CalibrationMeans means{0.001, 0.01, 0.02};
    expect(close_rel(device_fidelity(means, 10, 100, 100, 4, TwoQubitExponent::Sqrt),
                     pow_oracle(0.999, 10) * pow_oracle(0.99, 10) * pow_oracle(0.98, 5), 1e-12),
           "device fidelity product");
    const double three[] = {0.8, 0.8, 0.8};
    expect(close_rel(final_fidelity(three, 0.95), 0.8 * 0.95 * 0.95, 1e-12), "final fidelity");
    expect(close_rel(comm_time(150, 2, 0.02), 3.0, 1e-12), "comm 150x2");
    expect(close_rel(comm_time(190, 3, 0.02), 2 * 0.02 * 190, 1e-12), "comm 190x3");
    MetricsConfig cfg;
    expect(close_rel(execution_time(cfg, 40000, 127, 30000),
                     100.0 * 10.0 * 40000.0 * std::log2(127.0) / 30000.0, 1e-12),
           "execution time qv=127");
}

void criterion_3_policy_ordering() {
    Criterion c("3. fidelity/speed/fair runs show the qualitative metric ordering");
    const CloudConfig cloud = case_study_cloud();
    const auto jobs = case_study_jobs_200(cloud);
    const RunSummary speed = run_simulation(cloud, PolicyKind::Speed, jobs).summary;
    const RunSummary fidelity = run_simulation(cloud, PolicyKind::Fidelity, jobs).summary;
    const RunSummary fair = run_simulation(cloud, PolicyKind::Fair, jobs).summary;
    std::printf("       speed:    t_sim=%.2f mean_fid=%.5f t_comm=%.2f\n", speed.t_sim,
                speed.mean_fidelity, speed.total_comm);
    std::printf("       fidelity: t_sim=%.2f mean_fid=%.5f t_comm=%.2f\n", fidelity.t_sim,
                fidelity.mean_fidelity, fidelity.total_comm);
    std::printf("       fair:     t_sim=%.2f mean_fid=%.5f t_comm=%.2f\n", fair.t_sim,
                fair.mean_fidelity, fair.total_comm);
    expect(fidelity.mean_fidelity > fair.mean_fidelity, "(a) fidelity mean <= fair mean");
    expect(fidelity.mean_fidelity > speed.mean_fidelity, "(a) fidelity mean <= speed mean");
    expect(fidelity.t_sim >= speed.t_sim, "(b) fidelity t_sim < speed t_sim");
    expect(fidelity.total_comm <= speed.total_comm, "(c) fidelity t_comm > speed t_comm");
}

void criterion_4_comm_identity() {
    Criterion c("4. reported communication time equals the per-link sum exactly");
    const CloudConfig cloud = case_study_cloud();
    const auto jobs = case_study_jobs_200(cloud);
    const double lambda = cloud.metrics.lambda_per_qubit;
    for (PolicyKind mode : {PolicyKind::Speed, PolicyKind::Fidelity, PolicyKind::Fair}) {
        const RunResult result = run_simulation(cloud, mode, jobs);
        double expected = 0;
        for (const JobRecord& r : result.records) {
            long long q = 0;
            for (const auto& [name, amount] : r.devices_used) q += amount;
            expected += static_cast<double>(r.k() - 1) * lambda * static_cast<double>(q);
        }
        expect(result.summary.total_comm == expected,
               std::string(to_string(mode)) + ": " + format_double(result.summary.total_comm) +
                   " != " + format_double(expected));
    }
}

void criterion_5_allocation_feasibility() {
    Criterion c("5. 10,000 randomized plans satisfy the allocation constraints");
    Rng rng(20240617);
    long long plans_checked = 0;
    for (int trial = 0; trial < 2500; ++trial) {
        SimEnv env;
        const int n = static_cast<int>(rng.uniform_int(2, 6));
        std::vector<std::unique_ptr<QDevice>> owned;
        std::vector<QDevice*> devices;
        long long cap_total = 0;
        for (int i = 0; i < n; ++i) {
            const int cap = static_cast<int>(rng.uniform_int(2, 200));
            cap_total += cap;
            DeviceProfile p;
            p.name = "d" + std::to_string(i);
            p.capacity = cap;
            p.clops = static_cast<double>(rng.uniform_int(1000, 300000));
            p.quantum_volume = 64;
            p.coupling.num_vertices = cap;
            for (int v = 0; v + 1 < cap; ++v) p.coupling.edges.emplace_back(v, v + 1);
            p.calibration.readout_errors.assign(static_cast<std::size_t>(cap),
                                                rng.uniform_real() * 0.2);
            p.calibration.single_qubit_error = rng.uniform_real() * 0.02;
            p.calibration.two_qubit_errors.assign(p.coupling.edges.size(),
                                                  rng.uniform_real() * 0.2);
            owned.push_back(std::make_unique<QDevice>(env, std::move(p)));
            devices.push_back(owned.back().get());
        }
        const QJob job{"j", static_cast<int>(rng.uniform_int(1, cap_total)), 5, 100, 50, 0};

        auto check_plan = [&](const AllocationPlan& plan, const char* what) {
            ++plans_checked;
            if (plan.total_qubits() != job.num_qubits) {
                expect(false, std::string(what) + ": total " +
                                  std::to_string(plan.total_qubits()) + " != q " +
                                  std::to_string(job.num_qubits));
                return;
            }
            std::vector<bool> seen(devices.size(), false);
            for (const Assignment& a : plan.assignments) {
                const auto di = static_cast<std::size_t>(a.device);
                if (a.qubits < 1 || a.qubits > devices[di]->profile().capacity || seen[di]) {
                    expect(false, std::string(what) + ": bad assignment");
                    return;
                }
                seen[di] = true;
            }
        };

        for (PolicyKind kind : {PolicyKind::Speed, PolicyKind::Fidelity, PolicyKind::Fair}) {
            const auto selected = select_devices(kind, devices, job);
            check_plan(partition_qubits(job.num_qubits, selected, devices), "ranked policy");
        }
        std::vector<double> raw(static_cast<std::size_t>(n));
        for (double& w : raw) w = rng.uniform_real() < 0.25 ? 0.0 : rng.uniform_real() * 5.0;
        check_plan(partition_from_fractions(job.num_qubits, devices, raw, 1e-8),
                   "fraction repair");
    }
    expect(plans_checked == 10000,
           "expected 10000 plans, checked " + std::to_string(plans_checked));
}

void criterion_6_kernel_properties() {
    Criterion c("6. kernel: FIFO ties, capacity conservation, byte-identical replays");
    {
        SimEnv env;
        std::vector<int> order;
        env.schedule(0, [&] { order.push_back(1); });
        env.schedule(0, [&] { order.push_back(2); });
        env.schedule(0, [&] { order.push_back(3); });
        env.run();
        expect(order == std::vector<int>{1, 2, 3}, "same-time events fired out of order");
    }
    const CloudConfig cloud = case_study_cloud();
    const auto jobs = case_study_jobs_200(cloud);
    {
        // conservation: after the run drains, every qubit is back in its pool
        SimEnv env;
        std::vector<std::unique_ptr<QDevice>> owned;
        std::vector<QDevice*> devices;
        for (const auto& p : cloud.profiles) {
            owned.push_back(std::make_unique<QDevice>(env, p, cloud.weights));
            devices.push_back(owned.back().get());
        }
        JobRecordsManager records;
        Broker broker(env, devices, PolicyKind::Fair, cloud.metrics, records);
        env.spawn(arrival_process(env, jobs, [&](const QJob& j) { broker.submit(j); }));
        env.run();
        expect(records.records().size() == jobs.size(), "not all jobs completed");
        for (const QDevice* d : devices) {
            expect(d->qubit_store().level() == d->profile().capacity,
                   d->name() + ": level " + std::to_string(d->qubit_store().level()) +
                       " != capacity after drain");
            expect(d->qubit_store().waiting() == 0, d->name() + ": stranded waiters");
        }
    }
    for (PolicyKind mode : {PolicyKind::Speed, PolicyKind::Fidelity, PolicyKind::Fair}) {
        auto render = [&] {
            std::ostringstream out;
            write_records_csv(out, run_simulation(cloud, mode, jobs).records);
            return out.str();
        };
        const std::string first = render();
        expect(!first.empty() && first == render(),
               std::string(to_string(mode)) + ": replay bytes differ");
        // no time travel: starts and finishes are consistent per record
        const auto result = run_simulation(cloud, mode, jobs);
        for (const JobRecord& r : result.records) {
            expect(r.arrival <= r.start && r.start <= r.finish,
                   r.job_id + ": timestamps out of order");
            expect(r.fidelity >= 0.0 && r.fidelity <= 1.0, r.job_id + ": fidelity out of range");
            const double gap = std::abs((r.finish - r.start) - (r.exec_time + r.comm_time));
            expect(gap <= 1e-9 * std::max(1.0, r.finish), r.job_id + ": duration mismatch");
        }
    }
}

struct BestDeviceSetup {
    SimEnv env;
    std::vector<std::unique_ptr<QDevice>> owned;
    std::vector<QDevice*> devices;
    int best_index = 2;

    BestDeviceSetup() {
        auto add = [&](const std::string& name, double ro, double e1, double e2) {
            DeviceProfile p;
            p.name = name;
            p.capacity = 127;
            p.clops = 30000;
            p.quantum_volume = 127;
            p.coupling.num_vertices = 127;
            for (int v = 0; v + 1 < 127; ++v) p.coupling.edges.emplace_back(v, v + 1);
            p.calibration.readout_errors.assign(127, ro);
            p.calibration.single_qubit_error = e1;
            p.calibration.two_qubit_errors.assign(p.coupling.edges.size(), e2);
            owned.push_back(std::make_unique<QDevice>(env, std::move(p)));
            devices.push_back(owned.back().get());
        };
        add("noisy_a", 0.12, 0.015, 0.12);
        add("noisy_b", 0.12, 0.015, 0.12);
        add("clean", 0.001, 0.0002, 0.001);
        add("noisy_c", 0.12, 0.015, 0.12);
        add("noisy_d", 0.12, 0.015, 0.12);
    }
};

QJob sample_holdout_job(Rng& rng) {
    QJob job;
    job.job_id = "holdout";
    job.num_qubits = static_cast<int>(rng.uniform_int(10, 50));
    job.depth = static_cast<int>(rng.uniform_int(5, 20));
    job.num_shots = rng.uniform_int(1000, 10000);
    job.two_qubit_gates = rng.uniform_int(
        static_cast<long long>(job.num_qubits) * job.depth / 4,
        static_cast<long long>(job.num_qubits) * job.depth / 2);
    return job;
}

// Brute force over the discretized allocation simplex: weight grids with
// `grid` total units spread over the devices, allocations derived by
// largest-remainder rounding, reward recomputed from the fidelity model.
double oracle_best_reward(const QJob& job, const std::vector<QDevice*>& devices,
                          const MetricsConfig& metrics, int grid,
                          std::vector<long long>* best_alloc_out) {
    const std::size_t n = devices.size();
    std::vector<int> units(n, 0);
    double best = -1.0;
    std::function<void(std::size_t, int)> walk = [&](std::size_t idx, int left) {
        if (idx + 1 == n) {
            units[idx] = left;
            // derive integer allocation from the weight grid
            std::vector<long long> alloc(n, 0);
            long long assigned = 0;
            std::vector<std::pair<double, std::size_t>> rema;
            for (std::size_t i = 0; i < n; ++i) {
                const double target =
                    static_cast<double>(units[i]) / grid * job.num_qubits;
                alloc[i] = std::min<long long>(static_cast<long long>(target),
                                               devices[i]->profile().capacity);
                assigned += alloc[i];
                rema.emplace_back(target - static_cast<double>(alloc[i]), i);
            }
            std::sort(rema.begin(), rema.end(), [](const auto& a, const auto& b) {
                if (a.first != b.first) return a.first > b.first;
                return a.second < b.second;
            });
            for (std::size_t r = 0; assigned < job.num_qubits; r = (r + 1) % n) {
                const std::size_t i = rema[r].second;
                if (alloc[i] < devices[i]->profile().capacity) {
                    ++alloc[i];
                    ++assigned;
                }
            }
            AllocationPlan plan;
            for (std::size_t i = 0; i < n; ++i) {
                if (alloc[i] > 0) plan.assignments.push_back({static_cast<int>(i), alloc[i]});
            }
            if (plan.assignments.empty()) return;
            const auto fids = plan_device_fidelities(
                plan, std::span<QDevice* const>(devices.data(), devices.size()), job, metrics);
            double reward = 0;
            for (double f : fids) reward += f;
            reward /= static_cast<double>(fids.size());
            if (reward > best) {
                best = reward;
                if (best_alloc_out) *best_alloc_out = alloc;
            }
            return;
        }
        for (int u = 0; u <= left; ++u) {
            units[idx] = u;
            walk(idx + 1, left - u);
        }
    };
    walk(0, grid);
    return best;
}

void criterion_7_rl_learning() {
    Criterion c("7. PPO at desk scale concentrates load on the best device and improves");
    BestDeviceSetup setup;
    MetricsConfig metrics;
    RlConfig cfg;
    cfg.seed = 2025;
    cfg.training.timesteps = 20000;

    TrainingJobRanges ranges{{10, 50}, {5, 20}, {1000, 10000}, std::nullopt};
    const auto sampler = make_job_sampler(ranges);
    const TrainResult trained = train_ppo(sampler, setup.devices, cfg, metrics);

    const std::size_t n_batches = trained.log.size();
    const std::size_t decile = std::max<std::size_t>(1, n_batches / 10);
    double first = 0;
    double last = 0;
    for (std::size_t i = 0; i < decile; ++i) first += trained.log[i].mean_reward;
    for (std::size_t i = n_batches - decile; i < n_batches; ++i) {
        last += trained.log[i].mean_reward;
    }
    first /= static_cast<double>(decile);
    last /= static_cast<double>(decile);
    std::printf("       reward: first decile %.4f, final decile %.4f (%zu batches)\n", first,
                last, n_batches);
    expect(last >= first, "final-decile reward below first-decile reward");

    Rng holdout_rng(777);
    int maxed = 0;
    int oracle_agrees = 0;
    for (int i = 0; i < 100; ++i) {
        const QJob job = sample_holdout_job(holdout_rng);
        const long long feasible_max = std::min<long long>(job.num_qubits, 127);

        const AllocationPlan plan = rl_allocation_plan(job, setup.devices, trained.policy, cfg);
        long long best_share = 0;
        for (const Assignment& a : plan.assignments) {
            if (a.device == setup.best_index) best_share = a.qubits;
        }
        if (best_share == feasible_max) ++maxed;

        std::vector<long long> oracle_alloc;
        oracle_best_reward(job, setup.devices, metrics, 6, &oracle_alloc);
        if (oracle_alloc[static_cast<std::size_t>(setup.best_index)] == feasible_max) {
            ++oracle_agrees;
        }
    }
    std::printf("       policy gave the best device its feasible maximum on %d/100 jobs\n",
                maxed);
    expect(maxed >= 80,
           "policy concentrated on the best device on only " + std::to_string(maxed) +
               "/100 held-out jobs");
    expect(oracle_agrees == 100, "simplex search optimum disagreed on " +
                                     std::to_string(100 - oracle_agrees) + " jobs");
}

void criterion_8_gradient_check() {
    Criterion c("8. analytic PPO gradients match central differences at 1e-4");
    BestDeviceSetup setup;
    MetricsConfig metrics;
    RlConfig cfg;
    cfg.training.hidden_sizes = {16, 16};
    Rng rng(4242);
    GaussianPolicy policy = GaussianPolicy::make(cfg.state_dim(), cfg.num_device_slots,
                                                 cfg.training.hidden_sizes, rng);

    PpoBatch batch;
    batch.size = 8;
    batch.state_dim = cfg.state_dim();
    batch.action_dim = cfg.num_device_slots;
    for (int i = 0; i < 8; ++i) {
        QJob job;
        job.job_id = "g";
        job.num_qubits = static_cast<int>(rng.uniform_int(10, 120));
        job.depth = 8;
        job.num_shots = 1000;
        job.two_qubit_gates = 200;
        const auto state = build_state(job, setup.devices, cfg);
        const auto sample = policy.sample_action(state, rng);
        const auto step = env_step(job, setup.devices, sample.action, cfg, metrics);
        batch.states.insert(batch.states.end(), state.begin(), state.end());
        batch.actions.insert(batch.actions.end(), sample.action.begin(), sample.action.end());
        // offsets keep the ratios off 1 but inside the clip interval
        batch.logp_old.push_back(sample.log_prob + (i % 2 == 0 ? 0.05 : -0.05));
        batch.returns.push_back(step.reward);
        batch.advantages.push_back(step.reward - 0.4 + 0.08 * static_cast<double>(i));
    }

    std::vector<double> analytic;
    ppo_loss(policy, batch, cfg.training, &analytic);
    auto params = flatten_params(policy);
    expect(analytic.size() == params.size(), "gradient size mismatch");

    const double h = 1e-5;
    std::size_t bad = 0;
    double worst = 0;
    for (std::size_t i = 0; i < params.size(); ++i) {
        GaussianPolicy probe = policy;
        auto p = params;
        p[i] += h;
        set_params(probe, p);
        const double up = ppo_loss(probe, batch, cfg.training, nullptr).total;
        p[i] -= 2 * h;
        set_params(probe, p);
        const double down = ppo_loss(probe, batch, cfg.training, nullptr).total;
        const double numeric = (up - down) / (2 * h);
        const double err = std::abs(analytic[i] - numeric);
        const double scale = std::max({std::abs(analytic[i]), std::abs(numeric), 1e-3});
        if (err > 1e-4 * scale) {
            ++bad;
            worst = std::max(worst, err / scale);
        }
    }
    expect(bad == 0, std::to_string(bad) + " of " + std::to_string(params.size()) +
                         " gradient entries off (worst relative error " + format_double(worst) +
                         ")");
}

int run_cli(const std::string& args) {
    const std::string cmd = std::string(QCS_CLI_PATH) + " " + args + " >/dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

void criterion_9_gen_jobs_cli() {
    Criterion c("9. gen-jobs enforces the job-size constraint end to end");
    const fs::path dir = fs::temp_directory_path() / "qcs_acceptance_gen";
    fs::remove_all(dir);
    fs::create_directories(dir);
    const std::string manifest = (kDataDir / "case_study" / "cloud_manifest.json").string();
    const std::string spec = (kDataDir / "case_study" / "workload_1000.json").string();
    const std::string out_csv = (dir / "jobs.csv").string();

    int code = run_cli("gen-jobs --spec " + spec + " --manifest " + manifest + " --out " +
                       out_csv);
    expect(code == 0, "gen-jobs exited " + std::to_string(code));
    const auto jobs = load_jobs_csv(out_csv);
    expect(jobs.size() == 1000, "expected 1000 jobs, got " + std::to_string(jobs.size()));
    int outside = 0;
    for (const QJob& j : jobs) {
        if (!(j.num_qubits > 127 && j.num_qubits < 635)) ++outside;
    }
    expect(outside == 0, std::to_string(outside) + " jobs violate the strict bounds (127, 635)");

    std::ofstream(dir / "bad.json") << R"({"count": 5, "qubit_range": [50, 100],
        "depth_range": [5, 20], "shots_range": [1000, 2000], "seed": 1})";
    code = run_cli("gen-jobs --spec " + (dir / "bad.json").string() + " --manifest " + manifest +
                   " --out " + (dir / "bad.csv").string());
    expect(code == 2, "infeasible spec exited " + std::to_string(code) + ", expected 2");
}

}  // namespace

int main() {
    criterion_1_worked_example();
    criterion_2_formula_suite();
    criterion_3_policy_ordering();
    criterion_4_comm_identity();
    criterion_5_allocation_feasibility();
    criterion_6_kernel_properties();
    criterion_7_rl_learning();
    criterion_8_gradient_check();
    criterion_9_gen_jobs_cli();
    if (failures > 0) {
        std::printf("%d acceptance check(s) failed\n", failures);
        return 1;
    }
    std::printf("all acceptance criteria passed\n");
    return 0;
}
