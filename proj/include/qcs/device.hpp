#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "qcs/metrics.hpp"
#include "qcs/sim.hpp"

namespace qcs {

// Weights of the three error channels in the device error score. The
// defaults sum to one, so a device with every channel at a constant e
// scores exactly e.
struct ErrorScoreWeights {
    double alpha = 0.5;  // readout
    double theta = 0.3;  // single-qubit gate
    double gamma = 0.2;  // two-qubit gate
};

struct CalibrationData {
    std::vector<double> readout_errors;    // one per physical qubit
    double single_qubit_error = 0;         // device-wide single-qubit gate error
    std::vector<double> two_qubit_errors;  // one per coupling-map edge
};

struct CouplingGraph {
    int num_vertices = 0;
    std::vector<std::pair<int, int>> edges;

    bool is_connected() const;
};

struct DeviceProfile {
    std::string name;
    int capacity = 0;        // qubit count
    double clops = 0;        // circuit layer operations per second
    int quantum_volume = 0;  // >= 2 so log2 is at least 1
    CouplingGraph coupling;
    CalibrationData calibration;
};

// alpha * mean(readout) + theta * single_qubit + gamma * mean(two_qubit).
// Empty error lists make the means undefined and are rejected.
double error_score(const CalibrationData& cal, const ErrorScoreWeights& w = {});

// Full schema validation; throws ConfigError naming the offending field.
void validate_profile(const DeviceProfile& profile);

DeviceProfile parse_device_profile(std::string_view json_text, std::string_view source);
DeviceProfile load_device_profile_file(const std::filesystem::path& path);

// A device participating in a simulation: immutable profile plus the live
// qubit pool and per-run bookkeeping.
class QDevice {
public:
    QDevice(SimEnv& env, DeviceProfile profile, const ErrorScoreWeights& weights = {});

    const DeviceProfile& profile() const { return profile_; }
    const std::string& name() const { return profile_.name; }
    CapacityStore& qubit_store() { return store_; }
    const CapacityStore& qubit_store() const { return store_; }

    std::int64_t available_qubits() const { return store_.level(); }
    double utilization() const {
        return 1.0 - static_cast<double>(store_.level()) / profile_.capacity;
    }
    double error_score() const { return error_score_; }
    const CalibrationMeans& calibration_means() const { return means_; }

    long long jobs_served = 0;
    double busy_time = 0;  // accumulated sub-job processing seconds

private:
    DeviceProfile profile_;
    CapacityStore store_;
    double error_score_;
    CalibrationMeans means_;
};

}  // namespace qcs
