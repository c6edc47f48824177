#pragma once

// Shared fixtures for the test binaries.

#include <cmath>
#include <string>
#include <vector>

#include "qcs/device.hpp"
#include "qcs/workload.hpp"

namespace qcs::testing {

// Line-topology device with uniform calibration entries.
inline DeviceProfile make_profile(std::string name, int capacity, double clops,
                                  int quantum_volume, double readout, double single_q,
                                  double two_q) {
    DeviceProfile p;
    p.name = std::move(name);
    p.capacity = capacity;
    p.clops = clops;
    p.quantum_volume = quantum_volume;
    p.coupling.num_vertices = capacity;
    for (int i = 0; i + 1 < capacity; ++i) {
        p.coupling.edges.emplace_back(i, i + 1);
    }
    p.calibration.readout_errors.assign(static_cast<std::size_t>(capacity), readout);
    p.calibration.single_qubit_error = single_q;
    p.calibration.two_qubit_errors.assign(p.coupling.edges.size(), two_q);
    return p;
}

inline QJob make_job(std::string id, int qubits, int depth, long long shots, long long t2,
                     double arrival = 0) {
    return QJob{std::move(id), qubits, depth, shots, t2, arrival};
}

// Independent power oracle: repeated multiplication for integer exponents,
// exp/log otherwise.
inline double pow_oracle(double base, double exponent) {
    const double rounded = std::round(exponent);
    if (rounded == exponent && exponent >= 0 && exponent < 1024) {
        double out = 1.0;
        for (int i = 0; i < static_cast<int>(rounded); ++i) out *= base;
        return out;
    }
    return std::exp(exponent * std::log(base));
}

}  // namespace qcs::testing
