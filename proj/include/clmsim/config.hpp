#pragma once

#include <stdexcept>

#include "clmsim/phasor.hpp"

namespace clmsim {

/// Fixed-step simulation settings shared by the whole engine.
struct SimConfig {
    double time_step = 0.005;       // s
    double t_end = 10.0;            // s
    double system_frequency = 60.0; // Hz
    double network_tol = 1e-6;      // pu voltage
    int network_max_iter = 50;

    [[nodiscard]] double omega_s() const { return 2.0 * kPi * system_frequency; }

    void validate() const {
        if (!(time_step > 0.0)) throw std::invalid_argument("time_step must be > 0");
        if (!(t_end >= time_step)) throw std::invalid_argument("t_end must be >= time_step");
        if (!(network_tol > 0.0)) throw std::invalid_argument("network_tol must be > 0");
        if (network_max_iter < 1) throw std::invalid_argument("network_max_iter must be >= 1");
        if (!(system_frequency > 0.0)) throw std::invalid_argument("system_frequency must be > 0");
    }
};

}  // namespace clmsim
