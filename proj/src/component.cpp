#include "clmsim/component.hpp"

#include <cmath>

namespace clmsim {

void FrequencyTracker::update(Phasor v, double dt, double omega_s, double tau) {
    const double angle = std::arg(v);
    if (!primed_) {
        prev_angle_ = angle;
        primed_ = true;
        return;
    }
    double delta = angle - prev_angle_;
    while (delta > kPi) delta -= 2.0 * kPi;
    while (delta < -kPi) delta += 2.0 * kPi;
    prev_angle_ = angle;
    const double raw = delta / (dt * omega_s);
    df_ += (raw - df_) * (1.0 - std::exp(-dt / tau));
}

}  // namespace clmsim
