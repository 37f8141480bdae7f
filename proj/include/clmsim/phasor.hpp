#pragma once

#include <cmath>
#include <complex>

namespace clmsim {

/// Complex per-unit quantity on the synchronously rotating reference frame.
/// Used for voltages, currents, powers and admittances alike.
using Phasor = std::complex<double>;

constexpr double kPi = 3.14159265358979323846;

[[nodiscard]] inline Phasor polar_pu(double mag, double angle_rad) {
    return {mag * std::cos(angle_rad), mag * std::sin(angle_rad)};
}

/// S = V * conj(I); loads draw positive P and (inductive) positive Q.
[[nodiscard]] inline Phasor complex_power(Phasor v, Phasor i) { return v * std::conj(i); }

/// Current drawn by a load of complex power s at terminal voltage v.
[[nodiscard]] inline Phasor load_current(Phasor s, Phasor v) { return std::conj(s / v); }

/// Reactive power matching p at the given lagging power factor.
[[nodiscard]] inline double q_from_pf(double p, double pf) {
    return p * std::tan(std::acos(pf));
}

}  // namespace clmsim
