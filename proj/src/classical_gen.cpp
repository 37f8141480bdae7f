#include "clmsim/classical_gen.hpp"

namespace clmsim {

void ClassicalGen::init(Phasor v_bus, Phasor i_out) {
    y_ = 1.0 / Phasor{0.0, p_.xd_p};
    const Phasor e = v_bus + Phasor{0.0, p_.xd_p} * i_out;
    e_mag_ = std::abs(e);
    delta_ = std::arg(e);
    domega_ = 0.0;
    pm_ = std::real(e * std::conj(i_out));
}

double ClassicalGen::electrical_power(Phasor v_bus, double delta) const {
    const Phasor e = polar_pu(e_mag_, delta);
    const Phasor i_out = (e - v_bus) * y_;
    return std::real(e * std::conj(i_out));
}

void ClassicalGen::derivatives(std::span<const double> x, Phasor v_bus,
                               std::span<double> out) const {
    const double delta = x[0];
    const double domega = x[1];
    const double pe = electrical_power(v_bus, delta);
    out[0] = omega_s_ * domega;
    out[1] = (pm_ - pe - p_.d * domega) / (2.0 * p_.h);
}

void ClassicalGen::sample(const SampleContext& ctx, std::vector<double>& out) const {
    const Phasor v = ctx.v(bus_id_);
    const Phasor i_out = (emf() - v) * y_;
    out.push_back(1.0 + domega_);
    out.push_back(delta_);
    out.push_back(std::real(v * std::conj(i_out)));
}

}  // namespace clmsim
