#pragma once

#include "clmsim/component.hpp"

namespace clmsim {

struct ClassicalGenParams {
    double xd_p = 0.2;  // transient reactance, pu
    double h = 3.0;     // inertia, s
    double d = 0.0;     // damping, pu torque per pu speed
};

/// Constant-EMF swing-equation generator: E at angle delta behind jXd'.
/// States: [delta (rad), delta-omega (pu)].
class ClassicalGen : public LoadComponent {
public:
    ClassicalGen(std::string name, int bus_id, ClassicalGenParams params, double omega_s)
        : LoadComponent(std::move(name), bus_id), p_(params), omega_s_(omega_s) {}

    /// Anchor the machine so it injects exactly `i_out` at terminal voltage v.
    void init(Phasor v_bus, Phasor i_out);

    [[nodiscard]] std::vector<double> state() const override { return {delta_, domega_}; }
    void set_state(std::span<const double> x) override {
        delta_ = x[0];
        domega_ = x[1];
    }
    void derivatives(std::span<const double> x, Phasor v_bus, std::span<double> out) const override;

    [[nodiscard]] Phasor norton_admittance() const override { return y_; }
    [[nodiscard]] Phasor norton_injection(Phasor) const override { return y_ * emf(); }

    [[nodiscard]] std::vector<std::string> channel_names() const override {
        return {"speed", "delta", "P"};
    }
    void sample(const SampleContext& ctx, std::vector<double>& out) const override;

    [[nodiscard]] double pm() const { return pm_; }
    [[nodiscard]] Phasor emf() const { return polar_pu(e_mag_, delta_); }
    [[nodiscard]] double electrical_power(Phasor v_bus, double delta) const;

private:
    ClassicalGenParams p_;
    double omega_s_ = 2.0 * kPi * 60.0;
    Phasor y_{0.0, 0.0};
    double e_mag_ = 1.0;
    double delta_ = 0.0;
    double domega_ = 0.0;
    double pm_ = 0.0;
};

}  // namespace clmsim
