#pragma once

#include <array>

#include "clmsim/component.hpp"

namespace clmsim {

struct ProtectionStage {
    double vtr = 0.0;    // trip voltage, pu
    double ttr = 999.0;  // trip delay, s
    double ftr = 0.0;    // fraction tripped (of original)
    double vrc = 999.0;  // reconnect voltage, pu
    double trc = 999.0;  // reconnect delay, s
};

struct Motor3Params {
    double rs = 0.01;    // stator resistance, pu
    double ls = 3.1;     // synchronous reactance, pu
    double lp = 0.1779;  // transient reactance, pu
    double lpp = 0.1539; // subtransient reactance, pu
    double tpo = 1.634;  // transient rotor time constant, s
    double tppo = 0.0045;
    double h = 0.3;      // inertia, s
    double etrq = 0.0;   // load-torque speed exponent
    double lf = 0.8;     // loading factor: initial P as a fraction of the motor MVA base
    std::array<ProtectionStage, 2> protection{};

    void validate() const;
};

/// Electrical states use the signs of the terminal-current equations
///   i_d = [rs (V_d + E''_d) + Lpp (V_q + E''_q)] / (rs^2 + Lpp^2)
///   i_q = [rs (V_q + E''_q) - Lpp (V_d + E''_d)] / (rs^2 + Lpp^2)
/// i.e. the stored EMFs are the negatives of the textbook voltages behind
/// transient/subtransient reactance. Phasor mapping is d + j q.
struct Motor3State {
    double eq_p = 0.0;
    double ed_p = 0.0;
    double eq_pp = 0.0;
    double ed_pp = 0.0;
    double slip = 0.0;
    double torque0 = 0.0;  // load torque coefficient fixed at init
    double online_fraction = 1.0;
    std::array<double, 2> uv_timer{0.0, 0.0};
    std::array<double, 2> rc_timer{0.0, 0.0};
    std::array<bool, 2> stage_tripped{false, false};
};

namespace motor3 {

/// Terminal current (i_d, i_q) into the motor, per the printed equations.
[[nodiscard]] std::pair<double, double> stator_currents(Phasor v, Phasor e_pp,
                                                        const Motor3Params& p);

/// Steady-state input impedance at the given slip (motor base).
[[nodiscard]] Phasor input_impedance(double slip, const Motor3Params& p, double omega_s);

/// Terminal electrical power at the given slip and voltage (motor base).
[[nodiscard]] double slip_power(double slip, double v_mag, const Motor3Params& p, double omega_s);

/// Slip at maximum transferable power, by scan plus ternary refinement.
[[nodiscard]] double slip_at_max_power(const Motor3Params& p, double omega_s);

/// Initialize at the stable low-slip operating point drawing p_assigned
/// (motor-base pu) at v_bus. q_consumed receives the natural reactive draw.
/// Throws InitError when p_assigned exceeds the maximum transferable power.
[[nodiscard]] Motor3State init(Phasor v_bus, double p_assigned, const Motor3Params& p,
                               double omega_s, double* q_consumed = nullptr);

/// d/dt of [eq_p, ed_p, eq_pp, ed_pp, slip].
[[nodiscard]] std::array<double, 5> derivatives(const Motor3State& s, Phasor v_bus,
                                                const Motor3Params& p, double omega_s);

/// Norton pair in load convention: terminal current = Y*V + I for any V,
/// identical to the printed current equations. base_conv converts from the
/// motor MVA base to the system base.
[[nodiscard]] std::pair<Phasor, Phasor> norton(const Motor3State& s, const Motor3Params& p,
                                               double base_conv);

/// Two-stage fraction-tripping undervoltage protection; timers reset when the
/// voltage recovers above the stage threshold.
void post_process(Motor3State& s, double v_mag, double dt, const Motor3Params& p);

}  // namespace motor3

/// Fifth-order double-cage three-phase induction motor (motors A/B/C).
class Motor3Component : public LoadComponent {
public:
    Motor3Component(std::string name, int bus_id, Motor3Params params, double omega_s)
        : LoadComponent(std::move(name), bus_id), p_(params), omega_s_(omega_s) {}

    /// p_assigned is in system pu; the motor MVA base is p_assigned / LF.
    void init(Phasor v_bus, double p_assigned_system);

    [[nodiscard]] std::vector<double> state() const override {
        return {s_.eq_p, s_.ed_p, s_.eq_pp, s_.ed_pp, s_.slip};
    }
    void set_state(std::span<const double> x) override {
        s_.eq_p = x[0];
        s_.ed_p = x[1];
        s_.eq_pp = x[2];
        s_.ed_pp = x[3];
        s_.slip = x[4];
    }
    void derivatives(std::span<const double> x, Phasor v_bus, std::span<double> out) const override;

    [[nodiscard]] Phasor norton_admittance() const override;
    [[nodiscard]] Phasor norton_injection(Phasor v_iterate) const override;
    bool post_process(Phasor v_bus, double dt) override;

    [[nodiscard]] std::vector<std::string> channel_names() const override {
        return {"slip", "P", "Q", "online_fraction"};
    }
    void sample(const SampleContext& ctx, std::vector<double>& out) const override;

    [[nodiscard]] const Motor3State& motor_state() const { return s_; }
    [[nodiscard]] const Motor3Params& params() const { return p_; }
    [[nodiscard]] double base_conv() const { return base_conv_; }
    [[nodiscard]] double q_consumed_system() const { return q_init_ * base_conv_; }

private:
    Motor3Params p_;
    double omega_s_;
    Motor3State s_;
    double base_conv_ = 1.0;  // motor MVA base / system MVA base
    double q_init_ = 0.0;     // motor-base reactive draw at init
};

}  // namespace clmsim
