#include "clmsim/motor3ph.hpp"

#include <cmath>

#include "clmsim/errors.hpp"

namespace clmsim {

void Motor3Params::validate() const {
    // Lp == Lpp is allowed: the subtransient branch drops out and the model
    // degenerates to a single cage (the motor B/C parameter rows use this).
    if (!(ls > lp && lp >= lpp && lpp > 0.0))
        throw InitError("motor3", "reactances must satisfy Ls > Lp >= Lpp > 0");
    if (!(tpo > tppo && tppo > 0.0)) throw InitError("motor3", "time constants must satisfy Tpo > Tppo > 0");
    if (rs < 0.0) throw InitError("motor3", "rs must be >= 0");
    if (!(h > 0.0)) throw InitError("motor3", "H must be > 0");
    if (!(lf > 0.0 && lf <= 1.0)) throw InitError("motor3", "LF must be in (0, 1]");
}

namespace motor3 {

namespace {
constexpr Phasor kJ{0.0, 1.0};

[[nodiscard]] Phasor state_e1(const Motor3State& s) { return {s.ed_p, s.eq_p}; }
[[nodiscard]] Phasor state_e2(const Motor3State& s) { return {s.ed_pp, s.eq_pp}; }
}  // namespace

std::pair<double, double> stator_currents(Phasor v, Phasor e_pp, const Motor3Params& p) {
    const double den = p.rs * p.rs + p.lpp * p.lpp;
    const double vd = v.real() + e_pp.real();
    const double vq = v.imag() + e_pp.imag();
    const double id = (p.rs * vd + p.lpp * vq) / den;
    const double iq = (p.rs * vq - p.lpp * vd) / den;
    return {id, iq};
}

Phasor input_impedance(double slip, const Motor3Params& p, double omega_s) {
    return Phasor{p.rs, p.lpp} +
           kJ * (p.ls - p.lp) / (1.0 + kJ * omega_s * slip * p.tpo) +
           kJ * (p.lp - p.lpp) / (1.0 + kJ * omega_s * slip * p.tppo);
}

double slip_power(double slip, double v_mag, const Motor3Params& p, double omega_s) {
    return v_mag * v_mag * std::real(1.0 / input_impedance(slip, p, omega_s));
}

double slip_at_max_power(const Motor3Params& p, double omega_s) {
    // Coarse scan of the unimodal slip-power curve, then ternary refinement.
    const int n = 2000;
    double best_s = 1e-6;
    double best_p = slip_power(best_s, 1.0, p, omega_s);
    for (int i = 1; i <= n; ++i) {
        const double s = static_cast<double>(i) / n;
        const double pw = slip_power(s, 1.0, p, omega_s);
        if (pw > best_p) {
            best_p = pw;
            best_s = s;
        }
    }
    double lo = std::max(best_s - 1.0 / n, 0.0);
    double hi = std::min(best_s + 1.0 / n, 1.0);
    while (hi - lo > 1e-12) {
        const double m1 = lo + (hi - lo) / 3.0;
        const double m2 = hi - (hi - lo) / 3.0;
        if (slip_power(m1, 1.0, p, omega_s) < slip_power(m2, 1.0, p, omega_s))
            lo = m1;
        else
            hi = m2;
    }
    return 0.5 * (lo + hi);
}

Motor3State init(Phasor v_bus, double p_assigned, const Motor3Params& p, double omega_s,
                 double* q_consumed) {
    p.validate();
    if (!(p_assigned > 0.0)) throw InitError("motor3", "assigned power must be > 0");
    if (!(std::abs(v_bus) > 0.5)) throw InitError("motor3", "bus voltage below 0.5 pu at init");

    const double v_mag = std::abs(v_bus);
    const double s_peak = slip_at_max_power(p, omega_s);
    const double p_max = slip_power(s_peak, v_mag, p, omega_s);
    if (p_assigned > p_max)
        throw InitError("motor3", "assigned power exceeds maximum transferable power");

    // Bisection on the stable low-slip branch of the slip-power curve,
    // driven well past the required 1e-10 so the power match is exact to
    // machine precision.
    double lo = 0.0;
    double hi = s_peak;
    double slip0 = 0.0;
    if (slip_power(lo, v_mag, p, omega_s) < p_assigned) {
        while (hi - lo > 1e-14) {
            const double mid = 0.5 * (lo + hi);
            if (slip_power(mid, v_mag, p, omega_s) < p_assigned)
                lo = mid;
            else
                hi = mid;
        }
        slip0 = 0.5 * (lo + hi);
    }

    // The four electrical states follow from zeroing their derivatives:
    // two complex linear equations solved in closed form.
    const Phasor i0 = v_bus / input_impedance(slip0, p, omega_s);
    const Phasor e1_conv = kJ * (p.ls - p.lp) * i0 / (1.0 + kJ * omega_s * slip0 * p.tpo);
    const Phasor e2_conv =
        e1_conv + kJ * (p.lp - p.lpp) * i0 / (1.0 + kJ * omega_s * slip0 * p.tppo);

    Motor3State s;
    s.ed_p = -e1_conv.real();
    s.eq_p = -e1_conv.imag();
    s.ed_pp = -e2_conv.real();
    s.eq_pp = -e2_conv.imag();
    s.slip = slip0;

    const double t_e = std::real(e2_conv * std::conj(i0));
    s.torque0 = t_e / std::pow(1.0 - slip0, p.etrq);
    if (q_consumed) *q_consumed = std::imag(v_bus * std::conj(i0));
    return s;
}

std::array<double, 5> derivatives(const Motor3State& s, Phasor v_bus, const Motor3Params& p,
                                  double omega_s) {
    const Phasor e1 = state_e1(s);
    const Phasor e2 = state_e2(s);
    const Phasor i = (v_bus + e2) / Phasor{p.rs, p.lpp};

    const Phasor de1 = -kJ * omega_s * s.slip * e1 - (e1 + kJ * (p.ls - p.lp) * i) / p.tpo;
    const Phasor de2 = de1 - kJ * omega_s * s.slip * (e2 - e1) -
                       ((e2 - e1) + kJ * (p.lp - p.lpp) * i) / p.tppo;

    const double t_e = -std::real(e2 * std::conj(i));
    const double t_l = s.torque0 * std::pow(1.0 - s.slip, p.etrq);
    double dslip = (t_l - t_e) / (2.0 * p.h);
    // a stopped rotor does not reverse: hold slip at 1 under excess load torque
    if (s.slip >= 1.0 && dslip > 0.0) dslip = 0.0;

    return {de1.imag(), de1.real(), de2.imag(), de2.real(), dslip};
}

std::pair<Phasor, Phasor> norton(const Motor3State& s, const Motor3Params& p, double base_conv) {
    const Phasor y = s.online_fraction * base_conv / Phasor{p.rs, p.lpp};
    return {y * state_e2(s), y};
}

void post_process(Motor3State& s, double v_mag, double dt, const Motor3Params& p) {
    for (std::size_t k = 0; k < p.protection.size(); ++k) {
        const ProtectionStage& st = p.protection[k];
        if (v_mag < st.vtr) {
            s.uv_timer[k] += dt;
            if (!s.stage_tripped[k] && s.uv_timer[k] >= st.ttr) s.stage_tripped[k] = true;
        } else {
            s.uv_timer[k] = 0.0;
        }
        if (s.stage_tripped[k] && v_mag > st.vrc) {
            s.rc_timer[k] += dt;
            if (s.rc_timer[k] >= st.trc) {
                s.stage_tripped[k] = false;
                s.rc_timer[k] = 0.0;
                s.uv_timer[k] = 0.0;
            }
        } else {
            s.rc_timer[k] = 0.0;
        }
    }
    double online = 1.0;
    for (std::size_t k = 0; k < p.protection.size(); ++k)
        if (s.stage_tripped[k]) online -= p.protection[k].ftr;
    s.online_fraction = std::max(0.0, online);
}

}  // namespace motor3

void Motor3Component::init(Phasor v_bus, double p_assigned_system) {
    base_conv_ = p_assigned_system / p_.lf;
    s_ = motor3::init(v_bus, p_.lf, p_, omega_s_, &q_init_);
}

void Motor3Component::derivatives(std::span<const double> x, Phasor v_bus,
                                  std::span<double> out) const {
    Motor3State tmp = s_;
    tmp.eq_p = x[0];
    tmp.ed_p = x[1];
    tmp.eq_pp = x[2];
    tmp.ed_pp = x[3];
    tmp.slip = x[4];
    const auto d = motor3::derivatives(tmp, v_bus, p_, omega_s_);
    for (std::size_t i = 0; i < 5; ++i) out[i] = d[i];
}

Phasor Motor3Component::norton_admittance() const {
    return motor3::norton(s_, p_, base_conv_ * external_scale_).second;
}

Phasor Motor3Component::norton_injection(Phasor) const {
    return -motor3::norton(s_, p_, base_conv_ * external_scale_).first;
}

bool Motor3Component::post_process(Phasor v_bus, double dt) {
    const double before = s_.online_fraction;
    if (s_.slip > 1.0) s_.slip = 1.0;
    motor3::post_process(s_, std::abs(v_bus), dt, p_);
    return s_.online_fraction != before;
}

void Motor3Component::sample(const SampleContext& ctx, std::vector<double>& out) const {
    const Phasor v = ctx.v(bus_id_);
    const Phasor s = drawn_power(v);
    out.push_back(s_.slip);
    out.push_back(s.real());
    out.push_back(s.imag());
    out.push_back(s_.online_fraction);
}

}  // namespace clmsim
