#include "clmsim/motorac.hpp"

#include <algorithm>
#include <cmath>

#include "clmsim/errors.hpp"

namespace clmsim {

void AcMotorParams::validate() const {
    if (!(vstall < curve.vbrk)) throw InitError("motorac", "Vstall must be below Vbrk");
    if (!(vc2off < vc1off)) throw InitError("motorac", "Vc2off must be below Vc1off");
    if (!(vc2on < vc1on)) throw InitError("motorac", "Vc2on must be below Vc1on");
    if (!(frst >= 0.0 && frst <= 1.0)) throw InitError("motorac", "Frst must be in [0, 1]");
    if (!(tth > 0.0)) throw InitError("motorac", "Tth must be > 0");
    if (!(th1t < th2t)) throw InitError("motorac", "Th1t must be below Th2t");
    if (!(rstall * rstall + xstall * xstall > 0.0))
        throw InitError("motorac", "stall impedance must be nonzero");
}

namespace motorac {

std::pair<double, double> performance_pq(double v, AcSection section, const AcMotorParams& p,
                                         double df_pu) {
    const AcRunCurve& c = p.curve;
    switch (section) {
        case AcSection::RunningAbove: {
            const double dv = v - c.vbrk;
            const double pr = (c.p0 + c.kp1 * std::pow(dv, c.np1)) * (1.0 + c.cmp_kpf * df_pu);
            const double q = (c.q0 + c.kq1 * std::pow(dv, c.nq1)) * (1.0 + c.cmp_kqf * df_pu);
            return {pr, q};
        }
        case AcSection::RunningBelow: {
            const double dv = c.vbrk - v;
            const double pr = (c.p0 + c.kp2 * std::pow(dv, c.np2)) * (1.0 + c.cmp_kpf * df_pu);
            const double q = (c.q0 + c.kq2 * std::pow(dv, c.nq2)) * (1.0 + c.cmp_kqf * df_pu);
            return {pr, q};
        }
        case AcSection::Stalled:
        default:
            return {v * v * p.stall_g(), v * v * p.stall_b()};
    }
}

double compute_vstallbrk(const AcMotorParams& p) {
    const auto gap = [&p](double v) {
        const auto [pr, qr] = performance_pq(v, AcSection::RunningBelow, p);
        (void)qr;
        const auto [ps, qs] = performance_pq(v, AcSection::Stalled, p);
        (void)qs;
        return pr - ps;
    };
    double lo = p.vstall;
    double hi = p.curve.vbrk;
    const double f_lo = gap(lo);
    const double f_hi = gap(hi);
    if (f_lo == 0.0) return lo;
    if (f_hi == 0.0) return hi;
    if (f_lo * f_hi > 0.0)
        throw InitError("motorac",
                        "running and stall curves do not intersect between Vstall and Vbrk");
    while (hi - lo >= 1e-4) {
        const double mid = 0.5 * (lo + hi);
        const double f_mid = gap(mid);
        if (f_mid == 0.0) return mid;
        if (f_lo * f_mid < 0.0)
            hi = mid;
        else
            lo = mid;
    }
    return 0.5 * (lo + hi);
}

AcSection running_section(double v, double vstallbrk, const AcMotorParams& p) {
    if (v >= p.curve.vbrk) return AcSection::RunningAbove;
    if (v >= vstallbrk) return AcSection::RunningBelow;
    // Below the intersection the running curve no longer exists; the part
    // behaves electrically as the stall impedance even before the timer latches.
    return AcSection::Stalled;
}

}  // namespace motorac

void AcMotorComponent::init(Phasor v_bus, double p_assigned_system) {
    p_.validate();
    if (!(p_assigned_system > 0.0)) throw InitError(name_, "assigned power must be > 0");
    const double v0 = std::abs(v_bus);
    base_conv_ = p_assigned_system / p_.lf;

    const double p_pu = p_.lf;
    const double q_pu = q_from_pf(p_pu, p_.comp_pf);

    // Anchor the run curve at the assigned operating point.
    AcRunCurve& c = p_.curve;
    if (v0 >= c.vbrk) {
        c.p0 = p_pu - c.kp1 * std::pow(v0 - c.vbrk, c.np1);
        c.q0 = q_pu - c.kq1 * std::pow(v0 - c.vbrk, c.nq1);
    } else {
        c.p0 = p_pu - c.kp2 * std::pow(c.vbrk - v0, c.np2);
        c.q0 = q_pu - c.kq2 * std::pow(c.vbrk - v0, c.nq2);
    }

    s_ = AcMotorState{};
    s_.vstallbrk = motorac::compute_vstallbrk(p_);
    if (v0 < s_.vstallbrk)
        throw InitError(name_, "initial voltage below the stall-breakdown intersection");
    s_.vf = v0;
    s_.v_last = v0;
    s_.zeq_y = Phasor{p_pu, -q_pu} / (v0 * v0);
}

AcSection AcMotorComponent::part_section(const AcPartState& part) const {
    if (part.status == AcStatus::Stalled) return AcSection::Stalled;
    return motorac::running_section(s_.v_last, s_.vstallbrk, p_);
}

double AcMotorComponent::part_multiplier(const AcPartState& part) const {
    return s_.kcon * s_.uv_online * part.fth;
}

Phasor AcMotorComponent::norton_admittance() const {
    Phasor y{0.0, 0.0};
    const double scale = base_conv_ * external_scale_;
    const AcPartState* parts[2] = {&s_.part_a, &s_.part_b};
    const double weights[2] = {1.0 - p_.frst, p_.frst};
    for (int k = 0; k < 2; ++k) {
        if (weights[k] <= 0.0) continue;
        switch (part_section(*parts[k])) {
            case AcSection::Stalled:
                y += weights[k] * part_multiplier(*parts[k]) * scale * p_.stall_admittance();
                break;
            case AcSection::RunningBelow:
                y += weights[k] * part_multiplier(*parts[k]) * scale * s_.zeq_y;
                break;
            case AcSection::RunningAbove:
                break;  // handled as an iterate-dependent injection
        }
    }
    return y;
}

Phasor AcMotorComponent::norton_injection(Phasor v_iterate) const {
    const double v = std::abs(v_iterate);
    Phasor inj{0.0, 0.0};
    const double scale = base_conv_ * external_scale_;
    const AcPartState* parts[2] = {&s_.part_a, &s_.part_b};
    const double weights[2] = {1.0 - p_.frst, p_.frst};
    for (int k = 0; k < 2; ++k) {
        if (weights[k] <= 0.0) continue;
        if (part_section(*parts[k]) != AcSection::RunningAbove) continue;
        const double factor = weights[k] * part_multiplier(*parts[k]) * scale;
        if (v >= p_.curve.vbrk) {
            const auto [pr, qr] =
                motorac::performance_pq(v, AcSection::RunningAbove, p_, freq_.deviation_pu());
            inj -= load_current(Phasor{pr, qr} * factor, v_iterate);
        } else {
            // Iterate below the section's domain (the regime flips at the next
            // post-process): continue from the boundary point as an impedance,
            // which keeps the solve linear and the seam continuous.
            const auto [pb, qb] = motorac::performance_pq(p_.curve.vbrk, AcSection::RunningAbove,
                                                          p_, freq_.deviation_pu());
            const Phasor y_brk = Phasor{pb, -qb} / (p_.curve.vbrk * p_.curve.vbrk);
            inj -= y_brk * v_iterate * factor;
        }
    }
    return inj;
}

bool AcMotorComponent::post_process(Phasor v_bus, double dt) {
    const Phasor y_before = norton_admittance();
    const double v = std::abs(v_bus);
    freq_.update(v_bus, dt, omega_s_);

    // (a) terminal voltage measurement filter
    s_.vf += (v - s_.vf) * (1.0 - std::exp(-dt / p_.tv));

    // (b) stall timers run on the instantaneous terminal voltage so the latch
    // lands Tstall after the voltage crosses Vstall.
    AcPartState* parts[2] = {&s_.part_a, &s_.part_b};
    for (AcPartState* part : parts) {
        if (part->status == AcStatus::Running) {
            if (v < p_.vstall) {
                part->stall_timer += dt;
                if (part->stall_timer >= p_.tstall) {
                    part->status = AcStatus::Stalled;
                    part->stall_timer = 0.0;
                }
            } else {
                part->stall_timer = 0.0;
            }
        }
    }

    // (c) restart, part B only
    if (s_.part_b.status == AcStatus::Stalled) {
        if (s_.vf > p_.vrst) {
            s_.part_b.restart_timer += dt;
            if (s_.part_b.restart_timer >= p_.trst) {
                s_.part_b.status = AcStatus::Running;
                s_.part_b.restart_timer = 0.0;
            }
        } else {
            s_.part_b.restart_timer = 0.0;
        }
    }

    // (d) contactor: opened fraction latches at the deepest voltage and
    // recloses only along the Vc2on..Vc1on ramp.
    const auto ramp = [](double x, double lo, double hi) {
        if (x <= lo) return 0.0;
        if (x >= hi) return 1.0;
        return (x - lo) / (hi - lo);
    };
    const double k_off = ramp(s_.vf, p_.vc2off, p_.vc1off);
    s_.max_opened = std::max(s_.max_opened, 1.0 - k_off);
    s_.kcon = 1.0 - s_.max_opened * (1.0 - ramp(s_.vf, p_.vc2on, p_.vc1on));

    // (e) thermal: first-order heating toward the stall loss, exact update
    for (AcPartState* part : parts) {
        const double input =
            (part->status == AcStatus::Stalled) ? v * v * p_.stall_g() : 0.0;
        part->temperature = input + (part->temperature - input) * std::exp(-dt / p_.tth);
        double target = (p_.th2t - part->temperature) / (p_.th2t - p_.th1t);
        target = std::clamp(target, 0.0, 1.0);
        part->fth = std::min(part->fth, target);
    }

    // (f) UV relay, stage-wise, non-reconnecting
    if (p_.fuvr > 0.0) {
        if (s_.vf < p_.uv_vtr1) {
            s_.uv_timer1 += dt;
            if (s_.uv_timer1 >= p_.uv_ttr1) s_.uv_trip1 = true;
        } else {
            s_.uv_timer1 = 0.0;
        }
        if (s_.vf < p_.uv_vtr2) {
            s_.uv_timer2 += dt;
            if (s_.uv_timer2 >= p_.uv_ttr2) s_.uv_trip2 = true;
        } else {
            s_.uv_timer2 = 0.0;
        }
        s_.uv_online = 1.0 - p_.fuvr * ((s_.uv_trip1 || s_.uv_trip2) ? 1.0 : 0.0);
    }

    // (g) refresh the frozen running impedance from this step's converged point
    if (v >= s_.vstallbrk) {
        const AcSection sec = motorac::running_section(v, s_.vstallbrk, p_);
        const auto [pr, qr] = motorac::performance_pq(v, sec, p_, freq_.deviation_pu());
        s_.zeq_y = Phasor{pr, -qr} / (v * v);
    }
    s_.v_last = v;

    return norton_admittance() != y_before;
}

void AcMotorComponent::sample(const SampleContext& ctx, std::vector<double>& out) const {
    const Phasor v = ctx.v(bus_id_);
    const Phasor s = drawn_power(v);
    out.push_back(s.real());
    out.push_back(s.imag());
    out.push_back(s_.part_a.temperature);
    out.push_back(s_.part_b.temperature);
    out.push_back(s_.part_a.fth);
    out.push_back(s_.part_b.fth);
    out.push_back(s_.kcon);
    out.push_back(s_.part_a.status == AcStatus::Stalled ? 1.0 : 0.0);
    out.push_back(s_.part_b.status == AcStatus::Stalled ? 1.0 : 0.0);
}

}  // namespace clmsim
