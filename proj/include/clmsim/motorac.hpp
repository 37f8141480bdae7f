#pragma once

#include "clmsim/component.hpp"

namespace clmsim {

/// Performance-curve shape. Defaults follow the WECC single-phase A/C
/// performance model family (Kp1/Np1/Kq1/Nq1/Kq2/Nq2/CmpKpf/CmpKqf as
/// commonly circulated); Np2 is set so the below-breakdown running curve
/// meets the stall-impedance curve above Vstall for locked-rotor impedances
/// in the 0.1-0.13 pu range. All values are overridable per record.
struct AcRunCurve {
    double vbrk = 0.86;
    double p0 = 0.8;  // re-anchored at init to the assigned operating point
    double q0 = 0.2;
    double kp1 = 0.0, np1 = 1.0;
    double kq1 = 6.0, nq1 = 2.0;
    double kp2 = 12.0, np2 = 1.8;
    double kq2 = 11.0, nq2 = 2.5;
    double cmp_kpf = 1.0, cmp_kqf = -3.3;
};

struct AcMotorParams {
    double lf = 0.8;        // loading factor (initial P / motor MVA base)
    double comp_pf = 0.97;  // compressor power factor at the initial point
    double vstall = 0.6;
    double rstall = 0.124;
    double xstall = 0.114;
    double tstall = 0.033;
    double frst = 0.0;  // restartable fraction (part B weight)
    double vrst = 0.9;
    double trst = 999.0;
    double fuvr = 0.0;  // UV-relay equipped fraction
    double uv_vtr1 = 0.0, uv_ttr1 = 0.2;
    double uv_vtr2 = 0.0, uv_ttr2 = 5.0;
    double vc1off = 0.45, vc2off = 0.35;
    double vc1on = 0.5, vc2on = 0.4;
    double tth = 10.0;   // thermal time constant, s ("Th1" record position)
    double th1t = 1.3;   // trip ramp start temperature
    double th2t = 4.3;   // trip ramp end temperature
    double tv = 0.05;    // terminal voltage measurement filter, s
    AcRunCurve curve;

    void validate() const;

    [[nodiscard]] double stall_g() const {
        return rstall / (rstall * rstall + xstall * xstall);
    }
    [[nodiscard]] double stall_b() const {
        return xstall / (rstall * rstall + xstall * xstall);
    }
    [[nodiscard]] Phasor stall_admittance() const { return 1.0 / Phasor{rstall, xstall}; }
};

enum class AcSection { RunningAbove, RunningBelow, Stalled };
enum class AcStatus { Running, Stalled };

struct AcPartState {
    AcStatus status = AcStatus::Running;
    double temperature = 0.0;
    double fth = 1.0;  // thermal online fraction, latched non-increasing
    double stall_timer = 0.0;
    double restart_timer = 0.0;
};

struct AcMotorState {
    AcPartState part_a;  // non-restarting fraction (1 - Frst)
    AcPartState part_b;  // restarting fraction Frst
    double vf = 1.0;     // filtered terminal voltage
    double kcon = 1.0;
    double max_opened = 0.0;  // deepest contactor opening so far
    double uv_online = 1.0;
    double uv_timer1 = 0.0, uv_timer2 = 0.0;
    bool uv_trip1 = false, uv_trip2 = false;
    Phasor zeq_y{0.0, 0.0};  // frozen running admittance (motor base), below-breakdown
    double vstallbrk = 0.0;
    double v_last = 1.0;  // converged terminal magnitude of the previous step
};

namespace motorac {

/// (P, Q) on the motor base for one curve section at terminal voltage v.
[[nodiscard]] std::pair<double, double> performance_pq(double v, AcSection section,
                                                       const AcMotorParams& p, double df_pu = 0.0);

/// Voltage where the below-breakdown running curve meets the stall-impedance
/// curve, bisected in (Vstall, Vbrk) to a bracket narrower than 1e-4 pu.
/// Throws InitError when the curves do not cross on that bracket.
[[nodiscard]] double compute_vstallbrk(const AcMotorParams& p);

/// Section a running part operates in at terminal voltage v.
[[nodiscard]] AcSection running_section(double v, double vstallbrk, const AcMotorParams& p);

}  // namespace motorac

/// Single-phase A/C compressor motor (motor D): two-part restart/non-restart
/// representation with stall, contactor, thermal, and UV-relay protections.
/// Purely algebraic (no integrator states); everything advances in
/// post_process. Running parts below breakdown voltage are presented to the
/// network as the impedance frozen from the previous step.
class AcMotorComponent : public LoadComponent {
public:
    AcMotorComponent(std::string name, int bus_id, AcMotorParams params, double omega_s)
        : LoadComponent(std::move(name), bus_id), p_(params), omega_s_(omega_s) {}

    /// p_assigned is in system pu; the motor MVA base is p_assigned / LF.
    /// Anchors the run curve so the initial point reproduces (P, Q) exactly.
    void init(Phasor v_bus, double p_assigned_system);

    [[nodiscard]] Phasor norton_admittance() const override;
    [[nodiscard]] Phasor norton_injection(Phasor v_iterate) const override;
    bool post_process(Phasor v_bus, double dt) override;

    [[nodiscard]] std::vector<std::string> channel_names() const override {
        return {"P", "Q", "TempA", "TempB", "FthA", "FthB", "Kcon", "statusA", "statusB"};
    }
    void sample(const SampleContext& ctx, std::vector<double>& out) const override;

    [[nodiscard]] const AcMotorState& motor_state() const { return s_; }
    [[nodiscard]] AcMotorState& mutable_state() { return s_; }
    [[nodiscard]] const AcMotorParams& params() const { return p_; }
    [[nodiscard]] double base_conv() const { return base_conv_; }
    [[nodiscard]] double q_assigned_system() const {
        return q_from_pf(p_.lf, p_.comp_pf) * base_conv_;
    }

private:
    /// Network regime of one part given the previous converged voltage.
    [[nodiscard]] AcSection part_section(const AcPartState& part) const;
    [[nodiscard]] double part_multiplier(const AcPartState& part) const;

    AcMotorParams p_;
    double omega_s_;
    AcMotorState s_;
    FrequencyTracker freq_;
    double base_conv_ = 1.0;
};

}  // namespace clmsim
