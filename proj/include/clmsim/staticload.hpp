#pragma once

#include <limits>

#include "clmsim/component.hpp"

namespace clmsim {

struct StaticLoadParams {
    double pfs = 0.9;  // power factor of the static fraction
    double p1c = 1.0, p1e = 2.0;
    double p2c = 0.0, p2e = 1.0;
    double pfrq = 0.0;
    double q1c = 1.0, q1e = 2.0;
    double q2c = 0.0, q2e = 1.0;
    double qfrq = 0.0;
    double v_cp_min = 0.7;  // constant-power robust-switch threshold
    double v_ci_min = 0.7;  // constant-current robust-switch threshold
};

struct ElecLoadParams {
    double pfe = 0.9;
    double vd1 = 0.8;  // ramp start (full power above)
    double vd2 = 0.7;  // ramp end (zero below)
    double frcel = 0.0;  // fraction that reconnects on recovery
};

namespace staticload {

/// Constant-power portion with the low-voltage robust switch:
///   S0                          for V >= Vmin
///   (S0/2) (1 - cos(pi V/Vmin)) below
[[nodiscard]] Phasor cp_power(double v, Phasor s0, double v_min);

/// Constant-current portion with the low-voltage robust switch:
///   S0 V                        for V >= Vmin
///   S0 V sin(pi V / (2 Vmin))   below
[[nodiscard]] Phasor ci_power(double v, Phasor s0, double v_min);

}  // namespace staticload

/// ZIP-exponential static load. The record's exponential terms are mapped
/// onto robust-switch machinery: exponent-2 terms are constant impedance,
/// exponent-1 terms constant current (robust below V_CI_min), the residual
/// constant term constant power (robust below V_CP_min); other exponents
/// follow their power law above V_CP_min and the constant-power robust shape
/// below it.
class StaticLoadComponent : public LoadComponent {
public:
    StaticLoadComponent(std::string name, int bus_id, StaticLoadParams params, double omega_s)
        : LoadComponent(std::move(name), bus_id), p_(params), omega_s_(omega_s) {}

    /// Anchors the decomposition to draw exactly (p, q) system pu at v_bus.
    /// When q_assigned is NaN it is derived from p via the pfs factor.
    void init(Phasor v_bus, double p_assigned,
              double q_assigned = std::numeric_limits<double>::quiet_NaN());

    /// Total drawn power at voltage magnitude v and frequency deviation df.
    [[nodiscard]] Phasor injection_power(double v, double df_pu) const;

    [[nodiscard]] Phasor norton_admittance() const override { return {0.0, 0.0}; }
    [[nodiscard]] Phasor norton_injection(Phasor v_iterate) const override;
    bool post_process(Phasor v_bus, double dt) override;

    [[nodiscard]] std::vector<std::string> channel_names() const override {
        return {"P_static", "Q_static"};
    }
    void sample(const SampleContext& ctx, std::vector<double>& out) const override;

    [[nodiscard]] const StaticLoadParams& params() const { return p_; }

private:
    struct Term {
        double coef = 0.0;  // absolute pu at the initial point
        double exponent = 0.0;
    };
    [[nodiscard]] double channel_value(double v, const std::vector<Term>& power_terms,
                                       double ci_coef, double cp_coef) const;

    StaticLoadParams p_;
    double omega_s_;
    double v0_ = 1.0;
    std::vector<Term> p_terms_, q_terms_;  // exponent != 1 terms (exponent-2 included)
    double p_ci_ = 0.0, q_ci_ = 0.0;       // constant-current coefficients (S0 of Eq-4 form)
    double p_cp_ = 0.0, q_cp_ = 0.0;       // constant-power portions
    FrequencyTracker freq_;
};

/// Power-electronic load fraction: constant power above vd1, linear ramp to
/// zero at vd2, latched below with fraction frcel restoring along the ramp.
class ElecLoadComponent : public LoadComponent {
public:
    ElecLoadComponent(std::string name, int bus_id, ElecLoadParams params)
        : LoadComponent(std::move(name), bus_id), p_(params) {}

    void init(double p_assigned);

    /// Live fraction at voltage v given the latched minimum.
    [[nodiscard]] double live_fraction(double v) const;

    [[nodiscard]] Phasor norton_admittance() const override { return {0.0, 0.0}; }
    [[nodiscard]] Phasor norton_injection(Phasor v_iterate) const override;
    bool post_process(Phasor v_bus, double dt) override;

    [[nodiscard]] std::vector<std::string> channel_names() const override {
        return {"P_el", "Q_el", "elec_tripped_fraction"};
    }
    void sample(const SampleContext& ctx, std::vector<double>& out) const override;

private:
    [[nodiscard]] double ramp(double v) const;

    ElecLoadParams p_;
    Phasor s_assigned_{0.0, 0.0};
    double min_ramp_ = 1.0;  // lowest ramp value reached, latched
};

}  // namespace clmsim
