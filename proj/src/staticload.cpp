#include "clmsim/staticload.hpp"

#include <cmath>

#include "clmsim/errors.hpp"

namespace clmsim {

namespace staticload {

Phasor cp_power(double v, Phasor s0, double v_min) {
    if (v >= v_min) return s0;
    return 0.5 * s0 * (1.0 - std::cos(kPi * v / v_min));
}

Phasor ci_power(double v, Phasor s0, double v_min) {
    if (v >= v_min) return s0 * v;
    return s0 * v * std::sin(kPi * v / (2.0 * v_min));
}

}  // namespace staticload

void StaticLoadComponent::init(Phasor v_bus, double p_assigned, double q_assigned) {
    if (!(p_assigned >= 0.0)) throw InitError(name_, "assigned power must be >= 0");
    v0_ = std::abs(v_bus);
    if (!(v0_ > 0.0)) throw InitError(name_, "zero initial voltage");
    const double q0 = std::isnan(q_assigned) ? q_from_pf(p_assigned, p_.pfs) : q_assigned;

    const auto build = [this](double total, double c1, double e1, double c2, double e2,
                              std::vector<Term>& terms, double& ci, double& cp) {
        terms.clear();
        ci = 0.0;
        cp = 0.0;
        const double c3 = 1.0 - c1 - c2;
        const double pairs[2][2] = {{c1, e1}, {c2, e2}};
        for (const auto& [c, e] : pairs) {
            if (c == 0.0) continue;
            if (e == 1.0)
                ci += total * c / v0_;  // Eq-4 coefficient: S0 * V0 = initial share
            else
                terms.push_back({total * c, e});
        }
        cp = total * c3;
    };
    build(p_assigned, p_.p1c, p_.p1e, p_.p2c, p_.p2e, p_terms_, p_ci_, p_cp_);
    build(q0, p_.q1c, p_.q1e, p_.q2c, p_.q2e, q_terms_, q_ci_, q_cp_);
}

double StaticLoadComponent::channel_value(double v, const std::vector<Term>& power_terms,
                                          double ci_coef, double cp_coef) const {
    double total = 0.0;
    for (const Term& t : power_terms) {
        const double shape = std::pow(v / v0_, t.exponent);
        if (t.exponent == 2.0 || v >= p_.v_cp_min)
            total += t.coef * shape;
        else  // non-impedance power law collapsed with the robust CP shape below threshold
            total += std::real(staticload::cp_power(
                v, Phasor{t.coef * std::pow(p_.v_cp_min / v0_, t.exponent), 0.0}, p_.v_cp_min));
    }
    total += std::real(staticload::ci_power(v, Phasor{ci_coef, 0.0}, p_.v_ci_min));
    total += std::real(staticload::cp_power(v, Phasor{cp_coef, 0.0}, p_.v_cp_min));
    return total;
}

Phasor StaticLoadComponent::injection_power(double v, double df_pu) const {
    const double p = channel_value(v, p_terms_, p_ci_, p_cp_) * (1.0 + p_.pfrq * df_pu);
    const double q = channel_value(v, q_terms_, q_ci_, q_cp_) * (1.0 + p_.qfrq * df_pu);
    return {p, q};
}

Phasor StaticLoadComponent::norton_injection(Phasor v_iterate) const {
    const double v = std::abs(v_iterate);
    if (v < 1e-6) return {0.0, 0.0};
    const Phasor s = injection_power(v, freq_.deviation_pu()) * external_scale_;
    return -load_current(s, v_iterate);
}

bool StaticLoadComponent::post_process(Phasor v_bus, double dt) {
    freq_.update(v_bus, dt, omega_s_);
    return false;
}

void StaticLoadComponent::sample(const SampleContext& ctx, std::vector<double>& out) const {
    const Phasor v = ctx.v(bus_id_);
    const Phasor s = injection_power(std::abs(v), freq_.deviation_pu()) * external_scale_;
    out.push_back(s.real());
    out.push_back(s.imag());
}

void ElecLoadComponent::init(double p_assigned) {
    if (p_assigned < 0.0) throw InitError(name_, "assigned power must be >= 0");
    s_assigned_ = Phasor{p_assigned, q_from_pf(p_assigned, p_.pfe)};
    min_ramp_ = 1.0;
}

double ElecLoadComponent::ramp(double v) const {
    if (v >= p_.vd1) return 1.0;
    if (v <= p_.vd2) return 0.0;
    return (v - p_.vd2) / (p_.vd1 - p_.vd2);
}

double ElecLoadComponent::live_fraction(double v) const {
    const double r = ramp(v);
    if (r <= min_ramp_) return r;
    return min_ramp_ + p_.frcel * (r - min_ramp_);
}

Phasor ElecLoadComponent::norton_injection(Phasor v_iterate) const {
    const double v = std::abs(v_iterate);
    if (v < 1e-6) return {0.0, 0.0};
    const Phasor s = s_assigned_ * live_fraction(v) * external_scale_;
    if (s == Phasor{0.0, 0.0}) return {0.0, 0.0};
    return -load_current(s, v_iterate);
}

bool ElecLoadComponent::post_process(Phasor v_bus, double /*dt*/) {
    min_ramp_ = std::min(min_ramp_, ramp(std::abs(v_bus)));
    return false;
}

void ElecLoadComponent::sample(const SampleContext& ctx, std::vector<double>& out) const {
    const Phasor v = ctx.v(bus_id_);
    const Phasor s = s_assigned_ * live_fraction(std::abs(v)) * external_scale_;
    out.push_back(s.real());
    out.push_back(s.imag());
    out.push_back(1.0 - live_fraction(std::abs(v)));
}

}  // namespace clmsim
