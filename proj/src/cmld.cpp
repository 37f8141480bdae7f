#include "clmsim/cmld.hpp"

#include <algorithm>
#include <cmath>

#include "clmsim/errors.hpp"

namespace clmsim {

void CmldParams::validate() const {
    const double total = fma + fmb + fmc + fmd + fel;
    if (fma < 0 || fmb < 0 || fmc < 0 || fmd < 0 || fel < 0)
        throw InitError("cmld", "component fractions must be >= 0");
    if (total > 1.0 + 1e-12)
        throw InitError("cmld", "component fractions sum to more than 1");
    if (!(tmin <= tmax)) throw InitError("cmld", "tmin must be <= tmax");
    if (!(step > 0.0)) throw InitError("cmld", "tap step must be > 0");
    if (!(vmin < vmax)) throw InitError("cmld", "vmin must be < vmax");
    if (!(tfixhs > 0.0 && tfixls > 0.0)) throw InitError("cmld", "fixed taps must be > 0");
}

double continuous_tap(Phasor v_lf, Phasor i_lf, double x_xfr_sys, const CmldParams& p) {
    const double v_mid = 0.5 * (p.vmin + p.vmax);
    const Phasor behind = v_lf - Phasor{0.0, x_xfr_sys * p.tfixhs * p.tfixhs} * i_lf;
    return v_mid * p.tfixhs / (p.tfixls * std::abs(behind));
}

double round_tap(double tap, const CmldParams& p) {
    const double k = std::round((tap - p.tmin) / p.step);
    return std::clamp(p.tmin + k * p.step, p.tmin, p.tmax);
}

FeederSolution solve_feeder(Phasor v_lf, Phasor i_lf, double tap, double x_xfr, double r_fdr,
                            double x_fdr, double b_ss, const CmldParams& p) {
    FeederSolution f;
    f.vls = (v_lf - Phasor{0.0, x_xfr * p.tfixhs * p.tfixhs} * i_lf) * p.tfixls * tap / p.tfixhs;
    f.i2 = i_lf * p.tfixhs / (tap * p.tfixls);
    f.i3 = Phasor{0.0, b_ss} * f.vls;
    f.i4 = f.i2 - f.i3;
    f.vlb = f.vls - Phasor{r_fdr, x_fdr} * f.i4;
    const Phasor s_lb = f.vlb * std::conj(f.i4);
    f.plb = s_lb.real();
    f.qlb = s_lb.imag();
    return f;
}

namespace {

/// Smallest feeder scale in (0, 1] that lifts |vlb| to the target, from the
/// quadratic |vls - a*(R+jX)*i4|^2 = target^2. Returns -1 when unreachable.
double feeder_scale_for(Phasor vls, Phasor i4, double r_fdr, double x_fdr, double target) {
    const Phasor w = Phasor{r_fdr, x_fdr} * i4;
    const double a = std::norm(w);
    const double b = -2.0 * std::real(w * std::conj(vls));
    const double c = std::norm(vls) - target * target;
    if (a == 0.0) return -1.0;
    const double disc = b * b - 4.0 * a * c;
    if (disc < 0.0) return -1.0;
    const double root = (-b - std::sqrt(disc)) / (2.0 * a);
    if (root > 0.0 && root <= 1.0) return root;
    const double other = (-b + std::sqrt(disc)) / (2.0 * a);
    if (other > 0.0 && other <= 1.0) return other;
    return -1.0;
}

}  // namespace

CmldInstance init_cmld(Network& net, const GrowthResult& growth, const CmldParams& p,
                       const CmldInitOptions& opts) {
    p.validate();
    Bus& trans = net.bus(growth.parent_bus_id);
    const double p_lf = trans.p_load;
    const double q_lf = trans.q_load;
    const Phasor v_lf = trans.voltage;
    if (!(p_lf > 0.0)) throw InitError("cmld", "transmission bus has no positive load to replace");

    // Record impedances/shunts sit on the composite-load MVA base.
    const double base_ratio =
        (p.mva < 0.0) ? std::abs(p.mva) * p_lf : p.mva / opts.system_mva;
    if (!(base_ratio > 0.0)) throw InitError("cmld", "mva record field yields a nonpositive base");
    const double x_xfr = p.xxf / base_ratio;
    const double r_fdr0 = p.rfdr / base_ratio;
    const double x_fdr0 = p.xfdr / base_ratio;
    const double b_ss = p.bss * base_ratio;

    const Phasor i_lf = std::conj(Phasor{p_lf, q_lf} / v_lf);

    double tap = round_tap(continuous_tap(v_lf, i_lf, x_xfr, p), p);
    double scale = 1.0;
    FeederSolution f = solve_feeder(v_lf, i_lf, tap, x_xfr, r_fdr0, x_fdr0, b_ss, p);

    // Low load-bus voltage: raise the tap step by step first, reduce the
    // feeder impedance only as the last resort.
    while (std::abs(f.vlb) < 0.95 && tap + p.step <= p.tmax + 1e-12) {
        const double cand = tap + p.step;
        FeederSolution fc = solve_feeder(v_lf, i_lf, cand, x_xfr, r_fdr0, x_fdr0, b_ss, p);
        if (std::abs(fc.vls) > p.vmax) break;
        tap = cand;
        f = fc;
    }
    if (std::abs(f.vlb) < 0.95) {
        scale = feeder_scale_for(f.vls, f.i4, r_fdr0, x_fdr0, 0.95);
        if (scale < 0.1)
            throw InitError("cmld", "tap exhausted and feeder scaling below the 10% floor");
        f = solve_feeder(v_lf, i_lf, tap, x_xfr, scale * r_fdr0, scale * x_fdr0, b_ss, p);
    }

    // Distribute the load-bus power and initialize the members.
    const double f_static = 1.0 - (p.fma + p.fmb + p.fmc + p.fmd + p.fel);
    if (f_static < -1e-12) throw InitError("cmld", "component fractions exceed the load");

    CmldInitReport report;
    report.transmission_bus = growth.parent_bus_id;
    report.low_side_bus = growth.low_side_id;
    report.load_bus = growth.load_bus_id;
    report.tap = tap;
    report.vls = f.vls;
    report.vlb = f.vlb;
    report.plb = f.plb;
    report.qlb = f.qlb;
    report.feeder_impedance_scale = scale;

    const std::string prefix = "bus" + std::to_string(growth.parent_bus_id) + ".";
    std::vector<std::shared_ptr<LoadComponent>> members;
    double q_components = 0.0;

    const auto add_motor3 = [&](const char* tag, double frac, double mty,
                                const Motor3Params& mp) {
        if (frac <= 0.0) return;
        if (mty != 3.0)
            throw InitError(prefix + tag, "only model type 3.0 is supported for motors A/B/C");
        auto m = std::make_shared<Motor3Component>(prefix + tag, growth.load_bus_id, mp,
                                                   opts.omega_s);
        m->init(f.vlb, frac * f.plb);
        q_components += m->q_consumed_system();
        report.components.push_back({m->name(), frac * f.plb, m->q_consumed_system()});
        members.push_back(std::move(m));
    };
    add_motor3("motorA", p.fma, p.mtya, p.motor_a);
    add_motor3("motorB", p.fmb, p.mtyb, p.motor_b);
    add_motor3("motorC", p.fmc, p.mtyc, p.motor_c);

    if (p.fmd > 0.0) {
        if (p.mtyd != 1.0)
            throw InitError(prefix + "motorD", "only the performance A/C model (mtyd 1.0) is supported");
        auto d = std::make_shared<AcMotorComponent>(prefix + "motorD", growth.load_bus_id,
                                                    p.motor_d, opts.omega_s);
        d->init(f.vlb, p.fmd * f.plb);
        q_components += d->q_assigned_system();
        report.components.push_back({d->name(), p.fmd * f.plb, d->q_assigned_system()});
        members.push_back(std::move(d));
    }

    if (p.fel > 0.0) {
        auto e = std::make_shared<ElecLoadComponent>(prefix + "elec", growth.load_bus_id, p.elec);
        e->init(p.fel * f.plb);
        const double qe = q_from_pf(p.fel * f.plb, p.elec.pfe);
        q_components += qe;
        report.components.push_back({e->name(), p.fel * f.plb, qe});
        members.push_back(std::move(e));
    }

    if (f_static > 0.0) {
        auto st = std::make_shared<StaticLoadComponent>(prefix + "static", growth.load_bus_id,
                                                        p.stat, opts.omega_s);
        st->init(f.vlb, f_static * f.plb);
        const double qs = q_from_pf(f_static * f.plb, p.stat.pfs);
        q_components += qs;
        report.components.push_back({st->name(), f_static * f.plb, qs});
        members.push_back(std::move(st));
    }

    // Bf2 absorbs the whole reactive mismatch; Bf1 stays zero.
    report.bf1 = 0.0;
    report.bf2 = (q_components - f.qlb) / std::norm(f.vlb);

    // Wire the grown portion into the network and seed its voltages. Branch
    // reactances get a 1e-9 floor so degenerate zero-impedance records stay
    // factorizable; the equivalence residual budget (1e-6) absorbs it.
    Branch xfmr;
    xfmr.from_id = growth.low_side_id;
    xfmr.to_id = growth.parent_bus_id;
    xfmr.x = std::max(x_xfr * p.tfixhs * p.tfixhs, 1e-9);
    xfmr.tap = p.tfixls * tap / p.tfixhs;
    net.add_branch(xfmr);

    Branch feeder;
    feeder.from_id = growth.low_side_id;
    feeder.to_id = growth.load_bus_id;
    feeder.r = scale * r_fdr0;
    feeder.x = scale * x_fdr0;
    if (feeder.r == 0.0 && feeder.x == 0.0) feeder.x = 1e-9;
    net.add_branch(feeder);

    if (b_ss != 0.0) net.add_shunt({growth.low_side_id, Phasor{0.0, b_ss}});
    if (report.bf2 != 0.0) net.add_shunt({growth.load_bus_id, Phasor{0.0, report.bf2}});

    net.bus(growth.low_side_id).voltage = f.vls;
    net.bus(growth.load_bus_id).voltage = f.vlb;
    trans.p_load = 0.0;
    trans.q_load = 0.0;

    CmldInstance inst;
    inst.report = report;
    inst.components = members;
    inst.container = std::make_shared<CmldContainer>(
        prefix + "clm", growth.parent_bus_id, report, opts.shedding, opts.omega_s,
        opts.system_frequency);
    for (const auto& m : members) inst.container->add_member(m);
    return inst;
}

bool CmldContainer::post_process(Phasor v_bus, double dt) {
    if (!shedding_.any_enabled()) return false;
    freq_.update(v_bus, dt, omega_s_);
    const double v = std::abs(v_bus);
    const double f_hz = f0_ * (1.0 + freq_.deviation_pu());

    const auto run_stage = [dt](const SheddingStage& st, double value, bool below, double& timer,
                                bool& tripped) {
        if (!st.enabled || tripped) return;
        const bool active = below ? (value < st.threshold) : (value > st.threshold);
        if (active) {
            timer += dt;
            if (timer >= st.delay) tripped = true;
        } else {
            timer = 0.0;
        }
    };
    run_stage(shedding_.uv1, v, true, uv_t1_, uv1_);
    run_stage(shedding_.uv2, v, true, uv_t2_, uv2_);
    run_stage(shedding_.uf1, f_hz, true, uf_t1_, uf1_);
    run_stage(shedding_.uf2, f_hz, true, uf_t2_, uf2_);

    double mult = 1.0;
    if (uv1_) mult *= 1.0 - shedding_.uv1.fraction;
    if (uv2_) mult *= 1.0 - shedding_.uv2.fraction;
    if (uf1_) mult *= 1.0 - shedding_.uf1.fraction;
    if (uf2_) mult *= 1.0 - shedding_.uf2.fraction;

    if (mult != multiplier_) {
        multiplier_ = mult;
        for (auto& m : members_) m->set_external_scale(multiplier_);
        return true;
    }
    return false;
}

void CmldContainer::sample(const SampleContext& ctx, std::vector<double>& out) const {
    out.push_back(std::abs(ctx.v(report_.low_side_bus)));
    out.push_back(std::abs(ctx.v(report_.load_bus)));
    out.push_back(report_.tap);
    out.push_back(multiplier_);
}

}  // namespace clmsim
