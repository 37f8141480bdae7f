#include "clmsim/scenarios.hpp"

#include <cmath>

#include "clmsim/errors.hpp"
#include "clmsim/motor3ph.hpp"
#include "clmsim/motorac.hpp"
#include "clmsim/staticload.hpp"

namespace clmsim {

std::optional<PlayinComponent> playin_component_from_name(const std::string& name) {
    if (name == "motor3" || name == "motor3a" || name == "motora") return PlayinComponent::Motor3A;
    if (name == "motor3b" || name == "motorb") return PlayinComponent::Motor3B;
    if (name == "motor3c" || name == "motorc") return PlayinComponent::Motor3C;
    if (name == "motorac" || name == "motord" || name == "ac") return PlayinComponent::MotorAc;
    if (name == "static" || name == "zip") return PlayinComponent::StaticZip;
    if (name == "static-cp" || name == "cp") return PlayinComponent::StaticCp;
    if (name == "static-ci" || name == "ci") return PlayinComponent::StaticCi;
    if (name == "elec") return PlayinComponent::ElecLoad;
    return std::nullopt;
}

namespace {

std::shared_ptr<LoadComponent> make_playin_component(PlayinComponent which,
                                                     const CmldParams& params, int bus,
                                                     Phasor v_bus, double p_set, double omega_s) {
    const std::string name = "bus" + std::to_string(bus);
    switch (which) {
        case PlayinComponent::Motor3A:
        case PlayinComponent::Motor3B:
        case PlayinComponent::Motor3C: {
            const Motor3Params& mp = (which == PlayinComponent::Motor3A)   ? params.motor_a
                                     : (which == PlayinComponent::Motor3B) ? params.motor_b
                                                                           : params.motor_c;
            const char* tag = (which == PlayinComponent::Motor3A)   ? ".motorA"
                              : (which == PlayinComponent::Motor3B) ? ".motorB"
                                                                    : ".motorC";
            auto m = std::make_shared<Motor3Component>(name + tag, bus, mp, omega_s);
            m->init(v_bus, p_set);
            return m;
        }
        case PlayinComponent::MotorAc: {
            auto m = std::make_shared<AcMotorComponent>(name + ".motorD", bus, params.motor_d,
                                                        omega_s);
            m->init(v_bus, p_set);
            return m;
        }
        case PlayinComponent::StaticZip:
        case PlayinComponent::StaticCp:
        case PlayinComponent::StaticCi: {
            StaticLoadParams sp = params.stat;
            if (which == PlayinComponent::StaticCp) {
                // pure constant power: only the residual term remains, and the
                // closed-form comparison needs the frequency factors off
                sp.p1c = sp.p2c = sp.q1c = sp.q2c = 0.0;
                sp.pfrq = sp.qfrq = 0.0;
            } else if (which == PlayinComponent::StaticCi) {
                sp.p1c = sp.q1c = 0.0;
                sp.p2c = sp.q2c = 1.0;
                sp.p2e = sp.q2e = 1.0;
                sp.pfrq = sp.qfrq = 0.0;
            }
            auto s = std::make_shared<StaticLoadComponent>(name + ".static", bus, sp, omega_s);
            s->init(v_bus, p_set);
            return s;
        }
        case PlayinComponent::ElecLoad: {
            auto e = std::make_shared<ElecLoadComponent>(name + ".elec", bus, params.elec);
            e->init(p_set);
            return e;
        }
    }
    throw SimError("unknown play-in component");
}

}  // namespace

TimeSeries cmd_playin(const CaseFile& case_file, const CmldParams& params, PlayinComponent which,
                      const PlayInProfile& profile, SimConfig cfg) {
    cfg.validate();
    const std::optional<int> source = case_file.source_bus();
    if (!source) throw InitError("playin", "case has no generator to play the signal into");

    // load bus: the first non-source bus carrying load, else any non-source bus
    int load_bus = -1;
    double p_set = 0.0;
    for (const auto& b : case_file.buses) {
        if (b.id == *source) continue;
        if (load_bus < 0 || (p_set == 0.0 && b.p_load > 0.0)) {
            load_bus = b.id;
            p_set = b.p_load;
        }
    }
    if (load_bus < 0) throw InitError("playin", "case has no load bus");
    if (p_set <= 0.0) p_set = 0.5;

    Network net = build_network(case_file);
    net.bus(*source).voltage = Phasor{profile.magnitude(0.0), 0.0};
    net.set_pinned(*source, true);
    net.bus(load_bus).p_load = 0.0;
    net.bus(load_bus).q_load = 0.0;

    // Self-consistent start: re-anchor the component at the solved voltage
    // until the network fixed point stops moving.
    std::shared_ptr<LoadComponent> comp;
    NetworkSolver solver(net);
    Phasor v_load = net.bus(load_bus).voltage;
    for (int pass = 0; pass < 100; ++pass) {
        comp = make_playin_component(which, params, load_bus, v_load, p_set, cfg.omega_s());
        net.clear_device_admittances();
        net.add_device_admittance(load_bus, comp->norton_admittance());
        solver.mark_dirty();
        (void)solver.solve(
            [&](const std::vector<Phasor>& v, std::vector<Phasor>& inj) {
                inj[net.index_of(load_bus)] += comp->norton_injection(v[net.index_of(load_bus)]);
            },
            1e-13, 200);
        const Phasor v_new = net.bus(load_bus).voltage;
        if (std::abs(v_new - v_load) < 1e-12) break;
        v_load = v_new;
    }

    Simulator sim(net, cfg);
    sim.add_component(comp);
    sim.set_playin(*source, profile);
    return sim.run();
}

namespace {

RunResult run_impl(const CaseFile& case_file, const std::vector<CmldParams>& records,
                   const RunOptions& opts, bool simulate) {
    RunOptions o = opts;
    o.cfg.validate();
    Network net = build_network(case_file);

    std::vector<GrowthRequest> requests;
    requests.reserve(records.size());
    for (const auto& rec : records) {
        if (!net.has_bus(rec.bus_id))
            throw InitError("cmld", "record references unknown bus " + std::to_string(rec.bus_id));
        requests.push_back({net.bus(rec.bus_id).partition_owner, rec.bus_id});
    }
    const std::vector<GrowthResult> grown = net.grow(requests);

    CmldInitOptions copts;
    copts.omega_s = o.cfg.omega_s();
    copts.system_frequency = o.cfg.system_frequency;
    copts.shedding = o.shedding;

    RunResult result;
    std::vector<CmldInstance> instances;
    for (std::size_t i = 0; i < records.size(); ++i) {
        instances.push_back(init_cmld(net, grown[i], records[i], copts));
        result.reports.push_back(instances.back().report);
        if (o.report_sink) o.report_sink(instances.back().report);
    }

    Simulator sim(net, o.cfg);
    for (const auto& inst : instances)
        for (const auto& c : inst.all()) sim.add_component(c);
    sim.materialize_case_loads();
    sim.init_generators(gen_params(case_file));

    const double residual = sim.init_residual();
    if (residual > o.init_residual_limit)
        throw InitError("run", "initialization residual " + std::to_string(residual) +
                                   " exceeds " + std::to_string(o.init_residual_limit));
    if (!simulate) return result;

    if (o.fault) sim.add_fault(*o.fault);
    result.series = sim.run();
    return result;
}

}  // namespace

RunResult cmd_run(const CaseFile& case_file, const std::vector<CmldParams>& records,
                  const RunOptions& opts) {
    return run_impl(case_file, records, opts, true);
}

std::vector<CmldInitReport> cmd_init_report(const CaseFile& case_file,
                                            const std::vector<CmldParams>& records,
                                            const RunOptions& opts) {
    return run_impl(case_file, records, opts, false).reports;
}

}  // namespace clmsim
