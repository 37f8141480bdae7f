#include "clmsim/simulator.hpp"

#include <algorithm>
#include <cmath>

#include "clmsim/errors.hpp"
#include "clmsim/integrator.hpp"
#include "clmsim/staticload.hpp"

namespace clmsim {

Simulator::Simulator(Network& net, SimConfig cfg) : net_(net), cfg_(cfg), solver_(net) {
    cfg_.validate();
}

void Simulator::add_fault(const FaultSpec& f) {
    Fault fault;
    fault.bus_id = f.bus_id;
    fault.t_on = f.t_on;
    fault.t_off = f.t_on + f.duration;
    fault.admittance = f.admittance;
    const std::size_t idx = net_.add_fault(fault);
    const double h = cfg_.time_step;
    fault_on_.emplace_back(idx, std::round(fault.t_on / h) * h);
    fault_off_.emplace_back(idx, std::round(fault.t_off / h) * h);
}

void Simulator::set_playin(int bus_id, PlayInProfile profile) {
    net_.set_pinned(bus_id, true);
    playin_bus_ = bus_id;
    playin_ = std::move(profile);
}

void Simulator::materialize_case_loads() {
    for (const Bus& b : net_.buses()) {
        if (b.p_load == 0.0 && b.q_load == 0.0) continue;
        StaticLoadParams params;  // pure constant power with the robust low-voltage switch
        params.p1c = 0.0;
        params.p2c = 0.0;
        params.q1c = 0.0;
        params.q2c = 0.0;
        auto load = std::make_shared<StaticLoadComponent>("bus" + std::to_string(b.id) + ".load",
                                                          b.id, params, cfg_.omega_s());
        load->init(b.voltage, b.p_load, b.q_load);
        components_.push_back(std::move(load));
    }
}

void Simulator::build_injections(const std::vector<Phasor>& v, std::vector<Phasor>& inj) const {
    for (const auto& c : components_) inj[net_.index_of(c->bus_id())] += c->norton_injection(v[net_.index_of(c->bus_id())]);
}

void Simulator::refresh_device_admittances() {
    net_.clear_device_admittances();
    for (const auto& c : components_) net_.add_device_admittance(c->bus_id(), c->norton_admittance());
    solver_.mark_dirty();
}

void Simulator::init_generators(const std::vector<std::pair<int, ClassicalGenParams>>& gens) {
    // Required injection at every bus = Y*V minus what the loads inject.
    refresh_device_admittances();
    const std::vector<Phasor> v = net_.voltages();
    std::vector<Phasor> inj(net_.bus_count(), Phasor{0.0, 0.0});
    build_injections(v, inj);
    const std::vector<Phasor> yv = net_.assemble_ybus().multiply(v);

    for (const auto& [bus_id, params] : gens) {
        const std::size_t i = net_.index_of(bus_id);
        auto gen = std::make_shared<ClassicalGen>("bus" + std::to_string(bus_id) + ".gen", bus_id,
                                                  params, cfg_.omega_s());
        gen->init(v[i], yv[i] - inj[i]);
        components_.push_back(std::move(gen));
    }
    refresh_device_admittances();
}

double Simulator::init_residual() {
    refresh_device_admittances();
    return solver_.kirchhoff_residual(
        [this](const std::vector<Phasor>& v, std::vector<Phasor>& inj) { build_injections(v, inj); });
}

void Simulator::pin_playin(double t) {
    if (!playin_bus_) return;
    net_.bus(*playin_bus_).voltage = Phasor{playin_->magnitude(t), 0.0};
}

void Simulator::solve_at(double t) {
    pin_playin(t);
    solver_.solve(
        [this](const std::vector<Phasor>& v, std::vector<Phasor>& inj) { build_injections(v, inj); },
        cfg_.network_tol, cfg_.network_max_iter, t);
    for (const Bus& b : net_.buses()) {
        const double mag = std::abs(b.voltage);
        if (!std::isfinite(mag) || mag > 10.0)
            throw ConvergenceError(t, b.id, mag);
    }
}

TimeSeries Simulator::run() {
    std::vector<std::string> channels;
    for (const Bus& b : net_.buses()) channels.push_back("bus" + std::to_string(b.id) + ".V");
    for (const auto& c : components_)
        for (const auto& name : c->channel_names()) channels.push_back(c->name() + "." + name);
    TimeSeries ts(channels);

    const auto record = [&](double t) {
        const std::vector<Phasor> v = net_.voltages();
        SampleContext ctx{net_, v};
        std::vector<double> row;
        row.reserve(channels.size());
        for (const Phasor& vb : v) row.push_back(std::abs(vb));
        for (const auto& c : components_) c->sample(ctx, row);
        ts.append(t, row);
    };

    const double h = cfg_.time_step;
    const long steps = std::lround(cfg_.t_end / h);

    refresh_device_admittances();
    solve_at(0.0);
    record(0.0);

    // Per-component scratch for the predictor-corrector scheme.
    const std::size_t nc = components_.size();
    std::vector<std::vector<double>> x0(nc), f0(nc), f1(nc), xs(nc);

    for (long step = 0; step < steps; ++step) {
        const double t = step * h;
        const double t_next = (step + 1) * h;

        bool events = false;
        for (const auto& [idx, when] : fault_on_)
            if (!net_.faults()[idx].active && when <= t + 0.5 * h && when >= t - 0.5 * h) {
                net_.faults()[idx].active = true;
                events = true;
            }
        for (const auto& [idx, when] : fault_off_)
            if (net_.faults()[idx].active && when <= t + 0.5 * h && when >= t - 0.5 * h) {
                net_.faults()[idx].active = false;
                events = true;
            }
        if (events) solver_.mark_dirty();

        solve_at(t);
        const std::vector<Phasor> v_now = net_.voltages();

        // predictor
        for (std::size_t i = 0; i < nc; ++i) {
            x0[i] = components_[i]->state();
            const std::size_t n = x0[i].size();
            if (n == 0) continue;
            f0[i].assign(n, 0.0);
            components_[i]->derivatives(x0[i], v_now[net_.index_of(components_[i]->bus_id())],
                                        f0[i]);
            check_finite(f0[i], components_[i]->name());
            xs[i].resize(n);
            for (std::size_t k = 0; k < n; ++k) xs[i][k] = x0[i][k] + h * f0[i][k];
            components_[i]->set_state(xs[i]);
        }

        solve_at(t_next);
        const std::vector<Phasor> v_pred = net_.voltages();

        // corrector
        for (std::size_t i = 0; i < nc; ++i) {
            const std::size_t n = x0[i].size();
            if (n == 0) continue;
            f1[i].assign(n, 0.0);
            components_[i]->derivatives(xs[i], v_pred[net_.index_of(components_[i]->bus_id())],
                                        f1[i]);
            check_finite(f1[i], components_[i]->name());
            for (std::size_t k = 0; k < n; ++k)
                xs[i][k] = x0[i][k] + 0.5 * h * (f0[i][k] + f1[i][k]);
            components_[i]->set_state(xs[i]);
        }

        solve_at(t_next);

        bool admittance_changed = false;
        {
            const std::vector<Phasor> v_final = net_.voltages();
            for (const auto& c : components_)
                admittance_changed |= c->post_process(v_final[net_.index_of(c->bus_id())], h);
        }
        if (admittance_changed) refresh_device_admittances();

        record(t_next);
    }
    return ts;
}

TimeSeries run_simulation(Network& net, std::vector<std::shared_ptr<LoadComponent>> components,
                          const std::vector<FaultSpec>& events, SimConfig cfg) {
    Simulator sim(net, cfg);
    for (auto& c : components) sim.add_component(std::move(c));
    for (const auto& e : events) sim.add_fault(e);
    return sim.run();
}

}  // namespace clmsim
