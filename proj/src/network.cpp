#include "clmsim/network.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

#include "clmsim/errors.hpp"

namespace clmsim {

int Network::add_bus(Bus bus) {
    if (index_.count(bus.id)) throw TopologyError("duplicate bus id " + std::to_string(bus.id));
    index_[bus.id] = buses_.size();
    buses_.push_back(bus);
    return bus.id;
}

void Network::add_branch(Branch branch) {
    if (!has_bus(branch.from_id) || !has_bus(branch.to_id))
        throw TopologyError("branch references unknown bus " + std::to_string(branch.from_id) +
                            "-" + std::to_string(branch.to_id));
    branches_.push_back(branch);
}

void Network::add_shunt(Shunt shunt) {
    (void)index_of(shunt.bus_id);
    shunts_.push_back(shunt);
}

std::size_t Network::add_fault(Fault fault) {
    (void)index_of(fault.bus_id);
    faults_.push_back(fault);
    return faults_.size() - 1;
}

std::size_t Network::index_of(int bus_id) const {
    auto it = index_.find(bus_id);
    if (it == index_.end()) throw TopologyError("unknown bus id " + std::to_string(bus_id));
    return it->second;
}

void Network::set_pinned(int bus_id, bool pinned) {
    (void)index_of(bus_id);
    if (pinned)
        pinned_.insert(bus_id);
    else
        pinned_.erase(bus_id);
}

void Network::clear_device_admittances() { device_y_.clear(); }

void Network::add_device_admittance(int bus_id, Phasor y) {
    (void)index_of(bus_id);
    device_y_[bus_id] += y;
}

ComplexMatrix Network::assemble_ybus() const {
    const std::size_t n = buses_.size();
    ComplexMatrix y(n);
    for (const auto& br : branches_) {
        const std::size_t f = index_of(br.from_id);
        const std::size_t t = index_of(br.to_id);
        const Phasor ys = 1.0 / Phasor{br.r, br.x};
        const Phasor ysh{0.0, 0.5 * br.b_charging};
        const double tap = (br.tap == 0.0) ? 1.0 : br.tap;
        y.at(f, f) += ys / (tap * tap) + ysh;
        y.at(t, t) += ys + ysh;
        y.at(f, t) -= ys / tap;
        y.at(t, f) -= ys / tap;
    }
    for (const auto& sh : shunts_) y.at(index_of(sh.bus_id), index_of(sh.bus_id)) += sh.y;
    for (const auto& [id, dy] : device_y_) y.at(index_of(id), index_of(id)) += dy;
    for (const auto& flt : faults_)
        if (flt.active) y.at(index_of(flt.bus_id), index_of(flt.bus_id)) += flt.admittance;
    return y;
}

std::vector<GrowthResult> Network::grow(const std::vector<GrowthRequest>& requests) {
    for (const auto& req : requests) {
        const Bus& parent = bus(req.parent_bus_id);
        if (parent.is_ghost)
            throw TopologyError("cannot grow ghost bus " + std::to_string(req.parent_bus_id));
        if (parent.partition_owner != req.partition)
            throw TopologyError("bus " + std::to_string(req.parent_bus_id) +
                                " is not owned by partition " + std::to_string(req.partition));
    }

    int max_id = 0;
    for (const auto& b : buses_) max_id = std::max(max_id, b.id);

    // Per-partition counts, then an exclusive prefix sum over ascending
    // partition index fixes each partition's id block.
    std::map<int, int> counts;
    for (const auto& req : requests) counts[req.partition] += 1;
    std::map<int, int> offsets;
    int running = 0;
    for (const auto& [part, cnt] : counts) {
        offsets[part] = running;
        running += cnt;
    }

    std::map<int, int> used;
    std::vector<GrowthResult> results;
    results.reserve(requests.size());
    for (const auto& req : requests) {
        const int slot = offsets[req.partition] + used[req.partition];
        used[req.partition] += 1;
        const int low_id = max_id + 1 + 2 * slot;
        const int load_id = low_id + 1;
        const Bus& parent = bus(req.parent_bus_id);
        Bus low;
        low.id = low_id;
        low.base_kv = parent.base_kv;
        low.voltage = parent.voltage;
        low.partition_owner = req.partition;
        Bus load = low;
        load.id = load_id;
        add_bus(low);
        add_bus(load);
        results.push_back({req.parent_bus_id, low_id, load_id});
    }
    return results;
}

std::vector<Phasor> Network::voltages() const {
    std::vector<Phasor> v;
    v.reserve(buses_.size());
    for (const auto& b : buses_) v.push_back(b.voltage);
    return v;
}

void Network::set_voltages(const std::vector<Phasor>& v) {
    for (std::size_t i = 0; i < buses_.size(); ++i) buses_[i].voltage = v[i];
}

void NetworkSolver::refresh() {
    yfull_ = net_.assemble_ybus();
    free_idx_.clear();
    pinned_idx_.clear();
    for (std::size_t i = 0; i < net_.bus_count(); ++i) {
        if (net_.is_pinned(net_.bus_at(i).id))
            pinned_idx_.push_back(i);
        else
            free_idx_.push_back(i);
    }
    if (free_idx_.empty()) {
        lu_.reset();
        dirty_ = false;
        return;
    }
    ComplexMatrix yff(free_idx_.size());
    for (std::size_t r = 0; r < free_idx_.size(); ++r)
        for (std::size_t c = 0; c < free_idx_.size(); ++c)
            yff.at(r, c) = yfull_.at(free_idx_[r], free_idx_[c]);
    lu_.emplace(yff);
    dirty_ = false;
}

SolveOutcome NetworkSolver::solve(const InjectionFn& injections, double tol, int max_iter,
                                  double t) {
    if (dirty_) refresh();
    const std::size_t n = net_.bus_count();
    std::vector<Phasor> v = net_.voltages();
    std::vector<Phasor> inj(n);
    if (free_idx_.empty()) return {0, 0.0, -1};

    SolveOutcome out;
    for (int pass = 1; pass <= max_iter; ++pass) {
        std::fill(inj.begin(), inj.end(), Phasor{0.0, 0.0});
        injections(v, inj);

        std::vector<Phasor> rhs(free_idx_.size());
        for (std::size_t r = 0; r < free_idx_.size(); ++r) {
            Phasor acc = inj[free_idx_[r]];
            for (std::size_t p : pinned_idx_) acc -= yfull_.at(free_idx_[r], p) * v[p];
            rhs[r] = acc;
        }
        const std::vector<Phasor> vf = lu_->solve(std::move(rhs));

        double dv = 0.0;
        int worst = -1;
        for (std::size_t r = 0; r < free_idx_.size(); ++r) {
            double d = std::abs(vf[r] - v[free_idx_[r]]);
            if (!std::isfinite(d)) d = std::numeric_limits<double>::infinity();
            if (d > dv) {
                dv = d;
                worst = net_.bus_at(free_idx_[r]).id;
            }
            v[free_idx_[r]] = vf[r];
        }
        out = {pass, dv, worst};
        if (dv < tol) {
            net_.set_voltages(v);
            return out;
        }
    }
    net_.set_voltages(v);
    throw ConvergenceError(t, out.worst_bus, out.final_dv);
}

double NetworkSolver::kirchhoff_residual(const InjectionFn& injections) {
    if (dirty_) refresh();
    const std::vector<Phasor> v = net_.voltages();
    std::vector<Phasor> inj(net_.bus_count(), Phasor{0.0, 0.0});
    injections(v, inj);
    const std::vector<Phasor> yv = yfull_.multiply(v);
    double worst = 0.0;
    for (std::size_t i : free_idx_) worst = std::max(worst, std::abs(yv[i] - inj[i]));
    return worst;
}

SolveOutcome solve_network(Network& net, const InjectionFn& injections, double tol, int max_iter) {
    NetworkSolver solver(net);
    return solver.solve(injections, tol, max_iter);
}

}  // namespace clmsim
