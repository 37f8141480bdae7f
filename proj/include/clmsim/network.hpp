#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <set>
#include <string>
#include <unordered_map>
#include <vector>

#include "clmsim/linalg.hpp"
#include "clmsim/phasor.hpp"

namespace clmsim {

// Sign conventions used throughout:
//   Y_bus * V = I_inj, with I_inj the net current injected INTO each bus.
//   Device (Norton) admittances sit on the diagonal of Y_bus; the associated
//   source currents appear on the right-hand side. A load drawing
//   I = Y*V + I_src contributes +Y to the diagonal and -I_src to the RHS;
//   a generator contributes +Y and +Y*E to the RHS.

struct Bus {
    int id = 0;
    double base_kv = 0.0;
    Phasor voltage{1.0, 0.0};  // solved power-flow value on input, working value during simulation
    double p_load = 0.0;       // static case load, system pu (removed when a CLM grows here)
    double q_load = 0.0;
    double p_gen = 0.0;        // informational; dynamic injections are recomputed at init
    int partition_owner = 0;
    bool is_ghost = false;
};

struct Branch {
    int from_id = 0;
    int to_id = 0;
    double r = 0.0;
    double x = 0.0;
    double b_charging = 0.0;  // total line charging, split half per end
    double tap = 0.0;         // off-nominal ratio on the FROM side; 0 means 1.0
};

struct Shunt {
    int bus_id = 0;
    Phasor y{0.0, 0.0};
};

struct Fault {
    int bus_id = 0;
    double t_on = 0.0;
    double t_off = 0.0;
    Phasor admittance{1e7, -1e7};
    bool active = false;
};

struct GrowthRequest {
    int partition = 0;
    int parent_bus_id = 0;
};

struct GrowthResult {
    int parent_bus_id = 0;
    int low_side_id = 0;
    int load_bus_id = 0;
};

class Network {
public:
    int add_bus(Bus bus);
    void add_branch(Branch branch);
    void add_shunt(Shunt shunt);
    std::size_t add_fault(Fault fault);

    [[nodiscard]] std::size_t bus_count() const { return buses_.size(); }
    [[nodiscard]] bool has_bus(int id) const { return index_.count(id) > 0; }
    [[nodiscard]] std::size_t index_of(int bus_id) const;
    [[nodiscard]] Bus& bus(int bus_id) { return buses_[index_of(bus_id)]; }
    [[nodiscard]] const Bus& bus(int bus_id) const { return buses_[index_of(bus_id)]; }
    [[nodiscard]] Bus& bus_at(std::size_t idx) { return buses_[idx]; }
    [[nodiscard]] const Bus& bus_at(std::size_t idx) const { return buses_[idx]; }
    [[nodiscard]] const std::vector<Bus>& buses() const { return buses_; }
    [[nodiscard]] const std::vector<Branch>& branches() const { return branches_; }
    [[nodiscard]] std::vector<Fault>& faults() { return faults_; }

    /// Pin a bus voltage (play-in source); pinned buses are Schur-eliminated
    /// from the network solve and keep whatever voltage is stored on them.
    void set_pinned(int bus_id, bool pinned);
    [[nodiscard]] bool is_pinned(int bus_id) const { return pinned_.count(bus_id) > 0; }
    [[nodiscard]] const std::set<int>& pinned_buses() const { return pinned_; }

    /// Per-bus Norton admittance of attached devices (components, generators).
    void clear_device_admittances();
    void add_device_admittance(int bus_id, Phasor y);

    /// Dense nodal admittance matrix including branches, shunts, device
    /// admittances and active fault admittances.
    [[nodiscard]] ComplexMatrix assemble_ybus() const;

    /// Partition-aware growth: two new buses per request (low-side, then load
    /// bus), ids above the global maximum, blocks ordered by partition index
    /// then submission order. Requests on ghost or foreign-owned buses are
    /// rejected. Branches are added separately by the caller.
    std::vector<GrowthResult> grow(const std::vector<GrowthRequest>& requests);

    [[nodiscard]] std::vector<Phasor> voltages() const;
    void set_voltages(const std::vector<Phasor>& v);

private:
    std::vector<Bus> buses_;
    std::vector<Branch> branches_;
    std::vector<Shunt> shunts_;
    std::vector<Fault> faults_;
    std::unordered_map<int, std::size_t> index_;
    std::unordered_map<int, Phasor> device_y_;
    std::set<int> pinned_;
};

/// Iterate-dependent injections: fill `inj` (indexed like Network buses) with
/// the net Norton current injected into each bus at candidate voltages `v`.
using InjectionFn = std::function<void(const std::vector<Phasor>& v, std::vector<Phasor>& inj)>;

struct SolveOutcome {
    int iterations = 0;
    double final_dv = 0.0;
    int worst_bus = -1;
};

/// Fixed-point Norton-injection solver over a cached LU of the free-bus block.
class NetworkSolver {
public:
    explicit NetworkSolver(Network& net) : net_(net) {}

    /// Invalidate the cached factorization (topology, admittance or fault change).
    void mark_dirty() { dirty_ = true; }

    /// Iterate V <- Y^-1 I(V) until max |dV| < tol. Voltages are read from and
    /// written back to the network. `t` is only used for diagnostics.
    SolveOutcome solve(const InjectionFn& injections, double tol, int max_iter, double t = 0.0);

    /// Infinity norm of Y*V - I(V) over free buses at the current voltages.
    [[nodiscard]] double kirchhoff_residual(const InjectionFn& injections);

private:
    void refresh();

    Network& net_;
    bool dirty_ = true;
    ComplexMatrix yfull_;
    std::vector<std::size_t> free_idx_;
    std::vector<std::size_t> pinned_idx_;
    std::optional<LuFactors> lu_;
};

/// One-shot convenience wrapper around NetworkSolver.
SolveOutcome solve_network(Network& net, const InjectionFn& injections, double tol, int max_iter);

}  // namespace clmsim
