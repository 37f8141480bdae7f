#pragma once

#include <memory>
#include <optional>

#include "clmsim/classical_gen.hpp"
#include "clmsim/component.hpp"
#include "clmsim/config.hpp"
#include "clmsim/network.hpp"
#include "clmsim/playin.hpp"
#include "clmsim/timeseries.hpp"

namespace clmsim {

struct FaultSpec {
    int bus_id = 0;
    double t_on = 0.0;
    double duration = 0.0;
    Phasor admittance{1e7, -1e7};
};

/// Fixed-step dynamic simulation: per step, solve the network with Norton
/// injections, predictor integration, re-solve, corrector, re-solve, then
/// post-process protections before advancing. Event times snap to the
/// nearest step boundary.
class Simulator {
public:
    Simulator(Network& net, SimConfig cfg);

    void add_component(std::shared_ptr<LoadComponent> c) { components_.push_back(std::move(c)); }
    void add_fault(const FaultSpec& f);
    void set_playin(int bus_id, PlayInProfile profile);

    /// Wrap every remaining static case load into a robust constant-power
    /// component so faulted buses stay solvable.
    void materialize_case_loads();

    /// Anchor a classical generator at each [GEN] bus so it supplies exactly
    /// the current the solved power flow requires there.
    void init_generators(const std::vector<std::pair<int, ClassicalGenParams>>& gens);

    /// Network residual at the current voltages with everything installed.
    [[nodiscard]] double init_residual();

    [[nodiscard]] TimeSeries run();

    [[nodiscard]] const std::vector<std::shared_ptr<LoadComponent>>& components() const {
        return components_;
    }

private:
    void refresh_device_admittances();
    void pin_playin(double t);
    void solve_at(double t);
    void build_injections(const std::vector<Phasor>& v, std::vector<Phasor>& inj) const;

    Network& net_;
    SimConfig cfg_;
    NetworkSolver solver_;
    std::vector<std::shared_ptr<LoadComponent>> components_;
    std::vector<std::pair<std::size_t, double>> fault_on_;   // fault index, snapped time
    std::vector<std::pair<std::size_t, double>> fault_off_;
    std::optional<int> playin_bus_;
    std::optional<PlayInProfile> playin_;
};

/// Convenience wrapper matching the operation-level contract.
[[nodiscard]] TimeSeries run_simulation(Network& net,
                                        std::vector<std::shared_ptr<LoadComponent>> components,
                                        const std::vector<FaultSpec>& events, SimConfig cfg);

}  // namespace clmsim
