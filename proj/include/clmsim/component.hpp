#pragma once

#include <span>
#include <string>
#include <vector>

#include "clmsim/network.hpp"
#include "clmsim/phasor.hpp"

namespace clmsim {

struct SampleContext {
    const Network& net;
    const std::vector<Phasor>& voltages;
    [[nodiscard]] Phasor v(int bus_id) const { return voltages[net.index_of(bus_id)]; }
};

/// Lifecycle contract shared by every dynamic device on the network:
/// initialize from the power flow, expose derivatives for the
/// predictor-corrector integrator, provide a Norton pair for the network
/// solution, and post-process protections once per converged step.
///
/// norton_admittance() must stay constant between post_process calls; the
/// network matrix is only refactorized when post_process reports a change.
class LoadComponent {
public:
    LoadComponent(std::string name, int bus_id) : name_(std::move(name)), bus_id_(bus_id) {}
    virtual ~LoadComponent() = default;

    [[nodiscard]] const std::string& name() const { return name_; }
    [[nodiscard]] int bus_id() const { return bus_id_; }

    // Differential states; components without dynamics keep the default empty set.
    [[nodiscard]] virtual std::vector<double> state() const { return {}; }
    virtual void set_state(std::span<const double> /*x*/) {}
    virtual void derivatives(std::span<const double> /*x*/, Phasor /*v_bus*/,
                             std::span<double> /*out*/) const {}

    /// Device admittance added to the bus diagonal of Y.
    [[nodiscard]] virtual Phasor norton_admittance() const = 0;
    /// Current injected into the bus at the candidate voltage, excluding the
    /// Y*V term (negative for loads, positive for sources).
    [[nodiscard]] virtual Phasor norton_injection(Phasor v_iterate) const = 0;

    /// Protection / status update after network convergence; called once per
    /// step. Returns true when the Norton admittance changed.
    virtual bool post_process(Phasor /*v_bus*/, double /*dt*/) { return false; }

    [[nodiscard]] virtual std::vector<std::string> channel_names() const { return {}; }
    virtual void sample(const SampleContext& /*ctx*/, std::vector<double>& /*out*/) const {}

    /// Uniform multiplier from the owning container (substation shedding).
    void set_external_scale(double s) { external_scale_ = s; }
    [[nodiscard]] double external_scale() const { return external_scale_; }

protected:
    /// Grid-side complex power drawn through the Norton pair at voltage v.
    [[nodiscard]] Phasor drawn_power(Phasor v) const {
        const Phasor i_drawn = norton_admittance() * v - norton_injection(v);
        return v * std::conj(i_drawn);
    }

    std::string name_;
    int bus_id_ = 0;
    double external_scale_ = 1.0;
};

/// First-order-filtered estimate of bus frequency deviation (pu) from the
/// voltage angle derivative; zero while the angle holds still.
class FrequencyTracker {
public:
    void update(Phasor v, double dt, double omega_s, double tau = 0.05);
    [[nodiscard]] double deviation_pu() const { return df_; }

private:
    bool primed_ = false;
    double prev_angle_ = 0.0;
    double df_ = 0.0;
};

}  // namespace clmsim
