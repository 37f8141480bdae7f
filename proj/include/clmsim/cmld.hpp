#pragma once

#include <map>
#include <memory>
#include <string>
#include <vector>

#include "clmsim/component.hpp"
#include "clmsim/motor3ph.hpp"
#include "clmsim/motorac.hpp"
#include "clmsim/network.hpp"
#include "clmsim/staticload.hpp"

namespace clmsim {

/// Full parameter record of one composite load (cmpldw field set).
struct CmldParams {
    // record header
    int bus_id = 0;
    std::string bus_name;
    double base_kv = 0.0;
    std::string circuit_id;

    double mva = 0.0;  // negative: base = |mva| * bus MW load
    double bss = 0.0;
    double rfdr = 0.0, xfdr = 0.0, fb = 0.0;
    double xxf = 0.0;
    double tfixhs = 1.0, tfixls = 1.0;
    double lrc = 0.0;  // parsed, unused
    double tmin = 0.9, tmax = 1.1, step = 0.00625;
    double vmin = 1.0, vmax = 1.04;
    double tdel = 0.0, ttap = 0.0;    // LTC timing, parsed, initial tap only
    double rcmp = 0.0, xcmp = 0.0;    // parsed, unused
    double fma = 0.0, fmb = 0.0, fmc = 0.0, fmd = 0.0, fel = 0.0;
    double mtya = 0.0, mtyb = 0.0, mtyc = 0.0, mtyd = 0.0;
    ElecLoadParams elec;
    StaticLoadParams stat;
    Motor3Params motor_a, motor_b, motor_c;
    AcMotorParams motor_d;
    std::map<std::string, double> extras;  // unknown record keys, preserved

    void validate() const;
};

struct ComponentAssignment {
    std::string name;
    double p = 0.0;  // system pu
    double q = 0.0;
};

struct CmldInitReport {
    int transmission_bus = 0;
    int low_side_bus = 0;
    int load_bus = 0;
    double tap = 1.0;
    Phasor vls{1.0, 0.0};
    Phasor vlb{1.0, 0.0};
    double bf1 = 0.0;  // always zero; reactive mismatch goes to bf2
    double bf2 = 0.0;
    double plb = 0.0, qlb = 0.0;            // system pu
    double feeder_impedance_scale = 1.0;
    std::vector<ComponentAssignment> components;
};

struct SheddingStage {
    bool enabled = false;
    double threshold = 0.0;  // pu voltage for UV stages, Hz for UF stages
    double delay = 0.0;      // s
    double fraction = 0.0;   // shed fraction when tripped
};

struct SheddingSettings {
    SheddingStage uv1, uv2, uf1, uf2;
    [[nodiscard]] bool any_enabled() const {
        return uv1.enabled || uv2.enabled || uf1.enabled || uf2.enabled;
    }
};

struct CmldInitOptions {
    double system_mva = 100.0;  // only used when the record's mva is positive
    double omega_s = 2.0 * kPi * 60.0;
    double system_frequency = 60.0;
    SheddingSettings shedding;
};

/// Bookkeeping component at the transmission bus: owns no Norton pair of its
/// own, exposes the container channels, and applies the substation-level
/// UV/UF shedding multiplier uniformly to the member components.
class CmldContainer : public LoadComponent {
public:
    CmldContainer(std::string name, int transmission_bus, CmldInitReport report,
                  SheddingSettings shedding, double omega_s, double system_frequency)
        : LoadComponent(std::move(name), transmission_bus),
          report_(std::move(report)),
          shedding_(shedding),
          omega_s_(omega_s),
          f0_(system_frequency) {}

    void add_member(std::shared_ptr<LoadComponent> member) { members_.push_back(std::move(member)); }

    [[nodiscard]] Phasor norton_admittance() const override { return {0.0, 0.0}; }
    [[nodiscard]] Phasor norton_injection(Phasor) const override { return {0.0, 0.0}; }
    bool post_process(Phasor v_bus, double dt) override;

    [[nodiscard]] std::vector<std::string> channel_names() const override {
        return {"Vls", "Vlb", "Tap", "shed_multiplier"};
    }
    void sample(const SampleContext& ctx, std::vector<double>& out) const override;

    [[nodiscard]] const CmldInitReport& report() const { return report_; }
    [[nodiscard]] double shed_multiplier() const { return multiplier_; }

private:
    CmldInitReport report_;
    SheddingSettings shedding_;
    double omega_s_;
    double f0_;
    FrequencyTracker freq_;
    std::vector<std::shared_ptr<LoadComponent>> members_;
    double multiplier_ = 1.0;
    double uv_t1_ = 0.0, uv_t2_ = 0.0, uf_t1_ = 0.0, uf_t2_ = 0.0;
    bool uv1_ = false, uv2_ = false, uf1_ = false, uf2_ = false;
};

struct CmldInstance {
    CmldInitReport report;
    std::shared_ptr<CmldContainer> container;
    std::vector<std::shared_ptr<LoadComponent>> components;  // members, container excluded

    [[nodiscard]] std::vector<std::shared_ptr<LoadComponent>> all() const {
        auto v = components;
        v.push_back(container);
        return v;
    }
};

/// Feeder initialization chain for a candidate tap (5.c)-(5.h).
struct FeederSolution {
    Phasor vls, vlb, i2, i3, i4;
    double plb = 0.0, qlb = 0.0;
};

/// Transformer/feeder voltage chain for one candidate tap; impedances and
/// shunts in system pu.
[[nodiscard]] FeederSolution solve_feeder(Phasor v_lf, Phasor i_lf, double tap, double x_xfr,
                                          double r_fdr, double x_fdr, double b_ss,
                                          const CmldParams& p);

/// Initialize one composite load on buses already created by Network::grow.
/// Reads the replaced power-flow load from the transmission bus, adds the
/// transformer, feeder and shunts, distributes power to the load components
/// and initializes them. The transmission-side draw matches the original
/// power-flow load exactly; the reactive mismatch lands in Bf2 (Bf1 = 0).
[[nodiscard]] CmldInstance init_cmld(Network& net, const GrowthResult& growth,
                                     const CmldParams& p, const CmldInitOptions& opts);

/// Continuous (unrounded) tap aiming for |Vls| = (vmin + vmax) / 2.
[[nodiscard]] double continuous_tap(Phasor v_lf, Phasor i_lf, double x_xfr_sys,
                                    const CmldParams& p);

/// Snap to the tmin + k*step grid and clamp to [tmin, tmax].
[[nodiscard]] double round_tap(double tap, const CmldParams& p);

}  // namespace clmsim
