#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "clmsim/casefile.hpp"
#include "clmsim/cmld.hpp"
#include "clmsim/config.hpp"
#include "clmsim/playin.hpp"
#include "clmsim/simulator.hpp"
#include "clmsim/timeseries.hpp"

namespace clmsim {

/// Which component a play-in run exercises at the load bus.
enum class PlayinComponent {
    Motor3A,
    Motor3B,
    Motor3C,
    MotorAc,
    StaticZip,  // record coefficients as parsed
    StaticCp,   // pure constant power (robust switch at V_CP_min)
    StaticCi,   // pure constant current (robust switch at V_CI_min)
    ElecLoad,
};

[[nodiscard]] std::optional<PlayinComponent> playin_component_from_name(const std::string& name);

/// Two-bus play-in arrangement: the case's source bus is pinned to the given
/// voltage profile and the chosen component consumes the load-bus MW. The
/// component is initialized self-consistently against the solved network
/// before the clock starts.
[[nodiscard]] TimeSeries cmd_playin(const CaseFile& case_file, const CmldParams& params,
                                    PlayinComponent which, const PlayInProfile& profile,
                                    SimConfig cfg);

struct RunResult {
    TimeSeries series;
    std::vector<CmldInitReport> reports;
};

struct RunOptions {
    SimConfig cfg;
    std::optional<FaultSpec> fault;
    SheddingSettings shedding;
    double init_residual_limit = 1e-6;
    /// Invoked per composite load as soon as it initializes, so reports are
    /// available even when the equivalence check aborts the run.
    std::function<void(const CmldInitReport&)> report_sink;
};

/// Full system run: grow one composite load per record (batched growth, ids
/// per the partition rule), initialize, verify power-flow equivalence, wrap
/// remaining case loads, anchor the generators, then simulate.
[[nodiscard]] RunResult cmd_run(const CaseFile& case_file,
                                const std::vector<CmldParams>& records, const RunOptions& opts);

/// Growth + initialization only; returns the reports without simulating.
[[nodiscard]] std::vector<CmldInitReport> cmd_init_report(const CaseFile& case_file,
                                                          const std::vector<CmldParams>& records,
                                                          const RunOptions& opts);

}  // namespace clmsim
