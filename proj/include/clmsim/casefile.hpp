#pragma once

#include <optional>
#include <string>
#include <vector>

#include "clmsim/classical_gen.hpp"
#include "clmsim/network.hpp"

namespace clmsim {

struct CaseBus {
    int id = 0;
    double base_kv = 0.0;
    double vm = 1.0;       // solved voltage magnitude, pu
    double va_deg = 0.0;   // solved voltage angle, degrees
    double p_load = 0.0;
    double q_load = 0.0;
    double p_gen = 0.0;    // informational
};

struct CaseBranch {
    int from = 0, to = 0;
    double r = 0.0, x = 0.0, b = 0.0, tap = 0.0;
};

struct CaseGen {
    int bus = 0;
    double h = 3.0, xd_p = 0.2, d = 0.0;
    bool source = false;  // designated slack / play-in bus
};

/// Line-oriented case with a solved power flow: `[BUS] [BRANCH] [GEN]`
/// sections, whitespace-separated numeric fields, `#` comments.
struct CaseFile {
    std::vector<CaseBus> buses;
    std::vector<CaseBranch> branches;
    std::vector<CaseGen> gens;

    [[nodiscard]] std::optional<int> source_bus() const {
        for (const auto& g : gens)
            if (g.source) return g.bus;
        if (!gens.empty()) return gens.front().bus;
        return std::nullopt;
    }
};

[[nodiscard]] CaseFile parse_case(const std::string& text);
[[nodiscard]] std::string serialize_case(const CaseFile& c);

[[nodiscard]] Network build_network(const CaseFile& c);
[[nodiscard]] std::vector<std::pair<int, ClassicalGenParams>> gen_params(const CaseFile& c);

}  // namespace clmsim
