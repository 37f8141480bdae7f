#include "clmsim/report.hpp"

#include <cstdio>
#include <sstream>

#include "json.hpp"

namespace clmsim {

namespace {
std::string full(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}
}  // namespace

std::string write_csv(const TimeSeries& ts) {
    std::ostringstream out;
    out << "t";
    for (const auto& ch : ts.channels()) out << "," << ch;
    out << "\n";
    for (std::size_t i = 0; i < ts.size(); ++i) {
        out << full(ts.time(i));
        for (double v : ts.row(i)) out << "," << full(v);
        out << "\n";
    }
    return out.str();
}

std::string report_table(const CmldInitReport& r) {
    std::ostringstream out;
    char buf[160];
    out << "composite load at bus " << r.transmission_bus << " (low-side " << r.low_side_bus
        << ", load bus " << r.load_bus << ")\n";
    std::snprintf(buf, sizeof(buf), "  Tap       %10.6f\n", r.tap);
    out << buf;
    std::snprintf(buf, sizeof(buf), "  |Vls|     %10.6f pu   angle %9.5f rad\n", std::abs(r.vls),
                  std::arg(r.vls));
    out << buf;
    std::snprintf(buf, sizeof(buf), "  |Vlb|     %10.6f pu   angle %9.5f rad\n", std::abs(r.vlb),
                  std::arg(r.vlb));
    out << buf;
    std::snprintf(buf, sizeof(buf), "  Bf1       %10.6f pu\n", r.bf1);
    out << buf;
    std::snprintf(buf, sizeof(buf), "  Bf2       %10.6f pu\n", r.bf2);
    out << buf;
    std::snprintf(buf, sizeof(buf), "  Plb, Qlb  %10.6f, %.6f pu\n", r.plb, r.qlb);
    out << buf;
    std::snprintf(buf, sizeof(buf), "  feeder impedance scale %.6f\n", r.feeder_impedance_scale);
    out << buf;
    out << "  components:\n";
    for (const auto& c : r.components) {
        std::snprintf(buf, sizeof(buf), "    %-24s P %10.6f   Q %10.6f\n", c.name.c_str(), c.p,
                      c.q);
        out << buf;
    }
    return out.str();
}

std::string report_json(const CmldInitReport& r) {
    nlohmann::json j;
    j["transmission_bus"] = r.transmission_bus;
    j["low_side_bus"] = r.low_side_bus;
    j["load_bus"] = r.load_bus;
    j["tap"] = r.tap;
    j["vls"] = {{"re", r.vls.real()}, {"im", r.vls.imag()}, {"mag", std::abs(r.vls)}};
    j["vlb"] = {{"re", r.vlb.real()}, {"im", r.vlb.imag()}, {"mag", std::abs(r.vlb)}};
    j["bf1"] = r.bf1;
    j["bf2"] = r.bf2;
    j["plb"] = r.plb;
    j["qlb"] = r.qlb;
    j["feeder_impedance_scale"] = r.feeder_impedance_scale;
    j["components"] = nlohmann::json::array();
    for (const auto& c : r.components)
        j["components"].push_back({{"name", c.name}, {"p", c.p}, {"q", c.q}});
    return j.dump(2);
}

}  // namespace clmsim
