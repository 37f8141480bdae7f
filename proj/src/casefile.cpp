#include "clmsim/casefile.hpp"

#include <cstdio>
#include <sstream>

#include "clmsim/errors.hpp"

namespace clmsim {

namespace {

std::vector<std::string> split_fields(const std::string& line) {
    std::vector<std::string> out;
    std::istringstream in(line);
    std::string tok;
    while (in >> tok) out.push_back(tok);
    return out;
}

double to_num(const std::string& s, int line_no) {
    char* end = nullptr;
    const double v = std::strtod(s.c_str(), &end);
    if (!end || *end != '\0' || end == s.c_str())
        throw ParseError("expected a number, got '" + s + "'", line_no, 1);
    return v;
}

}  // namespace

CaseFile parse_case(const std::string& text) {
    CaseFile c;
    enum class Section { None, Bus, Branch, Gen } section = Section::None;
    std::istringstream in(text);
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const std::size_t hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        const std::vector<std::string> f = split_fields(line);
        if (f.empty()) continue;
        if (f[0] == "[BUS]") {
            section = Section::Bus;
            continue;
        }
        if (f[0] == "[BRANCH]") {
            section = Section::Branch;
            continue;
        }
        if (f[0] == "[GEN]") {
            section = Section::Gen;
            continue;
        }
        if (f[0].front() == '[') throw ParseError("unknown section " + f[0], line_no, 1);

        switch (section) {
            case Section::None:
                throw ParseError("data before any section header", line_no, 1);
            case Section::Bus: {
                if (f.size() != 7)
                    throw ParseError("bus row needs 7 fields (id kV Vm Va P Q Pgen)", line_no, 1);
                CaseBus b;
                b.id = static_cast<int>(to_num(f[0], line_no));
                b.base_kv = to_num(f[1], line_no);
                b.vm = to_num(f[2], line_no);
                b.va_deg = to_num(f[3], line_no);
                b.p_load = to_num(f[4], line_no);
                b.q_load = to_num(f[5], line_no);
                b.p_gen = to_num(f[6], line_no);
                c.buses.push_back(b);
                break;
            }
            case Section::Branch: {
                if (f.size() != 6)
                    throw ParseError("branch row needs 6 fields (from to r x b tap)", line_no, 1);
                CaseBranch br;
                br.from = static_cast<int>(to_num(f[0], line_no));
                br.to = static_cast<int>(to_num(f[1], line_no));
                br.r = to_num(f[2], line_no);
                br.x = to_num(f[3], line_no);
                br.b = to_num(f[4], line_no);
                br.tap = to_num(f[5], line_no);
                c.branches.push_back(br);
                break;
            }
            case Section::Gen: {
                if (f.size() != 4 && f.size() != 5)
                    throw ParseError("gen row needs 4-5 fields (bus H Xdp D [source])", line_no, 1);
                CaseGen g;
                g.bus = static_cast<int>(to_num(f[0], line_no));
                g.h = to_num(f[1], line_no);
                g.xd_p = to_num(f[2], line_no);
                g.d = to_num(f[3], line_no);
                if (f.size() == 5) g.source = to_num(f[4], line_no) != 0.0;
                c.gens.push_back(g);
                break;
            }
        }
    }
    if (c.buses.empty()) throw ParseError("no buses", line_no, 1);
    return c;
}

std::string serialize_case(const CaseFile& c) {
    std::ostringstream out;
    const auto num = [](double v) {
        char buf[40];
        std::snprintf(buf, sizeof(buf), "%.17g", v);
        return std::string(buf);
    };
    out << "[BUS]\n# id base_kV Vm Va_deg P_load Q_load P_gen\n";
    for (const auto& b : c.buses)
        out << b.id << " " << num(b.base_kv) << " " << num(b.vm) << " " << num(b.va_deg) << " "
            << num(b.p_load) << " " << num(b.q_load) << " " << num(b.p_gen) << "\n";
    out << "[BRANCH]\n# from to r x b tap\n";
    for (const auto& br : c.branches)
        out << br.from << " " << br.to << " " << num(br.r) << " " << num(br.x) << " " << num(br.b)
            << " " << num(br.tap) << "\n";
    out << "[GEN]\n# bus H Xd_p D source\n";
    for (const auto& g : c.gens)
        out << g.bus << " " << num(g.h) << " " << num(g.xd_p) << " " << num(g.d) << " "
            << (g.source ? 1 : 0) << "\n";
    return out.str();
}

Network build_network(const CaseFile& c) {
    Network net;
    for (const auto& b : c.buses) {
        Bus bus;
        bus.id = b.id;
        bus.base_kv = b.base_kv;
        bus.voltage = polar_pu(b.vm, b.va_deg * kPi / 180.0);
        bus.p_load = b.p_load;
        bus.q_load = b.q_load;
        bus.p_gen = b.p_gen;
        net.add_bus(bus);
    }
    for (const auto& br : c.branches) {
        Branch branch;
        branch.from_id = br.from;
        branch.to_id = br.to;
        branch.r = br.r;
        branch.x = br.x;
        branch.b_charging = br.b;
        branch.tap = br.tap;
        net.add_branch(branch);
    }
    for (const auto& g : c.gens) (void)net.index_of(g.bus);
    return net;
}

std::vector<std::pair<int, ClassicalGenParams>> gen_params(const CaseFile& c) {
    std::vector<std::pair<int, ClassicalGenParams>> out;
    for (const auto& g : c.gens) out.emplace_back(g.bus, ClassicalGenParams{g.xd_p, g.h, g.d});
    return out;
}

}  // namespace clmsim
