#include "clmsim/dyd.hpp"

#include <cctype>
#include <cstdio>
#include <cstdlib>
#include <map>
#include <set>
#include <sstream>

#include "clmsim/errors.hpp"

namespace clmsim {

namespace {

enum class TokKind { Ident, Number, Quoted, Colon, Equals, Slash, Comment };

struct Token {
    TokKind kind;
    std::string text;
    double num = 0.0;
    int line = 1;
    int col = 1;
};

std::vector<Token> tokenize(const std::string& text) {
    std::vector<Token> out;
    int line = 1, col = 1;
    std::size_t i = 0;
    const auto advance = [&](char c) {
        if (c == '\n') {
            ++line;
            col = 1;
        } else {
            ++col;
        }
    };
    while (i < text.size()) {
        const char c = text[i];
        if (std::isspace(static_cast<unsigned char>(c))) {
            advance(c);
            ++i;
            continue;
        }
        const int tl = line, tc = col;
        if (c == '"') {
            std::string s;
            advance(c);
            ++i;
            bool closed = false;
            while (i < text.size()) {
                const char q = text[i];
                advance(q);
                ++i;
                if (q == '"') {
                    closed = true;
                    break;
                }
                if (q == '\n') break;
                s.push_back(q);
            }
            if (!closed) throw ParseError("unterminated quoted string", tl, tc);
            out.push_back({TokKind::Quoted, s, 0.0, tl, tc});
            continue;
        }
        if (c == '#') {
            std::string s;
            while (i < text.size() && !std::isspace(static_cast<unsigned char>(text[i]))) {
                s.push_back(text[i]);
                advance(text[i]);
                ++i;
            }
            out.push_back({TokKind::Comment, s, 0.0, tl, tc});
            continue;
        }
        if (c == ':' || c == '/' || c == '=') {
            out.push_back({c == ':'   ? Token{TokKind::Colon, ":", 0.0, tl, tc}
                           : c == '/' ? Token{TokKind::Slash, "/", 0.0, tl, tc}
                                      : Token{TokKind::Equals, "=", 0.0, tl, tc}});
            advance(c);
            ++i;
            continue;
        }
        std::string s;
        while (i < text.size()) {
            const char q = text[i];
            if (std::isspace(static_cast<unsigned char>(q)) || q == '"' || q == ':' || q == '/' ||
                q == '=' || q == '#')
                break;
            s.push_back(q);
            advance(q);
            ++i;
        }
        char* end = nullptr;
        const double v = std::strtod(s.c_str(), &end);
        if (end && *end == '\0' && end != s.c_str())
            out.push_back({TokKind::Number, s, v, tl, tc});
        else
            out.push_back({TokKind::Ident, s, 0.0, tl, tc});
    }
    return out;
}

/// Continuations: every `/` must close its line; only the final line may lack one.
void check_line_structure(const std::vector<Token>& toks) {
    for (std::size_t i = 0; i < toks.size(); ++i) {
        if (toks[i].kind != TokKind::Slash) continue;
        if (i + 1 < toks.size() && toks[i + 1].line == toks[i].line)
            throw ParseError("content after line continuation", toks[i].line, toks[i].col);
        if (i + 1 == toks.size())
            throw ParseError("dangling continuation at end of record", toks[i].line, toks[i].col);
    }
    for (std::size_t i = 0; i + 1 < toks.size(); ++i) {
        if (toks[i + 1].line > toks[i].line && toks[i].kind != TokKind::Slash)
            throw ParseError("record ends before its last line (missing continuation?)",
                             toks[i].line, toks[i].col);
    }
}

}  // namespace

std::vector<std::string> split_dyd_records(const std::string& text) {
    std::vector<std::string> records;
    std::string current;
    bool continuing = false;
    std::istringstream in(text);
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        std::string trimmed = line;
        while (!trimmed.empty() && std::isspace(static_cast<unsigned char>(trimmed.back())))
            trimmed.pop_back();
        std::size_t first = 0;
        while (first < trimmed.size() && std::isspace(static_cast<unsigned char>(trimmed[first])))
            ++first;
        trimmed = trimmed.substr(first);
        if (trimmed.empty()) {
            if (continuing) throw ParseError("blank line inside a continued record", line_no, 1);
            continue;
        }
        current += line + "\n";
        if (trimmed.back() == '/') {
            continuing = true;
        } else {
            records.push_back(current);
            current.clear();
            continuing = false;
        }
    }
    if (continuing) throw ParseError("dangling continuation at end of file", line_no, 1);
    return records;
}

DydRecord parse_dyd_record(const std::string& text) {
    const std::vector<Token> toks = tokenize(text);
    if (toks.empty()) throw ParseError("empty record", 1, 1);
    check_line_structure(toks);

    DydRecord rec;
    rec.first_line = toks.front().line;
    std::size_t i = 0;
    const auto next = [&](const char* what) -> const Token& {
        while (i < toks.size() &&
               (toks[i].kind == TokKind::Comment || toks[i].kind == TokKind::Colon ||
                toks[i].kind == TokKind::Slash))
            ++i;
        if (i >= toks.size())
            throw ParseError(std::string("unexpected end of record, expected ") + what,
                             toks.back().line, toks.back().col);
        return toks[i++];
    };

    const Token& model = next("model name");
    if (model.kind != TokKind::Ident)
        throw ParseError("expected model name", model.line, model.col);
    rec.model_name = model.text;
    const Token& bus = next("bus id");
    if (bus.kind != TokKind::Number) throw ParseError("expected bus id", bus.line, bus.col);
    rec.bus_id = static_cast<int>(bus.num);
    const Token& name = next("bus name");
    if (name.kind != TokKind::Quoted) throw ParseError("expected quoted bus name", name.line, name.col);
    rec.bus_name = name.text;
    const Token& kv = next("base kV");
    if (kv.kind != TokKind::Number) throw ParseError("expected base kV", kv.line, kv.col);
    rec.base_kv = kv.num;
    const Token& ckt = next("circuit id");
    if (ckt.kind != TokKind::Quoted)
        throw ParseError("expected quoted circuit id", ckt.line, ckt.col);
    rec.circuit_id = ckt.text;

    while (true) {
        while (i < toks.size() &&
               (toks[i].kind == TokKind::Comment || toks[i].kind == TokKind::Colon ||
                toks[i].kind == TokKind::Slash))
            ++i;
        if (i >= toks.size()) break;
        const Token& key = toks[i++];
        if (key.kind == TokKind::Quoted) {
            const Token& val = next("value");
            if (val.kind != TokKind::Number)
                throw ParseError("missing numeric value after key \"" + key.text + "\"", val.line,
                                 val.col);
            rec.pairs.emplace_back(key.text, val.num);
            rec.pair_locations.emplace_back(key.line, key.col);
        } else if (key.kind == TokKind::Ident) {
            const Token& eq = next("'='");
            if (eq.kind != TokKind::Equals)
                throw ParseError("expected '=' after '" + key.text + "'", eq.line, eq.col);
            const Token& val = next("value");
            if (val.kind != TokKind::Number)
                throw ParseError("missing numeric value after '" + key.text + "='", val.line,
                                 val.col);
            rec.pairs.emplace_back(key.text, val.num);
            rec.pair_locations.emplace_back(key.line, key.col);
        } else {
            throw ParseError("expected a key, got '" + key.text + "'", key.line, key.col);
        }
    }
    return rec;
}

namespace {

enum class Section { Global, MotorA, MotorB, MotorC, MotorD };

struct FieldTable {
    std::map<std::string, double*> fields;
    std::set<std::string> optional;  // present in the map but no absence warning
};

FieldTable global_table(CmldParams& p) {
    FieldTable t;
    t.fields = {
        {"mva", &p.mva},       {"bss", &p.bss},       {"rfdr", &p.rfdr},
        {"xfdr", &p.xfdr},     {"fb", &p.fb},         {"xxf", &p.xxf},
        {"tfixhs", &p.tfixhs}, {"tfixls", &p.tfixls}, {"lrc", &p.lrc},
        {"tmin", &p.tmin},     {"tmax", &p.tmax},     {"step", &p.step},
        {"vmin", &p.vmin},     {"vmax", &p.vmax},     {"tdel", &p.tdel},
        {"ttap", &p.ttap},     {"rcmp", &p.rcmp},     {"xcmp", &p.xcmp},
        {"fma", &p.fma},       {"fmb", &p.fmb},       {"fmc", &p.fmc},
        {"fmd", &p.fmd},       {"fel", &p.fel},       {"pfe", &p.elec.pfe},
        {"vd1", &p.elec.vd1},  {"vd2", &p.elec.vd2},  {"frcel", &p.elec.frcel},
        {"pfs", &p.stat.pfs},  {"p1e", &p.stat.p1e},  {"p1c", &p.stat.p1c},
        {"p2e", &p.stat.p2e},  {"p2c", &p.stat.p2c},  {"pfrq", &p.stat.pfrq},
        {"q1e", &p.stat.q1e},  {"q1c", &p.stat.q1c},  {"q2e", &p.stat.q2e},
        {"q2c", &p.stat.q2c},  {"qfrq", &p.stat.qfrq},{"mtya", &p.mtya},
        {"mtyb", &p.mtyb},     {"mtyc", &p.mtyc},     {"mtyd", &p.mtyd},
    };
    return t;
}

FieldTable motor3_table(Motor3Params& m, const char* leader) {
    FieldTable t;
    t.fields = {
        {leader, &m.lf},
        {"Rs", &m.rs},
        {"Ls", &m.ls},
        {"Lp", &m.lp},
        {"Lpp", &m.lpp},
        {"Tp", &m.tpo},
        {"Tppo", &m.tppo},
        {"H", &m.h},
        {"etrq", &m.etrq},
        {"vtr1", &m.protection[0].vtr},
        {"ttr1", &m.protection[0].ttr},
        {"ftr1", &m.protection[0].ftr},
        {"vrc1", &m.protection[0].vrc},
        {"trc1", &m.protection[0].trc},
        {"vtr2", &m.protection[1].vtr},
        {"ttr2", &m.protection[1].ttr},
        {"ftr2", &m.protection[1].ftr},
        {"vrc2", &m.protection[1].vrc},
        {"trc2", &m.protection[1].trc},
    };
    return t;
}

FieldTable motor_d_table(AcMotorParams& d) {
    FieldTable t;
    t.fields = {
        {"LFmd", &d.lf},          {"CompPF", &d.comp_pf},  {"Vstall", &d.vstall},
        {"Rstall", &d.rstall},    {"Xstall", &d.xstall},   {"Tstall", &d.tstall},
        {"Frst", &d.frst},        {"Vrst", &d.vrst},       {"Trst", &d.trst},
        {"fuvr", &d.fuvr},        {"vtr1", &d.uv_vtr1},    {"ttr1", &d.uv_ttr1},
        {"vtr2", &d.uv_vtr2},     {"ttr2", &d.uv_ttr2},    {"Vc1off", &d.vc1off},
        {"Vc2off", &d.vc2off},    {"Vc1on", &d.vc1on},     {"Vc2on", &d.vc2on},
        {"Th1", &d.tth},          {"Th1t", &d.th1t},       {"Th2t", &d.th2t},
        {"Tv", &d.tv},
        // optional performance-curve overrides
        {"Vbrk", &d.curve.vbrk},  {"Kp1", &d.curve.kp1},   {"Np1", &d.curve.np1},
        {"Kq1", &d.curve.kq1},    {"Nq1", &d.curve.nq1},   {"Kp2", &d.curve.kp2},
        {"Np2", &d.curve.np2},    {"Kq2", &d.curve.kq2},   {"Nq2", &d.curve.nq2},
        {"CmpKpf", &d.curve.cmp_kpf}, {"CmpKqf", &d.curve.cmp_kqf},
    };
    t.optional = {"Vbrk", "Kp1", "Np1", "Kq1", "Nq1", "Kp2",
                  "Np2",  "Kq2", "Nq2", "CmpKpf", "CmpKqf"};
    return t;
}

}  // namespace

CmldParseResult parse_cmpldw(const std::string& text) {
    const DydRecord rec = parse_dyd_record(text);
    if (rec.model_name != "cmpldw")
        throw ParseError("expected a cmpldw record, got '" + rec.model_name + "'", rec.first_line,
                         1);

    CmldParseResult result;
    CmldParams& p = result.params;
    p.bus_id = rec.bus_id;
    p.bus_name = rec.bus_name;
    p.base_kv = rec.base_kv;
    p.circuit_id = rec.circuit_id;

    FieldTable tables[5] = {global_table(p), motor3_table(p.motor_a, "LFma"),
                            motor3_table(p.motor_b, "LFmb"), motor3_table(p.motor_c, "LFmc"),
                            motor_d_table(p.motor_d)};
    const char* section_names[5] = {"global", "motor A", "motor B", "motor C", "motor D"};
    std::set<std::string> seen[5];

    Section section = Section::Global;
    for (std::size_t pair_idx = 0; pair_idx < rec.pairs.size(); ++pair_idx) {
        const auto& [key, value] = rec.pairs[pair_idx];
        if (key == "LFma") section = Section::MotorA;
        else if (key == "LFmb") section = Section::MotorB;
        else if (key == "LFmc") section = Section::MotorC;
        else if (key == "LFmd") section = Section::MotorD;
        const auto si = static_cast<std::size_t>(section);
        auto it = tables[si].fields.find(key);
        if (it == tables[si].fields.end()) {
            p.extras[key] = value;
            result.warnings.push_back("unknown key \"" + key + "\" kept in extras");
            continue;
        }
        if (!seen[si].insert(key).second)
            throw ParseError("duplicate key \"" + key + "\" in " + section_names[si] + " section",
                             rec.pair_locations[pair_idx].first, rec.pair_locations[pair_idx].second);
        *it->second = value;
    }

    // Absent known keys keep their documented defaults; motor blocks are only
    // checked when their group leader appeared.
    const bool opened[5] = {true, seen[1].count("LFma") > 0, seen[2].count("LFmb") > 0,
                            seen[3].count("LFmc") > 0, seen[4].count("LFmd") > 0};
    for (int si = 0; si < 5; ++si) {
        if (!opened[si]) continue;
        for (const auto& [key, ptr] : tables[si].fields) {
            if (seen[si].count(key) || tables[si].optional.count(key)) continue;
            result.warnings.push_back("key \"" + key + "\" absent in " + section_names[si] +
                                      " section, using default " + std::to_string(*ptr));
        }
    }
    return result;
}

namespace {

std::string fmt_num(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

void emit_pairs(std::ostringstream& out, const CmldParams& p,
                const std::vector<std::pair<std::string, const double*>>& pairs) {
    std::size_t col = 0;
    (void)p;
    for (std::size_t i = 0; i < pairs.size(); ++i) {
        out << "\"" << pairs[i].first << "\" " << fmt_num(*pairs[i].second);
        ++col;
        if (i + 1 < pairs.size()) {
            if (col % 4 == 0)
                out << " /\n";
            else
                out << " ";
        }
    }
}

}  // namespace

std::string serialize_cmpldw(const CmldParams& p) {
    std::ostringstream out;
    out << "cmpldw " << p.bus_id << " \"" << p.bus_name << "\" " << fmt_num(p.base_kv) << " \""
        << p.circuit_id << "\" : mva= " << fmt_num(p.mva) << " /\n";

    std::vector<std::pair<std::string, const double*>> pairs = {
        {"bss", &p.bss},       {"rfdr", &p.rfdr},     {"xfdr", &p.xfdr},
        {"fb", &p.fb},         {"xxf", &p.xxf},       {"tfixhs", &p.tfixhs},
        {"tfixls", &p.tfixls}, {"lrc", &p.lrc},       {"tmin", &p.tmin},
        {"tmax", &p.tmax},     {"step", &p.step},     {"vmin", &p.vmin},
        {"vmax", &p.vmax},     {"tdel", &p.tdel},     {"ttap", &p.ttap},
        {"rcmp", &p.rcmp},     {"xcmp", &p.xcmp},     {"fma", &p.fma},
        {"fmb", &p.fmb},       {"fmc", &p.fmc},       {"fmd", &p.fmd},
        {"fel", &p.fel},       {"pfe", &p.elec.pfe},  {"vd1", &p.elec.vd1},
        {"vd2", &p.elec.vd2},  {"frcel", &p.elec.frcel}, {"pfs", &p.stat.pfs},
        {"p1e", &p.stat.p1e},  {"p1c", &p.stat.p1c},  {"p2e", &p.stat.p2e},
        {"p2c", &p.stat.p2c},  {"pfrq", &p.stat.pfrq},{"q1e", &p.stat.q1e},
        {"q1c", &p.stat.q1c},  {"q2e", &p.stat.q2e},  {"q2c", &p.stat.q2c},
        {"qfrq", &p.stat.qfrq},{"mtya", &p.mtya},     {"mtyb", &p.mtyb},
        {"mtyc", &p.mtyc},     {"mtyd", &p.mtyd},
    };
    const auto motor_pairs = [](const Motor3Params& m, const char* leader) {
        return std::vector<std::pair<std::string, const double*>>{
            {leader, &m.lf},
            {"Rs", &m.rs},
            {"Ls", &m.ls},
            {"Lp", &m.lp},
            {"Lpp", &m.lpp},
            {"Tp", &m.tpo},
            {"Tppo", &m.tppo},
            {"H", &m.h},
            {"etrq", &m.etrq},
            {"vtr1", &m.protection[0].vtr},
            {"ttr1", &m.protection[0].ttr},
            {"ftr1", &m.protection[0].ftr},
            {"vrc1", &m.protection[0].vrc},
            {"trc1", &m.protection[0].trc},
            {"vtr2", &m.protection[1].vtr},
            {"ttr2", &m.protection[1].ttr},
            {"ftr2", &m.protection[1].ftr},
            {"vrc2", &m.protection[1].vrc},
            {"trc2", &m.protection[1].trc},
        };
    };
    for (const auto& mp : motor_pairs(p.motor_a, "LFma")) pairs.push_back(mp);
    for (const auto& mp : motor_pairs(p.motor_b, "LFmb")) pairs.push_back(mp);
    for (const auto& mp : motor_pairs(p.motor_c, "LFmc")) pairs.push_back(mp);

    const AcMotorParams& d = p.motor_d;
    const std::vector<std::pair<std::string, const double*>> d_pairs = {
        {"LFmd", &d.lf},        {"CompPF", &d.comp_pf}, {"Vstall", &d.vstall},
        {"Rstall", &d.rstall},  {"Xstall", &d.xstall},  {"Tstall", &d.tstall},
        {"Frst", &d.frst},      {"Vrst", &d.vrst},      {"Trst", &d.trst},
        {"fuvr", &d.fuvr},      {"vtr1", &d.uv_vtr1},   {"ttr1", &d.uv_ttr1},
        {"vtr2", &d.uv_vtr2},   {"ttr2", &d.uv_ttr2},   {"Vc1off", &d.vc1off},
        {"Vc2off", &d.vc2off},  {"Vc1on", &d.vc1on},    {"Vc2on", &d.vc2on},
        {"Th1", &d.tth},        {"Th1t", &d.th1t},      {"Th2t", &d.th2t},
        {"Tv", &d.tv},
    };
    for (const auto& dp : d_pairs) pairs.push_back(dp);
    for (const auto& [k, v] : p.extras) pairs.emplace_back(k, &v);

    emit_pairs(out, p, pairs);
    out << "\n";
    return out.str();
}

std::vector<CmldParseResult> parse_cmpldw_file(const std::string& text) {
    std::vector<CmldParseResult> out;
    for (const std::string& rec : split_dyd_records(text)) out.push_back(parse_cmpldw(rec));
    return out;
}

}  // namespace clmsim
