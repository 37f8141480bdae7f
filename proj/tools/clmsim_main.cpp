#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "clmsim/dyd.hpp"
#include "clmsim/errors.hpp"
#include "clmsim/report.hpp"
#include "clmsim/scenarios.hpp"

using namespace clmsim;

namespace {

constexpr int kExitParse = 2;
constexpr int kExitInit = 3;
constexpr int kExitConvergence = 4;

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in.good()) throw SimError("cannot open '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_output(const std::string& path, const std::string& content) {
    if (path.empty() || path == "-") {
        std::cout << content;
        return;
    }
    std::ofstream out(path);
    if (!out.good()) throw SimError("cannot write '" + path + "'");
    out << content;
}

PlayInProfile parse_knots(const std::string& text) {
    if (text.empty()) return PlayInProfile::sag();
    std::vector<std::pair<double, double>> knots;
    std::istringstream in(text);
    std::string item;
    while (std::getline(in, item, ',')) {
        const std::size_t colon = item.find(':');
        if (colon == std::string::npos)
            throw SimError("bad play-in knot '" + item + "', expected t:v");
        knots.emplace_back(std::stod(item.substr(0, colon)), std::stod(item.substr(colon + 1)));
    }
    return PlayInProfile(knots);
}

FaultSpec parse_fault(const std::string& text) {
    std::istringstream in(text);
    std::string bus, t_on, dur;
    if (!std::getline(in, bus, ':') || !std::getline(in, t_on, ':') || !std::getline(in, dur))
        throw SimError("bad fault spec '" + text + "', expected BUS:T_ON:DUR");
    FaultSpec f;
    f.bus_id = std::stoi(bus);
    f.t_on = std::stod(t_on);
    f.duration = std::stod(dur);
    return f;
}

TimeSeries filter_channels(const TimeSeries& ts, const std::string& spec) {
    if (spec.empty()) return ts;
    std::vector<std::string> wanted;
    std::istringstream in(spec);
    std::string item;
    while (std::getline(in, item, ',')) wanted.push_back(item);
    std::vector<std::string> names;
    std::vector<std::size_t> cols;
    for (std::size_t c = 0; c < ts.channels().size(); ++c)
        for (const auto& w : wanted)
            if (ts.channels()[c].find(w) != std::string::npos) {
                names.push_back(ts.channels()[c]);
                cols.push_back(c);
                break;
            }
    TimeSeries out(names);
    for (std::size_t r = 0; r < ts.size(); ++r) {
        std::vector<double> row;
        row.reserve(cols.size());
        for (std::size_t c : cols) row.push_back(ts.row(r)[c]);
        out.append(ts.time(r), row);
    }
    return out;
}

std::vector<CmldParams> load_records(const std::string& dyd_path, const std::string& bus_list,
                                     std::ostream& diag) {
    std::vector<CmldParams> records;
    for (auto& parsed : parse_cmpldw_file(read_file(dyd_path))) {
        for (const auto& w : parsed.warnings) diag << "warning: " << w << "\n";
        records.push_back(parsed.params);
    }
    if (!bus_list.empty()) {
        std::vector<int> buses;
        std::istringstream in(bus_list);
        std::string item;
        while (std::getline(in, item, ',')) buses.push_back(std::stoi(item));
        if (buses.size() != records.size())
            throw SimError("--bus list size does not match the number of dyd records");
        for (std::size_t i = 0; i < records.size(); ++i) records[i].bus_id = buses[i];
    }
    return records;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"WECC composite load model simulation engine"};
    app.require_subcommand(1);

    std::string case_path, dyd_path, out_path, channels, bus_list;
    std::string fault_spec, knots, component = "motorac", report_json_path;
    double tend = 10.0, dt = 0.005;
    bool json_report = false;

    auto add_common = [&](CLI::App* cmd) {
        cmd->add_option("--case", case_path, "case file")->required();
        cmd->add_option("--dyd", dyd_path, "cmpldw dynamic-data file")->required();
        cmd->add_option("--tend", tend, "simulation horizon, s");
        cmd->add_option("--dt", dt, "integration step, s");
        cmd->add_option("--out", out_path, "output path ('-' = stdout)");
        cmd->add_option("--channels", channels, "comma-separated channel name filters");
    };

    CLI::App* playin = app.add_subcommand("playin", "play a voltage profile into one component");
    add_common(playin);
    playin->add_option("--component", component,
                       "motor3|motorb|motorc|motorac|static|static-cp|static-ci|elec");
    playin->add_option("--playin", knots, "profile knots t:v,... (default: the 1.0-0.5-1.0 sag)");

    CLI::App* run = app.add_subcommand("run", "grow composite loads and run a fault scenario");
    add_common(run);
    run->add_option("--bus", bus_list, "comma-separated buses overriding the record bus ids");
    run->add_option("--fault", fault_spec, "fault BUS:T_ON:DUR");
    run->add_option("--report-json", report_json_path, "write init reports as json");

    CLI::App* init_report = app.add_subcommand("init-report", "initialize composite loads only");
    add_common(init_report);
    init_report->add_option("--bus", bus_list,
                            "comma-separated buses overriding the record bus ids");
    init_report->add_flag("--json", json_report, "emit json instead of the table");

    CLI11_PARSE(app, argc, argv);

    try {
        const CaseFile case_file = parse_case(read_file(case_path));
        SimConfig cfg;
        cfg.t_end = tend;
        cfg.time_step = dt;

        if (playin->parsed()) {
            const auto records = load_records(dyd_path, "", std::cerr);
            const auto which = playin_component_from_name(component);
            if (!which) throw SimError("unknown component '" + component + "'");
            const TimeSeries ts =
                cmd_playin(case_file, records.front(), *which, parse_knots(knots), cfg);
            write_output(out_path, write_csv(filter_channels(ts, channels)));
        } else if (run->parsed()) {
            const auto records = load_records(dyd_path, bus_list, std::cerr);
            RunOptions opts;
            opts.cfg = cfg;
            if (!fault_spec.empty()) opts.fault = parse_fault(fault_spec);
            opts.report_sink = [](const CmldInitReport& rep) { std::cerr << report_table(rep); };
            const RunResult result = cmd_run(case_file, records, opts);
            if (!report_json_path.empty()) {
                std::string all = "[\n";
                for (std::size_t i = 0; i < result.reports.size(); ++i)
                    all += report_json(result.reports[i]) +
                           (i + 1 < result.reports.size() ? ",\n" : "\n");
                all += "]\n";
                write_output(report_json_path, all);
            }
            write_output(out_path, write_csv(filter_channels(result.series, channels)));
        } else if (init_report->parsed()) {
            const auto records = load_records(dyd_path, bus_list, std::cerr);
            RunOptions opts;
            opts.cfg = cfg;
            const auto reports = cmd_init_report(case_file, records, opts);
            std::string out;
            for (const auto& rep : reports)
                out += json_report ? report_json(rep) + "\n" : report_table(rep);
            write_output(out_path, out);
        }
        return 0;
    } catch (const ParseError& e) {
        std::cerr << "parse error: " << e.what() << "\n";
        return kExitParse;
    } catch (const InitError& e) {
        std::cerr << "init error: " << e.what() << "\n";
        return kExitInit;
    } catch (const ConvergenceError& e) {
        std::cerr << "convergence error: " << e.what() << "\n";
        return kExitConvergence;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
