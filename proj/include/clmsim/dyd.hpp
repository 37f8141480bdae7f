#pragma once

#include <string>
#include <utility>
#include <vector>

#include "clmsim/cmld.hpp"

namespace clmsim {

/// One PSLF-style dynamic-data record, structurally parsed: header tokens
/// followed by ordered key/value pairs, with `/` line continuations folded in.
struct DydRecord {
    std::string model_name;
    int bus_id = 0;
    std::string bus_name;
    double base_kv = 0.0;
    std::string circuit_id;
    std::vector<std::pair<std::string, double>> pairs;
    std::vector<std::pair<int, int>> pair_locations;  // (line, col) per pair
    int first_line = 1;
};

struct CmldParseResult {
    CmldParams params;
    std::vector<std::string> warnings;
};

/// Split a DYD file into raw records (a record spans lines joined by a
/// trailing `/`). A trailing continuation with nothing after it is an error.
[[nodiscard]] std::vector<std::string> split_dyd_records(const std::string& text);

/// Structural parse of one record.
[[nodiscard]] DydRecord parse_dyd_record(const std::string& text);

/// Parse one complete `cmpldw` record into CmldParams. Field interpretations:
/// the record's "Th1" is the thermal time constant, negative mva means
/// |mva| times the bus MW load, repeated motor-block keys are disambiguated
/// by the LFma/LFmb/LFmc/LFmd group leaders. Unknown keys are preserved in
/// extras and reported as warnings; absent known keys fall back to their
/// documented defaults with a warning.
[[nodiscard]] CmldParseResult parse_cmpldw(const std::string& text);

/// Canonical record text; parse(serialize(p)) reproduces p exactly.
[[nodiscard]] std::string serialize_cmpldw(const CmldParams& p);

/// All cmpldw records in a file.
[[nodiscard]] std::vector<CmldParseResult> parse_cmpldw_file(const std::string& text);

}  // namespace clmsim
