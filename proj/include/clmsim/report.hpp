#pragma once

#include <string>

#include "clmsim/cmld.hpp"
#include "clmsim/timeseries.hpp"

namespace clmsim {

/// CSV with a `t,<channel>,...` header and full double precision values.
[[nodiscard]] std::string write_csv(const TimeSeries& ts);

/// Human-readable table of one composite-load initialization.
[[nodiscard]] std::string report_table(const CmldInitReport& r);

/// JSON form, keys matching the report field names.
[[nodiscard]] std::string report_json(const CmldInitReport& r);

}  // namespace clmsim
