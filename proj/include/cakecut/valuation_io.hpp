#pragma once

#include "cakecut/division.hpp"

#include <iosfwd>
#include <map>
#include <string>
#include <vector>

namespace cakecut {

struct input_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ValuationProfile {
    std::vector<std::string> names;
    std::vector<ValueMeasure> measures;

    int index_of(const std::string& name) const;
};

// Text format:
//   agents: <n>
//   agent <name>: <b0> <d1> <b1> <d2> ... <bk>
// with rationals as p/q or integers, breakpoints strictly increasing from 0
// to 1 and nonnegative densities. Total mass must be exactly 1 unless
// `normalize` is set. Lines starting with '#' are ignored.
ValuationProfile parse_valuations(std::istream& in, bool normalize);
ValuationProfile parse_valuations_file(const std::string& path, bool normalize);
std::string format_valuations(const ValuationProfile& profile);

struct ReportOptions {
    bool machine = false;
    std::string mode;
};

// Renders an allocation either human-readable or as the line-oriented
// machine format (key=value, exact rationals as p/q).
std::string render_report(const ValuationProfile& profile, const Allocation& al,
                          const ReportOptions& opts);

// Re-parses a machine report; used to check the exact round trip.
std::map<std::string, std::string> parse_machine_report(const std::string& text);

}  // namespace cakecut
