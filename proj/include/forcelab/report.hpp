#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace forcelab {

// Outcome of one verification suite: ordered counters, a pass flag, and the
// first counterexample by instance order.  Reports never carry timing, so
// repeated runs serialize identically.
struct suite_report {
    std::string suite;
    bool pass = true;
    std::vector<std::pair<std::string, std::int64_t>> counts;
    std::vector<std::string> notes;
    std::string counterexample;

    void bump(const std::string& key, std::int64_t dv = 1);
    void note(std::string text);
    void fail(const std::string& detail);
    std::string to_text() const;
};

// Renders reports as versioned JSON; implemented in report.cpp with the
// vendored JSON library.
std::string report_to_json(const suite_report& r);
std::string reports_to_json(const std::vector<suite_report>& rs);

}  // namespace forcelab
