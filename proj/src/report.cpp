#include "forcelab/report.hpp"

#include <sstream>

#include "json.hpp"

namespace forcelab {

void suite_report::bump(const std::string& key, std::int64_t dv) {
    for (auto& [k, v] : counts)
        if (k == key) {
            v += dv;
            return;
        }
    counts.emplace_back(key, dv);
}

void suite_report::note(std::string text) { notes.push_back(std::move(text)); }

void suite_report::fail(const std::string& detail) {
    pass = false;
    if (counterexample.empty()) counterexample = detail;
}

std::string suite_report::to_text() const {
    std::ostringstream out;
    out << "suite " << suite << ": " << (pass ? "pass" : "FAIL") << "\n";
    for (const auto& [k, v] : counts) out << "  " << k << " = " << v << "\n";
    for (const auto& n : notes) out << "  note: " << n << "\n";
    if (!counterexample.empty()) out << "  counterexample: " << counterexample << "\n";
    return out.str();
}

namespace {

nlohmann::json report_json(const suite_report& r) {
    nlohmann::json counts = nlohmann::json::object();
    nlohmann::json order = nlohmann::json::array();
    for (const auto& [k, v] : r.counts) {
        counts[k] = v;
        order.push_back(k);
    }
    nlohmann::json j{{"suite", r.suite},
                     {"pass", r.pass},
                     {"counts", counts},
                     {"count_order", order},
                     {"notes", r.notes}};
    if (!r.counterexample.empty()) j["counterexample"] = r.counterexample;
    return j;
}

}  // namespace

std::string report_to_json(const suite_report& r) {
    nlohmann::json j{{"schema", "forcelab-report/1"}, {"reports", nlohmann::json::array({report_json(r)})}};
    return j.dump(2) + "\n";
}

std::string reports_to_json(const std::vector<suite_report>& rs) {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& r : rs) arr.push_back(report_json(r));
    nlohmann::json j{{"schema", "forcelab-report/1"}, {"reports", arr}};
    return j.dump(2) + "\n";
}

}  // namespace forcelab
