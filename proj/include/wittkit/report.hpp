#pragma once

// Verification suites and their machine/human readable reports.

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "wittkit/presentation.hpp"

namespace wittkit {

struct CheckResult {
    std::string id;
    std::string status;  // "pass" | "fail" | "rejected" | "excluded"
    bool exhaustive = true;
    std::string detail;
    std::map<std::string, std::string> data;  // witnesses, counterexamples, orders
    double seconds = 0.0;                     // emitted only with timings enabled
};

struct Report {
    static constexpr int schema_version = 1;
    std::string suite;
    std::map<std::string, std::string> params;
    std::uint64_t seed = 0;
    std::vector<CheckResult> checks;

    bool all_passed() const;
    bool rejected() const;
    std::string to_json(bool with_timings) const;
    std::string to_markdown(bool with_timings) const;
};

struct SuiteOptions {
    std::uint32_t p = 2, n = 2, d = 2, r = 2;
    std::optional<std::string> algebra;  // presentation text
    std::uint64_t seed = 0;
    std::uint64_t guard = 0;  // 0: keep the global default
};

Report run_suite(const std::string& name, const SuiteOptions& opt);
std::vector<std::string> suite_names();

}  // namespace wittkit
