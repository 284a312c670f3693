#pragma once

#include <filesystem>
#include <functional>
#include <string>
#include <string_view>
#include <vector>

#include "capdeg/exact_solvers.hpp"

namespace capdeg {

enum class Comparison { exact, at_least, tolerance };

std::string to_string(Comparison mode);

struct CheckResult {
    std::string target;
    std::string name;  // no spaces
    Comparison mode = Comparison::exact;
    std::string expected;
    std::string observed;
    bool passed = false;
    std::string note;  // free text, may be empty

    friend bool operator==(const CheckResult&, const CheckResult&) = default;
};

struct ReproContext {
    Budget budget;
    std::filesystem::path data_dir;
};

struct ReproTarget {
    std::string id;
    std::string description;
    std::function<std::vector<CheckResult>(const ReproContext&)> run;
};

// Targets in registry order: table1, thm-f3-beta7, thm-f2-beta11, thm-f2-beta39,
// prob-sqrt8, entropy-corner, acyclic-f2.
const std::vector<ReproTarget>& repro_registry();

// Runs the named targets concurrently and returns their checks in registry order.
// "all" selects every target. Throws InvalidArgument for an unknown name.
std::vector<CheckResult> reproduce(const std::vector<std::string>& ids, const ReproContext& context);

// One line per check:
//   check <target> <name> PASS|FAIL mode=<mode> expected=<e> observed=<o> [# note]
std::string render_checks(const std::vector<CheckResult>& checks);
std::vector<CheckResult> parse_checks(std::string_view text);

// One JSON object per line with the same fields.
std::string render_checks_json(const std::vector<CheckResult>& checks);

}  // namespace capdeg
