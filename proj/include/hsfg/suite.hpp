#ifndef HSFG_SUITE_HPP
#define HSFG_SUITE_HPP

#include "hsfg/textio.hpp"

namespace hsfg {

struct CriterionResult {
    int number = 0;
    std::string name;
    bool pass = true;
    std::string detail;               // first failing case, when any
    std::vector<std::string> records; // deterministic structured lines
};

/// Runs the whole acceptance list. Every expected value is pinned in code;
/// the seed only drives the randomized property instances.
std::vector<CriterionResult> run_acceptance(uint64_t seed);

/// The structured output of `suite acceptance`: one status line per
/// criterion plus its records, byte-identical for a fixed seed.
std::string acceptance_report(const std::vector<CriterionResult> &results);

} // namespace hsfg

#endif
