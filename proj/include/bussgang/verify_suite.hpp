#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include "bussgang/verify.hpp"

namespace bussgang {

/// One named entry of the verification suite. Checks that probe theorem
/// hypotheses which do NOT hold (e.g. Gaussian+Laplace) are expected
/// failures: the suite succeeds when the observed verdict matches the
/// expectation.
struct SuiteCheck {
    std::string name;
    bool expected_pass;
    std::function<CheckReport(std::uint64_t seed, std::int64_t samples, Exec exec)> run;
};

const std::vector<SuiteCheck>& verify_suite();

/// Runs the selected checks (empty = all) and writes one JSON line each.
/// Returns 0 iff every check matched its expected verdict. Unknown names
/// throw std::invalid_argument.
int run_verify_suite(const std::vector<std::string>& names, std::uint64_t seed,
                     std::int64_t samples, Exec exec, std::ostream& out);

}  // namespace bussgang
