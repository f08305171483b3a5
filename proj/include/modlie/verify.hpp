#pragma once

#include <functional>
#include <iosfwd>

#include "modlie/semidirect.hpp"
#include "modlie/zassenhaus.hpp"

namespace modlie {

struct VerifyConfig {
    uint64_t seed = 20210905;
    uint32_t workers = 1;
};

struct CheckResult {
    bool pass = false;
    std::string detail;
};

struct Check {
    std::string suite;        // scalars | cartan | restricted | automorphisms | semidirect | zassenhaus
    std::string name;
    std::string statement;    // the identity or bound being verified
    bool acceptance = false;  // member of the acceptance gate
    std::function<CheckResult(const VerifyConfig&)> run;
};

const std::vector<Check>& verify_registry();

struct VerifySummary {
    size_t ran = 0;
    size_t failed = 0;
};

// suite == "all" runs everything; suite == "acceptance" runs the gate.
VerifySummary run_verify(const VerifyConfig& cfg, const std::string& suite, std::ostream& out,
                         bool json);

}  // namespace modlie
