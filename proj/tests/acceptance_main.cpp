// Acceptance suite: runs every gate check with its pinned parameters and
// prints one pass/fail line per criterion.

#include <chrono>
#include <iostream>

#include "modlie/verify.hpp"

int main() {
    using namespace modlie;
    VerifyConfig cfg;
    cfg.seed = 20210905;
    cfg.workers = 4;
    size_t failed = 0, ran = 0;
    for (const auto& check : verify_registry()) {
        if (!check.acceptance) continue;
        auto start = std::chrono::steady_clock::now();
        CheckResult res;
        try {
            res = check.run(cfg);
        } catch (const std::exception& e) {
            res.pass = false;
            res.detail = std::string("exception: ") + e.what();
        }
        auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                      std::chrono::steady_clock::now() - start)
                      .count();
        ++ran;
        if (!res.pass) ++failed;
        std::cout << (res.pass ? "PASS" : "FAIL") << "  " << check.suite << "/" << check.name << "  ("
                  << ms << " ms)\n      " << check.statement << "\n";
        if (!res.pass) std::cout << "      " << res.detail << "\n";
    }
    std::cout << (failed == 0 ? "ACCEPTED" : "REJECTED") << ": " << (ran - failed) << "/" << ran
              << " criteria passed\n";
    return failed == 0 ? 0 : 1;
}
