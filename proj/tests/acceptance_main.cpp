// Acceptance suite: runs every verification criterion at its stated
// tolerance and prints one pass/fail line per criterion.

#include "eqvidx/index_reports.hpp"

#include <chrono>
#include <iostream>

int main(int argc, char** argv) {
    using namespace std::chrono;
    eqvidx::Config cfg;
    cfg.no_cache = true;
    for (int i = 1; i < argc; ++i)
        if (std::string(argv[i]) == "--quick") cfg.quick = true;

    const auto t0 = steady_clock::now();
    const eqvidx::VerifySummary sum = eqvidx::verify_suite(cfg, std::cout);
    const double secs = duration<double>(steady_clock::now() - t0).count();
    std::cout << "total time: " << secs << " s\n";
    return sum.all_pass ? 0 : 1;
}
