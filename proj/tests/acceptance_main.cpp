// Acceptance suite runner: one pass/fail line per criterion, nonzero exit on
// any failure. Seed and thread count come from SWITCHLAB_SEED / argv.

#include <cstdlib>
#include <iostream>
#include <string>

#include "switchlab/selftest.hpp"

int main(int argc, char** argv) {
    switchlab::SelfTestOptions opt;
    if (const char* env = std::getenv("SWITCHLAB_SEED")) opt.seed = std::stoull(env);
    for (int i = 1; i < argc; ++i) {
        std::string arg = argv[i];
        if (arg == "--seed" && i + 1 < argc) opt.seed = std::stoull(argv[++i]);
        if (arg == "--threads" && i + 1 < argc) opt.threads = std::atoi(argv[++i]);
    }
    auto results = switchlab::run_acceptance_suite(opt);
    int failures = switchlab::print_acceptance_report(results, std::cout);
    return failures == 0 ? 0 : 1;
}
