// One line per acceptance criterion; exit status 1 if any fails.
#include <cstdio>
#include <thread>

#include <resonance_forge/acceptance.hpp>

int main() {
    unsigned threads = std::max(1u, std::thread::hardware_concurrency());
    bool all = true;
    rf::run_acceptance(threads, {}, [&](const rf::CriterionResult& r) {
        std::printf("%s\n", rf::format_result(r).c_str());
        std::fflush(stdout);
        all = all && r.pass;
    });
    std::printf("%s\n", all ? "all criteria pass" : "some criteria FAIL");
    return all ? 0 : 1;
}
