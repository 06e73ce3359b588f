#include <iostream>

#include "peakon/scenarios.hpp"

// One line per acceptance criterion; exit status 0 iff all pass.
int main() {
    bool ok = true;
    peakon::run_acceptance({}, [&](const peakon::CriterionResult& r) {
        ok = ok && r.passed();
        std::cout << peakon::summary_line(r) << std::endl;
    });
    return ok ? 0 : 1;
}
