#include <iostream>

#include "dfem/acceptance.hpp"

int main() {
    dfem::AcceptanceOptions opts;
    const auto results = dfem::run_acceptance(opts, std::cout);
    return dfem::print_results(results, std::cout) ? 0 : 1;
}
