#include "curvevar/acceptance.hpp"

#include <cstdlib>
#include <iostream>
#include <string>
#include <vector>

int main(int argc, char** argv)
{
    std::vector<int> ids;
    for (int i = 1; i < argc; ++i) ids.push_back(std::atoi(argv[i]));
    int failed = 0;
    for (int id : ids.empty() ? curvevar::acceptance_ids() : ids) {
        const auto r = curvevar::run_criterion(id);
        std::cout << curvevar::format_result(r) << std::endl;
        if (!r.passed) ++failed;
    }
    std::cout << (failed ? std::to_string(failed) + " criteria failed" : std::string("all criteria passed")) << std::endl;
    return failed ? 1 : 0;
}
