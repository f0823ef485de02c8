#include "textcomp/rng.hpp"

#include <algorithm>
#include <set>

namespace textcomp {

std::vector<std::uint64_t> sample_distinct(std::mt19937_64& rng, std::uint64_t n,
                                           std::uint64_t k) {
    std::set<std::uint64_t> chosen;
    for (std::uint64_t j = n - k; j < n; ++j) {
        std::uint64_t t = uniform_below(rng, j + 1);
        if (!chosen.insert(t).second) chosen.insert(j);
    }
    return {chosen.begin(), chosen.end()};
}

}  // namespace textcomp
