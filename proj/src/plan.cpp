#include "hodgecover/plan.hpp"

#include "hodgecover/errors.hpp"

#include <algorithm>
#include <numeric>
#include <string>

namespace hodgecover {

void SurvivorPlan::validate() const {
    if (n < 1) throw DataError("plan has no experts");
    if (k < 1 || k > n) throw DataError("plan k must lie in [1, n]");
    if (static_cast<int>(survivors.size()) != k) throw DataError("plan lists " + std::to_string(survivors.size()) +
                                                                 " survivors but k = " + std::to_string(k));
    for (std::size_t s = 0; s < survivors.size(); ++s) {
        if (survivors[s] < 0 || survivors[s] >= n) throw DataError("survivor index out of range");
        if (s > 0 && survivors[s - 1] >= survivors[s]) throw DataError("survivors must be strictly increasing");
    }
    auto is_survivor = [&](int i) { return std::binary_search(survivors.begin(), survivors.end(), i); };
    for (const auto& [dropped, target] : redirect) {
        if (dropped < 0 || dropped >= n) throw DataError("redirect source out of range");
        if (is_survivor(dropped)) throw DataError("redirect source " + std::to_string(dropped) + " is a survivor");
        if (!is_survivor(target)) throw DataError("redirect target " + std::to_string(target) + " is not a survivor");
    }
    if (static_cast<int>(redirect.size()) != n - k) throw DataError("redirect must cover every non-survivor");

    if (groups.empty()) return;
    std::vector<int> owner(static_cast<std::size_t>(n), -1);
    if (static_cast<int>(groups.size()) != k) throw DataError("merge plan needs one group per survivor");
    for (std::size_t g = 0; g < groups.size(); ++g) {
        const auto& group = groups[g];
        if (group.empty() || !std::is_sorted(group.begin(), group.end())) throw DataError("merge groups must be sorted");
        if (group.front() != survivors[g]) throw DataError("merge group representative must be its lowest member");
        for (int m : group) {
            if (m < 0 || m >= n || owner[m] != -1) throw DataError("merge groups must partition the experts");
            owner[m] = static_cast<int>(g);
            if (m != group.front() && redirect.at(m) != group.front()) {
                throw DataError("merge group member must redirect to its representative");
            }
        }
    }
}

SurvivorPlan SurvivorPlan::identity(int n, int layer) {
    SurvivorPlan p;
    p.layer = layer;
    p.n = n;
    p.k = n;
    p.survivors.resize(static_cast<std::size_t>(n));
    std::iota(p.survivors.begin(), p.survivors.end(), 0);
    p.method = "identity";
    return p;
}

}  // namespace hodgecover
