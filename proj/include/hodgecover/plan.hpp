#pragma once

#include <map>
#include <string>
#include <vector>

namespace hodgecover {

/// Per-layer compression decision.
///
/// Redirect plans (HodgeCover, saliency, random, no-triangle) keep survivors
/// bit-exact and fold each dropped expert's router logit into redirect[i].
/// Merge plans (union-find ablations) additionally list `groups`; each group
/// is replaced by its frequency-weighted merge, represented by its
/// lowest-index member.
struct SurvivorPlan {
    int layer = 0;
    int n = 0;
    int k = 0;
    std::vector<int> survivors;             // sorted ascending, size k
    std::map<int, int> redirect;            // non-survivor -> survivor
    std::vector<std::vector<int>> groups;   // merge groups, empty for redirect plans
    std::string method;
    double phi = 0.0;
    double alpha = 0.0;
    std::map<std::string, double> params;

    bool is_merge_plan() const { return !groups.empty(); }

    /// Throws DataError unless |S| = k, pi is total on V \ S and maps into S.
    void validate() const;

    /// Keeps everything: S = V, empty redirect.
    static SurvivorPlan identity(int n, int layer = 0);
};

}  // namespace hodgecover
