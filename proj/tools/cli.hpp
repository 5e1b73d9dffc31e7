#pragma once

#include "hodgecover/io.hpp"
#include "hodgecover/moe.hpp"
#include "hodgecover/pipeline.hpp"

#include <cstdint>
#include <ostream>
#include <string>
#include <vector>

namespace hodgecover::cli {

inline constexpr const char* kToolName = "hodgecover";
inline constexpr const char* kToolVersion = "0.1.0";

enum ExitCode : int { kOk = 0, kUsage = 1, kData = 2 };

struct RunConfig {
    SynthParams model;
    int layers = 4;
    int corpus_size = 2048;
    std::uint64_t corpus_seed = 42;
    std::string method = "hodgecover";
    double rate = 0.5;
    std::string allocator = "uniform";
    SelectorParams selector;
    double r1 = 0.20;
    double r_total = 0.66;
    std::string out = "run";

    std::uint64_t heldout_seed() const { return corpus_seed + 1; }
    json to_json() const;
    /// Missing keys keep their current values. Throws DataError on bad types or values.
    void merge(const json& j);
    void check() const;
};

/// Entry point shared by the executable and the tests. Returns the exit code.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace hodgecover::cli
