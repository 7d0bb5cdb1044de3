#pragma once

#include <string>

#include "evlab/util.hpp"

namespace evlab {

struct Config {
    u64 dtc_budget = 50'000'000;
    u64 enum_cap = 10'000'000;
    u64 prime_cap = u64(1) << 40;
    u64 seed = 12345;
    std::string output_format = "json";  // json | tsv

    static Config load(const std::string& path);
    // EVLAB_SEED overrides the configured seed
    void apply_env();
};

}  // namespace evlab
