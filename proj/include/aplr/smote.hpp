#pragma once

#include <cstdint>
#include <vector>

#include "aplr/types.hpp"

namespace aplr {

struct SmoteConfig {
    int k_neighbors = 5;
    std::uint64_t seed = 42;
    double target_ratio = 1.0;  // minority count after = round(ratio * majority count)

    void validate() const;
};

/// How a synthetic row was built: s = a + u * (b - a) for minority rows a, b.
struct SyntheticProvenance {
    std::size_t seed_row;      // a (index into the input matrix)
    std::size_t neighbor_row;  // b
    double u;
};

struct OversampleResult {
    EncodedMatrix x;
    Labels y;
    std::vector<SyntheticProvenance> synthetic;  // one per appended row
};

/// Balances a binary training set by interpolating between minority rows and
/// their k nearest minority neighbours (Euclidean, ties to the lower row
/// index). Originals come first and unchanged; minority seed rows are visited
/// round-robin in input order until the quota is met. Balanced input is
/// returned as-is.
OversampleResult oversample(const EncodedMatrix& x, const Labels& y, const SmoteConfig& cfg);

}  // namespace aplr
