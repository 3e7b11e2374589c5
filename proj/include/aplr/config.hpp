#pragma once

#include <filesystem>
#include <optional>

#include "aplr/boost.hpp"
#include "aplr/dataset.hpp"
#include "aplr/smote.hpp"
#include "aplr/tuning.hpp"

namespace aplr {

/// One JSON document driving the whole pipeline: input path, encoding schema,
/// target spec, split fraction, SMOTE settings, tuning grid or fixed
/// hyperparameters, and the root seed every stage derives from.
struct RunConfig {
    std::filesystem::path data;
    EncodingSchema schema;
    TargetSpec target;
    // Alternative to component-based construction: read ready-made 0/1 labels
    // from this raw column (for datasets published in encoded form).
    std::optional<std::string> target_label_column;
    double test_fraction = 0.2;
    bool smote_enabled = true;
    SmoteConfig smote;
    std::optional<TuneGrid> tune;
    Hyperparams hyperparams;
    std::uint64_t seed = 42;
};

RunConfig load_run_config(const std::filesystem::path& path);

/// Standalone documents used by the stage subcommands. Both accept either a
/// full run config or a document holding just the relevant sections.
EncodingSchema load_schema(const std::filesystem::path& config_path);
std::pair<EncodingSchema, TargetSpec> load_schema_and_target(
    const std::filesystem::path& config_path);
TuneGrid load_grid(const std::filesystem::path& path);

/// Canonical fingerprint of a config file (FNV-1a over the parsed,
/// re-serialized document, so formatting differences do not matter).
std::string config_fingerprint(const std::filesystem::path& path);

/// FNV-1a64 of a file's bytes, hex-encoded. Content fingerprint for
/// manifests, not a cryptographic hash.
std::string file_fingerprint(const std::filesystem::path& path);

}  // namespace aplr
