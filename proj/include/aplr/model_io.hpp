#pragma once

#include <filesystem>
#include <string>

#include "aplr/boost.hpp"

namespace aplr {

/// Versioned JSON model document. Doubles are written with shortest
/// round-trip formatting, so save -> load -> predict is bit-exact.
std::string model_to_json(const AplrModel& model);
AplrModel model_from_json(const std::string& text);

void save_model(const std::filesystem::path& path, const AplrModel& model);
AplrModel load_model(const std::filesystem::path& path);

}  // namespace aplr
