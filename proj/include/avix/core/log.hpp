#pragma once

#include <spdlog/logger.h>

namespace avix {

// Library-wide logger ("avix"), stderr sink. Warnings cover dropped tracks,
// skipped pairs and similar recoverable conditions.
spdlog::logger& log();

}  // namespace avix
