#include "avix/core/log.hpp"

#include <spdlog/sinks/stdout_sinks.h>
#include <spdlog/spdlog.h>

namespace avix {

spdlog::logger& log() {
  static const std::shared_ptr<spdlog::logger> instance = [] {
    auto existing = spdlog::get("avix");
    if (existing) return existing;
    auto logger = spdlog::stderr_logger_mt("avix");
    logger->set_pattern("[%l] %v");
    logger->set_level(spdlog::level::warn);
    return logger;
  }();
  return *instance;
}

}  // namespace avix
