#include "degenelab/log.hpp"

#include <cstdlib>
#include <mutex>
#include <string>

#include <spdlog/sinks/stdout_color_sinks.h>

namespace degenelab
{

void configure_logging()
{
    static std::once_flag once;
    std::call_once(once, [] {
        auto logger = spdlog::stderr_color_mt("degenelab");
        spdlog::set_default_logger(logger);
        spdlog::set_pattern("[%l] %v");
        spdlog::level::level_enum level = spdlog::level::warn;
        if (char const* env = std::getenv("DEGENELAB_LOG"))
        {
            std::string const v = env;
            if (v == "error")
            {
                level = spdlog::level::err;
            }
            else if (v == "info")
            {
                level = spdlog::level::info;
            }
            else if (v == "debug")
            {
                level = spdlog::level::debug;
            }
        }
        spdlog::set_level(level);
    });
}

} // namespace degenelab
