#pragma once

#include <spdlog/spdlog.h>

namespace degenelab
{

//! Installs the stderr logger; level from DEGENELAB_LOG (error, info, debug), warn otherwise.
void configure_logging();

} // namespace degenelab
