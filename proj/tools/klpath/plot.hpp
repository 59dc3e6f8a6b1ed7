#pragma once

#include <filesystem>
#include <string>

namespace klpath::cli {

/// SVG figure for a path CSV (j,t,re,im), a sample CSV (seed,t,re,im), a
/// moment report (log-log points and fitted line) or a law report (quantile
/// CDFs of path and series). Throws InvalidArgument for anything else.
std::string render_plot(const std::filesystem::path& input);

}  // namespace klpath::cli
