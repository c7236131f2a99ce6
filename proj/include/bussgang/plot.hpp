#pragma once

#include <string>

namespace bussgang {

/// Renders a sweep CSV to a static SVG file.
///   kind "gains":    k_y / k_x / k_n versus the sweep variable
///   kind "capacity": capacity bounds and histogram MI versus the sweep variable
/// Throws std::runtime_error on malformed CSV or unknown kind.
void emit_plot(const std::string& csv_path, const std::string& kind,
               const std::string& out_path);

}  // namespace bussgang
