#pragma once

#include <string_view>

namespace snrkit {

inline constexpr std::string_view kVersion = "0.1.0";
/// Bumped whenever a key of the analyze/bootstrap JSON changes meaning.
inline constexpr int kReportSchemaVersion = 1;

}  // namespace snrkit
