#pragma once

namespace ksforge {

inline constexpr const char* kVersion = "1.0.0";
inline constexpr int kReportSchema = 1;

}  // namespace ksforge
