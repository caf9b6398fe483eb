#pragma once

namespace ggsel {

inline constexpr const char* kVersion = "1.0.0";
inline constexpr int kReportSchemaVersion = 1;
inline constexpr int kMetricsSchemaVersion = 1;
inline constexpr int kRatesSchemaVersion = 1;

}  // namespace ggsel
