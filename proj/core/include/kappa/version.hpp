#pragma once

namespace kappa {

inline constexpr int kVersionMajor = 1;
inline constexpr int kVersionMinor = 0;
inline constexpr int kVersionPatch = 0;
inline constexpr const char* kVersionString = "1.0.0";

// Schema tag stamped into every machine-readable report.
inline constexpr const char* kReportSchema = "kappa-forge/1";

}  // namespace kappa
