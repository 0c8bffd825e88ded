#pragma once

namespace modality {

inline constexpr const char* kToolName = "modality_lens";
inline constexpr const char* kVersion = "0.1.0";

}  // namespace modality
