#pragma once

namespace ftl {

inline constexpr const char* kVersion = "0.3.0";

/// Version of the built-in test-function catalog. Bumped whenever the catalog
/// contents change, so stored reports stay comparable.
inline constexpr int kPhiCatalogVersion = 1;

} // namespace ftl
