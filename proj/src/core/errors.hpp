#pragma once

#include <stdexcept>
#include <string>

namespace recho {

// File/format violations (raster headers, CSV layout, truncated payloads).
struct FormatError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Invalid or inconsistent run configuration.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Ray tracing / shooting / fast-marching failures.
struct GeometryError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Wave solver failures (CFL violations, blow-up, grid mismatches).
struct SolverError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace recho
