#pragma once

namespace crn {

// Serial paths are kept as the reference for the OpenMP kernels.
enum class Execution { Serial, Parallel };

}  // namespace crn
