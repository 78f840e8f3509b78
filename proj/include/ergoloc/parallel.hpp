#pragma once

namespace ergoloc {

/// Worker count for the OpenMP kernels: ERGOLOC_THREADS if set to a positive
/// integer, otherwise the OpenMP default.
int worker_count();

}  // namespace ergoloc
