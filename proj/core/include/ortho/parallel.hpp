#pragma once

namespace ortho {

/// Caps the number of worker threads used for row-parallel loops and Eigen
/// products. Values < 1 are ignored.
void set_max_threads(int threads);

/// Reads ORTHO_THREADS from the environment and applies it. Returns the
/// value applied, or 0 when the variable is unset or invalid.
int configure_threads_from_env();

int max_threads();

}  // namespace ortho
