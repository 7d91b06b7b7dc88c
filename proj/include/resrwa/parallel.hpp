#pragma once

namespace resrwa {

/// How independent work items (candidate fits, columns) are evaluated.
/// SerialReference is the plain loop kept as the baseline for tests and
/// benchmarks; Parallel uses OpenMP when available.
enum class Execution { SerialReference, Parallel };

/// Upper bound on OpenMP threads used by the library. 0 means no cap.
void set_thread_limit(int threads);
int thread_limit();

/// Reads RWA_THREADS from the environment and applies it. Returns the cap
/// that is in effect (0 when unset or invalid).
int apply_thread_limit_from_env();

/// Threads a parallel region will use under the current cap.
int effective_threads();

}  // namespace resrwa
