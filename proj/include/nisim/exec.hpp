#pragma once

namespace nisim {

/// Selects the serial reference kernel or its OpenMP counterpart. Both
/// produce bitwise-identical results.
enum class Exec { Serial, Parallel };

/// Caps OpenMP parallelism; 0 restores the runtime default.
void set_thread_limit(int threads);

}  // namespace nisim
