#pragma once

namespace dashsvd {

// Sets the number of OpenMP threads used by all parallel kernels.
// n <= 0 restores the runtime default (all available cores).
void set_thread_count(int n);

// Current number of threads a parallel region would use.
int thread_count();

}  // namespace dashsvd
