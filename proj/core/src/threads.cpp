#include "dashsvd/threads.hpp"

#include <omp.h>

namespace dashsvd {

namespace {
int initial_max_threads() {
    static const int n = omp_get_max_threads();
    return n;
}
}  // namespace

void set_thread_count(int n) {
    omp_set_num_threads(n > 0 ? n : initial_max_threads());
}

int thread_count() {
    return omp_get_max_threads();
}

}  // namespace dashsvd
