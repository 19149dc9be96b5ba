#ifndef HSEG_PARALLEL_HPP
#define HSEG_PARALLEL_HPP

#ifdef _OPENMP
#include <omp.h>
#endif

namespace hseg {

// threads <= 0 selects the OpenMP default; without OpenMP everything is 1.
inline int resolve_threads(int threads) {
#ifdef _OPENMP
  if (threads > 0) return threads;
  return omp_get_max_threads();
#else
  (void)threads;
  return 1;
#endif
}

}  // namespace hseg

#endif
