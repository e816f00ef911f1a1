#include "curvlab/kernels.hpp"

#include <cstdlib>
#include <string>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace curvlab::kernels {

namespace {

inline double q_entry(const CurvTensor& r, int i, int j, int k, int l) {
  const int n = r.dim();
  double square = 0.0;
  double sharp = 0.0;
  for (int p = 0; p < n; ++p)
    for (int q = 0; q < n; ++q) {
      square += r(i, j, p, q) * r(k, l, p, q);
      sharp += r(i, p, k, q) * r(j, p, l, q) - r(i, p, l, q) * r(j, p, k, q);
    }
  return square + 2.0 * sharp;
}

int g_thread_cap = 0;

}  // namespace

Tensor4 q_raw_reference(const CurvTensor& r) {
  const int n = r.dim();
  Tensor4 out(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l) out(i, j, k, l) = q_entry(r, i, j, k, l);
  return out;
}

Tensor4 q_raw_parallel(const CurvTensor& r) {
  const int n = r.dim();
  const int np = n * (n - 1) / 2;
  std::vector<int> first(np), second(np);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      first[pair_index(i, j, n)] = i;
      second[pair_index(i, j, n)] = j;
    }
  Tensor4 out(n);
#pragma omp parallel for schedule(dynamic)
  for (int a = 0; a < np; ++a) {
    const int i = first[a], j = second[a];
    for (int b = a; b < np; ++b) {
      const int k = first[b], l = second[b];
      const double v = q_entry(r, i, j, k, l);
      // Orbit members are distinct per (a, b), so writes never collide.
      out(i, j, k, l) = v;
      out(j, i, k, l) = -v;
      out(i, j, l, k) = -v;
      out(j, i, l, k) = v;
      out(k, l, i, j) = v;
      out(l, k, i, j) = -v;
      out(k, l, j, i) = -v;
      out(l, k, j, i) = v;
    }
  }
  return out;
}

void set_thread_cap(int threads) {
  g_thread_cap = threads > 0 ? threads : 0;
#ifdef _OPENMP
  if (g_thread_cap > 0) omp_set_num_threads(g_thread_cap);
  else omp_set_num_threads(omp_get_num_procs());
#endif
}

void configure_threads() {
  if (const char* env = std::getenv("CURVLAB_THREADS")) {
    try {
      set_thread_cap(std::stoi(env));
    } catch (const std::exception&) {
      set_thread_cap(0);
    }
  }
}

int thread_cap() { return g_thread_cap; }

}  // namespace curvlab::kernels
