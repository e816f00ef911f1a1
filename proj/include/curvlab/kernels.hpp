#pragma once

// Compute kernels with an OpenMP implementation and a serial reference that
// evaluates the defining formula literally. The reference stays in the library
// so tests and the benchmark can compare the two.

#include "curvlab/tensor.hpp"

namespace curvlab::kernels {

/// Raw quadratic term before Bianchi projection, every one of the n^4 entries
/// evaluated independently from
///   sum_pq R_ijpq R_klpq + 2 sum_pq (R_ipkq R_jplq - R_iplq R_jpkq).
Tensor4 q_raw_reference(const CurvTensor& r);

/// Same quantity; evaluates one representative per symmetry orbit in parallel
/// over bivector pairs and fills the orbit.
Tensor4 q_raw_parallel(const CurvTensor& r);

/// Applies the CURVLAB_THREADS environment cap, if set.
void configure_threads();
/// Caps OpenMP threads; 0 restores the default.
void set_thread_cap(int threads);
int thread_cap();

}  // namespace curvlab::kernels
