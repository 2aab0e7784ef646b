#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

// Masked reduction kernels behind the dense accumulation path.  A vertex set
// is a byte mask (0/1) over dense vertex ids; the weighted adjacency matrix is
// row-major with a zero diagonal.  Every kernel has a scalar reference
// implementation plus SIMD variants selected once at startup from the CPU the
// process runs on; a specific backend can be forced for equivalence tests.
//
// SIMD variants accumulate in vector lanes, so they may differ from the
// scalar reference by summation order only (each selected element enters the
// sum exactly once, untouched).

namespace ttp::kernels {

enum class Backend { Scalar, Avx2, Neon };

const char* backend_name(Backend b);

// Sum of values[i] over indices with mask[i] != 0.
using MaskedSumFn = double (*)(const double* values, const std::uint8_t* mask,
                               std::size_t n);

struct Ops {
  MaskedSumFn masked_sum;
  Backend backend;
};

// Backends usable on this machine (always contains Scalar).
std::vector<Backend> available_backends();

// Currently selected kernel set.  Defaults to the best available backend.
const Ops& active();

// Force a specific backend; throws std::invalid_argument if unavailable.
// Not safe to call while kernels are in use on other threads.
void force_backend(Backend b);

// Σ_{i: rows[i]} Σ_{j: cols[j]} matrix[i*n + j], inner loop via masked_sum.
// With disjoint masks over a symmetric zero-diagonal matrix this is the total
// weight between the two vertex sets, each unordered pair counted once.
double pair_masked_sum(const double* matrix, std::size_t n,
                       const std::uint8_t* rows, const std::uint8_t* cols);

namespace detail {
double masked_sum_scalar(const double* values, const std::uint8_t* mask,
                         std::size_t n);
#if defined(__x86_64__) || defined(_M_X64)
double masked_sum_avx2(const double* values, const std::uint8_t* mask,
                       std::size_t n);
#endif
#if defined(__aarch64__)
double masked_sum_neon(const double* values, const std::uint8_t* mask,
                       std::size_t n);
#endif
}  // namespace detail

}  // namespace ttp::kernels
