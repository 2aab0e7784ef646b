#include "ttp/kernels.hpp"

#include <stdexcept>

namespace ttp::kernels {

namespace detail {

double masked_sum_scalar(const double* values, const std::uint8_t* mask,
                         std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    if (mask[i]) acc += values[i];
  }
  return acc;
}

}  // namespace detail

const char* backend_name(Backend b) {
  switch (b) {
    case Backend::Scalar: return "scalar";
    case Backend::Avx2: return "avx2";
    case Backend::Neon: return "neon";
  }
  return "unknown";
}

namespace {

bool backend_usable(Backend b) {
  switch (b) {
    case Backend::Scalar:
      return true;
    case Backend::Avx2:
#if defined(__x86_64__) || defined(_M_X64)
      return __builtin_cpu_supports("avx2") != 0;
#else
      return false;
#endif
    case Backend::Neon:
#if defined(__aarch64__)
      return true;
#else
      return false;
#endif
  }
  return false;
}

Ops make_ops(Backend b) {
  switch (b) {
    case Backend::Avx2:
#if defined(__x86_64__) || defined(_M_X64)
      return Ops{&detail::masked_sum_avx2, Backend::Avx2};
#else
      break;
#endif
    case Backend::Neon:
#if defined(__aarch64__)
      return Ops{&detail::masked_sum_neon, Backend::Neon};
#else
      break;
#endif
    case Backend::Scalar:
      break;
  }
  return Ops{&detail::masked_sum_scalar, Backend::Scalar};
}

Backend best_backend() {
  if (backend_usable(Backend::Avx2)) return Backend::Avx2;
  if (backend_usable(Backend::Neon)) return Backend::Neon;
  return Backend::Scalar;
}

Ops& mutable_active() {
  static Ops ops = make_ops(best_backend());
  return ops;
}

}  // namespace

std::vector<Backend> available_backends() {
  std::vector<Backend> out{Backend::Scalar};
  if (backend_usable(Backend::Avx2)) out.push_back(Backend::Avx2);
  if (backend_usable(Backend::Neon)) out.push_back(Backend::Neon);
  return out;
}

const Ops& active() { return mutable_active(); }

void force_backend(Backend b) {
  if (!backend_usable(b)) {
    throw std::invalid_argument(std::string("kernel backend unavailable: ") +
                                backend_name(b));
  }
  mutable_active() = make_ops(b);
}

double pair_masked_sum(const double* matrix, std::size_t n,
                       const std::uint8_t* rows, const std::uint8_t* cols) {
  const MaskedSumFn sum = active().masked_sum;
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    if (rows[i]) acc += sum(matrix + i * n, cols, n);
  }
  return acc;
}

}  // namespace ttp::kernels
