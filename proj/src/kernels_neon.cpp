// NEON variant of the masked reduction kernel (aarch64 baseline feature).

#if defined(__aarch64__)

#include <arm_neon.h>

#include "ttp/kernels.hpp"

namespace ttp::kernels::detail {

double masked_sum_neon(const double* values, const std::uint8_t* mask,
                       std::size_t n) {
  float64x2_t acc = vdupq_n_f64(0.0);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    uint64x2_t lanes = vdupq_n_u64(0);
    lanes = vsetq_lane_u64(mask[i], lanes, 0);
    lanes = vsetq_lane_u64(mask[i + 1], lanes, 1);
    // Nonzero byte -> all-ones lane, then select by bitwise AND.
    uint64x2_t sel = vtstq_u64(lanes, vdupq_n_u64(~0ull));
    float64x2_t vals = vld1q_f64(values + i);
    float64x2_t picked =
        vreinterpretq_f64_u64(vandq_u64(vreinterpretq_u64_f64(vals), sel));
    acc = vaddq_f64(acc, picked);
  }
  double total = vgetq_lane_f64(acc, 0) + vgetq_lane_f64(acc, 1);
  for (; i < n; ++i) {
    if (mask[i]) total += values[i];
  }
  return total;
}

}  // namespace ttp::kernels::detail

#endif  // aarch64
