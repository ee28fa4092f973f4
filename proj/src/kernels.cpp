#include "dcform/kernels.hpp"

#include <atomic>

#if defined(__aarch64__)
#include <arm_neon.h>
#endif

namespace dcform::kernels {

namespace detail {

void row_addmul_scalar(std::uint64_t* y, const std::uint64_t* x,
                       std::uint64_t a, std::size_t n, std::uint64_t m) {
  for (std::size_t i = 0; i < n; ++i) {
    unsigned __int128 t = (unsigned __int128)a * x[i] + y[i];
    y[i] = (std::uint64_t)(t % m);
  }
}

void row_scale_scalar(std::uint64_t* y, std::uint64_t a, std::size_t n,
                      std::uint64_t m) {
  for (std::size_t i = 0; i < n; ++i) {
    unsigned __int128 t = (unsigned __int128)a * y[i];
    y[i] = (std::uint64_t)(t % m);
  }
}

#if defined(__x86_64__)
bool cpu_has_avx2() {
  static const bool has = __builtin_cpu_supports("avx2") &&
                          __builtin_cpu_supports("fma");
  return has;
}
#endif

#if defined(__aarch64__)

// NEON mirrors the AVX2 strategy. AArch64 has native u64<->f64 lane
// conversions, so no bit tricks are needed. Exactness needs a*x < 2^52,
// guaranteed by m < 2^26 and fully reduced inputs.
namespace {

inline uint64x2_t mulmod_u64x2(uint64x2_t xa, std::uint64_t a,
                               float64x2_t inv_m, std::uint64_t m) {
  uint64x2_t av = vdupq_n_u64(a);
  // exact 64-bit product of two < 2^26 values
  uint64x2_t lo = vmull_u32(vmovn_u64(xa), vmovn_u64(av));
  float64x2_t pd = vcvtq_f64_u64(lo);
  float64x2_t qd = vrndmq_f64(vmulq_f64(pd, inv_m));
  float64x2_t md = vdupq_n_f64((double)m);
  // r = p - q*m, exact (integer result, |r| < 2m)
  float64x2_t rd = vfmsq_f64(pd, qd, md);
  int64x2_t r = vcvtq_s64_f64(rd);
  int64x2_t mm = vdupq_n_s64((std::int64_t)m);
  uint64x2_t neg = vcltzq_s64(r);
  r = vaddq_s64(r, vandq_s64(mm, vreinterpretq_s64_u64(neg)));
  uint64x2_t ge = vcgeq_s64(r, mm);
  r = vsubq_s64(r, vandq_s64(mm, vreinterpretq_s64_u64(ge)));
  return vreinterpretq_u64_s64(r);
}

}  // namespace

void row_addmul_neon(std::uint64_t* y, const std::uint64_t* x,
                     std::uint64_t a, std::size_t n, std::uint64_t m) {
  float64x2_t inv_m = vdupq_n_f64(1.0 / (double)m);
  int64x2_t mm = vdupq_n_s64((std::int64_t)m);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    uint64x2_t xv = vld1q_u64(x + i);
    uint64x2_t yv = vld1q_u64(y + i);
    uint64x2_t pr = mulmod_u64x2(xv, a, inv_m, m);
    int64x2_t s = vaddq_s64(vreinterpretq_s64_u64(pr),
                            vreinterpretq_s64_u64(yv));
    uint64x2_t ge = vcgeq_s64(s, mm);
    s = vsubq_s64(s, vandq_s64(mm, vreinterpretq_s64_u64(ge)));
    vst1q_u64(y + i, vreinterpretq_u64_s64(s));
  }
  for (; i < n; ++i) {
    unsigned __int128 t = (unsigned __int128)a * x[i] + y[i];
    y[i] = (std::uint64_t)(t % m);
  }
}

void row_scale_neon(std::uint64_t* y, std::uint64_t a, std::size_t n,
                    std::uint64_t m) {
  float64x2_t inv_m = vdupq_n_f64(1.0 / (double)m);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    uint64x2_t yv = vld1q_u64(y + i);
    vst1q_u64(y + i, mulmod_u64x2(yv, a, inv_m, m));
  }
  for (; i < n; ++i) {
    unsigned __int128 t = (unsigned __int128)a * y[i];
    y[i] = (std::uint64_t)(t % m);
  }
}

#endif  // __aarch64__

}  // namespace detail

namespace {

std::atomic<bool> g_force_scalar{false};

inline bool use_simd(std::uint64_t m) {
  if (g_force_scalar.load(std::memory_order_relaxed)) return false;
  if (m >= detail::kSimdModulusBound) return false;
#if defined(__x86_64__)
  return detail::cpu_has_avx2();
#elif defined(__aarch64__)
  return true;
#else
  return false;
#endif
}

}  // namespace

void force_scalar(bool on) { g_force_scalar.store(on); }
bool scalar_forced() { return g_force_scalar.load(); }

const char* backend_name(std::uint64_t m) {
  if (!use_simd(m)) return "scalar";
#if defined(__x86_64__)
  return "avx2";
#elif defined(__aarch64__)
  return "neon";
#else
  return "scalar";
#endif
}

void row_addmul(std::uint64_t* y, const std::uint64_t* x, std::uint64_t a,
                std::size_t n, std::uint64_t m) {
  if (use_simd(m)) {
#if defined(__x86_64__)
    detail::row_addmul_avx2(y, x, a, n, m);
    return;
#elif defined(__aarch64__)
    detail::row_addmul_neon(y, x, a, n, m);
    return;
#endif
  }
  detail::row_addmul_scalar(y, x, a, n, m);
}

void row_scale(std::uint64_t* y, std::uint64_t a, std::size_t n,
               std::uint64_t m) {
  if (use_simd(m)) {
#if defined(__x86_64__)
    detail::row_scale_avx2(y, a, n, m);
    return;
#elif defined(__aarch64__)
    detail::row_scale_neon(y, a, n, m);
    return;
#endif
  }
  detail::row_scale_scalar(y, a, n, m);
}

}  // namespace dcform::kernels
