// AVX2 kernels, compiled with -mavx2 -mfma in CMake; callers gate on
// cpu_has_avx2() at runtime.

#if defined(__x86_64__)

#include <immintrin.h>

#include <cstddef>
#include <cstdint>

namespace dcform::kernels::detail {

namespace {

// Bit pattern of the double 2^52; OR-ing it onto an integer < 2^52 and
// subtracting 2^52 converts u64 -> f64 exactly, and the reverse trick
// converts an integer-valued double in [0, 2^52) back.
const __m256i kMagicInt = _mm256_set1_epi64x(0x4330000000000000LL);
const __m256d kMagicDbl = _mm256_set1_pd(4503599627370496.0);  // 2^52

inline __m256d u64_to_f64(__m256i v) {
  return _mm256_sub_pd(_mm256_castsi256_pd(_mm256_or_si256(v, kMagicInt)),
                       kMagicDbl);
}

inline __m256i f64_to_u64(__m256d d) {
  return _mm256_sub_epi64(_mm256_castpd_si256(_mm256_add_pd(d, kMagicDbl)),
                          kMagicInt);
}

// (a * x) mod m per 64-bit lane. Requires a, x < m < 2^26: the product
// is < 2^52, the double quotient estimate is off by at most one, and
// the fnmadd residue is an exact integer in (-m, 2m).
inline __m256i mulmod4(__m256i xv, __m256i av, __m256d inv_m, __m256d md,
                       __m256i mi) {
  __m256i prod = _mm256_mul_epu32(xv, av);
  __m256d pd = u64_to_f64(prod);
  __m256d qd = _mm256_floor_pd(_mm256_mul_pd(pd, inv_m));
  __m256d rd = _mm256_fnmadd_pd(qd, md, pd);
  // correct into [0, m) in the double domain
  __m256d lt0 = _mm256_cmp_pd(rd, _mm256_setzero_pd(), _CMP_LT_OQ);
  rd = _mm256_add_pd(rd, _mm256_and_pd(lt0, md));
  __m256d gem = _mm256_cmp_pd(rd, md, _CMP_GE_OQ);
  rd = _mm256_sub_pd(rd, _mm256_and_pd(gem, md));
  __m256i r = f64_to_u64(rd);
  (void)mi;
  return r;
}

}  // namespace

void row_addmul_avx2(std::uint64_t* y, const std::uint64_t* x,
                     std::uint64_t a, std::size_t n, std::uint64_t m) {
  const __m256i av = _mm256_set1_epi64x((long long)a);
  const __m256d inv_m = _mm256_set1_pd(1.0 / (double)m);
  const __m256d md = _mm256_set1_pd((double)m);
  const __m256i mi = _mm256_set1_epi64x((long long)m);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256i xv = _mm256_loadu_si256((const __m256i*)(x + i));
    __m256i yv = _mm256_loadu_si256((const __m256i*)(y + i));
    __m256i pr = mulmod4(xv, av, inv_m, md, mi);
    __m256i s = _mm256_add_epi64(pr, yv);
    // s < 2m < 2^27: one conditional subtract, signed compare is safe
    __m256i ge = _mm256_or_si256(_mm256_cmpgt_epi64(s, mi),
                                 _mm256_cmpeq_epi64(s, mi));
    s = _mm256_sub_epi64(s, _mm256_and_si256(ge, mi));
    _mm256_storeu_si256((__m256i*)(y + i), s);
  }
  for (; i < n; ++i) {
    unsigned __int128 t = (unsigned __int128)a * x[i] + y[i];
    y[i] = (std::uint64_t)(t % m);
  }
}

void row_scale_avx2(std::uint64_t* y, std::uint64_t a, std::size_t n,
                    std::uint64_t m) {
  const __m256i av = _mm256_set1_epi64x((long long)a);
  const __m256d inv_m = _mm256_set1_pd(1.0 / (double)m);
  const __m256d md = _mm256_set1_pd((double)m);
  const __m256i mi = _mm256_set1_epi64x((long long)m);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256i yv = _mm256_loadu_si256((const __m256i*)(y + i));
    _mm256_storeu_si256((__m256i*)(y + i), mulmod4(yv, av, inv_m, md, mi));
  }
  for (; i < n; ++i) {
    unsigned __int128 t = (unsigned __int128)a * y[i];
    y[i] = (std::uint64_t)(t % m);
  }
}

}  // namespace dcform::kernels::detail

#endif  // __x86_64__
