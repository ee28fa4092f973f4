#pragma once

// Modular vector kernels: the inner loops of echelonization, series
// multiplication and matrix products. All values are fully reduced
// residues in [0, m). A scalar reference implementation always exists;
// AVX2 (x86-64) and NEON (aarch64) variants are selected at runtime for
// moduli small enough that the float64 reduction trick is exact
// (m < 2^26). The variants are equivalence-tested against the scalar
// reference in tests/test_kernels.cpp.

#include <cstddef>
#include <cstdint>

namespace dcform::kernels {

// y[i] = (y[i] + a * x[i]) mod m
void row_addmul(std::uint64_t* y, const std::uint64_t* x, std::uint64_t a,
                std::size_t n, std::uint64_t m);

// y[i] = (a * y[i]) mod m
void row_scale(std::uint64_t* y, std::uint64_t a, std::size_t n,
               std::uint64_t m);

// Name of the backend that row_addmul would use for this modulus:
// "avx2", "neon" or "scalar".
const char* backend_name(std::uint64_t m);

// Force the scalar path regardless of CPU support (used by the
// equivalence tests and the --no-simd flag).
void force_scalar(bool on);
bool scalar_forced();

namespace detail {

void row_addmul_scalar(std::uint64_t* y, const std::uint64_t* x,
                       std::uint64_t a, std::size_t n, std::uint64_t m);
void row_scale_scalar(std::uint64_t* y, std::uint64_t a, std::size_t n,
                      std::uint64_t m);

#if defined(__x86_64__)
bool cpu_has_avx2();
void row_addmul_avx2(std::uint64_t* y, const std::uint64_t* x,
                     std::uint64_t a, std::size_t n, std::uint64_t m);
void row_scale_avx2(std::uint64_t* y, std::uint64_t a, std::size_t n,
                    std::uint64_t m);
#endif

#if defined(__aarch64__)
void row_addmul_neon(std::uint64_t* y, const std::uint64_t* x,
                     std::uint64_t a, std::size_t n, std::uint64_t m);
void row_scale_neon(std::uint64_t* y, std::uint64_t a, std::size_t n,
                    std::uint64_t m);
#endif

// Largest modulus for which the vector paths are exact: products must
// stay below 2^52 so the double-precision quotient estimate is off by
// at most one.
inline constexpr std::uint64_t kSimdModulusBound = std::uint64_t{1} << 26;

}  // namespace detail

}  // namespace dcform::kernels
