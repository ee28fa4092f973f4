#pragma once

// Exact linear algebra over the chain ring Z/p^M: valuation-pivot
// echelonization with optional saturation (content division), row
// provenance and per-row precision bookkeeping, membership reduction,
// and Howell-form kernels mod p^n.
//
// Saturation divides a row by its p-content; the quotient is only known
// mod p^(prec - c), which the per-row `prec` field tracks. Elimination
// itself is exact mod p^M. A run aborts if any row's precision falls
// below the caller's floor (the spec's guard-digit rule).

#include <cstdint>
#include <vector>

#include "dcform/zmod.hpp"

namespace dcform {

struct PMod {
  std::int64_t p = 0;
  int exp = 0;
  std::uint64_t mod = 0;
  static PMod make(std::int64_t p, int exp) {
    return {p, exp, pow_u64((std::uint64_t)p, exp)};
  }
};

using U64Vec = std::vector<std::uint64_t>;

struct EchRow {
  U64Vec v;       // coefficients, reduced mod p^M
  U64Vec prov;    // p^scale row = prov . generators (mod p^prov_prec)
  int scale = 0;  // p-power divided out of this row
  int prec;       // entries exact mod p^prec
  int prov_prec;  // precision of the provenance identity
  std::size_t pivot = ~std::size_t{0};
};

struct DivisorEvent {
  std::size_t row;  // index into the original stack order (event order)
  int exponent;
};

struct EchOptions {
  bool saturate = true;
  bool track_provenance = false;
  int min_prec_required = 1;
  std::vector<int> initial_prec;  // per input row; empty = all exact
};

class SatEchelon {
 public:
  PMod pm;
  std::size_t cols = 0;
  std::size_t ngens = 0;  // provenance width
  std::vector<EchRow> rows;  // sorted by pivot column, unit pivots when
                             // saturated
  std::vector<DivisorEvent> divisor_log;
  int min_prec = 0;
  bool saturated = false;

  std::size_t rank() const { return rows.size(); }
  int max_divisor() const;
};

// Echelonize the stacked rows. Throws std::runtime_error when a row's
// precision would drop below opts.min_prec_required.
SatEchelon echelonize(std::vector<U64Vec> stack, PMod pm, EchOptions opts);

struct ReduceResult {
  U64Vec coords;    // one per echelon row
  U64Vec residual;  // v - sum coords_i row_i
  int residual_val; // min p-valuation over residual entries, capped
  int cert_prec;    // precision to which the reduction is trustworthy:
                    // min over used rows of prec + v_p(coord)
  bool member_at(int k) const {
    return residual_val >= std::min(k, cert_prec);
  }
};

// Reduce v against a unit-pivot echelon. Membership in the row span mod
// p^k holds iff residual_val >= min(k, cert_prec).
ReduceResult reduce_against(const SatEchelon& ech, U64Vec v);

// Dense matrix helpers over Z/p^M (row-major square or rectangular).
struct Mat {
  std::size_t rows = 0, cols = 0;
  U64Vec a;
  std::uint64_t& at(std::size_t i, std::size_t j) { return a[i * cols + j]; }
  std::uint64_t at(std::size_t i, std::size_t j) const {
    return a[i * cols + j];
  }
  static Mat zero(std::size_t r, std::size_t c) {
    return {r, c, U64Vec(r * c, 0)};
  }
  static Mat identity(std::size_t n, std::uint64_t mod) {
    Mat m = zero(n, n);
    for (std::size_t i = 0; i < n; ++i) m.at(i, i) = 1 % mod;
    return m;
  }
  bool operator==(const Mat&) const = default;
};

Mat mat_mul(const Mat& x, const Mat& y, std::uint64_t mod);
U64Vec mat_vec(const Mat& x, const U64Vec& v, std::uint64_t mod);
// v^T X
U64Vec vec_mat(const U64Vec& v, const Mat& x, std::uint64_t mod);
Mat mat_add(const Mat& x, const Mat& y, std::uint64_t mod);
Mat mat_sub(const Mat& x, const Mat& y, std::uint64_t mod);
Mat mat_scale(const Mat& x, std::uint64_t c, std::uint64_t mod);
Mat mat_reduce(const Mat& x, std::uint64_t smaller_mod);
Mat mat_pow(const Mat& x, std::uint64_t e, std::uint64_t mod);
bool mat_is_zero(const Mat& x);

// Solve x . G = rhs for a square unit-determinant G over Z/p^M via
// Gaussian elimination (throws if G is not invertible).
Mat mat_inverse(const Mat& g, std::uint64_t mod, std::int64_t p);

// determinant valuation: 0 iff unit. Computed by fraction-free
// elimination with valuation pivoting; returns the p-valuation of det
// (capped at exp).
int det_valuation(Mat g, PMod pm);

// Generators of the left kernel {c : c A = 0 mod p^n} via a Howell-form
// elimination with shadow rows.
std::vector<U64Vec> left_kernel(const Mat& a, PMod pm);

// rank of A over F_p (A given mod p^k, reduced internally)
std::size_t rank_mod_p(const Mat& a, std::int64_t p);

}  // namespace dcform
