#pragma once

// Hecke operators as matrices on D_w, built from the coefficient rules
// (ground truth), plus the Hecke algebra as a module with the dual
// spanning set {U^r T_n : n p^r <= B}: selection by unit Gram minor,
// structure constants through the a_1 duality functionals, restriction
// maps and the T = H kernel-triviality check.

#include <map>
#include <string>

#include "dcform/dclattice.hpp"

namespace dcform {

enum class Flavor { sh, pf, full };

class HeckeContext {
 public:
  explicit HeckeContext(const DCLattice* L);

  const DCLattice& lattice() const { return *L_; }
  std::size_t dim() const { return L_->rank(); }

  // ground-truth matrices in lattice coordinates
  const Mat& op_U();
  const Mat& op_Tl(std::int64_t ell);
  const Mat& op_Sl(std::int64_t ell);
  const Mat& op_diamond(std::int64_t a);
  // [x] for a p-adic unit given mod p^M; label keys the cache
  const Mat& op_bracket(std::uint64_t x, const std::string& label);
  // composite T_n (p coprime to n) via the multiplicativity and
  // prime-power recursion on matrices
  Mat op_Tn(std::int64_t n);
  Mat op_UrTn(std::int64_t n, std::int64_t r);

  // coefficient a_idx of the lattice vector with these coordinates
  // (through the cached weight-row series); idx_limit grows caches
  std::uint64_t coeff(const U64Vec& coords, std::size_t idx);
  // a_1(U^r T_n f) evaluated purely through the coefficient rules and
  // diamond/bracket twists; independent of all matrix construction
  std::uint64_t a1_UrTn_series(const U64Vec& coords, std::int64_t n,
                               std::int64_t r);

  // twisted coefficient sum_g prov_j[g] * twist(g) * a_idx(wrow_g) /
  // p^scale_j for the j-th basis vector (used by the algebra table)
  std::uint64_t basis_twisted_coeff(std::size_t j,
                                    const std::vector<std::uint64_t>& twist,
                                    std::size_t idx);
  // twist table per lattice generator for [d]<d>: d^{weight} chi(d)
  std::vector<std::uint64_t> bracket_diamond_twist(std::int64_t d);
  // twist for S_d (multiplicative extension, 0 when gcd(d, N) > 1)
  std::vector<std::uint64_t> s_twist(std::int64_t d);

  int solve_floor() const { return solve_floor_; }
  std::uint64_t mod() const { return mod_; }

 private:
  Mat matrix_from_image_series(
      const std::function<Series(const U64Vec&, std::size_t)>& image,
      const char* what);
  void ensure_wrow_cache(std::size_t prec);
  Series family_series(const U64Vec& coords, std::int64_t d,
                       std::size_t prec);
  Series tn_family(const U64Vec& coords, std::int64_t n, std::int64_t d,
                   std::size_t prec);

  const DCLattice* L_;
  std::uint64_t mod_;
  PMod pm_;
  int solve_floor_;  // membership certification floor for op solves
  std::map<std::string, Mat> ops_;
};

struct AlgebraModule {
  Flavor flavor = Flavor::full;
  int w = 0;
  std::size_t rank = 0;
  std::vector<std::pair<std::int64_t, std::int64_t>> ops;  // (n, r)
  std::vector<std::size_t> columns;  // m = n p^r (1-based q-exponent)
  Mat gram;      // gram[s][j] = a_{m_s}(f_j); square unit-det for full
  Mat gram_inv;  // inverse of gram (full) or of the square subset
  std::vector<std::size_t> columns_square;  // pf/sh: basis-index subset
  std::vector<U64Vec> table;  // coords of b_a b_b at [a*rank+b]
  int table_prec = 0;         // digits the table is certified to

  // coords of the operator with functional phi[j] = a_1(X f_j); for
  // pf/sh the remaining functional entries are verified mod p^floor
  U64Vec express_phi(const U64Vec& phi, std::uint64_t mod, std::int64_t p,
                     int verify_floor = 0) const;
};
// coords of U^r T_n (n p^r <= B) through its coefficient column
U64Vec express_column(const AlgebraModule& A, const HeckeContext& ctx,
                      std::size_t m);
// coords of an explicit matrix via its functionals, with the matrix
// identity verified; throws on mismatch beyond the certified floor
U64Vec express_matrix(const AlgebraModule& A, HeckeContext& ctx,
                      const Mat& X, bool verify = true);
// matrix of the module element with the given coordinates
Mat element_matrix(const AlgebraModule& A, HeckeContext& ctx,
                   const U64Vec& coords);
// product in coordinates through the structure-constant table
U64Vec table_mul(const AlgebraModule& A, const U64Vec& x, const U64Vec& y,
                 std::uint64_t mod);

AlgebraModule build_algebra(Flavor flavor, HeckeContext& ctx);

// Gram determinant valuation of the saturated basis (0 = unit) and of
// the unsaturated stack at the same columns (the negative control).
struct GramVerdict {
  int det_val = 0;
  bool unit = false;
};
GramVerdict pairing_gram(const AlgebraModule& A, HeckeContext& ctx);
GramVerdict pairing_gram_unsaturated(HeckeContext& ctx,
                                     const AlgebraModule& A);

// restriction T_{w'} -> T_w on module coordinates: row s = coords at w
// of the w'-basis op (n_s, r_s). Surjectivity = full rank mod p.
Mat restriction_map(const AlgebraModule& src, const AlgebraModule& dst,
                    const HeckeContext& dst_ctx);
bool restriction_surjective(const Mat& restr, const AlgebraModule& dst,
                            std::int64_t p);

// kernel-triviality of the restriction to S_{<=w}: a module element
// annihilating every stacked weight-basis row is zero (checked mod p).
bool check_teqh(const AlgebraModule& A, HeckeContext& ctx);

}  // namespace dcform
