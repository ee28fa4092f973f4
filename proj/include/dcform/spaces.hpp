#pragma once

// Integral echelon bases of S_k(Gamma_1(N)) and M_k(Gamma_1(N)) built
// from a validated spanning set: Eisenstein series (single and d-shifted),
// products of two Eisenstein series, and level-1 monomials E4^a E6^b
// Delta^c with their V_d shifts. Cusp forms are cut out by annihilating
// the Eisenstein eigensystems with a Hecke polynomial. Every basis is
// validated against the dimension formulas; a rank shortfall is fatal.

#include <cstdint>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "dcform/dims.hpp"
#include "dcform/dirichlet.hpp"
#include "dcform/matrix.hpp"
#include "dcform/series.hpp"

namespace dcform {

struct PrecisionPolicy {
  std::int64_t p = 5;
  LevelDesc level;
  int n = 2;     // target level exponent (coefficients mod p^n)
  int wmax = 16;
  int series_guard = 10;
  int work_prec = 22;  // M, p-adic digits of the working ring Z/p^M

  // default policy: M = n + guard, capped so p^(M+4) fits a uint64.
  // The saturation of D_16 at (p, N) = (5, 5) genuinely contains
  // elementary divisors up to p^14, so the guard must be generous.
  static PrecisionPolicy make(std::int64_t p, int n, LevelDesc level,
                              int wmax, int guard = 20);

  std::size_t B(int w) const {
    return (std::size_t)(p * sturm_bound(w, level.N) + series_guard);
  }
  // all stored bases share the top-weight coefficient window
  std::size_t B_cols() const { return B(wmax); }
};

struct GenSpec {
  enum class Kind { eis_level1, eis_pair, e2stab, level1_mono, product,
                    cusp_proj };
  Kind kind;
  int weight = 0;
  int chi_idx = 0;   // nebentypus index into Spaces::characters()
  // parameters (meaning depends on kind)
  int chi = -1, psi = -1;      // character indices (primitive) for eis_pair
  std::int64_t d = 1;          // V_d shift / e2stab parameter
  int a = 0, b = 0, c = 0;     // E4^a E6^b Delta^c exponents
  int left = -1, right = -1;   // product factor gen indices
  int base = -1;               // cusp_proj source gen
  std::string name;
};

struct ProjectorFactor {
  std::int64_t ell;
  std::uint64_t lambda;  // Eisenstein T_ell eigenvalue in Z/p^M
};
using ProjectorSpec = std::vector<ProjectorFactor>;

struct BasisRow {
  U64Vec coeffs;  // cuspidal: a_1..a_B ; full/eisenstein: a_0..a_B
  U64Vec prov;    // p^scale row = prov . generator series
  int scale = 0;
  int prec = 0;
  int prov_prec = 0;
  int chi_idx = 0;
};

struct WeightBasis {
  int k = 0;
  SpaceKind kind = SpaceKind::cuspidal;
  std::size_t cols = 0;
  bool has_a0 = false;
  std::vector<BasisRow> rows;
  std::vector<int> gens;  // pool indices the provenance refers to
  SatEchelon solver;      // joint echelon of the rows (membership tests)
  std::vector<DivisorEvent> divisor_log;
};

// T_ell on a single-weight form of weight k and nebentypus chi(ell) =
// chi_ell, by the coefficient rule; output precision floor(prec/ell).
Series hecke_tl_single_weight(const Series& g, std::int64_t ell, int k,
                              const RingElt& chi_ell, std::int64_t N);

class Spaces {
 public:
  Spaces(RingPtr oring, PrecisionPolicy policy);

  const PrecisionPolicy& policy() const { return policy_; }
  const RingPtr& oring() const { return oring_; }
  const std::vector<DirichletCharacter>& characters() const { return chars_; }
  int char_index(const DirichletCharacter& chi) const;
  int char_mul_index(int i, int j) const;  // index of chi_i * chi_j

  const std::vector<GenSpec>& gens() const { return gens_; }
  // generator indices forming the weight-k spanning set, by kind
  std::vector<int> spanning_gens(int k, SpaceKind kind);

  // generator q-expansion at the requested precision (cached; lazily
  // recomputed at higher precision)
  const Series& gen_series(int gen, std::size_t prec);

  const ProjectorSpec& projector(int k);

  // build (and cache) the validated basis
  const WeightBasis& basis(int k, SpaceKind kind);

  // regenerate a basis row's series at arbitrary precision; returns the
  // series and the p-adic precision (digits) it is exact to
  struct PrecSeries {
    Series s;
    int prec_exp;
  };
  PrecSeries row_series(const WeightBasis& wb, std::size_t row,
                        std::size_t prec);
  // cached variant keyed by (weight, row); grows monotonically
  const PrecSeries& row_series_cached(int k, std::size_t row,
                                      std::size_t prec);

  // scalar action helpers on rows (single weight, single nebentypus):
  // diamond <a> acts by chi(a), [x] acts by x^k, S_ell by ell^{k-2}chi(ell)
  RingElt diamond_scalar(const WeightBasis& wb, std::size_t row,
                         std::int64_t a) const;

 private:
  WeightBasis build_basis(int k, SpaceKind kind);
  int add_gen(GenSpec g);
  void ensure_gens(int k);
  Series compute_gen(int gen, std::size_t prec);

  RingPtr oring_;
  PrecisionPolicy policy_;
  std::vector<DirichletCharacter> chars_;       // mod N, embeddable
  std::vector<DirichletCharacter> prim_chars_;  // primitized copies
  std::vector<GenSpec> gens_;
  std::map<std::string, int> gen_lookup_;
  std::map<int, std::vector<int>> atoms_by_weight_;  // single Eisenstein
  std::map<int, std::vector<int>> span_by_weight_;
  std::map<int, ProjectorSpec> projectors_;
  std::vector<Series> gen_cache_;
  std::map<std::pair<int, int>, WeightBasis> basis_cache_;
  std::map<std::pair<int, std::size_t>, PrecSeries> row_cache_;
};

}  // namespace dcform
