#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "dcform/eisenstein.hpp"
#include "dcform/spaces.hpp"

using namespace dcform;

namespace {

PrecisionPolicy desk_policy(int wmax = 12) {
  return PrecisionPolicy::make(5, 2, LevelDesc::make(5, 1, 1), wmax);
}

}  // namespace

TEST_CASE("weight bases match the dimension oracle with unit pivots") {
  auto pol = desk_policy();
  auto R = Ring::unramified(5, pol.work_prec);
  Spaces sp(R, pol);
  for (int k = 2; k <= 12; ++k) {
    for (auto kind : {SpaceKind::full, SpaceKind::cuspidal,
                      SpaceKind::eisenstein}) {
      const auto& wb = sp.basis(k, kind);
      CHECK((std::int64_t)wb.rows.size() ==
            dimension_oracle(k, 5, kind));
      for (auto& row : wb.solver.rows) {
        CHECK(row.v[row.pivot] == 1);
      }
      // rows stay independent mod p (pivot-unit property)
      if (!wb.rows.empty()) {
        Mat m = Mat::zero(wb.rows.size(), wb.cols);
        for (std::size_t i = 0; i < wb.rows.size(); ++i)
          for (std::size_t j = 0; j < wb.cols; ++j)
            m.at(i, j) = wb.rows[i].coeffs[j];
        CHECK(rank_mod_p(m, 5) == wb.rows.size());
      }
    }
  }
  CHECK(sp.basis(2, SpaceKind::cuspidal).rows.empty());
}

TEST_CASE("weight-3 full basis rows carry odd nebentypus tags") {
  auto pol = desk_policy();
  auto R = Ring::unramified(5, pol.work_prec);
  Spaces sp(R, pol);
  const auto& wb = sp.basis(3, SpaceKind::full);
  const auto& chars = sp.characters();
  CHECK_FALSE(wb.rows.empty());
  for (auto& row : wb.rows)
    CHECK(chars[(std::size_t)row.chi_idx].odd());
}

TEST_CASE("projector annihilates Eisenstein atoms") {
  auto pol = desk_policy();
  auto R = Ring::unramified(5, pol.work_prec);
  Spaces sp(R, pol);
  for (int k : {2, 4, 5}) {
    const auto& proj = sp.projector(k);
    CHECK_FALSE(proj.empty());
    auto atoms = sp.spanning_gens(k, SpaceKind::eisenstein);
    for (int gi : atoms) {
      std::size_t prec = 40;
      std::size_t src = prec;
      for (auto& f : proj) src *= (std::size_t)f.ell;
      Series s = sp.gen_series(gi, src).truncated(src);
      int kk = k;
      Series t = s;
      for (auto& f : proj) {
        // the atom is an eigenvector: T_ell t = lambda_atom t
        // after the full product over all systems, t must vanish
        const auto& gspec = sp.gens()[(std::size_t)gi];
        RingElt chi_ell =
            sp.characters()[(std::size_t)gspec.chi_idx].value(*R, f.ell);
        Series tl = hecke_tl_single_weight(t, f.ell, kk, chi_ell, 5);
        t = series_sub(tl, series_scale(t.truncated(tl.prec()),
                                        RingElt{{f.lambda}}));
      }
      for (std::size_t i = 0; i < t.prec(); ++i) CHECK(t.u1(i) == 0);
    }
  }
}

TEST_CASE("delta appears in the weight-12 cuspidal basis") {
  auto pol = desk_policy();
  auto R = Ring::unramified(5, pol.work_prec);
  Spaces sp(R, pol);
  const auto& wb = sp.basis(12, SpaceKind::cuspidal);
  REQUIRE(wb.rows.size() == 9);
  // delta mod 5^6, columns a_1..a_B, must lie in the row span
  auto d = delta(R, pol.B_cols() + 1);
  U64Vec v(pol.B_cols());
  for (std::size_t j = 0; j < v.size(); ++j) v[j] = d.u1(j + 1);
  auto rr = reduce_against(wb.solver, v);
  CHECK(rr.residual_val >= wb.solver.min_prec);
}

TEST_CASE("row_series regenerates the stored coefficients") {
  auto pol = desk_policy();
  auto R = Ring::unramified(5, pol.work_prec);
  Spaces sp(R, pol);
  const auto& wb = sp.basis(6, SpaceKind::cuspidal);
  for (std::size_t i = 0; i < wb.rows.size(); ++i) {
    auto ps = sp.row_series(wb, i, pol.B_cols() + 1);
    std::uint64_t cm = pow_u64(5, ps.prec_exp);
    for (std::size_t j = 0; j < wb.cols; ++j)
      CHECK(ps.s.u1(j + 1) % cm == wb.rows[i].coeffs[j] % cm);
  }
}

TEST_CASE("Hecke stability: T_2 and T_3 map basis rows into the row space") {
  auto pol = desk_policy();
  auto R = Ring::unramified(5, pol.work_prec);
  Spaces sp(R, pol);
  for (int k : {4, 5, 6, 12}) {
    const auto& wb = sp.basis(k, SpaceKind::cuspidal);
    for (std::int64_t ell : {2, 3}) {
      for (std::size_t i = 0; i < wb.rows.size(); ++i) {
        auto ps = sp.row_series(wb, i, (pol.B_cols() + 1) * (std::size_t)ell);
        RingElt chi_ell = sp.diamond_scalar(wb, i, ell);
        Series img = hecke_tl_single_weight(ps.s, ell, k, chi_ell, 5);
        U64Vec v(wb.cols);
        for (std::size_t j = 0; j < wb.cols; ++j) v[j] = img.u1(j + 1);
        auto rr = reduce_against(wb.solver, v);
        int floor = std::min(ps.prec_exp, rr.cert_prec);
        CHECK(floor >= 4);  // non-vacuous at the mod-25 target
        CHECK(rr.residual_val >= floor);
      }
    }
  }
}
