#include "dcform/dclattice.hpp"

#include <stdexcept>

#include "dcform/kernels.hpp"
#include "dcform/zmod.hpp"

namespace dcform {

DCLattice build_dc_lattice(int w, Spaces& spaces) {
  const auto& pol = spaces.policy();
  DCLattice L;
  L.w = w;
  L.level = pol.level;
  L.cols = pol.B_cols();
  L.spaces = &spaces;

  std::vector<U64Vec> stack;
  EchOptions opts;
  opts.saturate = true;
  opts.track_provenance = true;
  opts.min_prec_required = pol.n;
  std::int64_t expected = 0;
  for (int k = 2; k <= w; ++k) {
    const WeightBasis& wb = spaces.basis(k, SpaceKind::cuspidal);
    expected += (std::int64_t)wb.rows.size();
    for (std::size_t r = 0; r < wb.rows.size(); ++r) {
      stack.push_back(wb.rows[r].coeffs);
      opts.initial_prec.push_back(wb.rows[r].prec);
      L.gens.push_back({k, r});
    }
  }
  PMod pm = PMod::make(pol.p, pol.work_prec);
  L.ech = echelonize(std::move(stack), pm, opts);
  if ((std::int64_t)L.ech.rank() != expected)
    throw std::runtime_error(
        "dclattice: rank deficiency (directness of the weight sum failed "
        "at this precision)");
  return L;
}

Spaces::PrecSeries DCLattice::vector_series(
    const U64Vec& coords, std::size_t prec,
    const std::vector<std::uint64_t>* twist) const {
  const auto& pol = spaces->policy();
  std::uint64_t mod = pow_u64((std::uint64_t)pol.p, pol.work_prec);
  // prov combination of the coordinate vector against the basis rows
  U64Vec prov(gens.size(), 0);
  int scale = 0;
  int id_prec = pol.work_prec;  // precision of p^scale f = prov . gens
  int prec_exp = pol.work_prec;
  for (std::size_t i = 0; i < ech.rows.size(); ++i) {
    if (coords[i] == 0) continue;
    const EchRow& row = ech.rows[i];
    // align scales: prov is at `scale`, row.prov at row.scale
    if (row.scale > scale) {
      int d = row.scale - scale;
      std::uint64_t f = pow_u64((std::uint64_t)pol.p, d);
      kernels::row_scale(prov.data(), f % mod, prov.size(), mod);
      scale = row.scale;
      id_prec = std::min(pol.work_prec, id_prec + d);
    }
    std::uint64_t c = coords[i];
    int dv = 0;
    if (row.scale < scale) {
      dv = scale - row.scale;
      c = mulmod(c, pow_u64((std::uint64_t)pol.p, dv) % mod, mod);
    }
    kernels::row_addmul(prov.data(), row.prov.data(), c, prov.size(), mod);
    int cv = val_p(coords[i], (std::uint64_t)pol.p, pol.work_prec);
    id_prec = std::min(id_prec,
                       std::min(row.prov_prec + cv + dv, pol.work_prec));
    prec_exp = std::min(prec_exp, row.prec + cv);
  }
  prec_exp = std::min(prec_exp, id_prec - scale);
  // assemble sum prov_g * (weight-basis row series), twisted if requested
  Series combo(spaces->oring(), prec);
  int cmin = id_prec;  // the combo value is certified mod p^cmin
  for (std::size_t g = 0; g < gens.size(); ++g) {
    if (prov[g] == 0) continue;
    const auto& ps =
        spaces->row_series_cached(gens[g].weight, gens[g].row, prec);
    cmin = std::min(cmin, ps.prec_exp);
    std::uint64_t c = prov[g];
    if (twist) {
      c = mulmod(c, (*twist)[g], mod);
      if (c == 0) continue;
    }
    kernels::row_addmul(combo.raw().data(), ps.s.raw().data(), c, prec, mod);
  }
  if (scale) {
    // divisibility by p^scale holds only below the certified digits
    std::uint64_t cut = pow_u64((std::uint64_t)pol.p, cmin);
    std::uint64_t psc = pow_u64((std::uint64_t)pol.p, scale);
    for (std::size_t i = 0; i < prec; ++i) {
      std::uint64_t v = combo.u1(i) % cut;
      if (v % psc != 0)
        throw std::runtime_error("dclattice: scale division not exact");
      combo.u1(i) = v / psc;
    }
  }
  prec_exp = std::min(prec_exp, cmin - scale);
  return {std::move(combo), prec_exp};
}

Spaces::PrecSeries DCLattice::basis_series(std::size_t i,
                                           std::size_t prec) const {
  U64Vec coords(ech.rank(), 0);
  coords[i] = 1;
  return vector_series(coords, prec);
}

GradedForm DCLattice::decompose_graded(const U64Vec& coords,
                                       std::size_t prec) const {
  const auto& pol = spaces->policy();
  std::uint64_t mod = pow_u64((std::uint64_t)pol.p, pol.work_prec);
  GradedForm gf;
  // aggregate provenance as in vector_series, but keep weight components
  U64Vec prov(gens.size(), 0);
  int scale = 0;
  for (std::size_t i = 0; i < ech.rows.size(); ++i) {
    if (coords[i] == 0) continue;
    const EchRow& row = ech.rows[i];
    if (row.scale > scale) {
      std::uint64_t f = pow_u64((std::uint64_t)pol.p, row.scale - scale);
      kernels::row_scale(prov.data(), f % mod, prov.size(), mod);
      scale = row.scale;
    }
    std::uint64_t c = coords[i];
    if (row.scale < scale)
      c = mulmod(c, pow_u64((std::uint64_t)pol.p, scale - row.scale) % mod,
                 mod);
    kernels::row_addmul(prov.data(), row.prov.data(), c, prov.size(), mod);
  }
  gf.scale = scale;
  for (std::size_t g = 0; g < gens.size(); ++g) {
    if (prov[g] == 0) continue;
    const WeightBasis& wb = spaces->basis(gens[g].weight, SpaceKind::cuspidal);
    auto ps = spaces->row_series(wb, gens[g].row, prec);
    auto it = gf.components.find(gens[g].weight);
    if (it == gf.components.end()) {
      Series z(spaces->oring(), prec);
      it = gf.components.emplace(gens[g].weight, std::move(z)).first;
    }
    kernels::row_addmul(it->second.raw().data(), ps.s.raw().data(), prov[g],
                        prec, mod);
  }
  return gf;
}

std::optional<U64Vec> DCLattice::recombine(const GradedForm& g) const {
  const auto& pol = spaces->policy();
  std::uint64_t mod = pow_u64((std::uint64_t)pol.p, pol.work_prec);
  Series total(spaces->oring(), cols + 1);
  for (auto& [wt, comp] : g.components) {
    (void)wt;
    if (comp.prec() < cols + 1) return std::nullopt;
    for (std::size_t i = 0; i < cols + 1; ++i)
      total.u1(i) = addmod(total.u1(i), comp.u1(i), mod);
  }
  int cut_exp = pol.work_prec;
  for (auto& row : ech.rows)
    cut_exp = std::min(cut_exp, row.prov_prec);
  std::uint64_t cut = pow_u64((std::uint64_t)pol.p, cut_exp);
  std::uint64_t psc = pow_u64((std::uint64_t)pol.p, g.scale);
  U64Vec v(cols);
  for (std::size_t j = 0; j < cols; ++j) {
    std::uint64_t x = total.u1(j + 1) % cut;
    if (x % psc != 0) return std::nullopt;
    v[j] = x / psc;
  }
  auto rr = reduce_against(ech, v);
  if (!rr.member_at(ech.min_prec)) return std::nullopt;
  return rr.coords;
}

BaseChangedLattice base_change(const DCLattice& L, const RingPtr& R, int n) {
  const auto& pol = L.spaces->policy();
  if (R->trunc() > pol.work_prec * R->e())
    throw std::invalid_argument("base_change: target exceeds precision");
  BaseChangedLattice B;
  B.ring = R;
  B.w = L.w;
  B.cols = L.cols;
  B.n = n;
  std::uint64_t pn = pow_u64((std::uint64_t)pol.p, n);
  for (auto& row : L.ech.rows) {
    if (row.prec < n)
      throw std::runtime_error("base_change: row precision below target");
    RVec rv(L.cols);
    for (std::size_t j = 0; j < L.cols; ++j)
      rv[j] = R->embed_znp(row.v[j] % pn, n);
    B.rows.push_back(std::move(rv));
    B.pivots.push_back(row.pivot);
  }
  return B;
}

bool base_changed_member(const BaseChangedLattice& B, const RVec& v) {
  const Ring& R = *B.ring;
  if (v.size() != B.cols) throw std::invalid_argument("member: size");
  RVec r = v;
  for (std::size_t i = 0; i < B.rows.size(); ++i) {
    RingElt e = r[B.pivots[i]];  // by value: the loop updates r
    if (R.is_zero(e)) continue;
    // unit pivot: quotient is exact
    for (std::size_t j = 0; j < B.cols; ++j)
      r[j] = R.sub(r[j], R.mul(e, B.rows[i][j]));
  }
  return std::all_of(r.begin(), r.end(),
                     [&](const RingElt& x) { return R.is_zero(x); });
}

std::optional<int> weight_filtration_of_form(
    const RVec& f, const std::vector<const BaseChangedLattice*>& stages) {
  bool zero = true;
  if (!stages.empty()) {
    const Ring& R = *stages[0]->ring;
    for (auto& x : f)
      if (!R.is_zero(x)) {
        zero = false;
        break;
      }
  }
  if (zero) return 0;  // convention
  for (auto* B : stages)
    if (base_changed_member(*B, f)) return B->w;
  return std::nullopt;
}

}  // namespace dcform
