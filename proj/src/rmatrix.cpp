#include "dcform/rmatrix.hpp"

#include <algorithm>
#include <stdexcept>

namespace dcform {

RHowell howell_r(std::vector<RVec> stack, const RingPtr& ring) {
  RHowell out;
  out.ring = ring;
  out.cols = stack.empty() ? 0 : stack[0].size();
  const Ring& R = *ring;
  int t = R.trunc();

  struct Row {
    RVec v;
    bool active = true;
  };
  std::vector<Row> rows;
  for (auto& s : stack) {
    if (s.size() != out.cols) throw std::invalid_argument("howell_r: ragged");
    rows.push_back({std::move(s), true});
  }

  struct Done {
    RVec v;
    std::size_t pivot;
    int pval;
  };
  std::vector<Done> done;

  for (std::size_t col = 0; col < out.cols; ++col) {
    // pivot: minimal pi-valuation in this column among active rows
    int best = t;
    std::size_t pr = ~std::size_t{0};
    for (std::size_t r = 0; r < rows.size(); ++r) {
      if (!rows[r].active) continue;
      int v = R.valuation(rows[r].v[col]);
      if (v < best) {
        best = v;
        pr = r;
      }
    }
    if (pr == ~std::size_t{0}) continue;
    // normalize: pivot entry becomes pi^best
    RingElt unit = R.div_by_pi_pow(rows[pr].v[col], best);
    RingElt uinv = R.inverse(unit);
    for (auto& x : rows[pr].v) x = R.mul(x, uinv);
    // eliminate below/above among active rows
    for (std::size_t r = 0; r < rows.size(); ++r) {
      if (r == pr || !rows[r].active) continue;
      const RingElt& e = rows[r].v[col];
      if (R.is_zero(e)) continue;
      RingElt q = R.div_by_pi_pow(e, best);  // valuation >= best
      for (std::size_t j = 0; j < out.cols; ++j)
        rows[r].v[j] = R.sub(rows[r].v[j], R.mul(q, rows[pr].v[j]));
    }
    if (best > 0) {
      // shadow row pi^{t-best} * pivot keeps the span Howell-complete
      Row sh;
      RingElt f = R.pow(R.pi(), (std::uint64_t)(t - best));
      sh.v.reserve(out.cols);
      for (auto& x : rows[pr].v) sh.v.push_back(R.mul(x, f));
      rows.push_back(std::move(sh));
    }
    done.push_back({std::move(rows[pr].v), col, best});
    rows[pr].active = false;
    rows[pr].v.clear();
  }
  std::sort(done.begin(), done.end(),
            [](const Done& a, const Done& b) { return a.pivot < b.pivot; });
  for (auto& d : done) {
    out.rows.push_back(std::move(d.v));
    out.pivots.push_back(d.pivot);
    out.pivot_vals.push_back(d.pval);
  }
  return out;
}

RReduce r_reduce(const RHowell& h, RVec v) {
  const Ring& R = *h.ring;
  if (v.size() != h.cols) throw std::invalid_argument("r_reduce: size");
  RReduce rr;
  rr.coords.assign(h.nrows(), R.zero());
  for (std::size_t i = 0; i < h.nrows(); ++i) {
    const RingElt& e = v[h.pivots[i]];
    if (R.is_zero(e)) continue;
    int ev = R.valuation(e);
    if (ev < h.pivot_vals[i]) continue;  // cannot reduce here
    RingElt q = R.div_by_pi_pow(e, h.pivot_vals[i]);
    rr.coords[i] = q;
    for (std::size_t j = 0; j < h.cols; ++j)
      v[j] = R.sub(v[j], R.mul(q, h.rows[i][j]));
  }
  rr.member = std::all_of(v.begin(), v.end(),
                          [&](const RingElt& x) { return R.is_zero(x); });
  rr.residual = std::move(v);
  return rr;
}

}  // namespace dcform
