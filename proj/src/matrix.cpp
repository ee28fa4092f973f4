#include "dcform/matrix.hpp"

#include <cstdio>

#include <algorithm>
#include <stdexcept>

#include "dcform/kernels.hpp"

namespace dcform {

namespace {

// min valuation over a row, treating entries with val >= prec as zero
int row_content(const U64Vec& v, const PMod& pm, int prec) {
  int c = prec;
  for (auto x : v) {
    if (x == 0) continue;
    c = std::min(c, val_p(x, (std::uint64_t)pm.p, prec));
    if (c == 0) break;
  }
  return c;
}

void row_div_exact(U64Vec& v, const PMod& pm, int c) {
  std::uint64_t pc = pow_u64((std::uint64_t)pm.p, c);
  for (auto& x : v) x /= pc;  // representative of the quotient
}

// y -= q * x (mod)
void row_submul(U64Vec& y, const U64Vec& x, std::uint64_t q,
                std::uint64_t mod) {
  if (q == 0) return;
  kernels::row_addmul(y.data(), x.data(), mod - q, std::min(y.size(),
                                                            x.size()),
                      mod);
}

void row_submul_span(std::uint64_t* y, const std::uint64_t* x,
                     std::uint64_t q, std::size_t n, std::uint64_t mod) {
  if (q == 0) return;
  kernels::row_addmul(y, x, mod - (q % mod), n, mod);
}

}  // namespace

int SatEchelon::max_divisor() const {
  int m = 0;
  for (auto& e : divisor_log) m = std::max(m, e.exponent);
  return m;
}

SatEchelon echelonize(std::vector<U64Vec> stack, PMod pm, EchOptions opts) {
  SatEchelon out;
  out.pm = pm;
  out.saturated = opts.saturate;
  out.cols = stack.empty() ? 0 : stack[0].size();
  out.ngens = stack.size();

  struct Work {
    U64Vec v;
    U64Vec prov;
    int scale = 0;
    int prec;
    int prov_prec;
    std::size_t origin;
    std::size_t pivotcol_tmp = ~std::size_t{0};
    bool alive = true;
  };
  std::vector<Work> work(stack.size());
  for (std::size_t i = 0; i < stack.size(); ++i) {
    if (stack[i].size() != out.cols)
      throw std::invalid_argument("echelonize: ragged stack");
    work[i].v = std::move(stack[i]);
    work[i].prec = opts.initial_prec.empty() ? pm.exp
                                             : opts.initial_prec[i];
    work[i].prov_prec = pm.exp;
    work[i].origin = i;
    if (opts.track_provenance) {
      work[i].prov.assign(out.ngens, 0);
      work[i].prov[i] = 1;
    }
  }

  std::vector<std::size_t> done;  // indices into work, in pivot order
  std::vector<bool> processed(work.size(), false);

  auto align_scales = [&](Work& b, const Work& a) {
    // bring b to scale max(a.scale, b.scale) before combining provs
    if (!opts.track_provenance) return;
    if (b.scale >= a.scale) return;
    int d = a.scale - b.scale;
    std::uint64_t f = pow_u64((std::uint64_t)pm.p, d);
    kernels::row_scale(b.prov.data(), f % pm.mod, b.prov.size(), pm.mod);
    b.scale = a.scale;
    b.prov_prec = std::min(pm.exp, b.prov_prec + d);
  };
  auto normalize_prov = [&](Work& w) {
    // cancel p-content shared by prov and scale; costs one digit of the
    // provenance identity per step but keeps scales (and the p-powers
    // they exponentiate) bounded
    if (!opts.track_provenance) return;
    while (w.scale > 0 && w.prov_prec > 1) {
      bool divisible = true;
      for (auto x : w.prov)
        if (x % (std::uint64_t)pm.p != 0) {
          divisible = false;
          break;
        }
      if (!divisible) break;
      for (auto& x : w.prov) x /= (std::uint64_t)pm.p;
      w.scale -= 1;
      w.prov_prec -= 1;
    }
  };


  while (true) {
    // drop rows that vanish at their known precision; divide content
    // lazily (below) so dependent rows are eliminated before any
    // precision is spent on them
    for (auto& w : work) {
      if (!w.alive || processed[w.origin]) continue;
      int c = row_content(w.v, pm, w.prec);
      if (c >= w.prec) w.alive = false;
    }
    // global pivot: minimal (valuation, column, row)
    int best_val = pm.exp + 1;
    std::size_t best_col = ~std::size_t{0}, best_row = ~std::size_t{0};
    for (std::size_t r = 0; r < work.size(); ++r) {
      auto& w = work[r];
      if (!w.alive || processed[w.origin]) continue;
      // the row's best candidate: minimal valuation, then leftmost
      for (std::size_t c = 0; c < out.cols; ++c) {
        if (w.v[c] == 0) continue;
        int vv = val_p(w.v[c], (std::uint64_t)pm.p, w.prec);
        if (vv >= w.prec) continue;
        if (vv < best_val || (vv == best_val && (c < best_col ||
                              (c == best_col && r < best_row)))) {
          best_val = vv;
          best_col = c;
          best_row = r;
        }
        if (vv == 0) break;  // nothing in this row beats (0, leftmost)
      }
    }
    if (best_row == ~std::size_t{0}) break;
    Work& piv = work[best_row];
    if (opts.saturate && best_val > 0) {
      // the selected row is independent of everything processed so far;
      // divide out its content now (a saturation event) and reselect
      int c = row_content(piv.v, pm, piv.prec);
      row_div_exact(piv.v, pm, c);
      piv.prec -= c;
      piv.scale += c;
      out.divisor_log.push_back({piv.origin, c});
#ifdef DCFORM_TRACE_DIV
      std::fprintf(stderr, "div origin=%zu c=%d prec->%d\n", piv.origin, c,
                   piv.prec);
#endif
      if (piv.prec < opts.min_prec_required)
        throw std::runtime_error(
            "echelonize: saturation exceeded guard digits");
      continue;
    }
    // normalize: pivot entry becomes p^best_val
    std::uint64_t unit = piv.v[best_col] / pow_u64((std::uint64_t)pm.p,
                                                   best_val);
    std::uint64_t uinv = invmod(unit % pm.mod, pm.mod);
    kernels::row_scale(piv.v.data(), uinv, piv.v.size(), pm.mod);
    if (opts.track_provenance)
      kernels::row_scale(piv.prov.data(), uinv, piv.prov.size(), pm.mod);
    std::uint64_t pv = pow_u64((std::uint64_t)pm.p, best_val);
    // eliminate the pivot column everywhere else
    for (std::size_t r = 0; r < work.size(); ++r) {
      if (r == best_row) continue;
      Work& w = work[r];
      if (!w.alive) continue;
      std::uint64_t entry = w.v[best_col];
      if (entry == 0) continue;
      int ev = val_p(entry, (std::uint64_t)pm.p, pm.exp);
      if (ev < best_val) {
        if (processed[w.origin]) continue;  // plain echelon: leave it
        throw std::logic_error("echelonize: pivot was not minimal");
      }
      std::uint64_t q = entry / pv;  // exact division by p^v
      align_scales(w, piv);
      row_submul(w.v, piv.v, q % pm.mod, pm.mod);
      if (opts.track_provenance) {
        // piv may itself sit at a lower scale; align its prov on the fly
        if (piv.scale < w.scale) {
          std::uint64_t f =
              pow_u64((std::uint64_t)pm.p, w.scale - piv.scale);
          U64Vec tmp = piv.prov;
          kernels::row_scale(tmp.data(), f % pm.mod, tmp.size(), pm.mod);
          row_submul(w.prov, tmp, q % pm.mod, pm.mod);
        } else {
          row_submul(w.prov, piv.prov, q % pm.mod, pm.mod);
        }
      }
      // subtracting q * piv only pollutes digits above prec(piv) + v(q)
      int qv = val_p(q, (std::uint64_t)pm.p, pm.exp);
      w.prec = std::min(w.prec, std::min(piv.prec + qv, pm.exp));
      if (opts.track_provenance) {
        w.prov_prec =
            std::min(w.prov_prec, std::min(piv.prov_prec + qv, pm.exp));
        normalize_prov(w);
      }
      if (w.prec < opts.min_prec_required)
        throw std::runtime_error("echelonize: precision exhausted");
    }
    piv.pivotcol_tmp = best_col;
    processed[piv.origin] = true;
    done.push_back(best_row);
  }

  std::sort(done.begin(), done.end(), [&](std::size_t a, std::size_t b) {
    return work[a].pivotcol_tmp < work[b].pivotcol_tmp;
  });
  out.min_prec = pm.exp;
  for (auto idx : done) {
    Work& w = work[idx];
    EchRow row;
    row.v = std::move(w.v);
    row.prov = std::move(w.prov);
    row.scale = w.scale;
    row.prec = w.prec;
    row.prov_prec = w.prov_prec;
    row.pivot = w.pivotcol_tmp;
    out.min_prec = std::min(out.min_prec, row.prec);
    out.rows.push_back(std::move(row));
  }
  return out;
}

ReduceResult reduce_against(const SatEchelon& ech, U64Vec v) {
  if (v.size() != ech.cols)
    throw std::invalid_argument("reduce_against: size mismatch");
  ReduceResult rr;
  rr.coords.assign(ech.rows.size(), 0);
  rr.cert_prec = ech.pm.exp;
  std::uint64_t mod = ech.pm.mod;
  for (std::size_t i = 0; i < ech.rows.size(); ++i) {
    const EchRow& row = ech.rows[i];
    std::uint64_t pe = row.v[row.pivot];
    if (pe != 1)
      throw std::invalid_argument("reduce_against: non-unit pivot");
    std::uint64_t q = v[row.pivot];
    rr.coords[i] = q;
    if (q) {
      int qv = val_p(q, (std::uint64_t)ech.pm.p, ech.pm.exp);
      rr.cert_prec = std::min(rr.cert_prec,
                              std::min(row.prec + qv, ech.pm.exp));
    }
    row_submul(v, row.v, q, mod);
  }
  rr.residual_val = ech.pm.exp;
  for (auto x : v)
    rr.residual_val =
        std::min(rr.residual_val, val_p(x, (std::uint64_t)ech.pm.p,
                                        ech.pm.exp));
  rr.residual = std::move(v);
  return rr;
}

Mat mat_mul(const Mat& x, const Mat& y, std::uint64_t mod) {
  if (x.cols != y.rows) throw std::invalid_argument("mat_mul: shape");
  Mat out = Mat::zero(x.rows, y.cols);
  for (std::size_t i = 0; i < x.rows; ++i)
    for (std::size_t k = 0; k < x.cols; ++k) {
      std::uint64_t v = x.at(i, k);
      if (v)
        kernels::row_addmul(&out.a[i * out.cols], &y.a[k * y.cols], v,
                            y.cols, mod);
    }
  return out;
}

U64Vec mat_vec(const Mat& x, const U64Vec& v, std::uint64_t mod) {
  if (x.cols != v.size()) throw std::invalid_argument("mat_vec: shape");
  U64Vec out(x.rows, 0);
  for (std::size_t i = 0; i < x.rows; ++i) {
    unsigned __int128 acc = 0;
    for (std::size_t j = 0; j < x.cols; ++j) {
      acc += (unsigned __int128)x.at(i, j) * v[j];
      if ((j & 15) == 15) acc %= mod;
    }
    out[i] = (std::uint64_t)(acc % mod);
  }
  return out;
}

U64Vec vec_mat(const U64Vec& v, const Mat& x, std::uint64_t mod) {
  if (x.rows != v.size()) throw std::invalid_argument("vec_mat: shape");
  U64Vec out(x.cols, 0);
  for (std::size_t i = 0; i < x.rows; ++i)
    if (v[i]) kernels::row_addmul(out.data(), &x.a[i * x.cols], v[i],
                                  x.cols, mod);
  return out;
}

Mat mat_add(const Mat& x, const Mat& y, std::uint64_t mod) {
  Mat out = x;
  for (std::size_t i = 0; i < out.a.size(); ++i)
    out.a[i] = addmod(out.a[i], y.a[i], mod);
  return out;
}

Mat mat_sub(const Mat& x, const Mat& y, std::uint64_t mod) {
  Mat out = x;
  for (std::size_t i = 0; i < out.a.size(); ++i)
    out.a[i] = submod(out.a[i], y.a[i], mod);
  return out;
}

Mat mat_scale(const Mat& x, std::uint64_t c, std::uint64_t mod) {
  Mat out = x;
  kernels::row_scale(out.a.data(), c % mod, out.a.size(), mod);
  return out;
}

Mat mat_reduce(const Mat& x, std::uint64_t smaller_mod) {
  Mat out = x;
  for (auto& v : out.a) v %= smaller_mod;
  return out;
}

Mat mat_pow(const Mat& x, std::uint64_t e, std::uint64_t mod) {
  Mat r = Mat::identity(x.rows, mod);
  Mat b = x;
  while (e) {
    if (e & 1) r = mat_mul(r, b, mod);
    b = mat_mul(b, b, mod);
    e >>= 1;
  }
  return r;
}

bool mat_is_zero(const Mat& x) {
  return std::all_of(x.a.begin(), x.a.end(),
                     [](std::uint64_t v) { return v == 0; });
}

Mat mat_inverse(const Mat& g, std::uint64_t mod, std::int64_t p) {
  if (g.rows != g.cols) throw std::invalid_argument("mat_inverse: square");
  std::size_t n = g.rows;
  Mat a = g;
  Mat inv = Mat::identity(n, mod);
  for (std::size_t c = 0; c < n; ++c) {
    // pick a unit pivot in column c
    std::size_t pr = n;
    for (std::size_t r = c; r < n; ++r)
      if (a.at(r, c) % (std::uint64_t)p != 0) {
        pr = r;
        break;
      }
    if (pr == n)
      throw std::domain_error("mat_inverse: matrix not invertible");
    if (pr != c) {
      for (std::size_t j = 0; j < n; ++j) {
        std::swap(a.a[pr * n + j], a.a[c * n + j]);
        std::swap(inv.a[pr * n + j], inv.a[c * n + j]);
      }
    }
    std::uint64_t piv_inv = invmod(a.at(c, c), mod);
    kernels::row_scale(&a.a[c * n], piv_inv, n, mod);
    kernels::row_scale(&inv.a[c * n], piv_inv, n, mod);
    for (std::size_t r = 0; r < n; ++r) {
      if (r == c) continue;
      std::uint64_t q = a.at(r, c);
      if (!q) continue;
      row_submul_span(&a.a[r * n], &a.a[c * n], q, n, mod);
      row_submul_span(&inv.a[r * n], &inv.a[c * n], q, n, mod);
    }
  }
  return inv;
}

int det_valuation(Mat g, PMod pm) {
  if (g.rows != g.cols) throw std::invalid_argument("det_valuation: square");
  std::size_t n = g.rows;
  int total = 0;
  std::vector<bool> used(n, false);
  for (std::size_t c = 0; c < n; ++c) {
    int best = pm.exp + 1;
    std::size_t pr = n;
    for (std::size_t r = 0; r < n; ++r) {
      if (used[r] || g.at(r, c) == 0) continue;
      int v = val_p(g.at(r, c), (std::uint64_t)pm.p, pm.exp);
      if (v < best) {
        best = v;
        pr = r;
      }
    }
    if (pr == n) return pm.exp;  // zero column: det == 0 mod p^exp
    total += best;
    if (total >= pm.exp) return pm.exp;
    used[pr] = true;
    std::uint64_t pv = pow_u64((std::uint64_t)pm.p, best);
    std::uint64_t unit = g.at(pr, c) / pv;
    std::uint64_t uinv = invmod(unit % pm.mod, pm.mod);
    for (std::size_t r = 0; r < n; ++r) {
      if (used[r] || g.at(r, c) == 0) continue;
      // entry has valuation >= best by pivot choice
      std::uint64_t q =
          mulmod(g.at(r, c) / pv, uinv, pm.mod);
      row_submul_span(&g.a[r * n], &g.a[pr * n], q, n, pm.mod);
    }
  }
  return total;
}

std::vector<U64Vec> left_kernel(const Mat& a, PMod pm) {
  // Howell-style elimination on [A | I] with shadow rows.
  std::size_t n = a.rows, c = a.cols;
  struct KRow {
    U64Vec av;
    U64Vec tv;
    bool active = true;
  };
  std::vector<KRow> rows;
  rows.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    KRow kr;
    kr.av.assign(a.a.begin() + i * c, a.a.begin() + (i + 1) * c);
    kr.tv.assign(n, 0);
    kr.tv[i] = 1;
    rows.push_back(std::move(kr));
  }
  std::vector<std::size_t> active;
  for (std::size_t i = 0; i < n; ++i) active.push_back(i);

  for (std::size_t col = 0; col < c; ++col) {
    // pivot: min valuation in this column among active rows
    int best = pm.exp;
    std::size_t pr = ~std::size_t{0};
    for (auto r : active) {
      std::uint64_t e = rows[r].av[col];
      if (e == 0) continue;
      int v = val_p(e, (std::uint64_t)pm.p, pm.exp);
      if (v < best) {
        best = v;
        pr = r;
      }
    }
    if (pr == ~std::size_t{0}) continue;
    std::uint64_t pv = pow_u64((std::uint64_t)pm.p, best);
    std::uint64_t uinv = invmod(rows[pr].av[col] / pv, pm.mod);
    kernels::row_scale(rows[pr].av.data(), uinv, c, pm.mod);
    kernels::row_scale(rows[pr].tv.data(), uinv, n, pm.mod);
    for (auto r : active) {
      if (r == pr) continue;
      std::uint64_t e = rows[r].av[col];
      if (e == 0) continue;
      std::uint64_t q = e / pv;
      row_submul_span(rows[r].av.data(), rows[pr].av.data(), q, c, pm.mod);
      row_submul_span(rows[r].tv.data(), rows[pr].tv.data(), q, n, pm.mod);
    }
    if (best > 0) {
      // shadow: p^{exp-best} * pivot row continues to participate
      KRow sh = rows[pr];
      std::uint64_t f = pow_u64((std::uint64_t)pm.p, pm.exp - best);
      kernels::row_scale(sh.av.data(), f % pm.mod, c, pm.mod);
      kernels::row_scale(sh.tv.data(), f % pm.mod, n, pm.mod);
      rows.push_back(std::move(sh));
      active.push_back(rows.size() - 1);
    }
    // retire the pivot row
    active.erase(std::find(active.begin(), active.end(), pr));
  }
  std::vector<U64Vec> kernel;
  for (auto r : active) {
    bool zero = std::all_of(rows[r].av.begin(), rows[r].av.end(),
                            [](std::uint64_t x) { return x == 0; });
    bool tnz = !std::all_of(rows[r].tv.begin(), rows[r].tv.end(),
                            [](std::uint64_t x) { return x == 0; });
    if (zero && tnz) kernel.push_back(rows[r].tv);
  }
  return kernel;
}

std::size_t rank_mod_p(const Mat& a, std::int64_t p) {
  std::uint64_t pp = (std::uint64_t)p;
  std::vector<U64Vec> rows(a.rows);
  for (std::size_t i = 0; i < a.rows; ++i) {
    rows[i].resize(a.cols);
    for (std::size_t j = 0; j < a.cols; ++j) rows[i][j] = a.at(i, j) % pp;
  }
  std::size_t rank = 0;
  for (std::size_t col = 0; col < a.cols && rank < a.rows; ++col) {
    std::size_t pr = rank;
    while (pr < a.rows && rows[pr][col] == 0) ++pr;
    if (pr == a.rows) continue;
    std::swap(rows[pr], rows[rank]);
    std::uint64_t inv = invmod(rows[rank][col], pp);
    for (auto& x : rows[rank]) x = mulmod(x, inv, pp);
    for (std::size_t r = 0; r < a.rows; ++r) {
      if (r == rank || rows[r][col] == 0) continue;
      std::uint64_t q = rows[r][col];
      for (std::size_t j = 0; j < a.cols; ++j)
        rows[r][j] = submod(rows[r][j], mulmod(q, rows[rank][j], pp), pp);
    }
    ++rank;
  }
  return rank;
}

}  // namespace dcform
