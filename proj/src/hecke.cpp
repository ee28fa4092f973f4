#include "dcform/hecke.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "dcform/kernels.hpp"
#include "dcform/zmod.hpp"

namespace dcform {

namespace {

std::int64_t smallest_prime_factor(std::int64_t n) {
  for (std::int64_t d = 2; d * d <= n; ++d)
    if (n % d == 0) return d;
  return n;
}

std::vector<std::int64_t> divisors_of(std::int64_t n) {
  std::vector<std::int64_t> ds;
  for (std::int64_t d = 1; d * d <= n; ++d) {
    if (n % d) continue;
    ds.push_back(d);
    if (d != n / d) ds.push_back(n / d);
  }
  std::sort(ds.begin(), ds.end());
  return ds;
}

}  // namespace

HeckeContext::HeckeContext(const DCLattice* L) : L_(L) {
  const auto& pol = L_->spaces->policy();
  pm_ = PMod::make(pol.p, pol.work_prec);
  mod_ = pm_.mod;
  solve_floor_ = pol.work_prec;
  for (auto& row : L_->ech.rows)
    solve_floor_ = std::min(solve_floor_,
                            std::min(row.prec, row.prov_prec - row.scale));
  solve_floor_ = std::max(solve_floor_, pol.n);
}

void HeckeContext::ensure_wrow_cache(std::size_t prec) {
  for (auto& g : L_->gens)
    L_->spaces->row_series_cached(g.weight, g.row, prec);
}

std::uint64_t HeckeContext::coeff(const U64Vec& coords, std::size_t idx) {
  ensure_wrow_cache(idx + 1);
  const auto& pol = L_->spaces->policy();
  unsigned __int128 acc = 0;
  for (std::size_t i = 0; i < coords.size(); ++i) {
    if (coords[i] == 0) continue;
    const EchRow& row = L_->ech.rows[i];
    unsigned __int128 t = 0;
    for (std::size_t g = 0; g < row.prov.size(); ++g) {
      if (row.prov[g] == 0) continue;
      const auto& ps = L_->spaces->row_series_cached(L_->gens[g].weight,
                                                     L_->gens[g].row, idx + 1);
      t += (unsigned __int128)row.prov[g] * ps.s.u1(idx);
      t %= mod_;
    }
    std::uint64_t tv = (std::uint64_t)t;
    if (row.scale) {
      tv %= pow_u64((std::uint64_t)pol.p, row.prov_prec);
      std::uint64_t psc = pow_u64((std::uint64_t)pol.p, row.scale);
      if (tv % psc != 0)
        throw std::runtime_error("hecke: coefficient scale not exact");
      tv /= psc;
    }
    acc += (unsigned __int128)coords[i] * tv;
    acc %= mod_;
  }
  return (std::uint64_t)acc;
}

std::vector<std::uint64_t> HeckeContext::bracket_diamond_twist(
    std::int64_t d) {
  auto& sp = *L_->spaces;
  const auto& chars = sp.characters();
  std::vector<std::uint64_t> tw(L_->gens.size());
  for (std::size_t g = 0; g < L_->gens.size(); ++g) {
    const auto& wb = sp.basis(L_->gens[g].weight, SpaceKind::cuspidal);
    int ci = wb.rows[L_->gens[g].row].chi_idx;
    std::uint64_t chi = chars[(std::size_t)ci].value(*sp.oring(), d).c[0];
    std::uint64_t dk = powmod((std::uint64_t)(d % (std::int64_t)mod_),
                              (std::uint64_t)L_->gens[g].weight, mod_);
    tw[g] = mulmod(chi, dk, mod_);
  }
  return tw;
}

std::vector<std::uint64_t> HeckeContext::s_twist(std::int64_t d) {
  const auto& pol = L_->spaces->policy();
  if (std::gcd(d, pol.level.N) != 1)
    return std::vector<std::uint64_t>(L_->gens.size(), 0);
  auto tw = bracket_diamond_twist(d);
  std::uint64_t d2inv = invmod(
      mulmod((std::uint64_t)(d % (std::int64_t)mod_),
             (std::uint64_t)(d % (std::int64_t)mod_), mod_),
      mod_);
  for (auto& x : tw) x = mulmod(x, d2inv, mod_);
  return tw;
}

std::uint64_t HeckeContext::basis_twisted_coeff(
    std::size_t j, const std::vector<std::uint64_t>& twist, std::size_t idx) {
  ensure_wrow_cache(idx + 1);
  const auto& pol = L_->spaces->policy();
  const EchRow& row = L_->ech.rows[j];
  unsigned __int128 t = 0;
  for (std::size_t g = 0; g < row.prov.size(); ++g) {
    if (row.prov[g] == 0 || twist[g] == 0) continue;
    const auto& ps = L_->spaces->row_series_cached(L_->gens[g].weight,
                                                   L_->gens[g].row, idx + 1);
    t += (unsigned __int128)mulmod(row.prov[g], twist[g], mod_) *
         ps.s.u1(idx);
    t %= mod_;
  }
  std::uint64_t tv = (std::uint64_t)t;
  if (row.scale) {
    tv %= pow_u64((std::uint64_t)pol.p, row.prov_prec);
    std::uint64_t psc = pow_u64((std::uint64_t)pol.p, row.scale);
    if (tv % psc != 0)
      throw std::runtime_error("hecke: twisted coefficient not p^t-divisible");
    tv /= psc;
  }
  return tv;
}

Series HeckeContext::family_series(const U64Vec& coords, std::int64_t d,
                                   std::size_t prec) {
  ensure_wrow_cache(prec);
  auto tw = bracket_diamond_twist(d);
  return L_->vector_series(coords, prec, &tw).s;
}

Mat HeckeContext::matrix_from_image_series(
    const std::function<Series(const U64Vec&, std::size_t)>& image,
    const char* what) {
  std::size_t d = dim();
  Mat M = Mat::zero(d, d);
  for (std::size_t i = 0; i < d; ++i) {
    U64Vec e(d, 0);
    e[i] = 1;
    Series img = image(e, L_->cols + 1);
    U64Vec v(L_->cols);
    for (std::size_t j = 0; j < L_->cols; ++j) v[j] = img.u1(j + 1);
    auto rr = reduce_against(L_->ech, v);
    if (!rr.member_at(solve_floor_)) {
      std::ostringstream os;
      os << what << ": image of basis vector " << i
         << " not in the lattice (residual valuation " << rr.residual_val
         << " below floor " << std::min(solve_floor_, rr.cert_prec) << ")";
      throw std::runtime_error(os.str());
    }
    for (std::size_t j = 0; j < d; ++j) M.at(j, i) = rr.coords[j];
  }
  return M;
}

const Mat& HeckeContext::op_U() {
  auto it = ops_.find("U");
  if (it != ops_.end()) return it->second;
  const auto& pol = L_->spaces->policy();
  auto image = [&](const U64Vec& e, std::size_t prec) {
    Series f = L_->vector_series(e, prec * (std::size_t)pol.p).s;
    return u_shift(f, pol.p);
  };
  return ops_["U"] = matrix_from_image_series(image, "op_U");
}

const Mat& HeckeContext::op_Tl(std::int64_t ell) {
  const auto& pol = L_->spaces->policy();
  if (ell == pol.p) throw std::invalid_argument("op_Tl: ell = p is U's job");
  if (!is_prime_u64((std::uint64_t)ell))
    throw std::invalid_argument("op_Tl: ell must be prime");
  std::string key = "T" + std::to_string(ell);
  auto it = ops_.find(key);
  if (it != ops_.end()) return it->second;
  bool ell_in_N = (pol.level.N % ell == 0);
  std::uint64_t ellinv = invmod((std::uint64_t)ell % mod_, mod_);
  auto image = [&](const U64Vec& e, std::size_t prec) {
    Series f = L_->vector_series(e, prec * (std::size_t)ell).s;
    Series out(f.ring(), prec);
    Series tw(f.ring(), 0);
    if (!ell_in_N) tw = family_series(e, ell, prec);
    for (std::size_t m = 0; m < prec; ++m) {
      std::uint64_t v = f.u1(m * (std::size_t)ell);
      if (!ell_in_N && m % (std::size_t)ell == 0 && m > 0)
        v = addmod(v, mulmod(ellinv, tw.u1(m / (std::size_t)ell), mod_),
                   mod_);
      out.u1(m) = v;
    }
    return out;
  };
  return ops_[key] = matrix_from_image_series(image, "op_Tl");
}

const Mat& HeckeContext::op_Sl(std::int64_t ell) {
  const auto& pol = L_->spaces->policy();
  if (ell == pol.p) throw std::invalid_argument("op_Sl: ell = p excluded");
  if (!is_prime_u64((std::uint64_t)ell))
    throw std::invalid_argument("op_Sl: ell must be prime");
  std::string key = "S" + std::to_string(ell);
  auto it = ops_.find(key);
  if (it != ops_.end()) return it->second;
  if (pol.level.N % ell == 0)
    return ops_[key] = Mat::zero(dim(), dim());
  auto twv = s_twist(ell);
  auto image = [&](const U64Vec& e, std::size_t prec) {
    return L_->vector_series(e, prec, &twv).s;
  };
  return ops_[key] = matrix_from_image_series(image, "op_Sl");
}

const Mat& HeckeContext::op_diamond(std::int64_t a) {
  const auto& pol = L_->spaces->policy();
  if (std::gcd(a, pol.level.N) != 1)
    throw std::invalid_argument("op_diamond: a is not a unit mod N");
  std::string key = "<" + std::to_string(((a % pol.level.N) + pol.level.N) %
                                         pol.level.N) + ">";
  auto it = ops_.find(key);
  if (it != ops_.end()) return it->second;
  auto& sp = *L_->spaces;
  const auto& chars = sp.characters();
  std::vector<std::uint64_t> tw(L_->gens.size());
  for (std::size_t g = 0; g < L_->gens.size(); ++g) {
    const auto& wb = sp.basis(L_->gens[g].weight, SpaceKind::cuspidal);
    int ci = wb.rows[L_->gens[g].row].chi_idx;
    tw[g] = chars[(std::size_t)ci].value(*sp.oring(), a).c[0];
  }
  auto image = [&](const U64Vec& e, std::size_t prec) {
    return L_->vector_series(e, prec, &tw).s;
  };
  return ops_[key] = matrix_from_image_series(image, "op_diamond");
}

const Mat& HeckeContext::op_bracket(std::uint64_t x, const std::string& label) {
  std::string key = "[" + label + "]";
  auto it = ops_.find(key);
  if (it != ops_.end()) return it->second;
  if (x % (std::uint64_t)pm_.p == 0)
    throw std::invalid_argument("op_bracket: x must be a unit");
  std::vector<std::uint64_t> tw(L_->gens.size());
  for (std::size_t g = 0; g < L_->gens.size(); ++g)
    tw[g] = powmod(x, (std::uint64_t)L_->gens[g].weight, mod_);
  auto image = [&](const U64Vec& e, std::size_t prec) {
    return L_->vector_series(e, prec, &tw).s;
  };
  return ops_[key] = matrix_from_image_series(image, "op_bracket");
}

Mat HeckeContext::op_Tn(std::int64_t n) {
  const auto& pol = L_->spaces->policy();
  if (n % pol.p == 0) throw std::invalid_argument("op_Tn: p | n");
  if (n == 1) return Mat::identity(dim(), mod_);
  std::int64_t ell = smallest_prime_factor(n);
  int a = 0;
  std::int64_t rest = n;
  while (rest % ell == 0) {
    rest /= ell;
    ++a;
  }
  // T_{ell^a} ladder
  Mat Tprev = Mat::identity(dim(), mod_);
  Mat Tcur = op_Tl(ell);
  const Mat& Sl = op_Sl(ell);
  for (int j = 2; j <= a; ++j) {
    Mat next = mat_mul(op_Tl(ell), Tcur, mod_);
    Mat corr = mat_scale(mat_mul(Sl, Tprev, mod_),
                         (std::uint64_t)(ell % (std::int64_t)mod_), mod_);
    next = mat_sub(next, corr, mod_);
    Tprev = std::move(Tcur);
    Tcur = std::move(next);
  }
  if (rest == 1) return Tcur;
  return mat_mul(Tcur, op_Tn(rest), mod_);
}

Mat HeckeContext::op_UrTn(std::int64_t n, std::int64_t r) {
  Mat m = op_Tn(n);
  for (std::int64_t i = 0; i < r; ++i) m = mat_mul(op_U(), m, mod_);
  return m;
}

Series HeckeContext::tn_family(const U64Vec& coords, std::int64_t n,
                               std::int64_t d, std::size_t prec) {
  const auto& pol = L_->spaces->policy();
  if (n == 1) return family_series(coords, d, prec);
  std::int64_t ell = smallest_prime_factor(n);
  int a = 0;
  std::int64_t rest = n;
  while (rest % ell == 0) {
    rest /= ell;
    ++a;
  }
  std::size_t lp = 1;
  for (int i = 0; i < a; ++i) lp *= (std::size_t)ell;
  bool ell_in_N = (pol.level.N % ell == 0);
  std::uint64_t ellinv = invmod((std::uint64_t)ell % mod_, mod_);
  // ladder B[j][i] = T_{ell^j} T_rest F_{d ell^i}
  std::vector<std::vector<Series>> B(a + 1);
  for (int i = 0; i <= a; ++i) {
    std::int64_t sh = d;
    for (int t = 0; t < i; ++t) sh *= ell;
    B[0].push_back(tn_family(coords, rest, sh, prec * lp));
  }
  for (int j = 1; j <= a; ++j) {
    B[j].resize(a - j + 1, Series());
    for (int i = 0; i <= a - j; ++i) {
      const Series& prev = B[j - 1][i];
      std::size_t out_prec = prev.prec() / (std::size_t)ell;
      Series out(prev.ring(), out_prec);
      const Series& tw = B[j - 1][i + 1];
      for (std::size_t m = 0; m < out_prec; ++m) {
        std::uint64_t v = prev.u1(m * (std::size_t)ell);
        if (!ell_in_N && m % (std::size_t)ell == 0 && m > 0)
          v = addmod(v, mulmod(ellinv, tw.u1(m / (std::size_t)ell), mod_),
                     mod_);
        out.u1(m) = v;
      }
      if (j >= 2 && !ell_in_N) {
        // - ell S_ell T_{ell^{j-2}} = - ell^{-1} [ell]<ell> T_{ell^{j-2}}
        const Series& lower = B[j - 2][i + 1];
        for (std::size_t m = 0; m < out_prec; ++m)
          out.u1(m) = submod(out.u1(m),
                             mulmod(ellinv, lower.u1(m), mod_), mod_);
      }
      B[j][i] = std::move(out);
    }
  }
  return std::move(B[a][0]);
}

std::uint64_t HeckeContext::a1_UrTn_series(const U64Vec& coords,
                                           std::int64_t n, std::int64_t r) {
  const auto& pol = L_->spaces->policy();
  std::size_t pr = 1;
  for (std::int64_t i = 0; i < r; ++i) pr *= (std::size_t)pol.p;
  Series s = tn_family(coords, n, 1, pr + 1);
  return s.u1(pr);
}

U64Vec AlgebraModule::express_phi(const U64Vec& phi, std::uint64_t mod,
                                  std::int64_t p, int verify_floor) const {
  U64Vec coords;
  if (flavor == Flavor::full) {
    // c gram = phi  =>  c = phi gram^{-1} (row vectors)
    coords = vec_mat(phi, gram_inv, mod);
  } else {
    U64Vec sub(rank);
    for (std::size_t t = 0; t < rank; ++t) sub[t] = phi[columns_square[t]];
    coords = vec_mat(sub, gram_inv, mod);
    if (verify_floor > 0) {
      U64Vec full = vec_mat(coords, gram, mod);
      std::uint64_t fm = pow_u64((std::uint64_t)p, verify_floor);
      for (std::size_t j = 0; j < full.size(); ++j)
        if (full[j] % fm != phi[j] % fm)
          throw std::runtime_error(
              "express_phi: functional not in the module span");
    }
  }
  return coords;
}

AlgebraModule build_algebra(Flavor flavor, HeckeContext& ctx) {
  const DCLattice& L = ctx.lattice();
  const auto& pol = L.spaces->policy();
  std::size_t r = L.rank();
  std::uint64_t mod = ctx.mod();
  AlgebraModule A;
  A.flavor = flavor;
  A.w = L.w;

  // greedy unit-minor selection over candidate columns m = n p^r
  std::vector<U64Vec> sel_rows;  // reduced copies mod p for rank tracking
  std::uint64_t p = (std::uint64_t)pol.p;
  for (std::size_t m = 1; m <= L.cols && A.ops.size() < r; ++m) {
    std::int64_t n = (std::int64_t)m;
    std::int64_t rr = 0;
    while (n % pol.p == 0) {
      n /= pol.p;
      ++rr;
    }
    if (flavor == Flavor::pf && rr != 0) continue;
    if (flavor == Flavor::sh &&
        (rr != 0 || std::gcd(n, pol.level.N0) != 1)) continue;
    U64Vec col(r);
    for (std::size_t j = 0; j < r; ++j)
      col[j] = L.ech.rows[j].v[m - 1] % p;
    // does col increase the F_p rank?
    U64Vec red = col;
    for (auto& srow : sel_rows) {
      std::size_t lead = 0;
      while (lead < r && srow[lead] == 0) ++lead;
      if (lead < r && red[lead] != 0) {
        std::uint64_t q = mulmod(red[lead], invmod(srow[lead], p), p);
        for (std::size_t j = 0; j < r; ++j)
          red[j] = submod(red[j], mulmod(q, srow[j], p), p);
      }
    }
    bool nonzero = std::any_of(red.begin(), red.end(),
                               [](std::uint64_t x) { return x != 0; });
    if (!nonzero) continue;
    sel_rows.push_back(red);
    std::sort(sel_rows.begin(), sel_rows.end(),
              [&](const U64Vec& x, const U64Vec& y) {
                std::size_t lx = 0, ly = 0;
                while (lx < r && x[lx] == 0) ++lx;
                while (ly < r && y[ly] == 0) ++ly;
                return lx < ly;
              });
    A.ops.emplace_back(n, rr);
    A.columns.push_back(m);
  }
  A.rank = A.ops.size();
  if (flavor == Flavor::full && A.rank != r)
    throw std::runtime_error(
        "build_algebra: duality violation, full flavor rank " +
        std::to_string(A.rank) + " != lattice rank " + std::to_string(r));

  // gram over the lattice basis: gram[s][j] = a_{m_s}(f_j)
  A.gram = Mat::zero(A.rank, r);
  for (std::size_t s = 0; s < A.rank; ++s)
    for (std::size_t j = 0; j < r; ++j)
      A.gram.at(s, j) = L.ech.rows[j].v[A.columns[s] - 1];
  if (flavor == Flavor::full) {
    A.gram_inv = mat_inverse(A.gram, mod, pol.p);
  } else {
    // select a square invertible column subset for expression
    // (full functional verification happens at expression time)
    Mat sub = Mat::zero(A.rank, A.rank);
    std::vector<std::size_t> cols_used;
    {
      std::vector<U64Vec> rows_p;
      for (std::size_t j = 0; j < r && cols_used.size() < A.rank; ++j) {
        U64Vec cand(A.rank);
        for (std::size_t s = 0; s < A.rank; ++s)
          cand[s] = A.gram.at(s, j) % p;
        U64Vec red = cand;
        for (auto& srow : rows_p) {
          std::size_t lead = 0;
          while (lead < A.rank && srow[lead] == 0) ++lead;
          if (lead < A.rank && red[lead] != 0) {
            std::uint64_t q = mulmod(red[lead], invmod(srow[lead], p), p);
            for (std::size_t t = 0; t < A.rank; ++t)
              red[t] = submod(red[t], mulmod(q, srow[t], p), p);
          }
        }
        if (std::any_of(red.begin(), red.end(),
                        [](std::uint64_t x) { return x != 0; })) {
          rows_p.push_back(red);
          cols_used.push_back(j);
        }
      }
      if (cols_used.size() != A.rank)
        throw std::runtime_error("build_algebra: no unit minor");
      for (std::size_t s = 0; s < A.rank; ++s)
        for (std::size_t t = 0; t < A.rank; ++t)
          sub.at(s, t) = A.gram.at(s, cols_used[t]);
    }
    A.gram_inv = mat_inverse(sub, mod, pol.p);
    A.columns_square = cols_used;
  }

  // structure constants via the Hecke multiplication identity:
  // T_m T_n = sum_{d | (m,n), (d,N)=1} d S_d T_{mn/d^2}
  A.table.assign(A.rank * A.rank, U64Vec());
  A.table_prec = pol.work_prec;
  for (std::size_t a = 0; a < A.rank; ++a) {
    for (std::size_t b = a; b < A.rank; ++b) {
      auto [na, ra] = A.ops[a];
      auto [nb, rb] = A.ops[b];
      std::int64_t g = std::gcd(na, nb);
      std::size_t pR = 1;
      for (std::int64_t i = 0; i < ra + rb; ++i) pR *= (std::size_t)pol.p;
      U64Vec phi(r, 0);
      for (auto d : divisors_of(g)) {
        if (std::gcd(d, pol.level.N) != 1) continue;
        auto tw = ctx.s_twist(d);
        std::size_t idx = (std::size_t)((na / d) * (nb / d)) * pR;
        std::uint64_t dmul = (std::uint64_t)(d % (std::int64_t)mod);
        for (std::size_t j = 0; j < r; ++j) {
          std::uint64_t c = ctx.basis_twisted_coeff(j, tw, idx);
          phi[j] = addmod(phi[j], mulmod(dmul, c, mod), mod);
        }
      }
      U64Vec coords = A.express_phi(phi, mod, pol.p,
                                    flavor == Flavor::full ? 0 : 2);
      A.table[a * A.rank + b] = coords;
      A.table[b * A.rank + a] = std::move(coords);
    }
  }
  return A;
}

}  // namespace dcform

namespace dcform {

U64Vec table_mul(const AlgebraModule& A, const U64Vec& x, const U64Vec& y,
                 std::uint64_t mod) {
  U64Vec out(A.rank, 0);
  for (std::size_t a = 0; a < A.rank; ++a) {
    if (x[a] == 0) continue;
    for (std::size_t b = 0; b < A.rank; ++b) {
      if (y[b] == 0) continue;
      std::uint64_t c = mulmod(x[a], y[b], mod);
      kernels::row_addmul(out.data(), A.table[a * A.rank + b].data(), c,
                          A.rank, mod);
    }
  }
  return out;
}

U64Vec express_column(const AlgebraModule& A, const HeckeContext& ctx,
                      std::size_t m) {
  const DCLattice& L = ctx.lattice();
  if (m < 1 || m > L.cols)
    throw std::invalid_argument("express_column: column out of window");
  U64Vec phi(L.rank());
  for (std::size_t j = 0; j < L.rank(); ++j)
    phi[j] = L.ech.rows[j].v[m - 1];
  return A.express_phi(phi, ctx.mod(), ctx.lattice().spaces->policy().p,
                       A.flavor == Flavor::full ? 0 : 2);
}

Mat element_matrix(const AlgebraModule& A, HeckeContext& ctx,
                   const U64Vec& coords) {
  // Mat(X) columns: coords of X e_j, recovered from the functionals
  // a_{m_t}(X e_j) = a_1((b_t X) e_j) = (b_t X)-coords . gram[.][j]
  std::uint64_t mod = ctx.mod();
  std::size_t r = A.rank;
  std::size_t d = ctx.dim();
  Mat W = Mat::zero(r, d);
  for (std::size_t t = 0; t < r; ++t) {
    U64Vec bt(r, 0);
    bt[t] = 1;
    U64Vec zt = table_mul(A, bt, coords, mod);
    // row t of W = zt^T gram
    U64Vec row = vec_mat(zt, A.gram, mod);
    for (std::size_t j = 0; j < d; ++j) W.at(t, j) = row[j];
  }
  if (A.flavor != Flavor::full)
    throw std::invalid_argument("element_matrix: full flavor only");
  // columns: solve gram^T? W[t][j] = a_{m_t}(X e_j); coords(X e_j) =
  // phi_j gram_inv with phi_j = column j of W
  Mat M = Mat::zero(d, d);
  for (std::size_t j = 0; j < d; ++j) {
    U64Vec phi(r);
    for (std::size_t t = 0; t < r; ++t) phi[t] = W.at(t, j);
    U64Vec cj = vec_mat(phi, A.gram_inv, mod);
    for (std::size_t i = 0; i < d; ++i) M.at(i, j) = cj[i];
  }
  return M;
}

U64Vec express_matrix(const AlgebraModule& A, HeckeContext& ctx,
                      const Mat& X, bool verify) {
  const DCLattice& L = ctx.lattice();
  std::uint64_t mod = ctx.mod();
  std::size_t d = ctx.dim();
  // phi[j] = a_1(X e_j) = sum_i X[i][j] a_1(e_i)
  U64Vec a1(d);
  for (std::size_t i = 0; i < d; ++i) a1[i] = L.ech.rows[i].v[0];
  U64Vec phi(d, 0);
  for (std::size_t j = 0; j < d; ++j) {
    unsigned __int128 acc = 0;
    for (std::size_t i = 0; i < d; ++i)
      acc += (unsigned __int128)X.at(i, j) * a1[i];
    phi[j] = (std::uint64_t)(acc % mod);
  }
  U64Vec coords = A.express_phi(phi, mod, L.spaces->policy().p,
                                A.flavor == Flavor::full ? 0 : 2);
  if (verify) {
    Mat back = element_matrix(A, ctx, coords);
    std::uint64_t fm =
        pow_u64((std::uint64_t)L.spaces->policy().p,
                std::min(A.table_prec, ctx.solve_floor()));
    for (std::size_t i = 0; i < back.a.size(); ++i)
      if (back.a[i] % fm != X.a[i] % fm)
        throw std::runtime_error(
            "express_matrix: operator is not in the module span");
  }
  return coords;
}

GramVerdict pairing_gram(const AlgebraModule& A, HeckeContext& ctx) {
  GramVerdict v;
  if (A.rank == 0) {
    v.det_val = 0;
    v.unit = true;  // empty matrix has determinant 1
    return v;
  }
  if (A.gram.rows != A.gram.cols) {
    // rectangular (pf/sh): report the square subset
    Mat sub = Mat::zero(A.rank, A.rank);
    for (std::size_t s = 0; s < A.rank; ++s)
      for (std::size_t t = 0; t < A.rank; ++t)
        sub.at(s, t) = A.gram.at(s, A.columns_square[t]);
    PMod pm = PMod::make(ctx.lattice().spaces->policy().p,
                         ctx.lattice().spaces->policy().work_prec);
    v.det_val = det_valuation(sub, pm);
  } else {
    PMod pm = PMod::make(ctx.lattice().spaces->policy().p,
                         ctx.lattice().spaces->policy().work_prec);
    v.det_val = det_valuation(A.gram, pm);
  }
  v.unit = (v.det_val == 0);
  return v;
}

GramVerdict pairing_gram_unsaturated(HeckeContext& ctx,
                                     const AlgebraModule& A) {
  // negative control: the same functional columns on the unsaturated
  // stack of weight-basis rows (no content division)
  const DCLattice& L = ctx.lattice();
  const auto& pol = L.spaces->policy();
  std::vector<U64Vec> stack;
  EchOptions opts;
  opts.saturate = false;
  opts.track_provenance = false;
  for (int k = 2; k <= L.w; ++k) {
    const WeightBasis& wb = L.spaces->basis(k, SpaceKind::cuspidal);
    for (auto& row : wb.rows) {
      stack.push_back(row.coeffs);
      opts.initial_prec.push_back(row.prec);
    }
  }
  PMod pm = PMod::make(pol.p, pol.work_prec);
  auto ech = echelonize(std::move(stack), pm, opts);
  GramVerdict v;
  if (ech.rank() != A.rank)
    throw std::runtime_error("negative control: rank mismatch");
  Mat g = Mat::zero(A.rank, A.rank);
  for (std::size_t s = 0; s < A.rank; ++s)
    for (std::size_t j = 0; j < A.rank; ++j)
      g.at(s, j) = ech.rows[j].v[A.columns[s] - 1];
  v.det_val = det_valuation(g, pm);
  v.unit = (v.det_val == 0);
  return v;
}

Mat restriction_map(const AlgebraModule& src, const AlgebraModule& dst,
                    const HeckeContext& dst_ctx) {
  // row s = coords at the destination weight of the source op (n_s, r_s)
  Mat R = Mat::zero(src.rank, dst.rank);
  for (std::size_t s = 0; s < src.rank; ++s) {
    U64Vec c = express_column(dst, dst_ctx, src.columns[s]);
    for (std::size_t t = 0; t < dst.rank; ++t) R.at(s, t) = c[t];
  }
  return R;
}

bool restriction_surjective(const Mat& restr, const AlgebraModule& dst,
                            std::int64_t p) {
  return rank_mod_p(restr, p) == dst.rank;
}

bool check_teqh(const AlgebraModule& A, HeckeContext& ctx) {
  const DCLattice& L = ctx.lattice();
  std::uint64_t mod = ctx.mod();
  std::size_t d = ctx.dim();
  // lattice coordinates of every stacked weight-basis row
  std::vector<U64Vec> scoords;
  for (std::size_t g = 0; g < L.gens.size(); ++g) {
    const WeightBasis& wb =
        L.spaces->basis(L.gens[g].weight, SpaceKind::cuspidal);
    auto rr = reduce_against(L.ech, wb.rows[L.gens[g].row].coeffs);
    if (!rr.member_at(ctx.solve_floor()))
      throw std::runtime_error("check_teqh: weight row not in lattice");
    scoords.push_back(rr.coords);
  }
  // rows of the test matrix: flattened images (b_s . s_j) over F_p
  Mat big = Mat::zero(A.rank, scoords.size() * d);
  for (std::size_t s = 0; s < A.rank; ++s) {
    U64Vec e(A.rank, 0);
    e[s] = 1;
    Mat Bs = element_matrix(A, ctx, e);
    for (std::size_t j = 0; j < scoords.size(); ++j) {
      U64Vec img = mat_vec(Bs, scoords[j], mod);
      for (std::size_t i = 0; i < d; ++i)
        big.at(s, j * d + i) = img[i];
    }
  }
  return rank_mod_p(big, L.spaces->policy().p) == A.rank;
}

}  // namespace dcform
