#include "dcform/spaces.hpp"

#include <algorithm>
#include <cassert>
#include <numeric>
#include <set>
#include <sstream>
#include <stdexcept>

#include "dcform/eisenstein.hpp"
#include "dcform/kernels.hpp"
#include "dcform/zmod.hpp"

namespace dcform {

namespace {

std::vector<std::int64_t> divisors(std::int64_t n) {
  std::vector<std::int64_t> ds;
  for (std::int64_t d = 1; d <= n; ++d)
    if (n % d == 0) ds.push_back(d);
  return ds;
}

bool is_prime_small(std::int64_t n) { return is_prime_u64((std::uint64_t)n); }

}  // namespace

PrecisionPolicy PrecisionPolicy::make(std::int64_t p, int n,
                                      LevelDesc level, int wmax, int guard) {
  PrecisionPolicy pol;
  pol.p = p;
  pol.level = level;
  pol.n = n;
  pol.wmax = wmax;
  // leave 4 digits of headroom above M for constant-term guard rings
  int M = n + guard;
  while (M > n + 2) {
    try {
      pow_u64((std::uint64_t)p, M + 4);
      break;
    } catch (const std::overflow_error&) {
      --M;
    }
  }
  pol.work_prec = M;
  return pol;
}

Series hecke_tl_single_weight(const Series& g, std::int64_t ell, int k,
                              const RingElt& chi_ell, std::int64_t N) {
  const Ring& R = *g.ring();
  std::size_t out_prec = g.prec() / (std::size_t)ell;
  if (out_prec == 0)
    throw std::invalid_argument("hecke_tl: insufficient source precision");
  Series out(g.ring(), out_prec);
  bool ell_divides_N = (N % ell == 0);
  RingElt mult = R.mul_int(chi_ell, 1);
  // ell^{k-1} chi(ell)
  RingElt lk = R.pow(R.from_int(ell), (std::uint64_t)(k - 1));
  mult = R.mul(mult, lk);
  for (std::size_t m = 0; m < out_prec; ++m) {
    RingElt v = g.coeff(m * (std::size_t)ell);
    if (!ell_divides_N && m % (std::size_t)ell == 0)
      v = R.add(v, R.mul(mult, g.coeff(m / (std::size_t)ell)));
    out.set_coeff(m, v);
  }
  return out;
}

Spaces::Spaces(RingPtr oring, PrecisionPolicy policy)
    : oring_(std::move(oring)), policy_(policy) {
  chars_ = DirichletCharacter::all(policy_.level.N, policy_.p);
  for (auto& c : chars_) prim_chars_.push_back(c.primitize());
}

int Spaces::char_index(const DirichletCharacter& chi) const {
  for (std::size_t i = 0; i < chars_.size(); ++i)
    if (chars_[i] == chi) return (int)i;
  throw std::logic_error("spaces: character not in table");
}

int Spaces::char_mul_index(int i, int j) const {
  // multiply exponent tables pointwise
  const auto& a = chars_[(std::size_t)i];
  const auto& b = chars_[(std::size_t)j];
  std::int64_t N = policy_.level.N;
  std::int64_t ord = policy_.p - 1;
  for (std::size_t t = 0; t < chars_.size(); ++t) {
    bool match = true;
    for (std::int64_t x = 0; x < N && match; ++x) {
      int ea = a.exponent(x), eb = b.exponent(x);
      int ep = chars_[t].exponent(x);
      if (ea < 0 || eb < 0) {
        if (ep >= 0) match = false;
      } else if (ep != (int)((ea + eb) % ord)) {
        match = false;
      }
    }
    if (match) return (int)t;
  }
  throw std::logic_error("spaces: product character not found");
}

int Spaces::add_gen(GenSpec g) {
  auto it = gen_lookup_.find(g.name);
  if (it != gen_lookup_.end()) return it->second;
  int idx = (int)gens_.size();
  gen_lookup_[g.name] = idx;
  gens_.push_back(std::move(g));
  gen_cache_.emplace_back();
  return idx;
}

void Spaces::ensure_gens(int k) {
  if (atoms_by_weight_.count(k)) return;
  std::int64_t N = policy_.level.N;
  std::vector<int> atoms;

  // single Eisenstein series of weight k with d-shifts
  if (k >= 3 || k == 1 || k == 2) {
    // (1,1) system: classical E_k, k even >= 4
    if (k >= 4 && k % 2 == 0) {
      for (auto d : divisors(N)) {
        GenSpec g;
        g.kind = GenSpec::Kind::eis_level1;
        g.weight = k;
        g.chi_idx = 0;
        g.d = d;
        g.name = "E" + std::to_string(k) + "[d=" + std::to_string(d) + "]";
        atoms.push_back(add_gen(g));
      }
    }
    if (k == 2) {
      for (auto d : divisors(N)) {
        if (d == 1) continue;
        GenSpec g;
        g.kind = GenSpec::Kind::e2stab;
        g.weight = 2;
        g.chi_idx = 0;
        g.d = d;
        g.name = "E2stab[d=" + std::to_string(d) + "]";
        atoms.push_back(add_gen(g));
      }
    }
    // character pairs (chi, psi), primitive, not both trivial; in weight
    // one E_1^{chi,psi} = E_1^{psi,chi} and only the chi-even, psi-odd
    // orientation carries the modular constant term
    for (std::size_t i = 0; i < prim_chars_.size(); ++i) {
      for (std::size_t j = 0; j < prim_chars_.size(); ++j) {
        const auto& chi = prim_chars_[i];
        const auto& psi = prim_chars_[j];
        if (chi.trivial() && psi.trivial()) continue;
        if (k == 1 && (chi.odd() || !psi.odd())) continue;
        bool odd = (chi.odd() != psi.odd());
        if (odd != (k % 2 == 1)) continue;
        std::int64_t cc = chi.conductor() * psi.conductor();
        if (cc == 0 || N % cc != 0) continue;
        for (auto d : divisors(N / cc)) {
          GenSpec g;
          g.kind = GenSpec::Kind::eis_pair;
          g.weight = k;
          g.chi = (int)i;
          g.psi = (int)j;
          g.chi_idx = char_mul_index((int)i, (int)j);
          g.d = d;
          std::ostringstream nm;
          nm << "E" << k << "{" << chars_[i].name() << ","
             << chars_[j].name() << "}[d=" << d << "]";
          g.name = nm.str();
          atoms.push_back(add_gen(g));
        }
      }
    }
  }
  atoms_by_weight_[k] = atoms;
}

std::vector<int> Spaces::spanning_gens(int k, SpaceKind kind) {
  ensure_gens(k);
  if (kind == SpaceKind::eisenstein) return atoms_by_weight_[k];
  auto it = span_by_weight_.find(k);
  if (it != span_by_weight_.end()) return it->second;

  std::vector<int> span = atoms_by_weight_[k];
  std::int64_t N = policy_.level.N;

  // products of two Eisenstein atoms, low weight times complement
  for (int a = 1; a <= k / 2; ++a) {
    if (a > 2) break;  // narrow strategy; build_basis widens on shortfall
    ensure_gens(a);
    ensure_gens(k - a);
    for (int ga : atoms_by_weight_[a]) {
      for (int gb : atoms_by_weight_[k - a]) {
        GenSpec g;
        g.kind = GenSpec::Kind::product;
        g.weight = k;
        g.left = ga;
        g.right = gb;
        g.chi_idx = char_mul_index(gens_[ga].chi_idx, gens_[gb].chi_idx);
        g.name = "(" + gens_[ga].name + ")*(" + gens_[gb].name + ")";
        span.push_back(add_gen(g));
      }
    }
  }

  // level-1 monomials E4^a E6^b Delta^c with V_d shifts
  for (int c = 0; 12 * c <= k; ++c) {
    for (int b = 0; 12 * c + 6 * b <= k; ++b) {
      int rem = k - 12 * c - 6 * b;
      if (rem % 4) continue;
      int a = rem / 4;
      if (a == 0 && b == 0 && c == 0) continue;
      for (auto d : divisors(N)) {
        GenSpec g;
        g.kind = GenSpec::Kind::level1_mono;
        g.weight = k;
        g.chi_idx = 0;
        g.a = a;
        g.b = b;
        g.c = c;
        g.d = d;
        std::ostringstream nm;
        nm << "E4^" << a << "E6^" << b << "D^" << c << "[d=" << d << "]";
        g.name = nm.str();
        span.push_back(add_gen(g));
      }
    }
  }
  span_by_weight_[k] = span;
  return span;
}

Series Spaces::compute_gen(int gen, std::size_t prec) {
  const GenSpec& g = gens_[(std::size_t)gen];
  std::int64_t N = policy_.level.N;
  switch (g.kind) {
    case GenSpec::Kind::eis_level1: {
      auto s = eisenstein_level1(g.weight, oring_, prec);
      return g.d == 1 ? s : v_shift(s, g.d);
    }
    case GenSpec::Kind::e2stab:
      return e2_stabilized(g.d, oring_, prec);
    case GenSpec::Kind::eis_pair: {
      auto es = eisenstein_pair(prim_chars_[(std::size_t)g.chi],
                                prim_chars_[(std::size_t)g.psi], g.weight, N,
                                oring_, prec);
      return g.d == 1 ? es.s : v_shift(es.s, g.d);
    }
    case GenSpec::Kind::level1_mono: {
      Series s(oring_, prec);
      s.set_coeff(0, oring_->one());
      if (g.a) {
        auto e4 = eisenstein_level1(4, oring_, prec);
        for (int i = 0; i < g.a; ++i) s = series_mul(s, e4);
      }
      if (g.b) {
        auto e6 = eisenstein_level1(6, oring_, prec);
        for (int i = 0; i < g.b; ++i) s = series_mul(s, e6);
      }
      if (g.c) {
        auto dl = delta(oring_, prec);
        for (int i = 0; i < g.c; ++i) s = series_mul(s, dl);
      }
      return g.d == 1 ? s : v_shift(s, g.d);
    }
    case GenSpec::Kind::product:
      return series_mul(gen_series(g.left, prec).truncated(prec),
                        gen_series(g.right, prec).truncated(prec));
    case GenSpec::Kind::cusp_proj: {
      const ProjectorSpec& proj = projector(g.weight);
      std::size_t src = prec;
      for (auto& f : proj) src *= (std::size_t)f.ell;
      Series s = gen_series(g.base, src).truncated(src);
      const GenSpec& base = gens_[(std::size_t)g.base];
      for (auto& f : proj) {
        RingElt chi_ell =
            chars_[(std::size_t)base.chi_idx].value(*oring_, f.ell);
        Series tl = hecke_tl_single_weight(s, f.ell, g.weight, chi_ell, N);
        s = series_sub(tl, series_scale(s.truncated(tl.prec()),
                                        RingElt{{f.lambda}}));
      }
      return s;
    }
  }
  throw std::logic_error("compute_gen: unknown kind");
}

const Series& Spaces::gen_series(int gen, std::size_t prec) {
  Series& slot = gen_cache_[(std::size_t)gen];
  if (slot.prec() < prec) slot = compute_gen(gen, prec);
  return slot;
}

const ProjectorSpec& Spaces::projector(int k) {
  auto it = projectors_.find(k);
  if (it != projectors_.end()) return it->second;
  ensure_gens(k);
  std::int64_t N = policy_.level.N;
  std::uint64_t mod = oring_->carry_mod();
  // distinct Eisenstein eigensystems at weight k: keyed by the pair of
  // primitive characters (d-shifts share a system)
  struct System {
    int chi = -1, psi = -1;  // -1,-1 means the (1,1)/E2stab system
  };
  std::vector<System> systems;
  std::set<std::pair<int, int>> seen;
  for (int gi : atoms_by_weight_[k]) {
    const GenSpec& g = gens_[(std::size_t)gi];
    std::pair<int, int> key;
    if (g.kind == GenSpec::Kind::eis_pair)
      key = {g.chi, g.psi};
    else
      key = {-1, -1};
    if (seen.insert(key).second) systems.push_back({key.first, key.second});
  }
  auto eigenvalue = [&](const System& s, std::int64_t ell) -> std::uint64_t {
    // chi(ell) + psi(ell) ell^{k-1}
    RingElt cv = s.chi < 0 ? oring_->one()
                           : prim_chars_[(std::size_t)s.chi].value(*oring_, ell);
    RingElt pv = s.psi < 0 ? oring_->one()
                           : prim_chars_[(std::size_t)s.psi].value(*oring_, ell);
    std::uint64_t lk = powmod((std::uint64_t)ell, (std::uint64_t)(k - 1), mod);
    return addmod(cv.c[0], mulmod(pv.c[0], lk, mod), mod);
  };
  ProjectorSpec spec;
  for (std::size_t i = 0; i < systems.size(); ++i) {
    std::int64_t chosen = 0;
    for (std::int64_t ell = 2; ell < 50; ++ell) {
      if (!is_prime_small(ell) || (N * policy_.p) % ell == 0) continue;
      bool sep = true;
      for (std::size_t j = 0; j < systems.size() && sep; ++j)
        if (j != i && eigenvalue(systems[i], ell) == eigenvalue(systems[j], ell))
          sep = false;
      if (sep) {
        chosen = ell;
        break;
      }
    }
    if (!chosen)
      throw std::runtime_error(
          "projector: inseparable Eisenstein eigensystems (increase bound)");
    spec.push_back({chosen, eigenvalue(systems[i], chosen)});
  }
  return projectors_[k] = std::move(spec);
}

WeightBasis Spaces::build_basis(int k, SpaceKind kind) {
  std::int64_t N = policy_.level.N;
  std::size_t B = policy_.B_cols();
  std::int64_t want = dimension_oracle(k, N, kind);

  for (int attempt = 0; attempt < 2; ++attempt) {
    std::vector<int> span = spanning_gens(k, kind);
    if (attempt == 1) {
      // widen: all product splits a <= k/2
      for (int a = 3; a <= k / 2; ++a) {
        ensure_gens(a);
        ensure_gens(k - a);
        for (int ga : atoms_by_weight_[a])
          for (int gb : atoms_by_weight_[k - a]) {
            GenSpec g;
            g.kind = GenSpec::Kind::product;
            g.weight = k;
            g.left = ga;
            g.right = gb;
            g.chi_idx = char_mul_index(gens_[ga].chi_idx, gens_[gb].chi_idx);
            g.name = "(" + gens_[ga].name + ")*(" + gens_[gb].name + ")";
            span.push_back(add_gen(g));
          }
      }
      span_by_weight_[k] = span;
    }

    // cuspidal: project every spanning generator
    std::vector<int> use;
    if (kind == SpaceKind::cuspidal) {
      projector(k);  // force construction
      for (int gi : span) {
        GenSpec g;
        g.kind = GenSpec::Kind::cusp_proj;
        g.weight = k;
        g.base = gi;
        g.chi_idx = gens_[(std::size_t)gi].chi_idx;
        g.name = "P(" + gens_[(std::size_t)gi].name + ")";
        use.push_back(add_gen(g));
      }
    } else {
      use = span;
    }

    bool has_a0 = (kind != SpaceKind::cuspidal);
    std::size_t cols = has_a0 ? B + 1 : B;

    WeightBasis wb;
    wb.k = k;
    wb.kind = kind;
    wb.cols = cols;
    wb.has_a0 = has_a0;
    wb.gens = use;

    // per-character blocks in character order
    PMod pm = PMod::make(policy_.p, policy_.work_prec);
    for (std::size_t ci = 0; ci < chars_.size(); ++ci) {
      std::vector<U64Vec> stack;
      std::vector<int> stack_gens;  // positions in `use`
      for (std::size_t u = 0; u < use.size(); ++u) {
        if ((std::size_t)gens_[(std::size_t)use[u]].chi_idx != ci) continue;
        const Series& s = gen_series(use[u], B + 1);
        U64Vec row(cols);
        for (std::size_t j = 0; j < cols; ++j)
          row[j] = s.u1(j + (has_a0 ? 0 : 1));
        if (!has_a0 && s.u1(0) != 0)
          throw std::runtime_error("spaces: projected form has a_0 != 0");
        stack.push_back(std::move(row));
        stack_gens.push_back((int)u);
      }
      if (stack.empty()) continue;
      EchOptions opts;
      opts.saturate = true;
      opts.track_provenance = true;
      opts.min_prec_required = policy_.n;
      auto ech = echelonize(std::move(stack), pm, opts);
      for (auto& ev : ech.divisor_log)
        wb.divisor_log.push_back(ev);
      for (auto& r : ech.rows) {
        BasisRow br;
        br.coeffs = r.v;
        br.prov.assign(use.size(), 0);
        for (std::size_t g2 = 0; g2 < r.prov.size(); ++g2)
          br.prov[(std::size_t)stack_gens[g2]] = r.prov[g2];
        br.scale = r.scale;
        br.prec = r.prec;
        br.prov_prec = r.prov_prec;
        br.chi_idx = (int)ci;
        wb.rows.push_back(std::move(br));
      }
    }

    if ((std::int64_t)wb.rows.size() != want) {
      if (attempt == 0) continue;  // widen and retry
      std::ostringstream os;
      os << "spaces: spanning shortfall at k=" << k << " kind="
         << (int)kind << ": achieved rank " << wb.rows.size()
         << ", dimension oracle " << want;
      throw std::runtime_error(os.str());
    }

    // joint solver for membership; re-echelonizing the basis rows must
    // not divide further when the per-block bases are jointly saturated
    std::vector<U64Vec> rows2;
    EchOptions sopts;
    for (auto& r : wb.rows) {
      rows2.push_back(r.coeffs);
      sopts.initial_prec.push_back(r.prec);
    }
    sopts.saturate = true;
    sopts.track_provenance = false;
    sopts.min_prec_required = policy_.n;
    wb.solver = echelonize(std::move(rows2), pm, sopts);
    if (wb.solver.rank() != wb.rows.size())
      throw std::runtime_error("spaces: joint rank drop across characters");
    return wb;
  }
  throw std::logic_error("spaces: unreachable");
}

const WeightBasis& Spaces::basis(int k, SpaceKind kind) {
  auto key = std::make_pair(k, (int)kind);
  auto it = basis_cache_.find(key);
  if (it != basis_cache_.end()) return it->second;
  return basis_cache_[key] = build_basis(k, kind);
}

Spaces::PrecSeries Spaces::row_series(const WeightBasis& wb, std::size_t row,
                                      std::size_t prec) {
  const BasisRow& br = wb.rows[row];
  std::uint64_t mod = oring_->carry_mod();
  Series combo(oring_, prec);
  for (std::size_t g = 0; g < br.prov.size(); ++g) {
    if (br.prov[g] == 0) continue;
    const Series& gs = gen_series(wb.gens[g], prec);
    kernels::row_addmul(combo.raw().data(), gs.raw().data(), br.prov[g],
                        prec, mod);
  }
  if (br.scale) {
    std::uint64_t cut = pow_u64((std::uint64_t)policy_.p, br.prov_prec);
    std::uint64_t ps = pow_u64((std::uint64_t)policy_.p, br.scale);
    for (std::size_t i = 0; i < prec; ++i) {
      std::uint64_t v = combo.u1(i) % cut;
      if (v % ps != 0)
        throw std::runtime_error("spaces: row scale division not exact");
      combo.u1(i) = v / ps;
    }
  }
  // regeneration through the provenance is exact to the identity
  // precision minus the divided scale
  return {std::move(combo),
          std::min(br.prec, br.prov_prec - br.scale)};
}

const Spaces::PrecSeries& Spaces::row_series_cached(int k, std::size_t row,
                                                    std::size_t prec) {
  auto key = std::make_pair(k, row);
  auto it = row_cache_.find(key);
  if (it == row_cache_.end() || it->second.s.prec() < prec) {
    auto ps = row_series(basis(k, SpaceKind::cuspidal), row, prec);
    row_cache_[key] = std::move(ps);
    it = row_cache_.find(key);
  }
  return it->second;
}

RingElt Spaces::diamond_scalar(const WeightBasis& wb, std::size_t row,
                               std::int64_t a) const {
  return chars_[(std::size_t)wb.rows[row].chi_idx].value(*oring_, a);
}

}  // namespace dcform
