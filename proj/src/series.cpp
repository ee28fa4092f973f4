#include "dcform/series.hpp"

#include <stdexcept>

#include "dcform/kernels.hpp"
#include "dcform/zmod.hpp"

namespace dcform {

namespace {

void check_same_ring(const Series& f, const Series& g) {
  if (!f.ring()->same_as(*g.ring()))
    throw std::invalid_argument("series: ring mismatch");
}

}  // namespace

RingElt Series::coeff(std::size_t i) const {
  int e = ring_->e();
  RingElt v;
  v.c.assign(c_.begin() + i * e, c_.begin() + (i + 1) * e);
  return v;
}

void Series::set_coeff(std::size_t i, const RingElt& v) {
  int e = ring_->e();
  for (int j = 0; j < e; ++j) c_[i * e + j] = v.c[j];
}

Series Series::truncated(std::size_t new_prec) const {
  if (new_prec > prec_) throw std::invalid_argument("series: cannot extend");
  Series out(ring_, new_prec);
  std::copy(c_.begin(), c_.begin() + new_prec * ring_->e(),
            out.c_.begin());
  return out;
}

Series series_add(const Series& f, const Series& g) {
  check_same_ring(f, g);
  std::size_t n = std::min(f.prec(), g.prec());
  Series out(f.ring(), n);
  if (f.ring()->e() == 1) {
    std::uint64_t m = f.ring()->carry_mod();
    for (std::size_t i = 0; i < n; ++i)
      out.u1(i) = addmod(f.u1(i), g.u1(i), m);
  } else {
    for (std::size_t i = 0; i < n; ++i)
      out.set_coeff(i, f.ring()->add(f.coeff(i), g.coeff(i)));
  }
  return out;
}

Series series_sub(const Series& f, const Series& g) {
  check_same_ring(f, g);
  std::size_t n = std::min(f.prec(), g.prec());
  Series out(f.ring(), n);
  if (f.ring()->e() == 1) {
    std::uint64_t m = f.ring()->carry_mod();
    for (std::size_t i = 0; i < n; ++i)
      out.u1(i) = submod(f.u1(i), g.u1(i), m);
  } else {
    for (std::size_t i = 0; i < n; ++i)
      out.set_coeff(i, f.ring()->sub(f.coeff(i), g.coeff(i)));
  }
  return out;
}

Series series_mul(const Series& f, const Series& g) {
  check_same_ring(f, g);
  std::size_t n = std::min(f.prec(), g.prec());
  Series out(f.ring(), n);
  if (n == 0) return out;
  if (f.ring()->e() == 1) {
    std::uint64_t m = f.ring()->carry_mod();
    for (std::size_t i = 0; i < n; ++i) {
      if (f.u1(i) == 0) continue;
      kernels::row_addmul(out.raw().data() + i, g.raw().data(), f.u1(i), n - i, m);
    }
  } else {
    const Ring& R = *f.ring();
    for (std::size_t i = 0; i < n; ++i) {
      RingElt fi = f.coeff(i);
      if (R.is_zero(fi)) continue;
      for (std::size_t j = 0; i + j < n; ++j)
        out.set_coeff(i + j,
                      R.add(out.coeff(i + j), R.mul(fi, g.coeff(j))));
    }
  }
  return out;
}

Series series_scale(const Series& f, const RingElt& c) {
  Series out(f.ring(), f.prec());
  if (f.ring()->e() == 1) {
    out.raw() = f.raw();
    kernels::row_scale(out.raw().data(), c.c[0], out.raw().size(),
                       f.ring()->carry_mod());
  } else {
    for (std::size_t i = 0; i < f.prec(); ++i)
      out.set_coeff(i, f.ring()->mul(f.coeff(i), c));
  }
  return out;
}

Series series_scale_int(const Series& f, std::int64_t c) {
  return series_scale(f, f.ring()->from_int(c));
}

Series theta(const Series& f) {
  Series out(f.ring(), f.prec());
  for (std::size_t i = 0; i < f.prec(); ++i)
    out.set_coeff(i, f.ring()->mul_int(f.coeff(i), (std::int64_t)i));
  return out;
}

Series u_shift(const Series& f, std::int64_t p) {
  if (p < 2) throw std::invalid_argument("u_shift: bad p");
  if (f.prec() == 0) throw std::invalid_argument("u_shift: no precision");
  std::size_t n = f.prec() / (std::size_t)p;
  if (n == 0)
    throw std::invalid_argument("u_shift: insufficient source precision");
  Series out(f.ring(), n);
  for (std::size_t i = 0; i < n; ++i)
    out.set_coeff(i, f.coeff(i * (std::size_t)p));
  return out;
}

Series v_shift(const Series& f, std::int64_t d) {
  if (d < 1) throw std::invalid_argument("v_shift: bad d");
  Series out(f.ring(), f.prec());
  for (std::size_t i = 0; i * (std::size_t)d < f.prec(); ++i)
    out.set_coeff(i * (std::size_t)d, f.coeff(i));
  return out;
}

}  // namespace dcform
