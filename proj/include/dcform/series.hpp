#pragma once

// Truncated q-expansions over a coefficient ring. Coefficients are
// stored flat with stride ring->e(); the unramified case (stride 1)
// dispatches arithmetic to the modular kernels.

#include <cstdint>
#include <vector>

#include "dcform/ring.hpp"

namespace dcform {

class Series {
 public:
  Series() = default;
  Series(RingPtr ring, std::size_t prec)
      : ring_(std::move(ring)), prec_(prec),
        c_(prec * (std::size_t)ring_->e(), 0) {}

  const RingPtr& ring() const { return ring_; }
  std::size_t prec() const { return prec_; }

  RingElt coeff(std::size_t i) const;
  void set_coeff(std::size_t i, const RingElt& v);
  // stride-1 fast access; ring must be unramified
  std::uint64_t& u1(std::size_t i) { return c_[i]; }
  std::uint64_t u1(std::size_t i) const { return c_[i]; }
  const std::vector<std::uint64_t>& raw() const { return c_; }
  std::vector<std::uint64_t>& raw() { return c_; }

  Series truncated(std::size_t new_prec) const;

 private:
  RingPtr ring_;
  std::size_t prec_ = 0;
  std::vector<std::uint64_t> c_;
};

// Coefficientwise sum / Cauchy product to the minimum precision of the
// inputs. Throws on ring mismatch.
Series series_add(const Series& f, const Series& g);
Series series_sub(const Series& f, const Series& g);
Series series_mul(const Series& f, const Series& g);
Series series_scale(const Series& f, const RingElt& c);
Series series_scale_int(const Series& f, std::int64_t c);

// theta = q d/dq: a_m -> m a_m.
Series theta(const Series& f);

// U: a_m(Uf) = a_{mp}(f); output precision floor(prec/p).
Series u_shift(const Series& f, std::int64_t p);

// V_d: a_{md}(V f) = a_m(f), other coefficients 0.
Series v_shift(const Series& f, std::int64_t d);

}  // namespace dcform
