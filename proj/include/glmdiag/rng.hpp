#pragma once

#include <cstdint>

#include "glmdiag/distributions.hpp"

namespace glmdiag {

namespace detail {

// Stafford variant-13 mixer (the splitmix64 finalizer).
inline std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

}  // namespace detail

// Counter-based stream: output i is a keyed hash of the counter, so a stream
// is fully determined by (seed, stream_id) and any number of streams can be
// consumed concurrently or out of order without coordination.  One stream has
// one owner; copies replay the same sequence.
class RngStream {
 public:
  RngStream(std::uint64_t seed, std::uint64_t stream_id)
      : key_(detail::mix64(detail::mix64(seed + 0x9E3779B97F4A7C15ULL) ^
                           detail::mix64(stream_id + 0xD1B54A32D192ED03ULL))),
        key2_(detail::mix64(key_ + 0x8CB92BA72F3D8DD7ULL)),
        counter_(0) {}

  // Derived stream, independent of this one and of other child ids.
  RngStream substream(std::uint64_t id) const {
    RngStream s(*this);
    s.key_ = detail::mix64(key_ ^ detail::mix64(id + 0xA0761D6478BD642FULL));
    s.key2_ = detail::mix64(s.key_ + 0x8CB92BA72F3D8DD7ULL);
    s.counter_ = 0;
    return s;
  }

  std::uint64_t next_u64() {
    std::uint64_t z = detail::mix64(counter_++ + key_);
    return detail::mix64(z ^ key2_);
  }

  // Uniform on the open interval (0,1); never returns an endpoint.
  double uniform() {
    return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
  }

  double normal(double mean, double sd) {
    if (!(sd > 0.0)) {
      throw std::domain_error("RngStream::normal: sd must be positive, got " + std::to_string(sd));
    }
    return mean + sd * normal_quantile(uniform());
  }

  // Marsaglia-Tsang squeeze for shape >= 1; one-uniform boost for shape < 1.
  double gamma_variate(const GammaParams& p) {
    const double shape = p.shape();
    if (shape < 1.0) {
      const double u = uniform();
      return std_gamma(shape + 1.0) * std::pow(u, 1.0 / shape) * p.scale();
    }
    return std_gamma(shape) * p.scale();
  }

  // Michael-Schucany-Haas transformation with one uniform for root selection.
  double invgauss_variate(const InvGaussParams& p) {
    const double mu = p.mu;
    const double lam = p.lambda();
    const double nu = normal_quantile(uniform());
    const double w = mu * nu * nu;
    double x = mu + (mu / (2.0 * lam)) * (w - std::sqrt(w * (4.0 * lam + w)));
    if (!(x > 0.0)) x = mu * lam / w;  // cancellation guard for the tiny root
    const double u = uniform();
    return (u <= mu / (mu + x)) ? x : mu * mu / x;
  }

 private:
  double std_gamma(double shape) {
    const double d = shape - 1.0 / 3.0;
    const double c = 1.0 / std::sqrt(9.0 * d);
    for (;;) {
      double x, v;
      do {
        x = normal_quantile(uniform());
        v = 1.0 + c * x;
      } while (v <= 0.0);
      v = v * v * v;
      const double u = uniform();
      if (u < 1.0 - 0.0331 * x * x * x * x) return d * v;
      if (std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v))) return d * v;
    }
  }

  std::uint64_t key_;
  std::uint64_t key2_;
  std::uint64_t counter_;
};

}  // namespace glmdiag
