#pragma once

#include <cmath>
#include <stdexcept>
#include <string>
#include <string_view>

namespace glmdiag {

enum class LinkKind { log, inverse, inverse_squared, identity };

// Strictly monotone, twice differentiable map eta = g(mu) with mu > 0.
struct LinkFunction {
  LinkKind kind = LinkKind::log;

  double g(double mu) const {
    switch (kind) {
      case LinkKind::log: return std::log(mu);
      case LinkKind::inverse: return 1.0 / mu;
      case LinkKind::inverse_squared: return 1.0 / (mu * mu);
      case LinkKind::identity: return mu;
    }
    throw std::logic_error("LinkFunction::g: bad kind");
  }

  double g_inv(double eta) const {
    switch (kind) {
      case LinkKind::log: return std::exp(eta);
      case LinkKind::inverse: return 1.0 / eta;
      case LinkKind::inverse_squared: return 1.0 / std::sqrt(eta);
      case LinkKind::identity: return eta;
    }
    throw std::logic_error("LinkFunction::g_inv: bad kind");
  }

  // dmu/deta expressed through mu (every link here allows that).
  double dmu_deta(double mu) const {
    switch (kind) {
      case LinkKind::log: return mu;
      case LinkKind::inverse: return -mu * mu;
      case LinkKind::inverse_squared: return -0.5 * mu * mu * mu;
      case LinkKind::identity: return 1.0;
    }
    throw std::logic_error("LinkFunction::dmu_deta: bad kind");
  }

  // Whether g_inv(eta) lands in the admissible mean range mu > 0.
  bool eta_admissible(double eta) const {
    if (!std::isfinite(eta)) return false;
    switch (kind) {
      case LinkKind::log: return true;
      case LinkKind::inverse: return eta > 0.0;
      case LinkKind::inverse_squared: return eta > 0.0;
      case LinkKind::identity: return eta > 0.0;
    }
    return false;
  }

  std::string name() const {
    switch (kind) {
      case LinkKind::log: return "log";
      case LinkKind::inverse: return "inverse";
      case LinkKind::inverse_squared: return "inverse2";
      case LinkKind::identity: return "identity";
    }
    return "?";
  }

  static LinkFunction parse(std::string_view s) {
    if (s == "log") return {LinkKind::log};
    if (s == "inverse") return {LinkKind::inverse};
    if (s == "inverse2" || s == "inverse_squared") return {LinkKind::inverse_squared};
    if (s == "identity") return {LinkKind::identity};
    throw std::invalid_argument("unknown link function: " + std::string(s));
  }
};

}  // namespace glmdiag
