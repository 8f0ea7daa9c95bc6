#include "iwave/params.hpp"

#include <cmath>
#include <sstream>

#include "iwave/error.hpp"

namespace iwave {

namespace {

void require_range(const char* name, double v, double lo, bool lo_open, double hi, bool hi_open) {
  const bool ok = std::isfinite(v) && (lo_open ? v > lo : v >= lo) && (hi_open ? v < hi : v <= hi);
  if (!ok) {
    std::ostringstream msg;
    msg << "params: " << name << " = " << v << " outside " << (lo_open ? "(" : "[") << lo << ", "
        << hi << (hi_open ? ")" : "]");
    throw Error(msg.str());
  }
}

}  // namespace

void Params::validate() const {
  require_range("eps", eps, 0.0, false, 1.0, true);
  require_range("mu", mu, 0.0, true, 1.0, false);
  require_range("gamma", gamma, 0.0, false, 1.0, false);
  require_range("bo_inv", bo_inv, 0.0, false, 1.0, false);
  if (!(mu_minus >= 1.0) || std::isnan(mu_minus)) {
    throw Error("params: mu_minus must be >= 1");
  }
  if (!std::isfinite(alpha) || alpha < 0.0) throw Error("params: alpha must be finite and >= 0");
}

void Params::validate_weak_nonlinearity() const {
  validate();
  if (eps * eps > bo_inv) {
    std::ostringstream msg;
    msg << "params: eps^2 = " << eps * eps << " exceeds bo_inv = " << bo_inv;
    throw Error(msg.str());
  }
}

std::string Params::describe() const {
  std::ostringstream out;
  out.precision(17);
  out << "eps=" << eps << " mu=" << mu << " gamma=" << gamma << " bo_inv=" << bo_inv
      << " mu_minus=" << mu_minus << " alpha=" << alpha;
  return out.str();
}

Params with_param(Params p, const std::string& name, double value) {
  if (name == "eps") p.eps = value;
  else if (name == "mu") p.mu = value;
  else if (name == "gamma") p.gamma = value;
  else if (name == "bo_inv") p.bo_inv = value;
  else if (name == "mu_minus") p.mu_minus = value;
  else if (name == "alpha") p.alpha = value;
  else throw Error("params: unknown parameter '" + name + "'");
  return p;
}

double get_param(const Params& p, const std::string& name) {
  if (name == "eps") return p.eps;
  if (name == "mu") return p.mu;
  if (name == "gamma") return p.gamma;
  if (name == "bo_inv") return p.bo_inv;
  if (name == "mu_minus") return p.mu_minus;
  if (name == "alpha") return p.alpha;
  throw Error("params: unknown parameter '" + name + "'");
}

}  // namespace iwave
