#include "iwave/models.hpp"

#include <cmath>
#include <numbers>

#include "iwave/error.hpp"
#include "iwave/spectral.hpp"
#include "iwave/symbols.hpp"

namespace iwave {

namespace {

using Complex = std::complex<double>;
constexpr Complex kI{0.0, 1.0};

// Real even dispersion factor m(ξ) of the scalar models, ∂tζ = -m(D)∂xζ + ...
double scalar_dispersion(ModelId id, double xi, const Params& p) {
  switch (id) {
    case ModelId::BO:
      return eval_symbol(SymbolId::lin_bo, xi, p);
    case ModelId::BENJAMIN:
      return eval_symbol(SymbolId::lin_benjamin, xi, p);
    case ModelId::WB_EQ:
      return eval_symbol(SymbolId::sqrt_k, xi, p);
    case ModelId::ILW:
      return 1.0 - 0.5 * p.gamma * std::sqrt(p.mu) * eval_symbol(SymbolId::L_ilw, xi, p);
    default:
      throw Error("scalar_dispersion: not a scalar model");
  }
}

// -(3ε/2) ζ ζx written as -(3ε/4) ∂x(ζ²).
Field burgers_term(const Field& zeta, double eps) {
  return derivative(dealiased_product(zeta, zeta)) * (-0.75 * eps);
}

Tendency scalar_rhs(ModelId id, const State& s, const Params& p) {
  s.check();
  if (s.is_system()) {
    throw Error(std::string(model_name(id)) + ": expected a scalar state, got a system");
  }
  return ModelSpec(id, p).rhs(s);
}

}  // namespace

State State::scalar(Field zeta, double time) {
  State s;
  s.fields.push_back(std::move(zeta));
  s.time = time;
  return s;
}

State State::system(Field zeta, Field second, double time) {
  State s;
  s.fields.push_back(std::move(zeta));
  s.fields.push_back(std::move(second));
  s.time = time;
  s.check();
  return s;
}

void State::check() const {
  if (fields.empty() || fields.size() > 2) throw Error("state: expected one or two fields");
  if (fields.size() == 2 && !(fields[0].grid() == fields[1].grid())) {
    throw Error("state: fields live on different grids");
  }
}

ModelId model_from_name(std::string_view name) {
  if (name == "BO") return ModelId::BO;
  if (name == "BENJAMIN") return ModelId::BENJAMIN;
  if (name == "WB_EQ") return ModelId::WB_EQ;
  if (name == "WB_SYS") return ModelId::WB_SYS;
  if (name == "REG_BO_SYS") return ModelId::REG_BO_SYS;
  if (name == "ILW") return ModelId::ILW;
  throw Error("unknown model '" + std::string(name) + "'");
}

std::string_view model_name(ModelId id) {
  switch (id) {
    case ModelId::BO: return "BO";
    case ModelId::BENJAMIN: return "BENJAMIN";
    case ModelId::WB_EQ: return "WB_EQ";
    case ModelId::WB_SYS: return "WB_SYS";
    case ModelId::REG_BO_SYS: return "REG_BO_SYS";
    case ModelId::ILW: return "ILW";
  }
  throw Error("unknown model id");
}

int model_field_count(ModelId id) {
  return (id == ModelId::WB_SYS || id == ModelId::REG_BO_SYS) ? 2 : 1;
}

ModelSpec::ModelSpec(ModelId id, Params params) : id_(id), params_(params) {
  params_.validate();
}

Eigen::Matrix2cd ModelSpec::linear_block(double xi) const {
  Eigen::Matrix2cd L = Eigen::Matrix2cd::Zero();
  const Params& p = params_;
  switch (id_) {
    case ModelId::WB_SYS:
      L(0, 1) = -kI * xi;
      L(1, 0) = -kI * xi * eval_symbol(SymbolId::k, xi, p);
      break;
    case ModelId::REG_BO_SYS: {
      const double r = p.gamma * std::sqrt(p.mu) * std::abs(xi);
      L(0, 1) = -kI * xi * (1.0 + (p.alpha - 1.0) * r) / (1.0 + p.alpha * r);
      L(1, 0) = -kI * xi;
      break;
    }
    default:
      L(0, 0) = -kI * xi * scalar_dispersion(id_, xi, p);
      break;
  }
  return L;
}

Complex ModelSpec::linear_symbol(int field, double xi) const {
  if (field < 0 || field >= field_count()) throw Error("linear_symbol: field index out of range");
  const Eigen::Matrix2cd L = linear_block(xi);
  if (!is_system()) return L(0, 0);
  return field == 0 ? L(0, 1) : L(1, 0);
}

void ModelSpec::check_state(const State& s) const {
  s.check();
  if (static_cast<int>(s.fields.size()) != field_count()) {
    throw Error(std::string(model_name(id_)) + ": state has " + std::to_string(s.fields.size()) +
                " field(s), model expects " + std::to_string(field_count()));
  }
}

Tendency ModelSpec::linear(const State& s) const {
  check_state(s);
  if (!is_system()) {
    return {apply_multiplier(s.fields[0], [this](double xi) { return linear_symbol(0, xi); })};
  }
  return {apply_multiplier(s.fields[1], [this](double xi) { return linear_symbol(0, xi); }),
          apply_multiplier(s.fields[0], [this](double xi) { return linear_symbol(1, xi); })};
}

Tendency ModelSpec::nonlinear(const State& s) const {
  check_state(s);
  const Params& p = params_;
  const Field& zeta = s.fields[0];
  switch (id_) {
    case ModelId::WB_SYS: {
      const Field& u = s.fields[1];
      auto t_dx = [&p](double xi) { return kI * xi * eval_symbol(SymbolId::t, xi, p); };
      Field dz = apply_multiplier(dealiased_product(zeta, u), t_dx) * (-p.eps);
      Field du = apply_multiplier(dealiased_product(u, u), t_dx) * (-0.5 * p.eps);
      return {dz, du};
    }
    case ModelId::REG_BO_SYS: {
      const Field& v = s.fields[1];
      const double g = p.gamma * std::sqrt(p.mu);
      auto minv_dx = [&p, g](double xi) { return kI * xi / (1.0 + p.alpha * g * std::abs(xi)); };
      Field dz = apply_multiplier(dealiased_product(zeta, v), minv_dx) * (-p.eps);
      Field dv = derivative(dealiased_product(v, v)) * (-0.5 * p.eps);
      return {dz, dv};
    }
    default:
      return {burgers_term(zeta, p.eps)};
  }
}

Tendency ModelSpec::rhs(const State& s) const {
  Tendency lin = linear(s);
  Tendency nl = nonlinear(s);
  for (std::size_t i = 0; i < lin.size(); ++i) lin[i] += nl[i];
  return lin;
}

Tendency rhs_bo(const State& s, const Params& p) { return scalar_rhs(ModelId::BO, s, p); }
Tendency rhs_benjamin(const State& s, const Params& p) {
  return scalar_rhs(ModelId::BENJAMIN, s, p);
}
Tendency rhs_wb_equation(const State& s, const Params& p) {
  return scalar_rhs(ModelId::WB_EQ, s, p);
}
Tendency rhs_ilw(const State& s, const Params& p) { return scalar_rhs(ModelId::ILW, s, p); }

Tendency rhs_wb_system(const State& s, const Params& p) {
  s.check();
  if (!s.is_system()) throw Error("WB_SYS: expected a system state (zeta, u)");
  return ModelSpec(ModelId::WB_SYS, p).rhs(s);
}

Tendency rhs_regbo_system(const State& s, const Params& p) {
  s.check();
  if (!s.is_system()) throw Error("REG_BO_SYS: expected a system state (zeta, v)");
  return ModelSpec(ModelId::REG_BO_SYS, p).rhs(s);
}

Field u_from_v(const Field& v, const Params& p) {
  return apply_multiplier(v, [&p](double xi) { return eval_symbol(SymbolId::t, xi, p); });
}

Field v_from_u(const Field& u, const Params& p) {
  return apply_multiplier(u, [&p](double xi) { return 1.0 / eval_symbol(SymbolId::t, xi, p); });
}

UnidirectionalData make_unidirectional_data(const Field& zeta0, const Params& p) {
  Field u = apply_multiplier(zeta0, [&p](double xi) { return eval_symbol(SymbolId::sqrt_k, xi, p); });
  u -= dealiased_product(zeta0, zeta0) * (0.25 * p.eps);
  Field v = v_from_u(u, p);
  return {zeta0, v, u};
}

namespace {

struct SolitonShape {
  double kappa, eta, amplitude, beta;
};

SolitonShape soliton_shape(const Grid& grid, double c, const Params& p) {
  if (!(c > 0.0) || !std::isfinite(c)) throw Error("bo_soliton: speed scale must be positive");
  if (!(p.eps > 0.0 && p.gamma > 0.0 && p.mu > 0.0)) {
    throw Error("bo_soliton: needs eps, gamma and mu all positive");
  }
  const double beta = 0.5 * p.gamma * std::sqrt(p.mu);
  const double alpha = 1.5 * p.eps;
  const double kappa = 2.0 * std::numbers::pi / grid.length();
  return {kappa, kappa / c, 2.0 * beta * kappa / alpha, beta};
}

}  // namespace

Field bo_soliton(const Grid& grid, double c, double x0, const Params& p) {
  const SolitonShape s = soliton_shape(grid, c, p);
  const double sh = std::sinh(s.eta);
  const double ch = std::cosh(s.eta);
  return Field::sample(grid, [&](double x) {
    return s.amplitude * sh / (ch - std::cos(s.kappa * (x - x0)));
  });
}

double bo_soliton_speed(const Grid& grid, double c, const Params& p) {
  const SolitonShape s = soliton_shape(grid, c, p);
  return 1.0 + s.beta * s.kappa / std::tanh(s.eta);
}

}  // namespace iwave
