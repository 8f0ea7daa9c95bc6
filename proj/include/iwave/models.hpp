#pragma once

#include <complex>
#include <string_view>
#include <vector>

#include <Eigen/Core>

#include "iwave/field.hpp"
#include "iwave/params.hpp"

namespace iwave {

/// Snapshot of an evolution: one field (ζ) for scalar models, two (ζ and u,
/// or ζ and v) for systems.
struct State {
  std::vector<Field> fields;
  double time = 0.0;

  static State scalar(Field zeta, double time = 0.0);
  static State system(Field zeta, Field second, double time = 0.0);

  bool is_system() const { return fields.size() == 2; }
  const Grid& grid() const { return fields.at(0).grid(); }
  /// Throws unless there are one or two fields on a shared grid.
  void check() const;
};

using Tendency = std::vector<Field>;

enum class ModelId { BO, BENJAMIN, WB_EQ, WB_SYS, REG_BO_SYS, ILW };

ModelId model_from_name(std::string_view name);
std::string_view model_name(ModelId id);
int model_field_count(ModelId id);

/// Right-hand sides ∂tU = F(U). Each throws iwave::Error when handed a
/// state of the wrong kind.
Tendency rhs_bo(const State& s, const Params& p);
Tendency rhs_benjamin(const State& s, const Params& p);
Tendency rhs_wb_equation(const State& s, const Params& p);
/// Second field is u.
Tendency rhs_wb_system(const State& s, const Params& p);
/// Second field is v.
Tendency rhs_regbo_system(const State& s, const Params& p);
Tendency rhs_ilw(const State& s, const Params& p);

/// One evolution model split as ∂tU = L(D)U + N(U).
///
/// The linear part acts mode by mode. Scalar models use entry (0,0) of
/// linear_block; systems have a zero diagonal and couple the two fields
/// through a = L(0,1) and b = L(1,0).
class ModelSpec {
 public:
  ModelSpec(ModelId id, Params params);

  ModelId id() const { return id_; }
  const Params& params() const { return params_; }
  int field_count() const { return model_field_count(id_); }
  bool is_system() const { return field_count() == 2; }

  Eigen::Matrix2cd linear_block(double xi) const;
  /// Diagonal symbol of field `field` for scalar models, off-diagonal
  /// coupling into `field` for systems.
  std::complex<double> linear_symbol(int field, double xi) const;

  Tendency linear(const State& s) const;
  Tendency nonlinear(const State& s) const;
  Tendency rhs(const State& s) const;

 private:
  void check_state(const State& s) const;

  ModelId id_;
  Params params_;
};

struct UnidirectionalData {
  Field zeta;
  Field v;
  Field u;
};

/// u0 = √k(D)ζ0 - (ε/4)ζ0², v0 = t⁻¹(D)u0.
UnidirectionalData make_unidirectional_data(const Field& zeta0, const Params& p);

Field u_from_v(const Field& v, const Params& p);
Field v_from_u(const Field& u, const Params& p);

/// Travelling wave of the BO equation on the periodic box.
///
/// Profile A·sinh η / (cosh η - cos κ(x - x0)) with κ = 2π/L, η = κ/c and
/// A = 2βκ/α, where β = γ√μ/2 and α = 3ε/2. For L·c → ∞ this tends to the
/// algebraic soliton (4βc/α)/(1 + c²(x - x0)²). Requires ε, γ, μ > 0.
Field bo_soliton(const Grid& grid, double c, double x0, const Params& p);
/// Propagation speed 1 + βκ coth η of bo_soliton.
double bo_soliton_speed(const Grid& grid, double c, const Params& p);

}  // namespace iwave
