#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "doctest.h"
#include "iwave/expansions.hpp"
#include "iwave/spectral.hpp"
#include "iwave/symbols.hpp"
#include "oracles.hpp"

using namespace iwave;

namespace {

const std::vector<SymbolId> kAll = {
    SymbolId::T,      SymbolId::I,   SymbolId::t,      SymbolId::k,      SymbolId::sqrt_k,
    SymbolId::sqrt_t, SymbolId::t_inv_half, SymbolId::G0, SymbolId::Gp0, SymbolId::Gm0,
    SymbolId::L_ilw,  SymbolId::lin_bo, SymbolId::lin_benjamin, SymbolId::P_frak};

Params sample_params() {
  Params p;
  p.mu = 0.3;
  p.gamma = 0.6;
  p.bo_inv = 0.2;
  p.mu_minus = 5.0;
  return p;
}

// (ρ cosh ρ - sinh ρ)/sinh ρ with the numerator summed term by term.
double rho_coth_minus_one_reference(double rho) {
  long double num = 0.0L;
  long double term = rho;  // ρ^{2m+1}/(2m+1)!, m = 0
  for (int m = 1; m < 40; ++m) {
    term *= static_cast<long double>(rho) * rho / ((2.0L * m) * (2.0L * m + 1.0L));
    num += 2.0L * m * term;
  }
  return static_cast<double>(num / std::sinh(static_cast<long double>(rho)));
}

Field bump(const Grid& g, double w) {
  Field f = Field::sample(g, [w](double x) { return std::exp(-(x / w) * (x / w)); });
  return f - Field::constant(g, f.mean());
}

double slope(const std::vector<double>& x, const std::vector<double>& y) {
  const double n = double(x.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double lx = std::log(x[i]), ly = std::log(y[i]);
    sx += lx; sy += ly; sxx += lx * lx; sxy += lx * ly;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

}  // namespace

TEST_CASE("symbol values at ξ = 0") {
  Params p = sample_params();
  CHECK(eval_symbol(SymbolId::T, 0.0, p) == 1.0);
  CHECK(eval_symbol(SymbolId::I, 0.0, p) == 1.0);
  CHECK(eval_symbol(SymbolId::t, 0.0, p) == 1.0);
  CHECK(eval_symbol(SymbolId::k, 0.0, p) == 1.0);
  CHECK(eval_symbol(SymbolId::sqrt_k, 0.0, p) == 1.0);
  CHECK(eval_symbol(SymbolId::t_inv_half, 0.0, p) == 1.0);
  CHECK(eval_symbol(SymbolId::G0, 0.0, p) == 0.0);
  CHECK(eval_symbol(SymbolId::Gp0, 0.0, p) == 0.0);
  CHECK(eval_symbol(SymbolId::Gm0, 0.0, p) == 0.0);
  CHECK(eval_symbol(SymbolId::L_ilw, 0.0, p) == 0.0);
  CHECK(eval_symbol(SymbolId::lin_bo, 0.0, p) == 1.0);
  CHECK(eval_symbol(SymbolId::lin_benjamin, 0.0, p) == 1.0);
  CHECK(eval_symbol(SymbolId::P_frak, 0.0, p) == 0.0);
}

TEST_CASE("closed-form values at ξ = 1") {
  Params p;
  p.mu = 1.0;
  p.gamma = 0.5;
  p.bo_inv = 0.5;
  CHECK(eval_symbol(SymbolId::Gp0, 1.0, p) == doctest::Approx(0.7615941559557649).epsilon(1e-15));
  CHECK(eval_symbol(SymbolId::G0, 1.0, p) ==
        doctest::Approx(0.7615941559557649 / (1 + 0.5 * 0.7615941559557649)).epsilon(1e-15));
  CHECK(eval_symbol(SymbolId::Gm0, -1.0, p) == -1.0);
  CHECK(eval_symbol(SymbolId::lin_bo, 1.0, p) == 0.75);
  CHECK(eval_symbol(SymbolId::lin_benjamin, 1.0, p) == 1.0);
  const double t1 = 0.7615941559557649 / (1 + 0.5 * 0.7615941559557649);
  CHECK(eval_symbol(SymbolId::k, 1.0, p) == doctest::Approx(1.5 * t1).epsilon(1e-15));
  CHECK(eval_symbol(SymbolId::sqrt_t, 1.0, p) == doctest::Approx(std::sqrt(t1)).epsilon(1e-15));
  CHECK(eval_symbol(SymbolId::P_frak, 1.0, p) == doctest::Approx(1 / std::sqrt(2.0)).epsilon(1e-15));
}

TEST_CASE("L_ilw tends to |ξ| - 1/√μ⁻ at high frequency") {
  Params p;
  p.mu_minus = 4.0;
  for (double xi : {30.0, 100.0, -250.0}) {
    CHECK(eval_symbol(SymbolId::L_ilw, xi, p) == doctest::Approx(std::abs(xi) - 0.5).epsilon(1e-14));
  }
}

TEST_CASE("L_ilw matches a positive-term reference across the series switch") {
  Params p;
  p.mu_minus = 9.0;  // √μ⁻ = 3
  for (double rho : {1e-8, 1e-5, 1e-3, 0.03, 0.0999, 0.1001, 0.3, 0.9}) {
    const double xi = rho / 3.0;
    const double ref = rho_coth_minus_one_reference(rho) / 3.0;
    CHECK(eval_symbol(SymbolId::L_ilw, xi, p) == doctest::Approx(ref).epsilon(1e-13));
  }
}

TEST_CASE("unknown tags and NaN parameters are rejected") {
  CHECK_THROWS_AS(symbol_from_name("tanh"), Error);
  CHECK(symbol_from_name("sqrt_k") == SymbolId::sqrt_k);
  for (SymbolId id : kAll) CHECK(symbol_from_name(symbol_name(id)) == id);
  Params p;
  p.gamma = std::nan("");
  CHECK_THROWS_AS(eval_symbol(SymbolId::I, 1.0, p), Error);
  CHECK_THROWS_AS(eval_symbol(SymbolId::T, std::nan(""), Params{}), Error);
}

TEST_CASE("property: symbol bounds, parity and factorization") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u01(0.0, 1.0);
  for (int trial = 0; trial < 200; ++trial) {
    Params p;
    p.mu = 0.01 + 0.99 * u01(rng);
    p.gamma = 0.99 * u01(rng);
    p.bo_inv = u01(rng);
    p.mu_minus = 1.0 + 50.0 * u01(rng);
    const double xi = 200.0 * (u01(rng) - 0.5);
    const double I = eval_symbol(SymbolId::I, xi, p);
    CHECK(I <= 1.0);
    CHECK(I >= 1.0 / (1.0 + p.gamma));
    const double T = eval_symbol(SymbolId::T, xi, p);
    CHECK(T > 0.0);
    CHECK(T <= 1.0);
    CHECK(eval_symbol(SymbolId::T, std::abs(xi) * 1.1 + 1e-3, p) < T);
    CHECK(eval_symbol(SymbolId::k, xi, p) > 0.0);
    CHECK(eval_symbol(SymbolId::G0, xi, p) ==
          doctest::Approx(eval_symbol(SymbolId::Gp0, xi, p) * I).epsilon(1e-15));
    for (SymbolId id : kAll) CHECK(eval_symbol(id, xi, p) == eval_symbol(id, -xi, p));
  }
}

TEST_CASE("property: L_ilw increases to |ξ| with μ⁻") {
  for (double xi : {0.05, 0.5, 3.0}) {
    double prev = -1.0;
    for (double mm : {1.0, 4.0, 16.0, 64.0, 256.0, 1e4, 1e6}) {
      Params p;
      p.mu_minus = mm;
      const double v = eval_symbol(SymbolId::L_ilw, xi, p);
      CHECK(v > prev);
      CHECK(v <= xi);
      prev = v;
    }
    CHECK(prev == doctest::Approx(xi).epsilon(2e-3));
  }
}

TEST_CASE("est_T ratio scales like μ") {
  Grid g = make_grid(512, 40.0);
  Field f = bump(g, 2.0);
  std::vector<double> mus, gaps;
  for (double mu = 0.2; mu > 0.01; mu /= 2) {
    Params p;
    p.mu = mu;
    mus.push_back(mu);
    gaps.push_back(expansion_gap(ExpansionId::est_T, f, p, 1.0));
  }
  CHECK(slope(mus, gaps) == doctest::Approx(1.0).epsilon(0.2));
}

TEST_CASE("inv_tanh vanishes at μ = 0") {
  Grid g = make_grid(128, 40.0);
  Params p;
  p.mu = 0.0;
  CHECK(expansion_gap(ExpansionId::inv_tanh, bump(g, 2.0), p) == 0.0);
}

TEST_CASE("precise_sqrtK with bo⁻¹ = √μ stays O(μ)") {
  Grid g = make_grid(512, 40.0);
  Field f = bump(g, 2.0);
  std::vector<double> scaled;
  for (double mu : {0.2, 0.1, 0.05, 0.025}) {
    Params p;
    p.mu = mu;
    p.bo_inv = std::sqrt(mu);
    scaled.push_back(expansion_gap(ExpansionId::precise_sqrtK, f, p, 1.0) / mu);
  }
  const auto [lo, hi] = std::minmax_element(scaled.begin(), scaled.end());
  CHECK(*hi / *lo < 1.6);
}

TEST_CASE("est_sqrtK is small for small parameters") {
  Grid g = make_grid(256, 40.0);
  Params p;
  p.mu = 0.01;
  p.bo_inv = 0.01;
  const double small = expansion_gap(ExpansionId::est_sqrtK, bump(g, 2.0), p);
  p.mu = 0.1;
  p.bo_inv = 0.1;
  CHECK(small < expansion_gap(ExpansionId::est_sqrtK, bump(g, 2.0), p));
}

TEST_CASE("expansion gap rejects a zero denominator") {
  Grid g = make_grid(64, 10.0);
  CHECK_THROWS_AS(expansion_gap(ExpansionId::est_T, Field::constant(g, 2.0), Params{}), Error);
  CHECK(expansion_from_name("precise_sqrtK") == ExpansionId::precise_sqrtK);
  CHECK_THROWS_AS(expansion_from_name("est_X"), Error);
}

TEST_CASE("coercivity at ξ = 0 and in the high-frequency limit") {
  Params p;
  p.mu = 0.5;
  p.gamma = 0.4;
  auto at_zero = coercivity_check({0.0}, p, 0.3);
  CHECK(at_zero.ok);
  CHECK(std::isinf(at_zero.c_lower));  // no nonzero sample constrains C_lower
  CHECK(1.0 / eval_symbol(SymbolId::t, 0.0, p) >= 1.0 - 0.15);

  std::vector<double> xs;
  for (int i = 0; i <= 400; ++i) xs.push_back(0.25 * i);
  xs.push_back(1e4);
  auto rep = coercivity_check(xs, p, 0.3);
  CHECK(rep.ok);
  CHECK(rep.c_lower > 0.0);
  CHECK(rep.c_upper < 1.0 + p.gamma + 1e-12);
  CHECK(rep.high_frequency_ratio == doctest::Approx(1.0 + p.gamma).epsilon(1e-4));
  CHECK_THROWS_AS(coercivity_check(xs, p, 1.0), Error);
}

TEST_CASE("coercivity with γ = 0 and μ = 1 bounds t⁻¹ by max(1, |ξ|)") {
  Params p;
  p.mu = 1.0;
  p.gamma = 0.0;
  for (double xi = -20.0; xi <= 20.0; xi += 0.37) {
    CHECK(1.0 / eval_symbol(SymbolId::t, xi, p) >= std::max(1.0, std::abs(xi)) * (1 - 1e-15));
  }
  std::vector<double> xs;
  for (double xi = 0.1; xi < 20.0; xi += 0.1) xs.push_back(xi);
  CHECK(coercivity_check(xs, p, 0.5).ok);
}
