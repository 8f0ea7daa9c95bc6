#include "iwave/rate.hpp"

#include <cmath>
#include <sstream>

#include "iwave/error.hpp"

namespace iwave {

RateFit fit_rate(const std::vector<double>& axis, const std::vector<double>& errors) {
  if (axis.size() != errors.size()) throw Error("fit_rate: axis and error counts differ");
  const std::size_t n = axis.size();
  if (n < 3) throw Error("fit_rate: need at least 3 points, got " + std::to_string(n));
  for (std::size_t i = 0; i < n; ++i) {
    if (!(axis[i] > 0.0) || !(errors[i] > 0.0) || !std::isfinite(axis[i]) || !std::isfinite(errors[i])) {
      std::ostringstream msg;
      msg << "fit_rate: point " << i << " (" << axis[i] << ", " << errors[i]
          << ") is not positive and finite";
      throw Error(msg.str());
    }
  }
  const bool increasing = axis[1] > axis[0];
  for (std::size_t i = 1; i < n; ++i) {
    if (increasing ? !(axis[i] > axis[i - 1]) : !(axis[i] < axis[i - 1])) {
      throw Error("fit_rate: axis is not strictly monotone");
    }
  }

  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += std::log(axis[i]);
    my += std::log(errors[i]);
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double dx = std::log(axis[i]) - mx;
    const double dy = std::log(errors[i]) - my;
    sxx += dx * dx;
    sxy += dx * dy;
    syy += dy * dy;
  }
  RateFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  fit.r2 = syy > 0.0 ? sxy * sxy / (sxx * syy) : 1.0;
  return fit;
}

RateReport make_rate_report(std::string axis_name, std::string error_name, std::vector<double> axis,
                            std::vector<double> errors, double predicted_exponent, double tolerance) {
  if (!(tolerance >= 0.0)) throw Error("rate report: tolerance must be non-negative");
  RateReport r;
  r.fit = fit_rate(axis, errors);
  r.axis_name = std::move(axis_name);
  r.error_name = std::move(error_name);
  r.axis = std::move(axis);
  r.errors = std::move(errors);
  r.predicted_exponent = predicted_exponent;
  r.tolerance = tolerance;
  r.pass = std::abs(r.fit.slope - predicted_exponent) <= tolerance;
  return r;
}

}  // namespace iwave
