#pragma once

#include <string>
#include <vector>

namespace iwave {

struct RateFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r2 = 0.0;
};

/// Ordinary least squares of log(error) against log(axis).
///
/// Needs at least three points, all positive, with a strictly monotone axis.
/// For constant errors the slope is 0 and R² is reported as 1.
RateFit fit_rate(const std::vector<double>& axis, const std::vector<double>& errors);

/// Measured convergence rate judged against a predicted exponent.
struct RateReport {
  std::string axis_name;
  std::string error_name;
  std::vector<double> axis;
  std::vector<double> errors;
  RateFit fit;
  double predicted_exponent = 0.0;
  double tolerance = 0.0;
  bool pass = false;
};

/// Fits the points and sets pass = |slope - predicted| <= tolerance.
RateReport make_rate_report(std::string axis_name, std::string error_name, std::vector<double> axis,
                            std::vector<double> errors, double predicted_exponent, double tolerance);

}  // namespace iwave
