#ifndef SGFIELD_TESTS_ORACLES_HPP_
#define SGFIELD_TESTS_ORACLES_HPP_

#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/ooura_fourier_integrals.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>
#include <cmath>
#include <numbers>

namespace oracle {

// D_alpha from numerical quadrature of both factors. The sine integral is split at 1:
// on [0,1] the x^{1-alpha} singularity is subtracted (integral 1/(2-alpha)) and the smooth
// remainder goes to tanh-sinh; the tail uses Ooura transforms of (t+1)^{-alpha}.
inline double d_alpha_oracle(double alpha) {
  boost::math::quadrature::tanh_sinh<double> finite;
  const double head = 1.0 / (2.0 - alpha) + finite.integrate([alpha](double x) {
    if (x == 0.0) return 0.0;
    if (x < 1e-3) return -std::pow(x, 3.0 - alpha) / 6 * (1 - x * x / 20);
    return std::pow(x, -alpha) * (std::sin(x) - x);
  }, 0.0, 1.0);
  auto shifted = [alpha](double t) { return std::pow(t + 1.0, -alpha); };
  boost::math::quadrature::ooura_fourier_sin<double> sine;
  boost::math::quadrature::ooura_fourier_cos<double> cosine;
  const double tail = std::cos(1.0) * sine.integrate(shifted, 1.0).first + std::sin(1.0) * cosine.integrate(shifted, 1.0).first;
  const double sine_integral = head + tail;
  boost::math::quadrature::exp_sinh<double> half_line;
  const double moment = 2.0 * half_line.integrate([alpha](double x) {
    return std::pow(x, alpha) * std::exp(-0.5 * x * x) / std::sqrt(2 * std::numbers::pi);
  });
  return std::pow(moment * sine_integral, -1.0 / alpha);
}

}  // namespace oracle

#endif  // SGFIELD_TESTS_ORACLES_HPP_
