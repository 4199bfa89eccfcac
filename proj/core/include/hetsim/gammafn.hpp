#pragma once

namespace hetsim::math {

// Natural log of the Gamma function (Lanczos).
double log_gamma(double x);

// Regularized lower incomplete gamma P(shape, x) = gamma(shape, x) / Gamma(shape).
// Series expansion for x < shape + 1, Lentz continued fraction otherwise.
double gamma_p(double shape, double x);

// Inverse of gamma_p in x: returns x with gamma_p(shape, x) = p.
// Bracketed Newton iteration; p in [0, 1).
double gamma_p_inv(double shape, double p);

}  // namespace hetsim::math
