#pragma once

#include <functional>
#include <span>

namespace copmix {

// Solves f(x) = target for nondecreasing f on [lo, hi] by bisection until the
// bracket is narrower than tol. Values outside [f(lo), f(hi)] return the
// nearer endpoint.
double bisect_increasing(const std::function<double(double)>& f, double target, double lo,
                         double hi, double tol = 1e-12);

double log_sum_exp(std::span<const double> v);

// Mixed partial d^M F / du_1 ... du_M by nested central differences. The step
// in coordinate i is 1e-4 * min(u_i, 1 - u_i), so every stencil point stays
// inside the open cube.
double mixed_partial(const std::function<double(std::span<const double>)>& cdf,
                     std::span<const double> u);

} // namespace copmix
