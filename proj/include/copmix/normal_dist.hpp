#pragma once

namespace copmix::normal {

inline constexpr double kLogSqrt2Pi = 0.91893853320467274178032973640562;

double pdf(double x);
double log_pdf(double x);

// Phi(x) via the complementary error function; relative error near machine
// precision in both tails.
double cdf(double x);

// Phi^{-1}(p) for p in (0,1). Wichura's AS241 (PPND16) rational
// approximations followed by one Halley step on the cdf.
// Throws DomainError outside (0,1).
double quantile(double p);

} // namespace copmix::normal
