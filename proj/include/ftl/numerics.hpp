#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

namespace ftl {

/// Adaptive quadrature of f over [a, b] to the given absolute tolerance.
/// Throws QuadratureFailure if the tolerance cannot be reached.
double integrate_adaptive(const std::function<double(double)>& f, double a, double b,
                          double abs_tol, int max_depth = 18);

/// Fixed-order Gauss-Legendre quadrature (7 nodes), for short smooth pieces.
double integrate_gauss7(const std::function<double(double)>& f, double a, double b);

/// Cumulative integral of a smooth positive integrand on [a, b].
/// Stores node values on a uniform grid and answers queries anywhere in
/// [a, b] by adding a Gauss panel from the nearest node; evaluation is
/// smooth in the query point, which matters when the result sits in an
/// exponent.
class CumulativeIntegral {
public:
    CumulativeIntegral(std::function<double(double)> f, double a, double b, int panels);

    /// Integral of f from a to tau, for tau in [a, b].
    double upto(double tau) const;
    double total() const { return nodes_.back(); }

private:
    std::function<double(double)> f_;
    double a_, h_;
    std::vector<double> nodes_; // cumulative values at a + k h
};

/// Trapezoid rule over (possibly nonuniform) sample points.
double trapezoid(std::span<const double> t, std::span<const double> g);

/// Richardson-style error estimate for the trapezoid rule: compares the
/// full-resolution sum with the every-other-sample sum. Requires >= 5 points;
/// returns 0 otherwise.
double trapezoid_error_estimate(std::span<const double> t, std::span<const double> g);

struct LineFit {
    double slope = 0.0;
    double intercept = 0.0;
    double residual = 0.0; // rms of fit residuals
};

/// Least-squares straight line through (x, y) pairs.
LineFit fit_line(std::span<const double> x, std::span<const double> y);

/// 64-bit FNV-1a hash, used for config fingerprints.
std::uint64_t fnv1a64(std::span<const char> bytes);

} // namespace ftl
