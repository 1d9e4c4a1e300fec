#include "ftl/numerics.hpp"

#include "ftl/errors.hpp"

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <cmath>
#include <cstdint>
#include <limits>

namespace ftl {

namespace {
using gauss7 = boost::math::quadrature::gauss<double, 7>;
using gk15 = boost::math::quadrature::gauss_kronrod<double, 15>;
} // namespace

double integrate_adaptive(const std::function<double(double)>& f, double a, double b,
                          double abs_tol, int max_depth) {
    if (a == b) return 0.0;
    double error = 0.0;
    double l1 = 0.0;
    // gauss_kronrod works with a relative-ish target; pass a small one and
    // check the reported error against the absolute tolerance ourselves.
    const double val = gk15::integrate(f, a, b, max_depth, 1e-14, &error, &l1);
    if (!std::isfinite(val)) throw QuadratureFailure("quadrature produced a non-finite value");
    if (error > abs_tol && error > 1e-12 * std::max(1.0, l1)) {
        throw QuadratureFailure("quadrature error " + std::to_string(error) +
                                " above tolerance " + std::to_string(abs_tol));
    }
    return val;
}

double integrate_gauss7(const std::function<double(double)>& f, double a, double b) {
    return gauss7::integrate(f, a, b);
}

CumulativeIntegral::CumulativeIntegral(std::function<double(double)> f, double a, double b,
                                       int panels)
    : f_(std::move(f)), a_(a) {
    if (panels < 1) panels = 1;
    h_ = (b - a) / panels;
    nodes_.resize(static_cast<std::size_t>(panels) + 1);
    nodes_[0] = 0.0;
    for (int k = 0; k < panels; ++k) {
        const double lo = a_ + k * h_;
        nodes_[static_cast<std::size_t>(k) + 1] =
            nodes_[static_cast<std::size_t>(k)] + gauss7::integrate(f_, lo, lo + h_);
    }
}

double CumulativeIntegral::upto(double tau) const {
    if (h_ <= 0.0) return 0.0;
    const double rel = (tau - a_) / h_;
    auto k = static_cast<long>(rel);
    if (k < 0) k = 0;
    const auto last = static_cast<long>(nodes_.size()) - 1;
    if (k > last) k = last;
    const double lo = a_ + static_cast<double>(k) * h_;
    return nodes_[static_cast<std::size_t>(k)] + gauss7::integrate(f_, lo, tau);
}

double trapezoid(std::span<const double> t, std::span<const double> g) {
    double acc = 0.0;
    for (std::size_t k = 0; k + 1 < t.size(); ++k)
        acc += 0.5 * (g[k] + g[k + 1]) * (t[k + 1] - t[k]);
    return acc;
}

double trapezoid_error_estimate(std::span<const double> t, std::span<const double> g) {
    if (t.size() < 5) return 0.0;
    const double fine = trapezoid(t, g);
    double coarse = 0.0;
    std::size_t k = 0;
    for (; k + 2 < t.size(); k += 2)
        coarse += 0.5 * (g[k] + g[k + 2]) * (t[k + 2] - t[k]);
    if (k + 1 < t.size()) // odd tail
        coarse += 0.5 * (g[k] + g[k + 1]) * (t[k + 1] - t[k]);
    return std::abs(fine - coarse) / 3.0;
}

LineFit fit_line(std::span<const double> x, std::span<const double> y) {
    const auto n = static_cast<double>(x.size());
    if (x.size() < 2 || x.size() != y.size())
        throw InsufficientPoints("line fit needs at least two points");
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sx += x[i];
        sy += y[i];
        sxx += x[i] * x[i];
        sxy += x[i] * y[i];
    }
    const double det = n * sxx - sx * sx;
    if (std::abs(det) < 1e-300) throw InsufficientPoints("degenerate abscissas in line fit");
    LineFit fit;
    fit.slope = (n * sxy - sx * sy) / det;
    fit.intercept = (sy - fit.slope * sx) / n;
    double ss = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double r = y[i] - (fit.intercept + fit.slope * x[i]);
        ss += r * r;
    }
    fit.residual = std::sqrt(ss / n);
    return fit;
}

std::uint64_t fnv1a64(std::span<const char> bytes) {
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (char c : bytes) {
        h ^= static_cast<unsigned char>(c);
        h *= 0x100000001b3ull;
    }
    return h;
}

} // namespace ftl
