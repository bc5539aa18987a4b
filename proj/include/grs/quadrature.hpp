#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <iterator>
#include <limits>
#include <map>
#include <sstream>

#include "errors.hpp"

namespace grs {

struct QuadratureResult {
    double value = 0.0;
    double error = 0.0;
};

namespace detail {

// Kronrod 15-point rule with its embedded 7-point Gauss rule (nodes on [0, 1], symmetric).
inline constexpr std::array<double, 8> kKronrodNodes = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.0};
inline constexpr std::array<double, 8> kKronrodWeights = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
// weights of the Gauss nodes kKronrodNodes[1], [3], [5], [7]
inline constexpr std::array<double, 4> kGaussWeights = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Panel {
    double value;
    double error;
    double abs_sum;
};

template <class F>
Panel kronrod_panel(F& f, double lo, double hi) {
    const double mid = 0.5 * (lo + hi);
    const double half = 0.5 * (hi - lo);
    const double fc = f(mid);
    double kronrod = fc * kKronrodWeights[7];
    double gauss = fc * kGaussWeights[3];
    double abs_sum = std::abs(fc) * kKronrodWeights[7];
    for (std::size_t i = 0; i < 7; ++i) {
        const double dx = half * kKronrodNodes[i];
        const double f1 = f(mid - dx);
        const double f2 = f(mid + dx);
        kronrod += kKronrodWeights[i] * (f1 + f2);
        abs_sum += kKronrodWeights[i] * (std::abs(f1) + std::abs(f2));
        if (i % 2 == 1) gauss += kGaussWeights[i / 2] * (f1 + f2);
    }
    return {kronrod * half, std::abs((kronrod - gauss) * half), abs_sum * std::abs(half)};
}

template <class F>
QuadratureResult adaptive(F& f, double lo, double hi, double tol, int depth, bool& converged) {
    const Panel p = kronrod_panel(f, lo, hi);
    const double floor = 50.0 * std::numeric_limits<double>::epsilon() * p.abs_sum;
    if (p.error <= std::max(tol, floor)) return {p.value, p.error};
    const double mid = 0.5 * (lo + hi);
    if (depth == 0 || mid == lo || mid == hi) {
        converged = false;
        return {p.value, p.error};
    }
    const QuadratureResult left = adaptive(f, lo, mid, 0.5 * tol, depth - 1, converged);
    const QuadratureResult right = adaptive(f, mid, hi, 0.5 * tol, depth - 1, converged);
    return {left.value + right.value, left.error + right.error};
}

}  // namespace detail

/// Adaptive Gauss-Kronrod (7/15) quadrature of f over [lo, hi] to an absolute error target.
/// Throws NumericError carrying the achieved estimate and error bound if the target is missed.
template <class F>
QuadratureResult integrate_checked(F&& f, double lo, double hi, double abs_tol = 1e-10, int max_depth = 30) {
    if (!(abs_tol > 0.0)) throw ArgumentError("quad_tol must be > 0");
    if (lo == hi) return {};
    bool converged = true;
    const QuadratureResult r = detail::adaptive(f, lo, hi, abs_tol, max_depth, converged);
    if (!converged || !std::isfinite(r.value)) {
        std::ostringstream msg;
        msg.precision(17);
        msg << "quadrature did not converge on [" << lo << ", " << hi << "]: estimate " << r.value
            << ", error bound " << r.error << " (tolerance " << abs_tol << ")";
        throw NumericError(msg.str());
    }
    return r;
}

template <class F>
double integrate(F&& f, double lo, double hi, double abs_tol = 1e-10) {
    return integrate_checked(std::forward<F>(f), lo, hi, abs_tol).value;
}

/// Running integral F(x) = int_0^x f. Every evaluated point becomes a knot, so
/// monotone sampling costs one short quadrature per sample. Not thread-safe;
/// use one instance per evaluation session.
class CumulativeIntegral {
public:
    CumulativeIntegral() = default;
    CumulativeIntegral(std::function<double(double)> f, double abs_tol = 1e-10)
        : f_(std::move(f)), tol_(abs_tol) {
        knots_.emplace(0.0, 0.0);
    }

    double operator()(double x) {
        // nearest knot between 0 and x (the knot at 0 always exists)
        auto it = x >= 0.0 ? std::prev(knots_.upper_bound(x)) : knots_.lower_bound(x);
        if (it->first == x) return it->second;
        const double value = it->second + integrate(f_, it->first, x, tol_);
        if (knots_.size() < kMaxKnots) knots_.emplace(x, value);
        return value;
    }

    std::size_t knot_count() const { return knots_.size(); }

private:
    static constexpr std::size_t kMaxKnots = 1u << 20;
    std::function<double(double)> f_;
    double tol_ = 1e-10;
    std::map<double, double> knots_;
};

}  // namespace grs
