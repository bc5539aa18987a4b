#pragma once

#include <algorithm>
#include <cmath>
#include <numbers>
#include <span>
#include <string>
#include <vector>

#include "errors.hpp"

namespace grs {

/// Piecewise-linear interpolant over strictly increasing nodes. Outside the node
/// range the end segments are extended linearly.
class LinearTable {
public:
    LinearTable() = default;
    LinearTable(std::vector<double> x, std::vector<double> y, const std::string& what = "table")
        : x_(std::move(x)), y_(std::move(y)) {
        if (x_.size() != y_.size()) throw ArgumentError(what + ": column lengths differ");
        if (x_.size() < 2) throw ArgumentError(what + ": need at least two rows");
        for (std::size_t i = 1; i < x_.size(); ++i) {
            if (!(x_[i] > x_[i - 1])) {
                throw ArgumentError(what + ": abscissa must be strictly increasing (row " +
                                    std::to_string(i) + ")");
            }
        }
    }

    double operator()(double x) const {
        const std::size_t i = segment(x);
        const double w = (x - x_[i]) / (x_[i + 1] - x_[i]);
        return y_[i] + w * (y_[i + 1] - y_[i]);
    }

    double slope(double x) const {
        const std::size_t i = segment(x);
        return (y_[i + 1] - y_[i]) / (x_[i + 1] - x_[i]);
    }

    double front() const { return x_.front(); }
    double back() const { return x_.back(); }
    std::span<const double> nodes() const { return x_; }
    std::span<const double> values() const { return y_; }

private:
    std::size_t segment(double x) const {
        auto it = std::upper_bound(x_.begin(), x_.end(), x);
        std::size_t i = it == x_.begin() ? 0 : static_cast<std::size_t>(it - x_.begin()) - 1;
        return std::min(i, x_.size() - 2);
    }

    std::vector<double> x_;
    std::vector<double> y_;
};

/// Removes 2*pi jumps between consecutive phase samples.
inline std::vector<double> unwrap_phase(std::span<const double> phase) {
    std::vector<double> out(phase.begin(), phase.end());
    double offset = 0.0;
    for (std::size_t i = 1; i < out.size(); ++i) {
        const double jump = phase[i] - phase[i - 1];
        offset -= 2.0 * std::numbers::pi * std::round(jump / (2.0 * std::numbers::pi));
        out[i] = phase[i] + offset;
    }
    return out;
}

}  // namespace grs
