#pragma once

// Transition probability and Pauli expectations for a spin prepared in a sigma_z
// eigenstate. U|+> = (a, -b*), U|-> = (b, a*).

#include <cmath>
#include <complex>

#include "entries.hpp"

namespace grs {

enum class Initial { plus, minus };
enum class Axis { x, y, z };

/// P_{+-}(t) = |b|^2.
inline double transition_probability(const EvolutionEntries& e) { return std::norm(e.b); }

/// P_{++}(t) = |a|^2, computed as 1 - |b|^2 so the pair sums to one.
inline double survival_probability(const EvolutionEntries& e) { return 1.0 - std::norm(e.b); }

inline double sigma_z_expectation(const EvolutionEntries& e, Initial initial = Initial::plus) {
    const double v = std::norm(e.a) - std::norm(e.b);
    return initial == Initial::plus ? v : -v;
}

/// <sigma_x> = -2|a||b| cos(phi_a + phi_b), <sigma_y> = 2|a||b| sin(phi_a + phi_b) for
/// initial |+>; both flip sign for |->. Evaluated as -2 Re(ab), 2 Im(ab) to avoid
/// taking phases of vanishing entries.
inline double sigma_xy_expectation(const EvolutionEntries& e, Axis axis, Initial initial = Initial::plus) {
    const Complex ab = e.a * e.b;
    const double v = axis == Axis::x ? -2.0 * ab.real() : axis == Axis::y ? 2.0 * ab.imag() : 0.0;
    return initial == Initial::plus ? v : -v;
}

inline double expectation(const EvolutionEntries& e, Axis axis, Initial initial = Initial::plus) {
    return axis == Axis::z ? sigma_z_expectation(e, initial) : sigma_xy_expectation(e, axis, initial);
}

struct BlochVector {
    double x = 0.0;
    double y = 0.0;
    double z = 1.0;

    double norm() const { return std::sqrt(x * x + y * y + z * z); }
};

inline BlochVector bloch_vector(const EvolutionEntries& e, Initial initial = Initial::plus) {
    return {sigma_xy_expectation(e, Axis::x, initial), sigma_xy_expectation(e, Axis::y, initial),
            sigma_z_expectation(e, initial)};
}

}  // namespace grs
