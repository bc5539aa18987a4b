#pragma once

#include <cmath>
#include <complex>

namespace grs {

using Complex = std::complex<double>;

/// First row (a, b) of U(t) = [[a, b], [-b*, a*]] at time t.
struct EvolutionEntries {
    Complex a{1.0, 0.0};
    Complex b{0.0, 0.0};
    double t = 0.0;

    double norm_defect() const { return std::abs(std::norm(a) + std::norm(b) - 1.0); }
};

/// Entries built from moduli and phases: a = |a| e^{i phase_a}, b = |b| e^{i phase_b}.
inline EvolutionEntries from_polar(double t, double mod_a, double phase_a, double mod_b, double phase_b) {
    return {std::polar(mod_a, phase_a), std::polar(mod_b, phase_b), t};
}

/// Largest componentwise deviation between two entry sets.
inline double entries_distance(const EvolutionEntries& x, const EvolutionEntries& y) {
    return std::max(std::abs(x.a - y.a), std::abs(x.b - y.b));
}

}  // namespace grs
