#pragma once

#include <string>
#include <vector>

#include "entries.hpp"
#include "field_model.hpp"
#include "observables.hpp"

namespace grs {

struct TrajectorySample {
    double t = 0.0;
    double omega_z = 0.0;
    double omega_mag = 0.0;
    double phi_omega = 0.0;
    double detuning = 0.0;
    EvolutionEntries entries;
    double p_flip = 0.0;  ///< P_{+-}
    double sigma_x = 0.0;
    double sigma_y = 0.0;
    double sigma_z = 1.0;
};

/// Time series of fields, entries and observables (initial state |+>).
struct Trajectory {
    std::string label;
    std::vector<TrajectorySample> samples;

    std::size_t size() const { return samples.size(); }
    const TrajectorySample& back() const { return samples.back(); }
};

inline TrajectorySample make_sample(const FieldProfile& profile, const EvolutionEntries& e) {
    TrajectorySample s;
    s.t = e.t;
    s.omega_z = profile.omega_z(e.t);
    s.omega_mag = profile.omega_mag(e.t);
    s.phi_omega = profile.phi_omega(e.t);
    s.detuning = detuning(profile, e.t);
    s.entries = e;
    s.p_flip = transition_probability(e);
    s.sigma_x = sigma_xy_expectation(e, Axis::x);
    s.sigma_y = sigma_xy_expectation(e, Axis::y);
    s.sigma_z = sigma_z_expectation(e);
    return s;
}

/// Largest deviations between two trajectories sampled at the same times.
struct Deviation {
    double max_p = 0.0;
    double max_a = 0.0;
    double max_b = 0.0;
};

inline Deviation compare(const Trajectory& x, const Trajectory& y) {
    Deviation d;
    const std::size_t n = std::min(x.size(), y.size());
    for (std::size_t i = 0; i < n; ++i) {
        const auto& ex = x.samples[i].entries;
        const auto& ey = y.samples[i].entries;
        d.max_p = std::max(d.max_p, std::abs(x.samples[i].p_flip - y.samples[i].p_flip));
        d.max_a = std::max(d.max_a, std::abs(ex.a - ey.a));
        d.max_b = std::max(d.max_b, std::abs(ex.b - ey.b));
    }
    return d;
}

}  // namespace grs
