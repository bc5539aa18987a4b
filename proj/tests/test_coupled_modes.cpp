#include <catch_amalgamated.hpp>

#include <cmath>
#include <numbers>

#include "grs/coupled_modes.hpp"

using Catch::Matchers::WithinAbs;
using grs::Complex;

namespace {

constexpr double kPi = std::numbers::pi;

grs::PropagatorConfig fine() {
    grs::PropagatorConfig c;
    c.scheme = grs::Scheme::commutator_free_4th;
    c.step = 1e-3;
    return c;
}

/// Direct RK4 on the untransformed coupled-mode equations, used as an independent check.
grs::ModeState integrate_directly(const grs::CouplingSpec& spec, grs::ModeState s, double z_max, int steps) {
    const double h = z_max / steps;
    auto rhs = [&](double z, Complex a, Complex b) {
        const Complex k = spec.k_ab(z);
        const Complex da = k * std::polar(1.0, -spec.delta * z) * b;
        const Complex db = -std::conj(k) * std::polar(1.0, spec.delta * z) * a;
        return std::pair{da, db};
    };
    double z = 0.0;
    for (int i = 0; i < steps; ++i) {
        auto [k1a, k1b] = rhs(z, s.amp_a, s.amp_b);
        auto [k2a, k2b] = rhs(z + h / 2, s.amp_a + h / 2 * k1a, s.amp_b + h / 2 * k1b);
        auto [k3a, k3b] = rhs(z + h / 2, s.amp_a + h / 2 * k2a, s.amp_b + h / 2 * k2b);
        auto [k4a, k4b] = rhs(z + h, s.amp_a + h * k3a, s.amp_b + h * k3b);
        s.amp_a += h / 6 * (k1a + 2.0 * k2a + 2.0 * k3a + k4a);
        s.amp_b += h / 6 * (k1b + 2.0 * k2b + 2.0 * k3b + k4b);
        z += h;
    }
    s.z = z_max;
    return s;
}

}  // namespace

TEST_CASE("tilde and detilde", "[coupled_modes]") {
    const grs::ModeState s{Complex(0.3, -0.2), Complex(-0.5, 0.7), 1.3};
    const auto [at0, bt0] = grs::tilde(s, 0.0);
    CHECK(at0 == s.amp_a);
    CHECK(bt0 == s.amp_b);
    for (double delta : {0.4, -2.0, 7.5}) {
        const auto [at, bt] = grs::tilde(s, delta);
        CHECK_THAT(std::abs(at), WithinAbs(std::abs(s.amp_a), 1e-15));
        CHECK_THAT(std::abs(bt), WithinAbs(std::abs(s.amp_b), 1e-15));
        const auto back = grs::detilde(at, bt, s.z, delta);
        CHECK(std::abs(back.amp_a - s.amp_a) <= 1e-15);
        CHECK(std::abs(back.amp_b - s.amp_b) <= 1e-15);
    }
}

TEST_CASE("mapped profile of a constant coupling", "[coupled_modes]") {
    const auto spec = grs::constant_coupling(0.8, 0.0, 0.3);
    const auto f = grs::to_su2_profile(spec);
    CHECK(f.omega_z(1.0) == 0.0);
    CHECK(f.omega_mag(1.0) == 0.8);
    CHECK_THAT(f.phi_omega(1.0), WithinAbs(0.3 + kPi / 2.0, 1e-15));
    CHECK(grs::detuning(f, 2.0) == 0.0);

    const auto mismatched = grs::to_su2_profile(grs::constant_coupling(0.8, 1.2));
    CHECK(grs::detuning(mismatched, 0.5) == -0.6);
}

TEST_CASE("constant coupling transfers all power at pi / 2k", "[coupled_modes]") {
    for (double k0 : {0.5, 1.0, 3.0}) {
        const auto traj = grs::propagate_modes(grs::constant_coupling(k0, 0.0), {}, kPi / (2.0 * k0), fine(), 201);
        CHECK(traj.samples.back().power_a <= 1e-12);
        CHECK_THAT(traj.samples.back().power_b, WithinAbs(1.0, 1e-6));
        for (const auto& m : traj.samples) {
            CHECK_THAT(m.power_b, WithinAbs(std::pow(std::sin(k0 * m.state.z), 2), 1e-10));
        }
    }
}

TEST_CASE("sech coupling transfers power asymptotically", "[coupled_modes]") {
    const auto traj = grs::propagate_modes(grs::sech_coupling(1.0, 0.0), {}, 15.0, fine(), 301);
    CHECK(traj.samples.back().power_b >= 1.0 - 1e-10);
    for (const auto& m : traj.samples) CHECK_THAT(m.power_b, WithinAbs(std::pow(std::tanh(m.state.z), 2), 1e-9));
}

TEST_CASE("mismatch caps the transfer", "[coupled_modes]") {
    // Delta = 2 beta0 k gives detuning ratio beta0 in the mapped problem
    const double k0 = 1.0, beta0 = 0.75;
    const auto traj = grs::propagate_modes(grs::constant_coupling(k0, 2.0 * beta0 * k0), {}, 10.0, fine(), 2001);
    double peak = 0.0;
    for (const auto& m : traj.samples) peak = std::max(peak, m.power_b);
    CHECK(peak <= 1.0 / (1.0 + beta0 * beta0) + 1e-10);
    CHECK_THAT(peak, WithinAbs(1.0 / (1.0 + beta0 * beta0), 1e-5));
}

TEST_CASE("uncoupled modes only pick up mismatch phases", "[coupled_modes]") {
    const double r = 1.0 / std::numbers::sqrt2;
    const grs::ModeState start{Complex(r, 0.0), Complex(r, 0.0), 0.0};
    const auto traj = grs::propagate_modes(grs::constant_coupling(0.0, 1.7), start, 4.0, fine(), 41);
    for (const auto& m : traj.samples) {
        CHECK(std::abs(m.state.amp_a - start.amp_a) <= 1e-12);
        CHECK(std::abs(m.state.amp_b - start.amp_b) <= 1e-12);
    }
}

TEST_CASE("power is conserved for every cataloged coupling", "[coupled_modes][property]") {
    std::vector<double> z, re, im;
    for (int i = 0; i <= 100; ++i) {
        z.push_back(0.05 * i);
        const Complex k = std::polar(0.8 + 0.3 * std::sin(z.back()), 0.7 * z.back());
        re.push_back(k.real());
        im.push_back(k.imag());
    }
    const grs::CouplingSpec specs[] = {grs::constant_coupling(1.3, 0.4), grs::sech_coupling(2.0, -0.5, 1.0),
                                       grs::table_coupling(z, re, im, 0.3)};
    for (const auto& spec : specs) {
        for (const grs::ModeState& start : {grs::ModeState{}, grs::ModeState{Complex(0.6, 0.0), Complex(0.0, 0.8), 0.0}}) {
            const auto traj = grs::propagate_modes(spec, start, 5.0, grs::PropagatorConfig{}, 501);
            INFO(spec.label);
            for (const auto& m : traj.samples) REQUIRE(std::abs(m.total - 1.0) <= 1e-10);
        }
    }
}

TEST_CASE("mode B power equals the mapped transition probability", "[coupled_modes][property]") {
    const auto spec = grs::sech_coupling(1.5, 0.8, 0.4);
    const auto config = fine();
    const grs::TimeWindow w = grs::window_to(6.0, 121);
    const auto modes = grs::propagate_modes(spec, {}, 6.0, config, w.samples);
    const auto su2 = grs::propagate(grs::to_su2_profile(spec, 6.0), config, w);
    for (std::size_t i = 0; i < w.samples; ++i) {
        CHECK_THAT(modes.samples[i].power_b, WithinAbs(su2.samples[i].p_flip, 1e-10));
    }
}

TEST_CASE("mode amplitudes solve the original coupled equations", "[coupled_modes]") {
    const auto spec = grs::sech_coupling(1.2, 0.9, 0.5);
    const grs::ModeState start{Complex(0.6, 0.1), Complex(-0.2, 0.7), 0.0};
    const double norm = std::sqrt(start.power());
    const auto traj = grs::propagate_modes(spec, start, 4.0, fine(), 2);
    const auto direct = integrate_directly(spec, {start.amp_a / norm, start.amp_b / norm, 0.0}, 4.0, 40000);
    CHECK(std::abs(traj.samples.back().state.amp_a - direct.amp_a) <= 1e-9);
    CHECK(std::abs(traj.samples.back().state.amp_b - direct.amp_b) <= 1e-9);
}

TEST_CASE("raw initial power is normalized and recorded", "[coupled_modes]") {
    const grs::ModeState raw{Complex(3.0, 0.0), Complex(0.0, 4.0), 0.0};
    const auto traj = grs::propagate_modes(grs::constant_coupling(1.0, 0.0), raw, 1.0, fine(), 11);
    CHECK(traj.power_scale == 25.0);
    CHECK_THAT(traj.samples.front().total, WithinAbs(1.0, 1e-15));
    const auto kept = grs::propagate_modes(grs::constant_coupling(1.0, 0.0), raw, 1.0, fine(), 11, false);
    CHECK(kept.power_scale == 1.0);
    CHECK_THAT(kept.samples.back().total, WithinAbs(25.0, 1e-9));
    CHECK_THROWS_AS(grs::propagate_modes(grs::constant_coupling(1.0, 0.0), {Complex(), Complex(), 0.0}, 1.0, fine()),
                    grs::ArgumentError);
}

TEST_CASE("non-conservative coupling is rejected", "[coupled_modes]") {
    auto spec = grs::constant_coupling(1.0, 0.0);
    spec.k_ba = [](double) { return Complex(-1.0, 0.0); };
    CHECK_NOTHROW(grs::to_su2_profile(spec));
    spec.k_ba = [](double) { return Complex(1.0, 0.0); };
    CHECK_THROWS_AS(grs::to_su2_profile(spec), grs::ArgumentError);
    CHECK_THROWS_AS(grs::constant_coupling(-1.0, 0.0), grs::ArgumentError);
}
