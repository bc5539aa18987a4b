#include <catch_amalgamated.hpp>

#include <cmath>
#include <cstdlib>
#include <numbers>

#include "grs/propagator.hpp"

using Catch::Matchers::WithinAbs;
using grs::Complex;
using grs::Scheme;

namespace {

grs::FieldProfile constant_profile(double omega_z, double omega_mag, double phidot) {
    auto p = grs::default_params(grs::Family::rabi);
    p.Omega0 = omega_z;
    p.omega0 = omega_mag;
    p.phidot0 = phidot;
    return grs::make_scenario(p);
}

grs::PropagatorConfig config(Scheme scheme, double step) {
    grs::PropagatorConfig c;
    c.scheme = scheme;
    c.step = step;
    return c;
}

}  // namespace

TEST_CASE("real constant coupling rotates between the levels", "[propagator]") {
    const double w0 = 1.3;
    const auto profile = constant_profile(0.0, w0, 0.0);
    for (Scheme s : {Scheme::midpoint_exponential, Scheme::commutator_free_4th}) {
        const auto traj = grs::propagate(profile, config(s, 1e-3), grs::window_to(5.0, 51));
        for (const auto& sample : traj.samples) {
            CHECK(std::abs(sample.entries.a - Complex(std::cos(w0 * sample.t), 0.0)) <= 1e-8);
            CHECK(std::abs(sample.entries.b - Complex(0.0, -std::sin(w0 * sample.t))) <= 1e-8);
        }
    }
}

TEST_CASE("diagonal Hamiltonian gives pure phases", "[propagator]") {
    const double omega = 0.7;
    const auto profile = constant_profile(omega, 0.0, 0.0);
    const auto traj = grs::propagate(profile, config(Scheme::midpoint_exponential, 1e-2), grs::window_to(20.0, 41));
    for (const auto& sample : traj.samples) {
        CHECK(std::abs(sample.entries.a - std::polar(1.0, -omega * sample.t)) <= 1e-12);
        CHECK(std::abs(sample.entries.b) == 0.0);
    }
}

TEST_CASE("off-resonant rotating field against the rotating-frame solution", "[propagator]") {
    // W = 0.4, |w| = 1, phi = 2t: in the frame rotating with phi the Hamiltonian is static
    // with detuning D = W + phi'/2 = 1.4, so |b|^2 = sin^2(n t) / (1 + D^2), n = sqrt(1 + D^2).
    const auto profile = constant_profile(0.4, 1.0, 2.0);
    const double n = std::sqrt(1.0 + 1.4 * 1.4);
    const auto traj =
        grs::propagate(profile, config(Scheme::commutator_free_4th, 1e-3), grs::window_to(2.0 * std::numbers::pi, 101));
    for (const auto& sample : traj.samples) {
        const double s = std::sin(n * sample.t);
        CHECK_THAT(sample.p_flip, WithinAbs(s * s / (n * n), 1e-10));
    }
}

TEST_CASE("sech resonance follows tanh squared", "[propagator]") {
    const auto profile = grs::make_scenario(grs::default_params(grs::Family::sech_resonant));
    const auto traj = grs::propagate(profile, grs::PropagatorConfig{}, grs::window_to(6.0, 601));
    double worst = 0.0;
    for (const auto& sample : traj.samples) {
        const double th = std::tanh(sample.t);
        worst = std::max(worst, std::abs(sample.p_flip - th * th));
    }
    CHECK(worst <= 1e-6);
}

TEST_CASE("every step factor is unitary", "[propagator][property]") {
    for (double dt : {1e-4, 0.03, 0.5}) {
        for (double z : {-3.0, 0.0, 2.5}) {
            const grs::Su2 u = grs::exponential({z, std::polar(1.7, 0.4)}, dt);
            CHECK(u.det_defect() <= 1e-14);
        }
    }
    CHECK(grs::exponential({0.0, 0.0}, 0.1).a == Complex(1.0, 0.0));
}

TEST_CASE("propagating back with the reversed profile restores the identity", "[propagator][property]") {
    auto p = grs::default_params(grs::Family::case2);
    p.split_fraction = 0.5;
    const auto profile = grs::make_scenario(p);
    const double horizon = 8.0;
    const auto c = config(Scheme::midpoint_exponential, 1e-3);
    const grs::Su2 forward = grs::evolve(profile, c, 0.0, horizon);
    auto half = c;
    half.step = c.step / 2.0;
    const grs::Su2 forward_fine = grs::evolve(profile, half, 0.0, horizon);
    const double one_way = std::max(std::abs(forward.a - forward_fine.a), std::abs(forward.b - forward_fine.b));

    const grs::Su2 round_trip = grs::evolve(grs::time_reversed(profile, horizon), c, 0.0, horizon, forward);
    const double defect = std::max(std::abs(round_trip.a - Complex(1.0, 0.0)), std::abs(round_trip.b));
    CHECK(defect <= 10.0 * std::max(one_way, 1e-14));
}

TEST_CASE("observed convergence orders", "[propagator]") {
    const auto rabi = constant_profile(-5.0, 1.0, 10.0 + 1.0);  // off resonance, rotating field
    const auto window = grs::window_to(2.0, 5);
    const auto mid = grs::richardson_check(rabi, config(Scheme::midpoint_exponential, 2e-3), window);
    CHECK_FALSE(mid.exact);
    CHECK_THAT(mid.observed_order, WithinAbs(2.0, 0.3));
    CHECK(mid.within_tolerance);

    const auto case2 = grs::make_scenario(grs::default_params(grs::Family::case2));
    const auto cf4 = grs::richardson_check(case2, config(Scheme::commutator_free_4th, 0.02), grs::window_to(5.0, 11));
    CHECK_THAT(cf4.observed_order, WithinAbs(4.0, 0.3));

    const auto diagonal = grs::richardson_check(constant_profile(0.8, 0.0, 0.0),
                                                config(Scheme::midpoint_exponential, 0.05), window);
    CHECK(diagonal.exact);
    CHECK(diagonal.coarse_difference < 1e-12);
}

TEST_CASE("under-resolved steps are rejected with a suggestion", "[propagator]") {
    const auto profile = constant_profile(-5.0, 1.0, 10.0);
    try {
        grs::propagate(profile, config(Scheme::midpoint_exponential, 0.05), grs::window_to(1.0, 2));
        FAIL("expected ResolutionError");
    } catch (const grs::ResolutionError& e) {
        CHECK(e.suggested_step() > 0.0);
        CHECK(e.suggested_step() * 10.0 <= 0.1);
        CHECK_NOTHROW(grs::propagate(profile, config(Scheme::midpoint_exponential, e.suggested_step()),
                                     grs::window_to(1.0, 2)));
    }
    CHECK_THROWS_AS(grs::propagate(profile, config(Scheme::midpoint_exponential, 0.0), grs::window_to(1.0, 2)),
                    grs::ArgumentError);
}

TEST_CASE("scheme names and environment default", "[propagator]") {
    CHECK(grs::parse_scheme("midpoint") == Scheme::midpoint_exponential);
    CHECK(grs::parse_scheme("commutator_free_4th") == Scheme::commutator_free_4th);
    CHECK(grs::parse_scheme("cf4") == Scheme::commutator_free_4th);
    CHECK_FALSE(grs::parse_scheme("rk4").has_value());
    CHECK(grs::nominal_order(Scheme::commutator_free_4th) == 4);

    ::setenv("GRS_DEFAULT_SCHEME", "cf4", 1);
    CHECK(grs::default_scheme() == Scheme::commutator_free_4th);
    ::setenv("GRS_DEFAULT_SCHEME", "nonsense", 1);
    CHECK(grs::default_scheme() == Scheme::midpoint_exponential);
    ::unsetenv("GRS_DEFAULT_SCHEME");
    CHECK(grs::default_scheme() == Scheme::midpoint_exponential);
}

TEST_CASE("trajectory starts at the identity and stays unitary", "[propagator][property]") {
    for (const auto& [family, name] : grs::kFamilyNames) {
        if (family == grs::Family::custom) continue;
        const auto p = grs::default_params(family);
        const auto traj = grs::propagate(grs::make_scenario(p), grs::PropagatorConfig{}, grs::default_window(p));
        INFO(name);
        CHECK(traj.samples.front().entries.a == Complex(1.0, 0.0));
        CHECK(traj.samples.front().entries.b == Complex(0.0, 0.0));
        for (const auto& s : traj.samples) REQUIRE(s.entries.norm_defect() <= 1e-10);
    }
}
