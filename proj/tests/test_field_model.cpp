#include <catch_amalgamated.hpp>

#include <cmath>
#include <numbers>

#include "grs/field_model.hpp"

using Catch::Matchers::ContainsSubstring;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;
using grs::Family;

namespace {

grs::ScenarioParams params_for(Family f) { return grs::default_params(f); }

}  // namespace

TEST_CASE("detuning of the constant-parameter family", "[field_model]") {
    auto p = params_for(Family::rabi);
    p.Omega0 = -5.0;
    p.phidot0 = 10.0;
    const auto resonant = grs::make_scenario(p);
    for (double t : {0.0, 0.3, 2.0, 6.0}) CHECK(grs::detuning(resonant, t) == 0.0);

    p.Omega0 = 1.0;
    p.phidot0 = 0.0;
    const auto static_field = grs::make_scenario(p);
    for (double t : {0.0, 1.0, 5.0}) CHECK(grs::detuning(static_field, t) == 1.0);
}

TEST_CASE("case1 detuning starts at 2 sqrt 2", "[field_model]") {
    const auto f = grs::make_scenario(params_for(Family::case1));
    CHECK_THAT(grs::detuning(f, 0.0), WithinAbs(2.0 * std::numbers::sqrt2, 1e-12));
    // independent evaluation of the prefactor form 4(1+tau^2)/((1+4tau^2) sqrt(2+4tau^2))
    for (double tau : {0.25, 1.0, 3.0}) {
        const double expected = 4.0 * (1.0 + tau * tau) / ((1.0 + 4.0 * tau * tau) * std::sqrt(2.0 + 4.0 * tau * tau));
        CHECK_THAT(grs::detuning(f, tau), WithinRel(expected, 1e-12));
    }
}

TEST_CASE("generalized resonance flags", "[field_model]") {
    const grs::TimeWindow w{0.0, 6.0, 601};
    CHECK(grs::is_generalized_resonant(grs::make_scenario(params_for(Family::sech_resonant)), w, 1e-12));
    auto b = params_for(Family::constant_beta0);
    b.beta0 = 0.5;
    CHECK_FALSE(grs::is_generalized_resonant(grs::make_scenario(b), w, 1e-12));
    CHECK_FALSE(grs::is_generalized_resonant(grs::make_scenario(params_for(Family::case2)), w, 1e-12));
    CHECK_THROWS_AS(grs::is_generalized_resonant(grs::make_scenario(b), grs::TimeWindow{0.0, 1.0, 0}, 1e-12),
                    grs::ArgumentError);
}

TEST_CASE("resonant families keep the detuning at round-off", "[field_model][property]") {
    for (Family f : {Family::sech_resonant, Family::exp_resonant, Family::modulated_resonant}) {
        const auto p = params_for(f);
        CHECK(grs::max_abs_detuning(grs::make_scenario(p), grs::default_window(p)) <= 1e-12);
    }
}

TEST_CASE("sech scenario functions", "[field_model]") {
    const auto f = grs::make_scenario(params_for(Family::sech_resonant));
    for (double t : {0.0, 0.7, 3.0}) {
        CHECK_THAT(f.omega_mag(t), WithinRel(1.0 / std::cosh(t), 1e-15));
        CHECK_THAT(f.phi_omega(t), WithinAbs(10.0 * t, 1e-14));
        CHECK(f.omega_z(t) == -5.0);
    }
}

TEST_CASE("modulated scenario in its dimensionless time", "[field_model]") {
    auto p = params_for(Family::modulated_resonant);
    p.phidot0 = 2.0;
    const auto f = grs::make_scenario(p);
    for (double x : {0.0, 0.4, 2.5}) {
        const double t = x / p.phidot0;
        CHECK_THAT(f.omega_mag(t), WithinAbs(p.C * p.phidot0 * (1.0 + p.k * std::cos(p.n * x)), 1e-13));
        CHECK_THAT(grs::family_axis(p, t), WithinAbs(x, 1e-15));
    }
}

TEST_CASE("constant-parameter triple", "[field_model]") {
    auto p = params_for(Family::rabi);
    p.omega0 = 0.7;
    p.Omega0 = 0.3;
    p.phidot0 = 2.0;
    const auto f = grs::make_scenario(p);
    for (double t : {0.0, 1.0, 4.0}) {
        CHECK(f.omega_z(t) == 0.3);
        CHECK(f.omega_mag(t) == 0.7);
        CHECK_THAT(f.phi_omega(t), WithinAbs(2.0 * t, 1e-15));
    }
}

TEST_CASE("parameter domains are enforced with the parameter name", "[field_model]") {
    auto check = [](Family f, const char* name, double v, const char* fragment) {
        auto p = grs::default_params(f);
        grs::set_param(p, name, v);
        REQUIRE_THROWS_WITH(grs::make_scenario(p), ContainsSubstring(fragment));
    };
    check(Family::exp_resonant, "gamma", 0.0, "params.gamma");
    check(Family::modulated_resonant, "n", 2.5, "params.n");
    check(Family::modulated_resonant, "k", -0.1, "params.k");
    check(Family::constant_beta0, "beta0", -1.0, "params.beta0");
    check(Family::case1, "split_fraction", 1.5, "params.split_fraction");

    auto p = grs::default_params(Family::rabi);
    REQUIRE_THROWS_WITH(grs::set_param(p, "gamma", 1.0), ContainsSubstring("accepted: omega0, Omega0, phidot0"));
}

TEST_CASE("family names round-trip", "[field_model]") {
    for (const auto& [f, name] : grs::kFamilyNames) {
        REQUIRE(grs::parse_family(name).has_value());
        CHECK(*grs::parse_family(name) == f);
        CHECK(grs::family_name(f) == name);
    }
    CHECK_FALSE(grs::parse_family("tanh").has_value());
}

TEST_CASE("phase is continuous at the default resolution", "[field_model][property]") {
    for (const auto& [family, name] : grs::kFamilyNames) {
        if (family == Family::custom) continue;
        auto p = grs::default_params(family);
        if (family == Family::case1 || family == Family::case2) p.split_fraction = 1.0;
        const auto f = grs::make_scenario(p);
        const auto w = grs::default_window(p);
        for (std::size_t i = 1; i < w.samples; ++i) {
            INFO(name << " sample " << i);
            REQUIRE(std::abs(f.phi_omega(w.at(i)) - f.phi_omega(w.at(i - 1))) < std::numbers::pi);
        }
    }
}

TEST_CASE("split fraction moves detuning between W and phi'/2", "[field_model][property]") {
    for (Family family : {Family::case1, Family::case2}) {
        auto p = grs::default_params(family);
        const auto whole = grs::make_scenario(p);
        for (double split : {0.25, 0.5, 1.0}) {
            p.split_fraction = split;
            const auto f = grs::make_scenario(p);
            for (double t : {0.0, 0.5, 2.0, 10.0}) {
                CHECK_THAT(grs::detuning(f, t), WithinAbs(grs::detuning(whole, t), 1e-14));
                CHECK_THAT(0.5 * f.phase_rate(t), WithinAbs(split * grs::detuning(whole, t), 1e-14));
            }
        }
    }
}

TEST_CASE("numeric phase derivative and its configuration error", "[field_model]") {
    grs::FieldProfile f;
    f.omega_z = [](double) { return 0.0; };
    f.omega_mag = [](double) { return 1.0; };
    f.phi_omega = [](double t) { return std::sin(t); };
    f.label = "sin";
    CHECK_THAT(f.phase_rate(0.4), WithinAbs(std::cos(0.4), 1e-12));
    f.numeric_derivative = false;
    CHECK_THROWS_AS(f.phase_rate(0.4), grs::ConfigError);
}

TEST_CASE("custom table profile interpolates and unwraps", "[field_model]") {
    grs::ScenarioParams p = grs::default_params(Family::custom);
    for (int i = 0; i <= 40; ++i) {
        const double t = 0.1 * i;
        p.table.t.push_back(t);
        p.table.omega_z.push_back(-1.5);
        p.table.omega_mag.push_back(0.5);
        p.table.phi_omega.push_back(std::remainder(3.0 * t, 2.0 * std::numbers::pi));
    }
    const auto f = grs::make_scenario(p);
    CHECK_THAT(f.phi_omega(3.95), WithinAbs(3.0 * 3.95, 1e-12));
    CHECK_THAT(f.phase_rate(2.03), WithinAbs(3.0, 1e-8));
    CHECK_THAT(grs::detuning(f, 1.0), WithinAbs(0.0, 1e-8));
    CHECK(grs::default_window(p).t_end == 4.0);
    p.table.omega_mag[3] = -0.1;
    CHECK_THROWS_AS(grs::make_scenario(p), grs::ArgumentError);
}

TEST_CASE("rotating laboratory field maps to constant modulus and linear phase", "[field_model]") {
    const double b_perp = 2.0, nu = 3.0, b0 = 0.4, mu0_g = 1.5;
    grs::PhysicalField field{[=](double t) { return b_perp * std::cos(nu * t); },
                             [=](double t) { return -b_perp * std::sin(nu * t); }, [=](double) { return b0; },
                             mu0_g};
    const auto f = grs::to_profile(field, grs::window_to(10.0, 2001));
    for (double t : {0.0, 1.1, 4.9, 9.7}) {
        CHECK_THAT(f.omega_mag(t), WithinRel(0.5 * mu0_g * b_perp, 1e-14));
        CHECK_THAT(f.phi_omega(t), WithinAbs(nu * t, 1e-12));
        CHECK_THAT(f.omega_z(t), WithinRel(0.5 * mu0_g * b0, 1e-15));
        CHECK_THAT(f.phase_rate(t), WithinAbs(nu, 1e-7));
    }
}

TEST_CASE("longitudinal field only", "[field_model]") {
    grs::PhysicalField field{[](double) { return 0.0; }, [](double) { return 0.0; }, [](double) { return 2.0; }, 1.0};
    const auto f = grs::to_profile(field, grs::window_to(1.0, 11));
    CHECK(f.omega_mag(0.5) == 0.0);
    CHECK(f.omega_z(0.5) == 1.0);
    CHECK(f.phi_omega(0.5) == 0.0);
}

TEST_CASE("physical field round trip", "[field_model][property]") {
    const grs::PhysicalField field{[](double t) { return std::cos(2.0 * t) * (1.0 + 0.3 * t); },
                                   [](double t) { return std::sin(0.5 * t * t) + 0.2; },
                                   [](double t) { return 0.1 * t - 1.0; }, 0.8};
    const grs::TimeWindow w = grs::window_to(8.0, 4001);
    const auto profile = grs::to_profile(field, w);
    const auto back = grs::from_profile(profile, field.mu0_g);
    for (std::size_t i = 0; i < w.samples; i += 7) {
        const double t = w.at(i);
        const double perp = std::hypot(field.b_x(t), field.b_y(t));
        if (perp <= 1e-9) continue;
        const double scale = std::max({perp, std::abs(field.b_z(t))});
        CHECK(std::abs(back.b_x(t) - field.b_x(t)) <= 1e-12 * scale);
        CHECK(std::abs(back.b_y(t) - field.b_y(t)) <= 1e-12 * scale);
        CHECK(std::abs(back.b_z(t) - field.b_z(t)) <= 1e-12 * std::abs(field.b_z(t)));
    }
}
