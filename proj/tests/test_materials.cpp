#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "mammo/config.hpp"
#include "mammo/materials.hpp"

using namespace mammo;

TEST_CASE("bundled tables load, cover the mammographic band, and interpolate")
{
    const MaterialTable mats = MaterialTable::load(default_data_dir());
    for (Material m : { Material::Air, Material::Skin, Material::Fat, Material::Gland }) {
        const AttenuationTable& t = mats.material(m);
        CHECK(t.e_min() <= 5.0);
        CHECK(t.e_max() >= 40.0);
        for (double e : { 6.0, 10.0, 17.3, 20.0, 28.0, 39.5 }) {
            const auto c = t.at(e);
            CHECK(c.pe > 0);
            CHECK(c.incoh > 0);
            CHECK(c.coh > 0);
        }
        // photoelectric falls steeply with energy
        CHECK(t.at(10.0).pe > 5 * t.at(20.0).pe);
    }
    // interpolation stays between bracketing samples
    const AttenuationTable& g = mats.material(Material::Gland);
    const double lo = g.at(20.0).pe, mid = g.at(20.2).pe, hi = g.at(20.5).pe;
    CHECK(mid <= lo);
    CHECK(mid >= hi);

    // gland attenuates more than adipose at mammographic energies
    CHECK(mats.mu_linear(Material::Gland, 20.0) > mats.mu_linear(Material::Fat, 20.0));
    // mass density factor scales linear attenuation
    CHECK(mats.mu_linear(Material::Mass, 20.0, 1.1) == doctest::Approx(1.1 * mats.mu_linear(Material::Gland, 20.0)));
}

TEST_CASE("rhodium filter table carries its K edge")
{
    const MaterialTable mats = MaterialTable::load(default_data_dir());
    const AttenuationTable& rh = mats.filter();
    CHECK(rh.at(23.3).pe > 3.0 * rh.at(23.1).pe);
    const AttenuationTable& se = mats.detector();
    CHECK(se.at(12.8).pe > 3.0 * se.at(12.5).pe);
}

TEST_CASE("build_spectrum: kvp rows, filtering, normalization")
{
    const auto dir = default_data_dir();
    const Spectrum s28 = build_spectrum(28, 50, dir);
    const Spectrum s30 = build_spectrum(30, 50, dir);
    s28.validate();
    s30.validate();
    CHECK(s28.energy_keV.back() <= 28.0);
    CHECK(s30.energy_keV.back() <= 30.0);
    CHECK(s30.energy_keV.back() > 28.0);

    double sum = 0;
    for (double f : s28.fluence)
        sum += f;
    CHECK(sum == doctest::Approx(1.0));

    CHECK_THROWS_AS(build_spectrum(35, 50, dir), ConfigError);
    CHECK_THROWS_AS(build_spectrum(28, -1, dir), ConfigError);
}

TEST_CASE("zero filter returns the renormalized raw anode shape")
{
    const auto dir = default_data_dir();
    const Spectrum raw = build_spectrum(28, 0, dir);
    const Spectrum filtered = build_spectrum(28, 50, dir);
    // the rhodium filter strips the soft end, so the mean hardens
    CHECK(filtered.mean_energy() > raw.mean_energy());
    // raw Kramers shape decreases with energy over the continuum
    CHECK(raw.fluence.front() > raw.fluence.back());
}

TEST_CASE("beam hardening is monotone in filter thickness")
{
    const auto dir = default_data_dir();
    const double m50 = build_spectrum(28, 50, dir).mean_energy();
    const double m100 = build_spectrum(28, 100, dir).mean_energy();
    const double m200 = build_spectrum(28, 200, dir).mean_energy();
    CHECK(m100 > m50);
    CHECK(m200 > m100);
}

TEST_CASE("spectrum sampling hits only tabulated bins, deterministically")
{
    const Spectrum s = build_spectrum(28, 50, default_data_dir());
    CounterRng a(3, 1), b(3, 1);
    for (int i = 0; i < 1000; ++i) {
        const double e = s.sample(a);
        CHECK(e == s.sample(b));
        CHECK(std::find(s.energy_keV.begin(), s.energy_keV.end(), e) != s.energy_keV.end());
    }
    const Spectrum mono = Spectrum::mono(20.0);
    CounterRng c(1, 1);
    CHECK(mono.sample(c) == 20.0);
}

TEST_CASE("spectrum validation rejects bad inputs")
{
    Spectrum s;
    s.kvp = 28;
    s.energy_keV = { 10, 20 };
    s.fluence = { 0.5, 0.6 }; // not normalized
    CHECK_THROWS_AS(s.validate(), ConfigError);
    s.fluence = { 0.5, 0.5 };
    s.energy_keV = { 10, 29 }; // above kvp
    CHECK_THROWS_AS(s.validate(), ConfigError);
}

TEST_CASE("flat synthetic tables")
{
    const AttenuationTable t = AttenuationTable::flat("test", 1.0, 0.25, 0.25, 0.0);
    CHECK(t.at(7.7).total() == doctest::Approx(0.5));
    CHECK(t.at(33.0).total() == doctest::Approx(0.5));
}
