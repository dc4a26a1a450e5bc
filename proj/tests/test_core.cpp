#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "mammo/config.hpp"
#include "mammo/edt.hpp"
#include "mammo/parallel.hpp"
#include "mammo/rng.hpp"

#include <cmath>
#include <fstream>
#include <set>

using namespace mammo;

TEST_CASE("counter rng replays bit-exactly and separates streams")
{
    CounterRng a(42, 7), b(42, 7), c(42, 8);
    for (int i = 0; i < 100; ++i) {
        const std::uint64_t va = a.next_u64();
        CHECK(va == b.next_u64());
    }
    bool differs = false;
    CounterRng a2(42, 7);
    for (int i = 0; i < 10; ++i)
        differs = differs || (a2.next_u64() != c.next_u64());
    CHECK(differs);
}

TEST_CASE("uniform stays in [0,1) and normal has sane moments")
{
    CounterRng rng(1, 0);
    double sum = 0, sum2 = 0;
    const int n = 200000;
    for (int i = 0; i < n; ++i) {
        const double u = rng.uniform();
        CHECK(u >= 0.0);
        CHECK(u < 1.0);
        sum += u;
        sum2 += u * u;
    }
    CHECK(std::abs(sum / n - 0.5) < 0.005);
    CHECK(std::abs(sum2 / n - 1.0 / 3.0) < 0.005);

    double ns = 0, ns2 = 0;
    for (int i = 0; i < n; ++i) {
        const double g = rng.normal();
        ns += g;
        ns2 += g * g;
    }
    CHECK(std::abs(ns / n) < 0.02);
    CHECK(std::abs(ns2 / n - 1.0) < 0.02);
}

TEST_CASE("derive_seed is pairwise distinct over a large index range")
{
    std::set<std::uint64_t> seen;
    for (int k = 0; k < 100000; ++k)
        CHECK(seen.insert(derive_seed(123456789, k)).second);
}

TEST_CASE("ordered_reduce sums floats identically for any worker count")
{
    auto run = [](int threads) {
        double acc = 0;
        ordered_reduce(
            257, threads,
            [](std::size_t i) {
                CounterRng rng(9, i);
                double s = 0;
                for (int k = 0; k < 1000; ++k)
                    s += rng.uniform() * 1e-3;
                return s;
            },
            [&](std::size_t, double& partial) { acc += partial; });
        return acc;
    };
    const double r1 = run(1);
    CHECK(r1 == run(2));
    CHECK(r1 == run(8));
}

TEST_CASE("squared_edt matches brute force on a random grid")
{
    const IVec3 dims { 13, 9, 11 };
    std::vector<std::uint8_t> feature(static_cast<std::size_t>(dims.x) * dims.y * dims.z, 0);
    CounterRng rng(5, 0);
    for (auto& f : feature)
        f = rng.uniform() < 0.07 ? 1 : 0;
    feature[0] = 1; // ensure non-empty
    const auto d2 = squared_edt(dims, feature);

    for (int z = 0; z < dims.z; ++z)
        for (int y = 0; y < dims.y; ++y)
            for (int x = 0; x < dims.x; ++x) {
                float best = 1e30f;
                for (int zz = 0; zz < dims.z; ++zz)
                    for (int yy = 0; yy < dims.y; ++yy)
                        for (int xx = 0; xx < dims.x; ++xx)
                            if (feature[static_cast<std::size_t>(xx) + dims.x * (static_cast<std::size_t>(yy) + static_cast<std::size_t>(dims.y) * zz)]) {
                                const float d = static_cast<float>((x - xx) * (x - xx) + (y - yy) * (y - yy) + (z - zz) * (z - zz));
                                best = std::min(best, d);
                            }
                CHECK(d2[static_cast<std::size_t>(x) + dims.x * (static_cast<std::size_t>(y) + static_cast<std::size_t>(dims.y) * z)] == doctest::Approx(best));
            }
}

TEST_CASE("config file overlay and unknown keys")
{
    Config cfg = Config::defaults();
    CHECK(cfg.for_class(DensityClass::Fatty).histories_100 == doctest::Approx(2.22e10));
    CHECK(cfg.for_class(DensityClass::Dense).kvp == 30);
    CHECK(cfg.for_class(DensityClass::Fatty).kvp == 28);

    const char* path = "test_config_overlay.txt";
    {
        std::ofstream f(path);
        f << "# comment\n";
        f << "pitch_mm = 1.25\n";
        f << "dense.glandular_fraction = 0.44\n";
        f << "dense.extent_mm = 40 41 42\n";
    }
    cfg.load_file(path);
    CHECK(cfg.pitch_mm == doctest::Approx(1.25));
    CHECK(cfg.for_class(DensityClass::Dense).glandular_fraction == doctest::Approx(0.44));
    CHECK(cfg.for_class(DensityClass::Dense).extent_mm[2] == doctest::Approx(42));
    std::remove(path);

    CHECK_THROWS_AS(cfg.set("no_such_key", "1"), ConfigError);
    CHECK_THROWS_AS(cfg.set("pitch_mm", "abc"), ConfigError);
}

TEST_CASE("class volume ordering of the default config rows")
{
    const Config cfg = Config::defaults();
    auto vol = [&](DensityClass c) {
        const auto& e = cfg.for_class(c).extent_mm;
        return e[0] * e[1] * e[2];
    };
    CHECK(vol(DensityClass::Fatty) > vol(DensityClass::Scattered));
    CHECK(vol(DensityClass::Scattered) > vol(DensityClass::Hetero));
    CHECK(vol(DensityClass::Hetero) > vol(DensityClass::Dense));
}
