#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "mammo/config.hpp"
#include "mammo/io.hpp"
#include "mammo/phantom.hpp"
#include "mammo/xproj.hpp"

#include <cmath>

using namespace mammo;

namespace {

// uniform slab covering the detector field: `mu_per_cm` of fat between
// z = gap and z = gap + thickness
VoxelPhantom slab_phantom(double thickness_mm, double pitch_mm = 1.0, double gap_mm = 4.0)
{
    VoxelPhantom ph;
    const int nz = static_cast<int>((thickness_mm + gap_mm) / pitch_mm) + 4;
    ph.dims = { 160, 168, nz };
    ph.pitch_mm = pitch_mm;
    ph.labels.assign(static_cast<std::size_t>(ph.dims.x) * ph.dims.y * ph.dims.z, static_cast<std::uint8_t>(Material::Air));
    const int z0 = static_cast<int>(gap_mm / pitch_mm) + 1;
    const int z1 = z0 + static_cast<int>(thickness_mm / pitch_mm);
    for (int z = z0; z < z1; ++z)
        for (int y = 0; y < ph.dims.y; ++y)
            for (int x = 0; x < ph.dims.x; ++x)
                ph.labels[ph.index(x, y, z)] = static_cast<std::uint8_t>(Material::Fat);
    return ph;
}

VoxelPhantom empty_phantom()
{
    VoxelPhantom ph;
    ph.dims = { 32, 32, 16 };
    ph.pitch_mm = 2.0;
    ph.labels.assign(static_cast<std::size_t>(32) * 32 * 16, static_cast<std::uint8_t>(Material::Air));
    return ph;
}

// all five materials share a flat mu/rho; fat carries `mu_fat` 1/cm
MaterialTable synthetic_materials(double mu_fat_per_cm, double detector_eta_mu = 100.0)
{
    std::array<AttenuationTable, kNumMaterials> mats {
        AttenuationTable::flat("air", 1.0, 0, 0, 0),
        AttenuationTable::flat("skin", 1.0, 0, 0, 0),
        AttenuationTable::flat("fat", 1.0, mu_fat_per_cm / 2, mu_fat_per_cm / 2, 0),
        AttenuationTable::flat("gland", 1.0, 0, 0, 0),
        AttenuationTable::flat("mass", 1.0, 0, 0, 0),
    };
    return MaterialTable::synthetic(mats,
        AttenuationTable::flat("filter", 12.41, 10, 0.2, 0.1),
        AttenuationTable::flat("detector", 4.28, detector_eta_mu, 0, 0));
}

AcquisitionConfig base_config(std::uint64_t histories, ScatterMode mode)
{
    AcquisitionConfig cfg;
    cfg.histories = histories;
    cfg.spectrum = Spectrum::mono(20.0);
    cfg.scatter_mode = mode;
    cfg.focal_fwhm_um = 0;
    cfg.grid.enabled = false;
    cfg.electronic_noise_sigma = 0;
    cfg.seed = 11;
    cfg.threads = 1;
    return cfg;
}

struct RegionStats {
    double mean = 0, se = 0;
};

RegionStats region_stats(const Image2<double>& img, int x0, int x1, int y0, int y1)
{
    double sum = 0, sum2 = 0;
    int n = 0;
    for (int y = y0; y < y1; ++y)
        for (int x = x0; x < x1; ++x) {
            sum += img(x, y);
            sum2 += img(x, y) * img(x, y);
            ++n;
        }
    RegionStats s;
    s.mean = sum / n;
    const double var = sum2 / n - s.mean * s.mean;
    s.se = std::sqrt(std::max(0.0, var) / n);
    return s;
}

} // namespace

TEST_CASE("primary-only transmission through a homogeneous slab matches Beer-Lambert")
{
    const double mu = 0.5; // 1/cm
    const double t_cm = 2.0;
    const MaterialTable mats = synthetic_materials(mu);
    const AcquisitionConfig cfg = base_config(400000, ScatterMode::PrimaryOnly);

    const Projection open = simulate_projection(empty_phantom(), cfg, mats);
    const Projection slab = simulate_projection(slab_phantom(t_cm * 10.0), cfg, mats);

    // central strip under the beam, low obliquity
    const RegionStats o = region_stats(open.pixels, 40, 120, 184, 264);
    const RegionStats s = region_stats(slab.pixels, 40, 120, 184, 264);
    const double trans = s.mean / o.mean;
    const double sigma = trans * std::sqrt(std::pow(s.se / s.mean, 2) + std::pow(o.se / o.mean, 2));
    const double expected = std::exp(-mu * t_cm);
    CHECK(std::abs(trans - expected) <= 3.0 * sigma + 0.003);
}

TEST_CASE("full transport primary component agrees with the analytic attenuation")
{
    const double mu = 0.4;
    const double t_cm = 3.0;
    const MaterialTable mats = synthetic_materials(mu);
    const AcquisitionConfig cfg = base_config(600000, ScatterMode::FullTransport);

    const Projection open = simulate_projection(empty_phantom(), cfg, mats);
    const Projection slab = simulate_projection(slab_phantom(t_cm * 10.0), cfg, mats);
    const RegionStats o = region_stats(open.primary_pixels, 40, 120, 184, 264);
    const RegionStats s = region_stats(slab.primary_pixels, 40, 120, 184, 264);
    const double trans = s.mean / o.mean;
    const double expected = std::exp(-mu * t_cm);
    CHECK(std::abs(trans - expected) / expected < 0.05);
}

TEST_CASE("empty phantom gives a flat field with Poisson statistics")
{
    const MaterialTable mats = synthetic_materials(0.5);
    AcquisitionConfig cfg = base_config(2000000, ScatterMode::PrimaryOnly);
    const Projection p = simulate_projection(empty_phantom(), cfg, mats);

    const double lambda = static_cast<double>(cfg.histories) / (cfg.det_nx * cfg.det_ny);
    double sum = 0, sum2 = 0;
    for (double v : p.pixels.data()) {
        sum += v;
        sum2 += v * v;
    }
    const double n = static_cast<double>(p.pixels.size());
    const double mean = sum / n;
    const double cv = std::sqrt(sum2 / n - mean * mean) / mean;
    const double expected_cv = 1.0 / std::sqrt(lambda);
    CHECK(cv == doctest::Approx(expected_cv).epsilon(0.10));
}

TEST_CASE("identical seeds give bit-identical projections for 1 and 8 workers")
{
    const MaterialTable mats = synthetic_materials(0.7);
    AcquisitionConfig cfg = base_config(120000, ScatterMode::FullTransport);
    cfg.batch_size = 1 << 13;
    cfg.electronic_noise_sigma = 0.4;
    cfg.focal_fwhm_um = 300;

    AcquisitionConfig cfg8 = cfg;
    cfg8.threads = 8;
    const Projection a = simulate_projection(slab_phantom(20.0), cfg, mats);
    const Projection b = simulate_projection(slab_phantom(20.0), cfg8, mats);
    CHECK(a.pixels.data() == b.pixels.data());
    CHECK(a.tally.detector == b.tally.detector);
    CHECK(a.tally.escaped == b.tally.escaped);

    AcquisitionConfig cfg2 = cfg;
    cfg2.seed = 12;
    const Projection c = simulate_projection(slab_phantom(20.0), cfg2, mats);
    CHECK(a.pixels.data() != c.pixels.data());
}

TEST_CASE("energy bookkeeping balances exactly in full transport")
{
    const MaterialTable mats = MaterialTable::load(default_data_dir());
    AcquisitionConfig cfg = base_config(100000, ScatterMode::FullTransport);
    cfg.spectrum = build_spectrum(28, 50, default_data_dir());
    cfg.grid.enabled = true;
    const Projection p = simulate_projection(slab_phantom(30.0), cfg, mats);
    CHECK(p.tally.emitted > 0);
    CHECK(std::abs(p.tally.emitted - p.tally.accounted()) / p.tally.emitted < 1e-9);
    CHECK(p.tally.phantom_total() > 0);
    CHECK(p.tally.detector > 0);
    CHECK(p.tally.escaped > 0);
}

TEST_CASE("pre-noise pixel variance scales like 1/histories")
{
    const MaterialTable mats = synthetic_materials(0.5);
    auto variance_at = [&](std::uint64_t hist) {
        AcquisitionConfig cfg = base_config(hist, ScatterMode::FullTransport);
        const Projection p = simulate_projection(slab_phantom(20.0), cfg, mats);
        const RegionStats s = region_stats(p.pixels, 40, 120, 184, 264);
        double var = 0;
        int n = 0;
        for (int y = 184; y < 264; ++y)
            for (int x = 40; x < 120; ++x) {
                var += (p.pixels(x, y) - s.mean) * (p.pixels(x, y) - s.mean);
                ++n;
            }
        return var / n;
    };
    const double v1 = variance_at(150000);
    const double v4 = variance_at(600000);
    CHECK(v1 / v4 == doctest::Approx(4.0).epsilon(0.35));
}

TEST_CASE("histories_for scales the class table linearly")
{
    const Config cfg = Config::defaults();
    CHECK(histories_for(100, DensityClass::Fatty, cfg) == 22200000000ull);
    CHECK(histories_for(20, DensityClass::Fatty, cfg) == 4440000000ull);
    for (DensityClass c : kAllClasses)
        CHECK(histories_for(40, c, cfg) == 2 * histories_for(20, c, cfg));
    CHECK_THROWS_AS(histories_for(50, DensityClass::Fatty, cfg), ConfigError);

    Config broken = cfg;
    broken.for_class(DensityClass::Dense).histories_100 = 0;
    CHECK_THROWS_AS(histories_for(100, DensityClass::Dense, broken), ConfigError);
}

TEST_CASE("focal blur, grid transmission, electronic noise primitives")
{
    CounterRng rng(1, 0);
    const Vec3 o { 1, 2, 3 };
    const Vec3 same = apply_focal_blur(o, 0, rng);
    CHECK(same.x == o.x);
    CHECK(same.y == o.y);
    CHECK(same.z == o.z);
    const Vec3 blurred = apply_focal_blur(o, 300, rng);
    CHECK(blurred.x != o.x);
    CHECK(std::abs(blurred.x - o.x) < 2.0); // ~12 sigma

    GridSpec g;
    g.enabled = false;
    CHECK(grid_transmission(g, false, 0.5) == 1.0);
    g.enabled = true;
    CHECK(grid_transmission(g, true, 0.5) == doctest::Approx(0.72));
    CHECK(grid_transmission(g, false, 0.0) == doctest::Approx(0.72));
    CHECK(grid_transmission(g, false, 1.0) == 0.0); // far off focus
    CHECK(grid_transmission(g, false, 0.1) == doctest::Approx(0.72 * 0.5));
    g.ratio = -1;
    CHECK_THROWS_AS(grid_transmission(g, false, 0.1), ConfigError);

    Image2<double> img(8, 8, 1.0);
    add_electronic_noise(img, 0.0, 7);
    for (double v : img.data())
        CHECK(v == 1.0);
    Image2<double> img2(8, 8, 1.0);
    add_electronic_noise(img2, 0.5, 7);
    bool changed = false;
    for (double v : img2.data())
        changed = changed || v != 1.0;
    CHECK(changed);
    Image2<double> img3(8, 8, 1.0);
    add_electronic_noise(img3, 0.5, 7);
    CHECK(img2.data() == img3.data());
    CHECK_THROWS_AS(add_electronic_noise(img, -1.0, 7), ConfigError);
}

TEST_CASE("scatter contribution never increases when the grid is enabled")
{
    const MaterialTable mats = MaterialTable::load(default_data_dir());
    AcquisitionConfig cfg = base_config(150000, ScatterMode::FullTransport);
    cfg.spectrum = build_spectrum(28, 50, default_data_dir());
    const Projection no_grid = simulate_projection(slab_phantom(40.0), cfg, mats);
    cfg.grid.enabled = true;
    const Projection with_grid = simulate_projection(slab_phantom(40.0), cfg, mats);

    auto scatter_sum = [](const Projection& p) {
        double s = 0;
        for (std::size_t i = 0; i < p.pixels.size(); ++i)
            s += p.pixels[i] - p.primary_pixels[i];
        return s;
    };
    CHECK(scatter_sum(with_grid) < scatter_sum(no_grid));
}

TEST_CASE("glandular dose: mode gate, zero without gland, linear in histories")
{
    const MaterialTable mats = MaterialTable::load(default_data_dir());
    AcquisitionConfig cfg = base_config(100000, ScatterMode::PrimaryOnly);
    cfg.spectrum = build_spectrum(28, 50, default_data_dir());
    CHECK_THROWS_AS(glandular_dose_estimate(slab_phantom(20.0), cfg, mats), UnsupportedModeError);

    cfg.scatter_mode = ScatterMode::FullTransport;
    CHECK(glandular_dose_estimate(slab_phantom(20.0), cfg, mats) == 0.0); // all-fat slab

    // half-gland slab: dose doubles with histories within MC noise
    VoxelPhantom ph = slab_phantom(20.0);
    for (std::size_t i = 0; i < ph.labels.size() / 2; ++i)
        if (ph.labels[i] == static_cast<std::uint8_t>(Material::Fat))
            ph.labels[i] = static_cast<std::uint8_t>(Material::Gland);
    const double d1 = glandular_dose_estimate(ph, cfg, mats);
    cfg.histories *= 2;
    const double d2 = glandular_dose_estimate(ph, cfg, mats);
    CHECK(d1 > 0);
    CHECK(d2 / d1 == doctest::Approx(2.0).epsilon(0.05));
}

TEST_CASE("per-gland-mass dose is finite and positive for dense and fatty phantoms")
{
    Config cfg = Config::defaults();
    cfg.pitch_mm = 1.6; // coarse grid keeps this test quick
    const MaterialTable mats = MaterialTable::load(cfg.data_dir);
    for (DensityClass c : { DensityClass::Dense, DensityClass::Fatty }) {
        const VoxelPhantom ph = generate_phantom(PhantomParams::defaults_for(c, cfg, 2), cfg);
        AcquisitionConfig acq = base_config(100000, ScatterMode::FullTransport);
        acq.spectrum = build_spectrum(cfg.for_class(c).kvp, 50, cfg.data_dir);
        const Projection p = simulate_projection(ph, acq, mats);
        CHECK(std::isfinite(p.mean_glandular_dose_estimate));
        CHECK(p.mean_glandular_dose_estimate > 0);
    }
}

TEST_CASE("generated projection round-trips through mhd/raw")
{
    const MaterialTable mats = synthetic_materials(0.5);
    AcquisitionConfig cfg = base_config(50000, ScatterMode::FullTransport);
    cfg.electronic_noise_sigma = 0.3;
    const Projection p = simulate_projection(slab_phantom(20.0), cfg, mats);
    const auto path = std::filesystem::temp_directory_path() / "xproj_roundtrip.mhd";
    write_mhd_raw(Volume::from(p.pixels, cfg.det_pitch_mm, ElementType::F64), path);
    const auto back = read_mhd_raw(path).as<double>();
    REQUIRE(back.size() == p.pixels.size());
    for (std::size_t i = 0; i < back.size(); ++i)
        CHECK(back[i] == p.pixels[i]);
    std::filesystem::remove(path);
    std::filesystem::remove(std::filesystem::temp_directory_path() / "xproj_roundtrip.raw");
}

TEST_CASE("detector fluorescence flag keeps the energy books balanced")
{
    const MaterialTable mats = MaterialTable::load(default_data_dir());
    AcquisitionConfig cfg = base_config(100000, ScatterMode::FullTransport);
    cfg.spectrum = build_spectrum(28, 50, default_data_dir());
    cfg.fluorescence = true;
    const Projection p = simulate_projection(slab_phantom(20.0), cfg, mats);
    CHECK(std::abs(p.tally.emitted - p.tally.accounted()) / p.tally.emitted < 1e-9);
    CHECK(p.tally.detector > 0);
}

TEST_CASE("degenerate geometry raises when nothing reaches the detector")
{
    const MaterialTable mats = synthetic_materials(400.0); // opaque slab
    AcquisitionConfig cfg = base_config(20000, ScatterMode::PrimaryOnly);
    CHECK_THROWS_AS(simulate_projection(slab_phantom(50.0), cfg, mats), GeometryError);
}

TEST_CASE("config validation enforces the documented floor")
{
    AcquisitionConfig cfg = base_config(5000, ScatterMode::PrimaryOnly);
    CHECK_THROWS_AS(cfg.validate(), ConfigError); // histories < 1e4
    cfg.histories = 10000;
    CHECK_NOTHROW(cfg.validate());
    cfg.electronic_noise_sigma = -1;
    CHECK_THROWS_AS(cfg.validate(), ConfigError);
}
