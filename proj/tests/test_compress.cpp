#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "mammo/compress.hpp"
#include "mammo/lesion.hpp"

using namespace mammo;

namespace {

bool shell_closed(const VoxelPhantom& ph)
{
    static const int off[6][3] = { { 1, 0, 0 }, { -1, 0, 0 }, { 0, 1, 0 }, { 0, -1, 0 }, { 0, 0, 1 }, { 0, 0, -1 } };
    for (int z = 0; z < ph.dims.z; ++z)
        for (int y = 0; y < ph.dims.y; ++y)
            for (int x = 0; x < ph.dims.x; ++x) {
                if (!is_tissue(ph.at(x, y, z)))
                    continue;
                for (const auto& o : off) {
                    const int xx = x + o[0], yy = y + o[1], zz = z + o[2];
                    if (!ph.in_bounds(xx, yy, zz) || ph.at(xx, yy, zz) == Material::Air)
                        return false;
                }
            }
    return true;
}

} // namespace

TEST_CASE("each class compresses to its configured thickness")
{
    const Config cfg = Config::defaults();
    for (DensityClass c : kAllClasses) {
        const VoxelPhantom ph = generate_phantom(PhantomParams::defaults_for(c, cfg, 2), cfg);
        CompressionSpec spec { cfg.for_class(c).compressed_thickness_mm / 10.0 };
        const VoxelPhantom out = compress(ph, spec, cfg);
        CHECK(!out.compression_warning);
        CHECK(std::abs(out.tissue_thickness_mm() - cfg.for_class(c).compressed_thickness_mm) <= cfg.pitch_mm + 1e-9);
    }
}

TEST_CASE("tissue volume conserved within 2% across classes and seeds")
{
    const Config cfg = Config::defaults();
    for (DensityClass c : kAllClasses)
        for (std::uint64_t seed = 1; seed <= 4; ++seed) {
            const VoxelPhantom ph = generate_phantom(PhantomParams::defaults_for(c, cfg, seed), cfg);
            CompressionSpec spec { cfg.for_class(c).compressed_thickness_mm / 10.0 };
            const VoxelPhantom out = compress(ph, spec, cfg);
            const double ratio = static_cast<double>(out.tissue_voxels()) / static_cast<double>(ph.tissue_voxels());
            CHECK(ratio >= 0.98);
            CHECK(ratio <= 1.02);
        }
}

TEST_CASE("lesion z-coordinate scales by target/original thickness")
{
    const Config cfg = Config::defaults();
    const VoxelPhantom ph = generate_phantom(PhantomParams::defaults_for(DensityClass::Fatty, cfg, 3), cfg);
    const MassModel mass = generate_mass(7.0, cfg.pitch_mm, 3, 1.06, cfg);
    CounterRng rng(3, 2);
    const auto [with_mass, rec] = place_mass(ph, mass, rng, cfg);

    const double t0 = with_mass.tissue_thickness_mm();
    CompressionSpec spec { cfg.for_class(DensityClass::Fatty).compressed_thickness_mm / 10.0 };
    const VoxelPhantom out = compress(with_mass, spec, cfg);
    REQUIRE(out.lesion.has_value());
    const double s = spec.target_thickness_cm * 10.0 / t0;

    // z measured from the support plane (one air voxel below the tissue)
    const double z_before = (rec.center.z + 0.5) * ph.pitch_mm - ph.pitch_mm;
    const double z_after = (out.lesion->center.z + 0.5) * out.pitch_mm - out.pitch_mm;
    CHECK(std::abs(z_after - z_before * s) <= 1.5 * out.pitch_mm);

    // mass voxels survive and the bbox covers them
    std::size_t mass_voxels = 0;
    for (std::uint8_t l : out.labels)
        mass_voxels += l == static_cast<std::uint8_t>(Material::Mass);
    CHECK(mass_voxels > 0);
    for (int z = 0; z < out.dims.z; ++z)
        for (int y = 0; y < out.dims.y; ++y)
            for (int x = 0; x < out.dims.x; ++x)
                if (out.at(x, y, z) == Material::Mass) {
                    CHECK(x >= out.lesion->bbox_lo.x);
                    CHECK(x <= out.lesion->bbox_hi.x);
                    CHECK(y >= out.lesion->bbox_lo.y);
                    CHECK(y <= out.lesion->bbox_hi.y);
                    CHECK(z >= out.lesion->bbox_lo.z);
                    CHECK(z <= out.lesion->bbox_hi.z);
                }
}

TEST_CASE("no-op when already at or below target, with warning flag")
{
    const Config cfg = Config::defaults();
    const VoxelPhantom ph = generate_phantom(PhantomParams::defaults_for(DensityClass::Dense, cfg, 1), cfg);
    CompressionSpec spec { cfg.for_class(DensityClass::Dense).compressed_thickness_mm / 10.0 };
    const VoxelPhantom once = compress(ph, spec, cfg);
    CHECK(!once.compression_warning);

    const VoxelPhantom twice = compress(once, spec, cfg);
    CHECK(twice.compression_warning);
    CHECK(twice.labels == once.labels);

    CompressionSpec big { 20.0 }; // 20 cm, far above any phantom
    const VoxelPhantom noop = compress(ph, big, cfg);
    CHECK(noop.compression_warning);
    CHECK(noop.labels == ph.labels);
}

TEST_CASE("skin shell stays closed after resampling")
{
    const Config cfg = Config::defaults();
    for (DensityClass c : { DensityClass::Dense, DensityClass::Fatty }) {
        const VoxelPhantom ph = generate_phantom(PhantomParams::defaults_for(c, cfg, 5), cfg);
        CompressionSpec spec { cfg.for_class(c).compressed_thickness_mm / 10.0 };
        CHECK(shell_closed(compress(ph, spec, cfg)));
    }
}

TEST_CASE("compression is deterministic")
{
    const Config cfg = Config::defaults();
    const VoxelPhantom ph = generate_phantom(PhantomParams::defaults_for(DensityClass::Hetero, cfg, 9), cfg);
    CompressionSpec spec { 4.5 };
    const VoxelPhantom a = compress(ph, spec, cfg);
    const VoxelPhantom b = compress(ph, spec, cfg);
    CHECK(a.labels == b.labels);
    CHECK(a.dims == b.dims);
}
