#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "mammo/io.hpp"
#include "mammo/rng.hpp"

#include <filesystem>
#include <fstream>

using namespace mammo;
namespace fs = std::filesystem;

namespace {

struct TempDir {
    fs::path path;
    TempDir()
        : path(fs::temp_directory_path() / ("mammo_io_test_" + std::to_string(CounterRng(::getpid(), 0).next_u64() % 1000000)))
    {
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
};

} // namespace

TEST_CASE("mhd round trip is bit exact for a small double image")
{
    TempDir tmp;
    Image2<double> img(3, 3);
    for (int i = 0; i < 9; ++i)
        img[i] = 0.1 * i - 0.33;
    const Volume v = Volume::from(img, 0.25, ElementType::F64);
    write_mhd_raw(v, tmp.path / "img.mhd");
    const Volume r = read_mhd_raw(tmp.path / "img.mhd");
    CHECK(r.ndims == 2);
    CHECK(r.dims.x == 3);
    CHECK(r.type == ElementType::F64);
    CHECK(r.spacing.x == doctest::Approx(0.25));
    CHECK(r.bytes == v.bytes);
    const auto back = r.as<double>();
    for (int i = 0; i < 9; ++i)
        CHECK(back[i] == img[i]);
}

TEST_CASE("mhd round trip across element types with random payloads")
{
    TempDir tmp;
    CounterRng rng(99, 0);
    for (int trial = 0; trial < 8; ++trial) {
        Volume v;
        v.ndims = 3;
        v.dims = { 2 + static_cast<int>(rng.uniform_int(6)), 2 + static_cast<int>(rng.uniform_int(6)), 2 + static_cast<int>(rng.uniform_int(4)) };
        v.spacing = { 0.5, 0.5, 0.5 };
        v.type = static_cast<ElementType>(rng.uniform_int(4));
        v.bytes.resize(v.element_count() * element_size(v.type));
        for (auto& b : v.bytes)
            b = static_cast<unsigned char>(rng.uniform_int(256));
        const fs::path p = tmp.path / ("t" + std::to_string(trial) + ".mhd");
        write_mhd_raw(v, p);
        const Volume r = read_mhd_raw(p);
        CHECK(r.bytes == v.bytes);
        CHECK(r.dims == v.dims);
        CHECK(r.type == v.type);
    }
}

TEST_CASE("mhd header/payload mismatch and unsupported types are errors")
{
    TempDir tmp;
    Image2<float> img(4, 4, 1.0f);
    write_mhd_raw(Volume::from(img, 1.0, ElementType::F32), tmp.path / "x.mhd");

    // truncate the payload
    fs::resize_file(tmp.path / "x.raw", 10);
    CHECK_THROWS_AS(read_mhd_raw(tmp.path / "x.mhd"), IoError);

    std::ofstream bad(tmp.path / "bad.mhd");
    bad << "ObjectType = Image\nNDims = 2\nDimSize = 2 2\nElementType = MET_INT\nElementDataFile = bad.raw\n";
    bad.close();
    std::ofstream(tmp.path / "bad.raw").put(0);
    CHECK_THROWS_AS(read_mhd_raw(tmp.path / "bad.mhd"), IoError);

    CHECK_THROWS_AS(read_mhd_raw(tmp.path / "missing.mhd"), IoError);
}

TEST_CASE("loc round trip preserves every field")
{
    TempDir tmp;
    LesionRecord rec;
    rec.center = { 40, 40, 21 };
    rec.nominal_radius_mm = 7.0;
    rec.density_factor = 1.06;
    rec.bbox_lo = { 31, 30, 12 };
    rec.bbox_hi = { 50, 49, 30 };
    rec.mass_seed = 0xDEADBEEFCAFEull;

    write_loc(rec, std::nullopt, tmp.path / "a.loc");
    const LocData a = read_loc(tmp.path / "a.loc");
    CHECK(a.record.center == rec.center);
    CHECK(a.record.nominal_radius_mm == rec.nominal_radius_mm);
    CHECK(a.record.density_factor == rec.density_factor);
    CHECK(a.record.bbox_lo == rec.bbox_lo);
    CHECK(a.record.bbox_hi == rec.bbox_hi);
    CHECK(a.record.mass_seed == rec.mass_seed);
    CHECK(!a.image_px.has_value());

    write_loc(rec, std::array<double, 2> { 123.4375, 210.0625 }, tmp.path / "b.loc");
    const LocData b = read_loc(tmp.path / "b.loc");
    REQUIRE(b.image_px.has_value());
    CHECK((*b.image_px)[0] == 123.4375);
    CHECK((*b.image_px)[1] == 210.0625);

    std::ofstream(tmp.path / "bad.loc") << "1 2 nonsense\n";
    CHECK_THROWS_AS(read_loc(tmp.path / "bad.loc"), IoError);
}

TEST_CASE("layout path matches the documented template")
{
    const Config cfg = Config::defaults();
    const GridPoint gp { DensityClass::Hetero, 5.0, 1.0, 60 };
    const std::string dir = layout_case_dir(gp, 1, cfg);
    CHECK(dir.find("P2_5.0_hetero.8337609.1/1") != std::string::npos);
    CHECK(dir.find("device_data_VICTREPhantoms_spic_1.0/") != std::string::npos);
    // hetero at 60% dose = 1.02e10 histories
    CHECK(dir.find("/1.02e+10/") != std::string::npos);

    CHECK(layout_id_has_lesion(1));
    CHECK(!layout_id_has_lesion(2));
    CHECK(layout_id_has_lesion(149));

    const auto [back, id] = parse_layout_case_dir(dir, cfg);
    CHECK(back == gp);
    CHECK(id == 1);
}

TEST_CASE("layout parse is the inverse over a sample of the grid")
{
    const Config cfg = Config::defaults();
    for (DensityClass cls : kAllClasses)
        for (double r : { 5.0, 7.0, 9.0 })
            for (double d : { 1.0, 1.06, 1.1 })
                for (int dose : { 20, 100 })
                    for (int id : { 1, 2, 150 }) {
                        const GridPoint gp { cls, r, d, dose };
                        const auto [back, bid] = parse_layout_case_dir(layout_case_dir(gp, id, cfg), cfg);
                        CHECK(back == gp);
                        CHECK(bid == id);
                    }
    CHECK_THROWS_AS(parse_layout_case_dir("data/what/ever", Config::defaults()), IoError);
}

TEST_CASE("density and radius formatting")
{
    CHECK(format_mass_density(1.0) == "1.0");
    CHECK(format_mass_density(1.06) == "1.06");
    CHECK(format_mass_density(1.1) == "1.1");
    CHECK(format_mass_radius(5.0) == "5.0");
    CHECK(format_mass_radius(9.0) == "9.0");
}

TEST_CASE("score csv round trip")
{
    TempDir tmp;
    std::vector<ScoreRow> rows;
    rows.push_back({ 0, 1, 1, "fatty", 7.0, 1.06, 100, 0.875 });
    rows.push_back({ 1, 2, 0, "dense", 5.0, 1.0, 20, 0.25 });
    write_scores_csv(rows, tmp.path / "s.csv");
    const auto back = read_scores_csv(tmp.path / "s.csv");
    REQUIRE(back.size() == 2);
    CHECK(back[0].reader_id == 0);
    CHECK(back[0].case_id == 1);
    CHECK(back[0].label == 1);
    CHECK(back[0].breast_density == "fatty");
    CHECK(back[0].mass_size == 7.0);
    CHECK(back[0].mass_density == 1.06);
    CHECK(back[0].dose_percent == 100);
    CHECK(back[0].score == 0.875);
    CHECK(back[1].breast_density == "dense");
}

TEST_CASE("content hashing is stable and content sensitive")
{
    TempDir tmp;
    std::ofstream(tmp.path / "f1") << "hello";
    CHECK(hash_file(tmp.path / "f1") == hash_file(tmp.path / "f1"));
    std::ofstream(tmp.path / "f2") << "hellp";
    CHECK(hash_file(tmp.path / "f1") != hash_file(tmp.path / "f2"));
    CHECK(fnv1a("abc") != fnv1a("abd"));
}
