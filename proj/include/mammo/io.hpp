#pragma once

#include "mammo/config.hpp"
#include "mammo/core.hpp"
#include "mammo/phantom.hpp"

#include <cstring>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace mammo {

// ---------------------------------------------------------------------------
// MetaImage (.mhd text header + little-endian .raw payload)
// ---------------------------------------------------------------------------

enum class ElementType {
    U8,
    U16,
    F32,
    F64,
};

const char* element_type_name(ElementType t); // MET_UCHAR etc.
std::size_t element_size(ElementType t);

struct Volume {
    int ndims = 3;
    IVec3 dims { 1, 1, 1 }; // z ignored when ndims == 2
    Vec3 spacing { 1, 1, 1 };
    ElementType type = ElementType::F32;
    std::vector<unsigned char> bytes;

    std::size_t element_count() const
    {
        return static_cast<std::size_t>(dims.x) * dims.y * (ndims == 3 ? dims.z : 1);
    }

    template <typename T>
    std::vector<T> as() const
    {
        if (bytes.size() != element_count() * sizeof(T))
            throw IoError("volume payload does not match requested element type");
        std::vector<T> out(element_count());
        std::memcpy(out.data(), bytes.data(), bytes.size());
        return out;
    }

    template <typename T>
    static Volume from(const Image2<T>& img, double pitch_mm, ElementType t)
    {
        Volume v;
        v.ndims = 2;
        v.dims = { img.nx(), img.ny(), 1 };
        v.spacing = { pitch_mm, pitch_mm, 1 };
        v.type = t;
        v.bytes.resize(img.size() * sizeof(T));
        std::memcpy(v.bytes.data(), img.data().data(), v.bytes.size());
        return v;
    }
};

Volume volume_from_phantom(const VoxelPhantom& phantom);

// writes <stem>.mhd plus <stem>.raw next to it
void write_mhd_raw(const Volume& v, const std::filesystem::path& mhd_path);
Volume read_mhd_raw(const std::filesystem::path& mhd_path);

// ---------------------------------------------------------------------------
// .loc lesion records: one line, space-separated world (and optionally image)
// coordinates; round-trips exactly
// ---------------------------------------------------------------------------

struct LocData {
    LesionRecord record;
    std::optional<std::array<double, 2>> image_px;
};

void write_loc(const LesionRecord& record, const std::optional<std::array<double, 2>>& image_px,
    const std::filesystem::path& path);
LocData read_loc(const std::filesystem::path& path);

// ---------------------------------------------------------------------------
// Dataset directory layout
// ---------------------------------------------------------------------------

struct GridPoint {
    DensityClass cls = DensityClass::Fatty;
    double mass_radius_mm = 5.0;
    double mass_density = 1.0;
    int dose_percent = 100;

    bool operator==(const GridPoint& o) const
    {
        return cls == o.cls && mass_radius_mm == o.mass_radius_mm && mass_density == o.mass_density && dose_percent == o.dose_percent;
    }
};

// case directory relative to the dataset root; odd file ids carry lesions
std::string layout_case_dir(const GridPoint& gp, int file_id, const Config& cfg);
std::pair<GridPoint, int> parse_layout_case_dir(const std::string& rel_dir, const Config& cfg);
inline bool layout_id_has_lesion(int file_id) { return file_id % 2 == 1; }

std::string format_mass_density(double d); // 1.0 / 1.06 / 1.1
std::string format_mass_radius(double r); // 5.0 / 7.0 / 9.0

// ---------------------------------------------------------------------------
// Score matrix CSV
// ---------------------------------------------------------------------------

struct ScoreRow {
    int reader_id = 0;
    std::uint64_t case_id = 0;
    int label = 0;
    std::string breast_density;
    double mass_size = 0;
    double mass_density = 0;
    int dose_percent = 100;
    double score = 0;
};

void write_scores_csv(const std::vector<ScoreRow>& rows, const std::filesystem::path& path);
std::vector<ScoreRow> read_scores_csv(const std::filesystem::path& path);

// ---------------------------------------------------------------------------
// Content hashing (FNV-1a), for run manifests
// ---------------------------------------------------------------------------

std::uint64_t fnv1a(const void* data, std::size_t n, std::uint64_t h = 1469598103934665603ull);
std::uint64_t fnv1a(const std::string& s, std::uint64_t h = 1469598103934665603ull);
std::uint64_t hash_file(const std::filesystem::path& path);

} // namespace mammo
