#pragma once

#include "mammo/config.hpp"
#include "mammo/core.hpp"

#include <cstdint>
#include <optional>
#include <vector>

namespace mammo {

// Where a mass ended up inside a phantom: voxel center, tight bounding box,
// and the parameters needed to reproduce or project it.
struct LesionRecord {
    IVec3 center {};
    double nominal_radius_mm = 0;
    double density_factor = 1.0;
    IVec3 bbox_lo {}, bbox_hi {}; // inclusive
    std::uint64_t mass_seed = 0;
};

struct PhantomParams {
    DensityClass density_class = DensityClass::Fatty;
    double target_glandular_fraction = 0.07;
    std::array<double, 3> extent_mm {}; // uncompressed (depth, lateral, craniocaudal)
    double pitch_mm = 0.85;
    std::uint64_t seed = 0;

    // class-default row from the config table
    static PhantomParams defaults_for(DensityClass c, const Config& cfg, std::uint64_t seed);

    void validate() const;
};

// Voxelized breast: material labels on a regular grid. Chest wall is the
// x=0 face; z is the craniocaudal (compression) axis; tissue rests one air
// voxel above the z=0 face so the grid boundary stays air.
struct VoxelPhantom {
    IVec3 dims {};
    double pitch_mm = 0;
    std::vector<std::uint8_t> labels; // Material values, x fastest
    DensityClass density_class = DensityClass::Fatty;
    std::uint64_t seed = 0;
    std::optional<LesionRecord> lesion;
    double glandular_fraction_achieved = 0;
    bool compression_warning = false; // set when compress() was a no-op

    std::size_t index(int ix, int iy, int iz) const
    {
        return static_cast<std::size_t>(ix) + static_cast<std::size_t>(dims.x) * (static_cast<std::size_t>(iy) + static_cast<std::size_t>(dims.y) * iz);
    }
    Material at(int ix, int iy, int iz) const { return static_cast<Material>(labels[index(ix, iy, iz)]); }
    bool in_bounds(int ix, int iy, int iz) const
    {
        return ix >= 0 && iy >= 0 && iz >= 0 && ix < dims.x && iy < dims.y && iz < dims.z;
    }
    std::size_t voxel_count() const { return labels.size(); }

    // voxel center in phantom-local mm (grid corner at the origin)
    Vec3 voxel_center_mm(const IVec3& v) const
    {
        return { (v.x + 0.5) * pitch_mm, (v.y + 0.5) * pitch_mm, (v.z + 0.5) * pitch_mm };
    }

    // z-extent of non-air voxels, mm; 0 when empty
    double tissue_thickness_mm() const;
    std::size_t tissue_voxels() const; // fat + gland + mass
};

VoxelPhantom generate_phantom(const PhantomParams& params, const Config& cfg = Config::defaults());

struct CohortSpec {
    int size = 2;
    double signal_present_fraction = 0.5;
    std::uint64_t base_seed = 0;
    PhantomParams base {}; // per-case params are jittered around this row
    double extent_jitter_mm = 1.0;
    double fraction_jitter = 0.01;

    void validate() const;
};

struct CohortCaseSpec {
    int index = 0;
    std::uint64_t case_seed = 0;
    bool signal_present = false;
    PhantomParams params {};
};

// Deterministic per-case parameter draws; phantom generation itself is the
// expensive part, so the plan is separate from materialization.
std::vector<CohortCaseSpec> plan_cohort(const CohortSpec& spec);

struct CohortCase {
    VoxelPhantom phantom;
    bool signal_present = false;
    std::uint64_t case_seed = 0;
    int index = 0;
};

std::vector<CohortCase> sample_cohort(const CohortSpec& spec, const Config& cfg = Config::defaults());

// Deep glandular voxels: centers at least min_margin_mm from any air or
// skin voxel, lexicographic (x,y,z) order. Empty result is valid.
std::vector<IVec3> candidate_sites(const VoxelPhantom& phantom, double min_margin_mm);

// |gland| / |gland + fat|, mass voxels excluded
double glandular_fraction(const VoxelPhantom& phantom);

} // namespace mammo
