#pragma once

#include "mammo/phantom.hpp"
#include "mammo/rng.hpp"

#include <cstdint>
#include <utility>
#include <vector>

namespace mammo {

// Voxelized spiculated mass: noisy spherical core plus tapered spicules,
// single 6-connected component.
struct MassModel {
    double nominal_radius_mm = 0;
    double density_factor = 1.0;
    double pitch_mm = 0;
    std::uint64_t seed = 0;

    IVec3 dims {}; // cubic mask grid
    IVec3 center {}; // voxel the core is centered on
    std::vector<std::uint8_t> mask;

    std::size_t voxel_count = 0;
    double max_reach_mm = 0; // farthest mask voxel center from the mass center
    double volume_mm3() const { return static_cast<double>(voxel_count) * pitch_mm * pitch_mm * pitch_mm; }

    bool at(int ix, int iy, int iz) const
    {
        return mask[static_cast<std::size_t>(ix) + static_cast<std::size_t>(dims.x) * (static_cast<std::size_t>(iy) + static_cast<std::size_t>(dims.y) * iz)] != 0;
    }
};

MassModel generate_mass(double radius_mm, double pitch_mm, std::uint64_t seed,
    double density_factor = 1.0, const Config& cfg = Config::defaults());

// Worst-case reach of any mass of this radius; sites need this plus a guard
// of clearance for insertion to be guaranteed.
double mass_reach_bound_mm(double radius_mm, const Config& cfg = Config::defaults());

// Relabels mask voxels to Mass. Throws DoesNotFitError if any mask voxel
// would land on air or skin (or outside the grid); the input is untouched.
std::pair<VoxelPhantom, LesionRecord> insert_mass(const VoxelPhantom& phantom, const MassModel& mass, const IVec3& site);

// The pipeline insertion policy: a site is drawn uniformly from the
// candidates with clearance >= worst-case reach + the configured guard, so a
// mass never breaches skin; throws DoesNotFitError when the class geometry
// leaves no such site.
std::pair<VoxelPhantom, LesionRecord> place_mass(const VoxelPhantom& phantom, const MassModel& mass,
    CounterRng& rng, const Config& cfg = Config::defaults());

} // namespace mammo
