#pragma once

#include "mammo/phantom.hpp"

namespace mammo {

// Craniocaudal compression to a target thickness. The deformation is an
// analytic volume-conserving map: uniform scale along z with a quadratic
// in-plane bulge, labels resampled nearest-neighbor, skin re-closed.
struct CompressionSpec {
    double target_thickness_cm = 6.0;
    int axis = 2; // craniocaudal; only z is supported

    void validate() const
    {
        if (axis != 2)
            throw ConfigError("compression is defined along the craniocaudal (z) axis");
        if (!(target_thickness_cm > 0))
            throw ConfigError("compression target thickness must be positive");
    }
};

VoxelPhantom compress(const VoxelPhantom& phantom, const CompressionSpec& spec, const Config& cfg = Config::defaults());

} // namespace mammo
