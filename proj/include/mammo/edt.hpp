#pragma once

#include "mammo/core.hpp"

#include <limits>
#include <vector>

namespace mammo {

// Exact squared Euclidean distance transform (Felzenszwalb & Huttenlocher),
// separable lower-envelope passes over the three axes. `feature` marks the
// voxels distance is measured to; the result is squared distance in voxel
// units (multiply by pitch² for mm²).
std::vector<float> squared_edt(const IVec3& dims, const std::vector<std::uint8_t>& feature);

namespace detail {

    // 1D squared distance transform of a sampled function f.
    inline void edt_1d(const float* f, float* d, int n, int* v, float* z)
    {
        int k = 0;
        v[0] = 0;
        z[0] = -std::numeric_limits<float>::infinity();
        z[1] = std::numeric_limits<float>::infinity();
        for (int q = 1; q < n; ++q) {
            float s = ((f[q] + static_cast<float>(q) * q) - (f[v[k]] + static_cast<float>(v[k]) * v[k])) / (2.0f * (q - v[k]));
            while (s <= z[k]) {
                --k;
                s = ((f[q] + static_cast<float>(q) * q) - (f[v[k]] + static_cast<float>(v[k]) * v[k])) / (2.0f * (q - v[k]));
            }
            ++k;
            v[k] = q;
            z[k] = s;
            z[k + 1] = std::numeric_limits<float>::infinity();
        }
        k = 0;
        for (int q = 0; q < n; ++q) {
            while (z[k + 1] < static_cast<float>(q))
                ++k;
            const float dq = static_cast<float>(q - v[k]);
            d[q] = dq * dq + f[v[k]];
        }
    }

} // namespace detail

} // namespace mammo
