#include "mammo/edt.hpp"

namespace mammo {

std::vector<float> squared_edt(const IVec3& dims, const std::vector<std::uint8_t>& feature)
{
    const int nx = dims.x, ny = dims.y, nz = dims.z;
    const std::size_t n = static_cast<std::size_t>(nx) * ny * nz;
    if (feature.size() != n)
        throw InternalError("squared_edt: size mismatch");

    constexpr float kInf = 1e20f;
    std::vector<float> dist(n);
    for (std::size_t i = 0; i < n; ++i)
        dist[i] = feature[i] ? 0.0f : kInf;

    const int nmax = std::max(nx, std::max(ny, nz));
    std::vector<float> f(nmax), d(nmax), z(nmax + 1);
    std::vector<int> v(nmax);

    auto idx = [&](int x, int y, int zz) {
        return static_cast<std::size_t>(x) + static_cast<std::size_t>(nx) * (static_cast<std::size_t>(y) + static_cast<std::size_t>(ny) * zz);
    };

    // x pass
    for (int zz = 0; zz < nz; ++zz)
        for (int y = 0; y < ny; ++y) {
            for (int x = 0; x < nx; ++x)
                f[x] = dist[idx(x, y, zz)];
            detail::edt_1d(f.data(), d.data(), nx, v.data(), z.data());
            for (int x = 0; x < nx; ++x)
                dist[idx(x, y, zz)] = d[x];
        }
    // y pass
    for (int zz = 0; zz < nz; ++zz)
        for (int x = 0; x < nx; ++x) {
            for (int y = 0; y < ny; ++y)
                f[y] = dist[idx(x, y, zz)];
            detail::edt_1d(f.data(), d.data(), ny, v.data(), z.data());
            for (int y = 0; y < ny; ++y)
                dist[idx(x, y, zz)] = d[y];
        }
    // z pass
    for (int y = 0; y < ny; ++y)
        for (int x = 0; x < nx; ++x) {
            for (int zz = 0; zz < nz; ++zz)
                f[zz] = dist[idx(x, y, zz)];
            detail::edt_1d(f.data(), d.data(), nz, v.data(), z.data());
            for (int zz = 0; zz < nz; ++zz)
                dist[idx(x, y, zz)] = d[zz];
        }
    return dist;
}

} // namespace mammo
