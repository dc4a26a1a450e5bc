#include "mammo/lesion.hpp"

#include "mammo/rng.hpp"

#include <algorithm>
#include <cmath>
#include <deque>

namespace mammo {

namespace {

    struct Spicule {
        Vec3 dir; // unit
        double length; // from mass center, mm
        double base_halfwidth; // at the center, mm; tapers to 0 at the tip
    };

    // smooth radial modulation of the core: value noise sampled on the
    // direction sphere, fixed lattice scale
    double sphere_noise(std::uint64_t seed, const Vec3& dir)
    {
        const double cell = 0.45;
        const double gx = dir.x / cell + 64.0, gy = dir.y / cell + 64.0, gz = dir.z / cell + 64.0;
        const int ix = static_cast<int>(std::floor(gx));
        const int iy = static_cast<int>(std::floor(gy));
        const int iz = static_cast<int>(std::floor(gz));
        auto corner = [&](int dx, int dy, int dz) {
            std::uint64_t h = seed;
            h = CounterRng::mix64(h ^ static_cast<std::uint64_t>(static_cast<std::uint32_t>(ix + dx)));
            h = CounterRng::mix64(h ^ static_cast<std::uint64_t>(static_cast<std::uint32_t>(iy + dy)));
            h = CounterRng::mix64(h ^ static_cast<std::uint64_t>(static_cast<std::uint32_t>(iz + dz)));
            return static_cast<double>(h >> 11) * 0x1.0p-52 - 1.0;
        };
        auto fade = [](double t) { return t * t * t * (t * (t * 6 - 15) + 10); };
        const double fx = fade(gx - ix), fy = fade(gy - iy), fz = fade(gz - iz);
        double c[8];
        for (int k = 0; k < 8; ++k)
            c[k] = corner(k & 1, (k >> 1) & 1, (k >> 2) & 1);
        const double x00 = c[0] + fx * (c[1] - c[0]);
        const double x10 = c[2] + fx * (c[3] - c[2]);
        const double x01 = c[4] + fx * (c[5] - c[4]);
        const double x11 = c[6] + fx * (c[7] - c[6]);
        const double y0 = x00 + fy * (x10 - x00);
        const double y1 = x01 + fy * (x11 - x01);
        return y0 + fz * (y1 - y0);
    }

    Vec3 uniform_sphere_dir(CounterRng& rng)
    {
        // Marsaglia rejection
        for (;;) {
            const double a = rng.uniform(-1.0, 1.0);
            const double b = rng.uniform(-1.0, 1.0);
            const double s = a * a + b * b;
            if (s >= 1.0 || s == 0.0)
                continue;
            const double t = 2.0 * std::sqrt(1.0 - s);
            return { a * t, b * t, 1.0 - 2.0 * s };
        }
    }

    // keep only the 6-connected component containing `start`
    void keep_main_component(const IVec3& dims, std::vector<std::uint8_t>& mask, const IVec3& start)
    {
        auto idx = [&](int x, int y, int z) {
            return static_cast<std::size_t>(x) + static_cast<std::size_t>(dims.x) * (static_cast<std::size_t>(y) + static_cast<std::size_t>(dims.y) * z);
        };
        if (!mask[idx(start.x, start.y, start.z)])
            throw InternalError("mass center voxel not inside its own mask");
        std::vector<std::uint8_t> kept(mask.size(), 0);
        std::deque<IVec3> queue { start };
        kept[idx(start.x, start.y, start.z)] = 1;
        static const int off[6][3] = { { 1, 0, 0 }, { -1, 0, 0 }, { 0, 1, 0 }, { 0, -1, 0 }, { 0, 0, 1 }, { 0, 0, -1 } };
        while (!queue.empty()) {
            const IVec3 v = queue.front();
            queue.pop_front();
            for (const auto& o : off) {
                const int x = v.x + o[0], y = v.y + o[1], z = v.z + o[2];
                if (x < 0 || y < 0 || z < 0 || x >= dims.x || y >= dims.y || z >= dims.z)
                    continue;
                const std::size_t i = idx(x, y, z);
                if (mask[i] && !kept[i]) {
                    kept[i] = 1;
                    queue.push_back({ x, y, z });
                }
            }
        }
        mask.swap(kept);
    }

} // namespace

double mass_reach_bound_mm(double radius_mm, const Config& cfg)
{
    const double core = radius_mm * (1.0 + cfg.core_noise_amp);
    const double spic = radius_mm * cfg.spicule_len_max;
    return std::max(core, spic);
}

MassModel generate_mass(double radius_mm, double pitch_mm, std::uint64_t seed, double density_factor, const Config& cfg)
{
    if (!(pitch_mm > 0))
        throw ConfigError("mass pitch must be positive");
    if (radius_mm < 2.0 * pitch_mm)
        throw ResolutionError("mass radius " + std::to_string(radius_mm) + " mm under-resolved at pitch " + std::to_string(pitch_mm) + " mm");

    const double reach = mass_reach_bound_mm(radius_mm, cfg);
    const int r_vox = static_cast<int>(std::ceil(reach / pitch_mm)) + 1;
    const int side = 2 * r_vox + 1;

    MassModel m;
    m.nominal_radius_mm = radius_mm;
    m.density_factor = density_factor;
    m.pitch_mm = pitch_mm;
    m.seed = seed;
    m.dims = { side, side, side };
    m.center = { r_vox, r_vox, r_vox };
    m.mask.assign(static_cast<std::size_t>(side) * side * side, 0);

    CounterRng rng(seed, 0x51C);
    const int n_spic = cfg.spicule_count_min + static_cast<int>(rng.uniform_int(static_cast<std::uint64_t>(cfg.spicule_count_max - cfg.spicule_count_min + 1)));
    std::vector<Spicule> spicules;
    spicules.reserve(n_spic);
    for (int s = 0; s < n_spic; ++s) {
        Spicule sp;
        sp.dir = uniform_sphere_dir(rng);
        sp.length = radius_mm * rng.uniform(cfg.spicule_len_min, cfg.spicule_len_max);
        sp.base_halfwidth = radius_mm * rng.uniform(cfg.spicule_width_min, cfg.spicule_width_max);
        spicules.push_back(sp);
    }

    for (int iz = 0; iz < side; ++iz)
        for (int iy = 0; iy < side; ++iy)
            for (int ix = 0; ix < side; ++ix) {
                const Vec3 pos { (ix - r_vox) * pitch_mm, (iy - r_vox) * pitch_mm, (iz - r_vox) * pitch_mm };
                const double d = pos.norm();
                bool in = false;
                if (d < 1e-9) {
                    in = true;
                } else {
                    const Vec3 dir = pos * (1.0 / d);
                    const double rcore = radius_mm * (1.0 + cfg.core_noise_amp * sphere_noise(seed, dir));
                    in = d <= rcore;
                    for (std::size_t s = 0; !in && s < spicules.size(); ++s) {
                        const double t = pos.dot(spicules[s].dir);
                        if (t < 0 || t > spicules[s].length)
                            continue;
                        const Vec3 rad = pos - spicules[s].dir * t;
                        const double hw = spicules[s].base_halfwidth * (1.0 - t / spicules[s].length);
                        in = rad.norm() <= hw;
                    }
                }
                if (in)
                    m.mask[static_cast<std::size_t>(ix) + static_cast<std::size_t>(side) * (static_cast<std::size_t>(iy) + static_cast<std::size_t>(side) * iz)] = 1;
            }

    // spicule tips can voxelize into detached fragments; keep the core component
    keep_main_component(m.dims, m.mask, m.center);

    double reach2 = 0;
    for (int iz = 0; iz < side; ++iz)
        for (int iy = 0; iy < side; ++iy)
            for (int ix = 0; ix < side; ++ix)
                if (m.at(ix, iy, iz)) {
                    ++m.voxel_count;
                    const double dx = (ix - r_vox) * pitch_mm, dy = (iy - r_vox) * pitch_mm, dz = (iz - r_vox) * pitch_mm;
                    reach2 = std::max(reach2, dx * dx + dy * dy + dz * dz);
                }
    m.max_reach_mm = std::sqrt(reach2);
    return m;
}

std::pair<VoxelPhantom, LesionRecord> place_mass(const VoxelPhantom& phantom, const MassModel& mass,
    CounterRng& rng, const Config& cfg)
{
    const double margin = mass_reach_bound_mm(mass.nominal_radius_mm, cfg) + cfg.site_guard_mm;
    const auto sites = candidate_sites(phantom, margin);
    if (sites.empty())
        throw DoesNotFitError(std::to_string(mass.nominal_radius_mm) + " mm mass does not fit: no candidate site with "
            + std::to_string(margin) + " mm clearance in this " + class_name(phantom.density_class) + " phantom");
    return insert_mass(phantom, mass, sites[rng.uniform_int(sites.size())]);
}

std::pair<VoxelPhantom, LesionRecord> insert_mass(const VoxelPhantom& phantom, const MassModel& mass, const IVec3& site)
{
    if (std::abs(mass.pitch_mm - phantom.pitch_mm) > 1e-9)
        throw ConfigError("mass and phantom voxel pitch differ");

    // first verify the full footprint, leaving the input untouched on failure
    for (int iz = 0; iz < mass.dims.z; ++iz)
        for (int iy = 0; iy < mass.dims.y; ++iy)
            for (int ix = 0; ix < mass.dims.x; ++ix) {
                if (!mass.at(ix, iy, iz))
                    continue;
                const int px = site.x + ix - mass.center.x;
                const int py = site.y + iy - mass.center.y;
                const int pz = site.z + iz - mass.center.z;
                if (!phantom.in_bounds(px, py, pz))
                    throw DoesNotFitError("mass extends outside the phantom grid");
                const Material m = phantom.at(px, py, pz);
                if (m == Material::Air || m == Material::Skin)
                    throw DoesNotFitError("mass would overwrite " + std::string(material_name(m)) + " at voxel ("
                        + std::to_string(px) + "," + std::to_string(py) + "," + std::to_string(pz) + ")");
            }

    VoxelPhantom out = phantom;
    LesionRecord rec;
    rec.center = site;
    rec.nominal_radius_mm = mass.nominal_radius_mm;
    rec.density_factor = mass.density_factor;
    rec.mass_seed = mass.seed;
    rec.bbox_lo = { out.dims.x, out.dims.y, out.dims.z };
    rec.bbox_hi = { -1, -1, -1 };
    for (int iz = 0; iz < mass.dims.z; ++iz)
        for (int iy = 0; iy < mass.dims.y; ++iy)
            for (int ix = 0; ix < mass.dims.x; ++ix) {
                if (!mass.at(ix, iy, iz))
                    continue;
                const int px = site.x + ix - mass.center.x;
                const int py = site.y + iy - mass.center.y;
                const int pz = site.z + iz - mass.center.z;
                out.labels[out.index(px, py, pz)] = static_cast<std::uint8_t>(Material::Mass);
                rec.bbox_lo.x = std::min(rec.bbox_lo.x, px);
                rec.bbox_lo.y = std::min(rec.bbox_lo.y, py);
                rec.bbox_lo.z = std::min(rec.bbox_lo.z, pz);
                rec.bbox_hi.x = std::max(rec.bbox_hi.x, px);
                rec.bbox_hi.y = std::max(rec.bbox_hi.y, py);
                rec.bbox_hi.z = std::max(rec.bbox_hi.z, pz);
            }
    out.lesion = rec;
    return { std::move(out), rec };
}

} // namespace mammo
