#include "mammo/compress.hpp"

#include <algorithm>
#include <cmath>

namespace mammo {

namespace {

    struct TissueSpan {
        int z_lo = -1, z_hi = -1;
        bool empty() const { return z_hi < z_lo || z_lo < 0; }
    };

    TissueSpan tissue_span(const VoxelPhantom& ph)
    {
        TissueSpan s;
        for (int iz = 0; iz < ph.dims.z; ++iz) {
            bool any = false;
            for (int iy = 0; iy < ph.dims.y && !any; ++iy)
                for (int ix = 0; ix < ph.dims.x && !any; ++ix)
                    any = ph.at(ix, iy, iz) != Material::Air;
            if (any) {
                if (s.z_lo < 0)
                    s.z_lo = iz;
                s.z_hi = iz;
            }
        }
        return s;
    }

    // quadratic bulge profile, largest at mid-thickness
    double bulge(double zeta_c, double thickness, double beta)
    {
        const double u = std::clamp(2.0 * zeta_c / thickness - 1.0, -1.0, 1.0);
        return 1.0 + beta * (1.0 - u * u);
    }

    void reclose_skin(VoxelPhantom& ph)
    {
        static const int off[6][3] = { { 1, 0, 0 }, { -1, 0, 0 }, { 0, 1, 0 }, { 0, -1, 0 }, { 0, 0, 1 }, { 0, 0, -1 } };
        std::vector<std::size_t> convert;
        for (int iz = 0; iz < ph.dims.z; ++iz)
            for (int iy = 0; iy < ph.dims.y; ++iy)
                for (int ix = 0; ix < ph.dims.x; ++ix) {
                    if (!is_tissue(ph.at(ix, iy, iz)))
                        continue;
                    for (const auto& o : off) {
                        const int x = ix + o[0], y = iy + o[1], z = iz + o[2];
                        const bool air = !ph.in_bounds(x, y, z) || ph.at(x, y, z) == Material::Air;
                        if (air) {
                            convert.push_back(ph.index(ix, iy, iz));
                            break;
                        }
                    }
                }
        for (std::size_t i : convert)
            ph.labels[i] = static_cast<std::uint8_t>(Material::Skin);
    }

} // namespace

VoxelPhantom compress(const VoxelPhantom& phantom, const CompressionSpec& spec, const Config& cfg)
{
    spec.validate();
    const double p = phantom.pitch_mm;
    const double target = spec.target_thickness_cm * 10.0;

    const TissueSpan span = tissue_span(phantom);
    if (span.empty())
        throw InvalidInputError("compress: phantom has no tissue");
    const double t0 = (span.z_hi - span.z_lo + 1) * p;

    // already at (or below) target, within one voxel: no-op
    if (t0 <= target + p) {
        VoxelPhantom copy = phantom;
        copy.compression_warning = true;
        return copy;
    }

    const double sz = target / t0;
    const double beta = cfg.bulge_beta;
    const double z_b = span.z_lo * p; // support plate; this plane stays put
    const double x_cw = p; // chest wall plane
    const double cy_in = phantom.dims.y * p / 2.0;

    // base in-plane scale conserving the continuum volume exactly:
    // sz * sp^2 * <b^2> = 1 with <b^2> = 1 + 4beta/3 + 8beta^2/15
    const double b2_mean = 1.0 + 4.0 * beta / 3.0 + 8.0 * beta * beta / 15.0;
    double sp = 1.0 / std::sqrt(sz * b2_mean);

    const double grow = std::max(1.0, sp * (1.0 + beta));
    const IVec3 odims {
        static_cast<int>(std::ceil(phantom.dims.x * grow)) + 2,
        static_cast<int>(std::ceil(phantom.dims.y * grow)) + 2,
        phantom.dims.z, // z only shrinks
    };
    const double cy_out = odims.y * p / 2.0;

    const std::size_t v_in = phantom.tissue_voxels();

    VoxelPhantom out;
    auto resample = [&](double sp_now) {
        out = VoxelPhantom {};
        out.dims = odims;
        out.pitch_mm = p;
        out.density_class = phantom.density_class;
        out.seed = phantom.seed;
        out.glandular_fraction_achieved = phantom.glandular_fraction_achieved;
        out.labels.assign(static_cast<std::size_t>(odims.x) * odims.y * odims.z, static_cast<std::uint8_t>(Material::Air));
        for (int iz = 0; iz < odims.z; ++iz) {
            const double zo = (iz + 0.5) * p;
            const double zeta_c = zo - z_b;
            if (zeta_c < -p || zeta_c > target + p)
                continue;
            const double b = bulge(zeta_c, target, beta) * sp_now;
            const double zi = z_b + zeta_c / sz;
            const int kz = static_cast<int>(std::floor(zi / p));
            if (kz < 0 || kz >= phantom.dims.z)
                continue;
            for (int iy = 0; iy < odims.y; ++iy) {
                const double yi = cy_in + ((iy + 0.5) * p - cy_out) / b;
                const int ky = static_cast<int>(std::floor(yi / p));
                if (ky < 0 || ky >= phantom.dims.y)
                    continue;
                for (int ix = 0; ix < odims.x; ++ix) {
                    const double xi = x_cw + ((ix + 0.5) * p - x_cw) / b;
                    const int kx = static_cast<int>(std::floor(xi / p));
                    if (kx < 0 || kx >= phantom.dims.x)
                        continue;
                    out.labels[out.index(ix, iy, iz)] = phantom.labels[phantom.index(kx, ky, kz)];
                }
            }
        }
    };

    // nearest-neighbor quantization and skin re-closure drift the voxel
    // count a little; recalibrate the in-plane scale until the fat/gland/mass
    // volume is conserved
    double achieved = 0;
    for (int attempt = 0; attempt < 5; ++attempt) {
        resample(sp);
        reclose_skin(out);
        achieved = static_cast<double>(out.tissue_voxels()) / static_cast<double>(v_in);
        if (std::abs(achieved - 1.0) <= 0.005)
            break;
        sp /= std::sqrt(achieved);
    }
    if (std::abs(achieved - 1.0) > 0.02)
        throw InternalError("compression volume drift " + std::to_string(achieved));

    if (phantom.lesion) {
        const LesionRecord& in_rec = *phantom.lesion;
        const Vec3 c = phantom.voxel_center_mm(in_rec.center);
        const double zeta_out = (c.z - z_b) * sz;
        const double b = bulge(zeta_out, target, beta) * sp;
        const Vec3 c_out {
            x_cw + (c.x - x_cw) * b,
            cy_out + (c.y - cy_in) * b,
            z_b + zeta_out,
        };
        LesionRecord rec = in_rec;
        rec.center = {
            static_cast<int>(std::floor(c_out.x / p)),
            static_cast<int>(std::floor(c_out.y / p)),
            static_cast<int>(std::floor(c_out.z / p)),
        };
        if (!out.in_bounds(rec.center.x, rec.center.y, rec.center.z) || !is_tissue(out.at(rec.center.x, rec.center.y, rec.center.z)))
            throw InternalError("lesion mapped outside tissue during compression");
        rec.bbox_lo = { out.dims.x, out.dims.y, out.dims.z };
        rec.bbox_hi = { -1, -1, -1 };
        bool any = false;
        for (int iz = 0; iz < out.dims.z; ++iz)
            for (int iy = 0; iy < out.dims.y; ++iy)
                for (int ix = 0; ix < out.dims.x; ++ix)
                    if (out.at(ix, iy, iz) == Material::Mass) {
                        any = true;
                        rec.bbox_lo.x = std::min(rec.bbox_lo.x, ix);
                        rec.bbox_lo.y = std::min(rec.bbox_lo.y, iy);
                        rec.bbox_lo.z = std::min(rec.bbox_lo.z, iz);
                        rec.bbox_hi.x = std::max(rec.bbox_hi.x, ix);
                        rec.bbox_hi.y = std::max(rec.bbox_hi.y, iy);
                        rec.bbox_hi.z = std::max(rec.bbox_hi.z, iz);
                    }
        if (!any)
            throw InternalError("lesion voxels lost during compression");
        out.lesion = rec;
    }

    return out;
}

} // namespace mammo
