#include "mammo/xproj.hpp"

#include "mammo/parallel.hpp"

#include <algorithm>
#include <cmath>

namespace mammo {

void AcquisitionConfig::validate() const
{
    if (histories < 10000)
        throw ConfigError("histories must be >= 1e4");
    if (det_nx <= 0 || det_ny <= 0 || det_pitch_mm <= 0)
        throw ConfigError("detector geometry invalid");
    if (sdd_mm <= 0)
        throw ConfigError("source-detector distance must be positive");
    if (focal_fwhm_um < 0)
        throw ConfigError("focal spot fwhm must be non-negative");
    if (grid.ratio < 0 || grid.primary_transmission < 0 || grid.primary_transmission > 1 || grid.frequency_lpmm < 0)
        throw ConfigError("anti-scatter grid parameters invalid");
    if (electronic_noise_sigma < 0)
        throw ConfigError("electronic noise sigma must be non-negative");
    if (detector_thickness_mm <= 0)
        throw ConfigError("detector thickness must be positive");
    if (batch_size == 0)
        throw ConfigError("batch size must be positive");
    spectrum.validate();
}

Vec3 apply_focal_blur(const Vec3& origin, double fwhm_um, CounterRng& rng)
{
    if (fwhm_um < 0)
        throw ConfigError("focal spot fwhm must be non-negative");
    if (fwhm_um == 0)
        return origin;
    const double sigma_mm = fwhm_um * 1e-3 / 2.354820045030949;
    return { origin.x + sigma_mm * rng.normal(), origin.y + sigma_mm * rng.normal(), origin.z + sigma_mm * rng.normal() };
}

double grid_transmission(const GridSpec& grid, bool primary, double tan_deviation)
{
    if (grid.ratio < 0 || grid.primary_transmission < 0)
        throw ConfigError("anti-scatter grid parameters invalid");
    if (!grid.enabled)
        return 1.0;
    if (primary)
        return grid.primary_transmission;
    // focused linear grid: lateral travel across the lamellae shadows the
    // gap in proportion to the grid ratio
    const double open = std::max(0.0, 1.0 - grid.ratio * std::abs(tan_deviation));
    return grid.primary_transmission * open;
}

void add_electronic_noise(Image2<double>& pixels, double sigma, std::uint64_t seed)
{
    if (sigma < 0)
        throw ConfigError("electronic noise sigma must be non-negative");
    if (sigma == 0)
        return;
    CounterRng rng(seed, 0xE1ECu);
    for (std::size_t i = 0; i < pixels.size(); ++i)
        pixels[i] += sigma * rng.normal();
}

std::uint64_t histories_for(int relative_dose_percent, DensityClass cls, const Config& cfg)
{
    const int idx = static_cast<int>(cls);
    if (idx < 0 || idx >= 4)
        throw ConfigError("unknown density class");
    switch (relative_dose_percent) {
    case 20:
    case 40:
    case 60:
    case 80:
    case 100:
        break;
    default:
        throw ConfigError("relative dose must be one of 20/40/60/80/100 percent");
    }
    const double h100 = cfg.for_class(cls).histories_100;
    if (!(h100 > 0))
        throw ConfigError(std::string("no 100%-dose history count configured for class ") + class_name(cls));
    const std::uint64_t base = static_cast<std::uint64_t>(std::llround(h100 / 100.0));
    return base * static_cast<std::uint64_t>(relative_dose_percent);
}

namespace {

    constexpr double kEMinKeV = 4.0; // transport cutoff; deposit below this
    constexpr double kEBinKeV = 0.25;
    constexpr double kElectronRestKeV = 510.998950;
    constexpr double kSeKEdgeKeV = 12.658;
    constexpr double kSeKAlphaKeV = 11.22;
    constexpr double kSeFluorYield = 0.58;

    // Per-energy-bin linear attenuation (per mm), channel fractions, and the
    // Woodcock majorant over all phantom materials including the mass at its
    // density factor.
    struct EnergyCache {
        int nbins = 0;
        std::array<std::vector<double>, kNumMaterials> mu;
        std::array<std::vector<double>, kNumMaterials> f_pe; // photoelectric share
        std::array<std::vector<double>, kNumMaterials> f_pe_incoh; // + incoherent share
        std::vector<double> majorant;
        std::vector<double> det_mu; // converter, per mm

        EnergyCache(const MaterialTable& mats, double density_factor, double e_max)
        {
            nbins = static_cast<int>(std::ceil((e_max - kEMinKeV) / kEBinKeV)) + 2;
            for (auto& v : mu)
                v.resize(nbins);
            for (auto& v : f_pe)
                v.resize(nbins);
            for (auto& v : f_pe_incoh)
                v.resize(nbins);
            majorant.assign(nbins, 1e-12);
            det_mu.resize(nbins);
            for (int b = 0; b < nbins; ++b) {
                const double e = kEMinKeV + (b + 0.5) * kEBinKeV;
                for (int m = 0; m < kNumMaterials; ++m) {
                    const Material mat = static_cast<Material>(m);
                    const Material lookup = mat == Material::Mass ? Material::Gland : mat;
                    const auto c = mats.material(lookup).at(e);
                    const double rho = mats.density(mat, density_factor);
                    const double total_mm = c.total() * rho / 10.0;
                    mu[m][b] = total_mm;
                    f_pe[m][b] = c.total() > 0 ? c.pe / c.total() : 1.0;
                    f_pe_incoh[m][b] = c.total() > 0 ? (c.pe + c.incoh) / c.total() : 1.0;
                    majorant[b] = std::max(majorant[b], total_mm);
                }
                det_mu[b] = mats.detector().mu_rho_total(e) * mats.detector().density / 10.0;
            }
        }

        int bin(double e) const
        {
            const int b = static_cast<int>((e - kEMinKeV) / kEBinKeV);
            return std::clamp(b, 0, nbins - 1);
        }
    };

    struct BatchResult {
        Image2<double> pixels;
        Image2<double> primary;
        DoseTally tally;
        std::uint64_t det_hits = 0;
    };

    struct TransportContext {
        const VoxelPhantom* ph = nullptr;
        const AcquisitionConfig* cfg = nullptr;
        const EnergyCache* cache = nullptr;
        const Spectrum* spectrum = nullptr;
        Vec3 src;
        Vec3 ph_origin; // world position of voxel (0,0,0) corner
        Vec3 box_lo, box_hi;
        double det_w = 0, det_h = 0;
        double z_det = 0; // detector entrance plane == bottom face of the phantom box
    };

    bool ray_box(const Vec3& lo, const Vec3& hi, const Vec3& o, const Vec3& d, double& t0, double& t1)
    {
        t0 = -1e30;
        t1 = 1e30;
        for (int a = 0; a < 3; ++a) {
            const double oa = a == 0 ? o.x : (a == 1 ? o.y : o.z);
            const double da = a == 0 ? d.x : (a == 1 ? d.y : d.z);
            const double la = a == 0 ? lo.x : (a == 1 ? lo.y : lo.z);
            const double ha = a == 0 ? hi.x : (a == 1 ? hi.y : hi.z);
            if (std::abs(da) < 1e-12) {
                if (oa < la || oa > ha)
                    return false;
                continue;
            }
            double ta = (la - oa) / da;
            double tb = (ha - oa) / da;
            if (ta > tb)
                std::swap(ta, tb);
            t0 = std::max(t0, ta);
            t1 = std::min(t1, tb);
            if (t0 >= t1)
                return false;
        }
        return true;
    }

    Vec3 rotate_direction(const Vec3& d, double cos_theta, double phi)
    {
        const double sin_theta = std::sqrt(std::max(0.0, 1.0 - cos_theta * cos_theta));
        Vec3 h = std::abs(d.z) < 0.99 ? Vec3 { 0, 0, 1 } : Vec3 { 1, 0, 0 };
        Vec3 e1 {
            d.y * h.z - d.z * h.y,
            d.z * h.x - d.x * h.z,
            d.x * h.y - d.y * h.x,
        };
        e1 = e1.normalized();
        const Vec3 e2 {
            d.y * e1.z - d.z * e1.y,
            d.z * e1.x - d.x * e1.z,
            d.x * e1.y - d.y * e1.x,
        };
        const double cp = std::cos(phi), sp = std::sin(phi);
        Vec3 out {
            d.x * cos_theta + (e1.x * cp + e2.x * sp) * sin_theta,
            d.y * cos_theta + (e1.y * cp + e2.y * sp) * sin_theta,
            d.z * cos_theta + (e1.z * cp + e2.z * sp) * sin_theta,
        };
        return out.normalized();
    }

    // Kahn's composition-rejection sampling of the Klein-Nishina ratio
    // x = E/E'
    double sample_compton_ratio(double alpha, CounterRng& rng)
    {
        for (;;) {
            const double r1 = rng.uniform();
            const double r2 = rng.uniform();
            const double r3 = rng.uniform();
            if (r1 * (9.0 + 2.0 * alpha) <= (1.0 + 2.0 * alpha)) {
                const double x = 1.0 + 2.0 * alpha * r2;
                if (r3 <= 4.0 * (1.0 / x - 1.0 / (x * x)))
                    return x;
            } else {
                const double x = (1.0 + 2.0 * alpha) / (1.0 + 2.0 * alpha * r2);
                const double ct = 1.0 - (x - 1.0) / alpha;
                if (r3 <= 0.5 * (ct * ct + 1.0 / x))
                    return x;
            }
        }
    }

    // Thomson angular shape for coherent redirects (form factor omitted)
    double sample_coherent_cos(CounterRng& rng)
    {
        for (;;) {
            const double mu = rng.uniform(-1.0, 1.0);
            if (rng.uniform() <= 0.5 * (1.0 + mu * mu))
                return mu;
        }
    }

    Material label_at(const VoxelPhantom& ph, const Vec3& ph_origin, const Vec3& q, bool& ok)
    {
        const double p = ph.pitch_mm;
        const int ix = static_cast<int>(std::floor((q.x - ph_origin.x) / p));
        const int iy = static_cast<int>(std::floor((q.y - ph_origin.y) / p));
        const int iz = static_cast<int>(std::floor((q.z - ph_origin.z) / p));
        if (!ph.in_bounds(ix, iy, iz)) {
            ok = false;
            return Material::Air;
        }
        ok = true;
        return ph.at(ix, iy, iz);
    }

    // line integral of mu through the voxel grid (Amanatides-Woo), per mm
    double optical_depth(const TransportContext& c, const Vec3& o, const Vec3& d, int ebin)
    {
        double t0, t1;
        if (!ray_box(c.box_lo, c.box_hi, o, d, t0, t1))
            return 0.0;
        t0 = std::max(t0, 0.0);
        if (t1 <= t0)
            return 0.0;

        const VoxelPhantom& ph = *c.ph;
        const double p = ph.pitch_mm;
        const Vec3 entry = o + d * (t0 + 1e-9);
        int iv[3];
        for (int a = 0; a < 3; ++a) {
            const double oa = a == 0 ? entry.x : (a == 1 ? entry.y : entry.z);
            const double ga = a == 0 ? c.ph_origin.x : (a == 1 ? c.ph_origin.y : c.ph_origin.z);
            iv[a] = std::clamp(static_cast<int>(std::floor((oa - ga) / p)), 0, ph.dims[a] - 1);
        }
        double tmax[3], tdelta[3];
        int step[3];
        for (int a = 0; a < 3; ++a) {
            const double da = a == 0 ? d.x : (a == 1 ? d.y : d.z);
            const double oa = a == 0 ? o.x : (a == 1 ? o.y : o.z);
            const double ga = a == 0 ? c.ph_origin.x : (a == 1 ? c.ph_origin.y : c.ph_origin.z);
            if (da > 1e-12) {
                step[a] = 1;
                tdelta[a] = p / da;
                tmax[a] = ((iv[a] + 1) * p + ga - oa) / da;
            } else if (da < -1e-12) {
                step[a] = -1;
                tdelta[a] = -p / da;
                tmax[a] = (iv[a] * p + ga - oa) / da;
            } else {
                step[a] = 0;
                tdelta[a] = 1e30;
                tmax[a] = 1e30;
            }
        }

        double t = t0, tau = 0.0;
        for (;;) {
            int a = 0;
            if (tmax[1] < tmax[a])
                a = 1;
            if (tmax[2] < tmax[a])
                a = 2;
            const double tn = std::min(tmax[a], t1);
            const Material m = ph.at(iv[0], iv[1], iv[2]);
            tau += c.cache->mu[static_cast<int>(m)][ebin] * (tn - t);
            t = tn;
            if (tmax[a] >= t1)
                break;
            iv[a] += step[a];
            if (iv[a] < 0 || iv[a] >= ph.dims[a])
                break;
            tmax[a] += tdelta[a];
        }
        return tau;
    }

    struct DetectorHit {
        double x = 0, y = 0;
        bool valid = false;
    };

    DetectorHit to_detector(const TransportContext& c, const Vec3& pos, const Vec3& dir)
    {
        DetectorHit h;
        if (dir.z >= -1e-12 || pos.z < c.z_det)
            return h;
        const double t = (c.z_det - pos.z) / dir.z;
        h.x = pos.x + dir.x * t;
        h.y = pos.y + dir.y * t;
        h.valid = h.x >= 0 && h.x < c.det_w && h.y >= -c.det_h / 2 && h.y < c.det_h / 2;
        return h;
    }

    void score_pixel(const TransportContext& c, BatchResult& r, double x, double y, double e, bool primary)
    {
        const double dp = c.cfg->det_pitch_mm;
        const int u = std::clamp(static_cast<int>(x / dp), 0, c.cfg->det_nx - 1);
        const int v = std::clamp(static_cast<int>((y + c.det_h / 2) / dp), 0, c.cfg->det_ny - 1);
        r.pixels(u, v) += e;
        if (primary)
            r.primary(u, v) += e;
    }

    // expected-value primary chain: analytic attenuation along the sampled
    // ray, constant grid factor, expected converter absorption
    void primary_ray(const TransportContext& c, const Vec3& o, const Vec3& d, double e, BatchResult& r)
    {
        const DetectorHit hit = to_detector(c, o, d);
        if (!hit.valid) {
            r.tally.escaped += e;
            return;
        }
        const int ebin = c.cache->bin(e);
        const double tau = optical_depth(c, o, d, ebin);
        double w = std::exp(-tau);
        if (c.cfg->grid.enabled)
            w *= grid_transmission(c.cfg->grid, true, 0.0);
        const double eta = 1.0 - std::exp(-c.cache->det_mu[ebin] * c.cfg->detector_thickness_mm / std::abs(d.z));
        const double score = w * eta * e;
        if (score > 0) {
            score_pixel(c, r, hit.x, hit.y, score, true);
            r.tally.detector += score;
            ++r.det_hits;
        }
        r.tally.escaped += e - score;
    }

    void detector_interaction(const TransportContext& c, CounterRng& rng, const DetectorHit& hit,
        const Vec3& dir, double e, int nscat, BatchResult& r)
    {
        const int ebin = c.cache->bin(e);
        const double mu_det = c.cache->det_mu[ebin];
        const double path = c.cfg->detector_thickness_mm / std::abs(dir.z);
        const double eta = 1.0 - std::exp(-mu_det * path);
        if (rng.uniform() >= eta) {
            r.tally.escaped += e;
            return;
        }
        double deposit = e;
        if (c.cfg->fluorescence && e > kSeKEdgeKeV && rng.uniform() < kSeFluorYield) {
            // K photon from a sampled interaction depth, isotropic emission;
            // escapes through the nearer face or is reabsorbed locally
            const double u = rng.uniform();
            const double depth_along = -std::log(1.0 - u * (1.0 - std::exp(-mu_det * path))) / mu_det;
            const double depth_z = depth_along * std::abs(dir.z);
            const Vec3 fd = rotate_direction({ 0, 0, 1 }, rng.uniform(-1.0, 1.0), 6.283185307179586 * rng.uniform());
            const double exit_path = fd.z > 1e-12 ? depth_z / fd.z
                : (fd.z < -1e-12 ? (c.cfg->detector_thickness_mm - depth_z) / -fd.z : 1e30);
            const double mu_f = c.cache->det_mu[c.cache->bin(kSeKAlphaKeV)];
            if (rng.uniform() < std::exp(-mu_f * exit_path)) {
                deposit = e - kSeKAlphaKeV;
                r.tally.escaped += kSeKAlphaKeV;
            }
        }
        score_pixel(c, r, hit.x, hit.y, deposit, nscat == 0);
        r.tally.detector += deposit;
        ++r.det_hits;
    }

    void transport_photon(const TransportContext& c, CounterRng& rng, Vec3 pos, Vec3 dir, double e, BatchResult& r)
    {
        const VoxelPhantom& ph = *c.ph;
        int nscat = 0;
        for (;;) {
            double t0, t1;
            const bool hits_box = ray_box(c.box_lo, c.box_hi, pos, dir, t0, t1) && t1 > std::max(t0, 0.0);
            bool rescattered = false;
            if (hits_box) {
                double t = std::max(t0, 0.0);
                int ebin = c.cache->bin(e);
                double maj = c.cache->majorant[ebin];
                for (;;) {
                    t += -std::log1p(-rng.uniform()) / maj;
                    if (t >= t1)
                        break;
                    const Vec3 q = pos + dir * t;
                    bool ok = false;
                    const Material m = label_at(ph, c.ph_origin, q, ok);
                    if (!ok)
                        break;
                    const int mi = static_cast<int>(m);
                    if (rng.uniform() * maj >= c.cache->mu[mi][ebin])
                        continue; // virtual collision
                    const double u = rng.uniform();
                    if (u < c.cache->f_pe[mi][ebin]) {
                        r.tally.deposited[mi] += e;
                        return;
                    }
                    if (u < c.cache->f_pe_incoh[mi][ebin]) {
                        const double alpha = e / kElectronRestKeV;
                        const double x = sample_compton_ratio(alpha, rng);
                        const double e_out = e / x;
                        r.tally.deposited[mi] += e - e_out;
                        const double ct = 1.0 - (x - 1.0) / alpha;
                        dir = rotate_direction(dir, ct, 6.283185307179586 * rng.uniform());
                        ++nscat;
                        if (e_out < kEMinKeV) {
                            r.tally.deposited[mi] += e_out;
                            return;
                        }
                        e = e_out;
                    } else {
                        dir = rotate_direction(dir, sample_coherent_cos(rng), 6.283185307179586 * rng.uniform());
                        ++nscat;
                    }
                    pos = q;
                    rescattered = true;
                    break;
                }
            }
            if (rescattered)
                continue;

            const DetectorHit hit = to_detector(c, pos, dir);
            if (!hit.valid) {
                r.tally.escaped += e;
                return;
            }
            if (c.cfg->grid.enabled) {
                const double dev = nscat == 0 ? 0.0 : std::abs(dir.y / -dir.z - hit.y / c.cfg->sdd_mm);
                if (rng.uniform() >= grid_transmission(c.cfg->grid, nscat == 0, dev)) {
                    r.tally.grid_absorbed += e;
                    return;
                }
            }
            detector_interaction(c, rng, hit, dir, e, nscat, r);
            return;
        }
    }

    BatchResult run_batch(const TransportContext& c, std::uint64_t batch_index, std::uint64_t count)
    {
        const AcquisitionConfig& cfg = *c.cfg;
        CounterRng rng(cfg.seed, batch_index);
        BatchResult r;
        r.pixels = Image2<double>(cfg.det_nx, cfg.det_ny);
        r.primary = Image2<double>(cfg.det_nx, cfg.det_ny);
        for (std::uint64_t i = 0; i < count; ++i) {
            const double e = c.spectrum->sample(rng);
            Vec3 o = cfg.focal_fwhm_um > 0 ? apply_focal_blur(c.src, cfg.focal_fwhm_um, rng) : c.src;
            const double tx = rng.uniform() * c.det_w;
            const double ty = -c.det_h / 2 + rng.uniform() * c.det_h;
            const Vec3 target { tx, ty, c.z_det };
            const Vec3 d = (target - o).normalized();
            r.tally.emitted += e;
            if (cfg.scatter_mode == ScatterMode::PrimaryOnly)
                primary_ray(c, o, d, e, r);
            else
                transport_photon(c, rng, o, d, e, r);
        }
        return r;
    }

} // namespace

Projection simulate_projection(const VoxelPhantom& phantom, const AcquisitionConfig& config, const MaterialTable& materials)
{
    config.validate();
    if (phantom.labels.empty() || phantom.pitch_mm <= 0)
        throw InvalidInputError("simulate_projection: empty phantom");

    const double density_factor = phantom.lesion ? phantom.lesion->density_factor : 1.0;
    const EnergyCache cache(materials, density_factor, config.spectrum.energy_keV.back());
    Spectrum spectrum = config.spectrum;
    spectrum.prepare();

    TransportContext ctx;
    ctx.ph = &phantom;
    ctx.cfg = &config;
    ctx.cache = &cache;
    ctx.spectrum = &spectrum;
    ctx.det_w = config.det_nx * config.det_pitch_mm;
    ctx.det_h = config.det_ny * config.det_pitch_mm;
    // chest wall face of the grid at world x=0, tissue resting on z=0,
    // centered laterally; the detector plane coincides with the grid floor
    ctx.ph_origin = { -phantom.pitch_mm, -phantom.dims.y * phantom.pitch_mm / 2.0, -phantom.pitch_mm };
    ctx.z_det = ctx.ph_origin.z;
    ctx.src = { 0, 0, ctx.z_det + config.sdd_mm };
    ctx.box_lo = ctx.ph_origin;
    ctx.box_hi = {
        ctx.ph_origin.x + phantom.dims.x * phantom.pitch_mm,
        ctx.ph_origin.y + phantom.dims.y * phantom.pitch_mm,
        ctx.ph_origin.z + phantom.dims.z * phantom.pitch_mm,
    };

    const std::uint64_t n_batches = (config.histories + config.batch_size - 1) / config.batch_size;
    BatchResult total;
    total.pixels = Image2<double>(config.det_nx, config.det_ny);
    total.primary = Image2<double>(config.det_nx, config.det_ny);

    ordered_reduce(
        n_batches, config.threads,
        [&](std::size_t b) {
            const std::uint64_t start = b * config.batch_size;
            const std::uint64_t count = std::min<std::uint64_t>(config.batch_size, config.histories - start);
            return run_batch(ctx, b, count);
        },
        [&](std::size_t b, BatchResult& partial) {
            if (!std::isfinite(partial.tally.emitted) || !std::isfinite(partial.tally.accounted()))
                throw PhysicsError("non-finite energy tally in batch " + std::to_string(b) + " (seed " + std::to_string(config.seed) + ")");
            for (std::size_t i = 0; i < total.pixels.size(); ++i) {
                if (!std::isfinite(partial.pixels[i]))
                    throw PhysicsError("non-finite pixel accumulation in batch " + std::to_string(b) + " (seed " + std::to_string(config.seed) + ")");
                total.pixels[i] += partial.pixels[i];
                total.primary[i] += partial.primary[i];
            }
            total.tally.add(partial.tally);
            total.det_hits += partial.det_hits;
        });

    if (total.det_hits == 0)
        throw GeometryError("no photons reached the detector; check geometry");

    Projection out;
    out.seed = config.seed;
    out.histories = config.histories;
    out.scatter_mode = config.scatter_mode;
    out.tally = total.tally;
    out.detector_hits = total.det_hits;

    const double scale = 1e6 / static_cast<double>(config.histories);
    out.pixels = std::move(total.pixels);
    out.primary_pixels = std::move(total.primary);
    for (std::size_t i = 0; i < out.pixels.size(); ++i) {
        out.pixels[i] *= scale;
        out.primary_pixels[i] *= scale;
    }

    // per-gram glandular estimate (keV/g over the whole run)
    std::size_t n_gland = 0;
    for (std::uint8_t l : phantom.labels)
        n_gland += l == static_cast<std::uint8_t>(Material::Gland);
    if (n_gland > 0 && config.scatter_mode == ScatterMode::FullTransport) {
        const double voxel_cm3 = std::pow(phantom.pitch_mm / 10.0, 3);
        const double gland_mass_g = static_cast<double>(n_gland) * voxel_cm3 * materials.density(Material::Gland);
        out.mean_glandular_dose_estimate = out.tally.glandular() / gland_mass_g;
    }

    if (phantom.lesion) {
        const Vec3 c = phantom.voxel_center_mm(phantom.lesion->center) + ctx.ph_origin;
        const double height = c.z - ctx.z_det;
        const double t = config.sdd_mm / (config.sdd_mm - height);
        const double x = c.x * t;
        const double y = c.y * t;
        const double u = x / config.det_pitch_mm;
        const double v = (y + ctx.det_h / 2) / config.det_pitch_mm;
        if (u < 0 || u >= config.det_nx || v < 0 || v >= config.det_ny)
            throw GeometryError("lesion projects outside the detector");
        out.lesion_px = { { u, v } };
    }

    add_electronic_noise(out.pixels, config.electronic_noise_sigma, config.seed);
    return out;
}

double glandular_dose_estimate(const VoxelPhantom& phantom, const AcquisitionConfig& config, const MaterialTable& materials)
{
    if (config.scatter_mode != ScatterMode::FullTransport)
        throw UnsupportedModeError("glandular dose requires FullTransport mode");
    const Projection p = simulate_projection(phantom, config, materials);
    return p.tally.glandular();
}

} // namespace mammo
