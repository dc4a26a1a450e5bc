#include "mammo/phantom.hpp"

#include "mammo/edt.hpp"
#include "mammo/rng.hpp"

#include <algorithm>
#include <climits>
#include <cmath>
#include <unordered_set>

namespace mammo {

PhantomParams PhantomParams::defaults_for(DensityClass c, const Config& cfg, std::uint64_t seed)
{
    const ClassDefaults& row = cfg.for_class(c);
    PhantomParams p;
    p.density_class = c;
    p.target_glandular_fraction = row.glandular_fraction;
    p.extent_mm = row.extent_mm;
    p.pitch_mm = cfg.pitch_mm;
    p.seed = seed;
    return p;
}

void PhantomParams::validate() const
{
    if (!(pitch_mm > 0))
        throw ConfigError("phantom pitch must be positive");
    if (!(target_glandular_fraction > 0 && target_glandular_fraction < 1))
        throw ConfigError("target glandular fraction must lie strictly in (0,1)");
    for (double e : extent_mm)
        if (!(e > 0))
            throw ConfigError("phantom extent must be positive");
    const double nx = extent_mm[0] / pitch_mm;
    const double ny = extent_mm[1] / pitch_mm;
    const double nz = extent_mm[2] / pitch_mm;
    if (nx < 16 || ny < 16 || nz < 16)
        throw ConfigError("phantom grid smaller than 16^3 voxels; reduce pitch or enlarge extent");
    if (nx > 2048 || ny > 2048 || nz > 2048)
        throw ConfigError("phantom grid exceeds 2048 voxels per axis");
}

double VoxelPhantom::tissue_thickness_mm() const
{
    int zmin = dims.z, zmax = -1;
    for (int iz = 0; iz < dims.z; ++iz) {
        bool any = false;
        const std::size_t base = static_cast<std::size_t>(dims.x) * dims.y * iz;
        for (std::size_t i = 0; i < static_cast<std::size_t>(dims.x) * dims.y && !any; ++i)
            any = labels[base + i] != static_cast<std::uint8_t>(Material::Air);
        if (any) {
            zmin = std::min(zmin, iz);
            zmax = std::max(zmax, iz);
        }
    }
    return zmax < zmin ? 0.0 : (zmax - zmin + 1) * pitch_mm;
}

std::size_t VoxelPhantom::tissue_voxels() const
{
    std::size_t n = 0;
    for (std::uint8_t l : labels)
        if (is_tissue(static_cast<Material>(l)))
            ++n;
    return n;
}

namespace {

    // Band-limited value noise: hashed integer lattice, quintic fade,
    // trilinear blend. Per-voxel value depends only on (seed, position), so
    // label assignment is bit-stable across platforms and thread counts.
    class NoiseOctave {
    public:
        NoiseOctave(std::uint64_t seed, int octave, double cell_mm)
            : seed_(CounterRng::mix64(seed ^ CounterRng::mix64(0x9110c8315ull + octave)))
            , cell_(cell_mm)
        {
        }

        double sample(const Vec3& p)
        {
            const double gx = p.x / cell_, gy = p.y / cell_, gz = p.z / cell_;
            const int ix = static_cast<int>(std::floor(gx));
            const int iy = static_cast<int>(std::floor(gy));
            const int iz = static_cast<int>(std::floor(gz));
            if (ix != cx_ || iy != cy_ || iz != cz_)
                load_cell(ix, iy, iz);
            const double fx = fade(gx - ix), fy = fade(gy - iy), fz = fade(gz - iz);
            const double x00 = corner_[0] + fx * (corner_[1] - corner_[0]);
            const double x10 = corner_[2] + fx * (corner_[3] - corner_[2]);
            const double x01 = corner_[4] + fx * (corner_[5] - corner_[4]);
            const double x11 = corner_[6] + fx * (corner_[7] - corner_[6]);
            const double y0 = x00 + fy * (x10 - x00);
            const double y1 = x01 + fy * (x11 - x01);
            return y0 + fz * (y1 - y0);
        }

    private:
        static double fade(double t) { return t * t * t * (t * (t * 6 - 15) + 10); }

        double lattice(int ix, int iy, int iz) const
        {
            std::uint64_t h = seed_;
            h = CounterRng::mix64(h ^ static_cast<std::uint64_t>(static_cast<std::uint32_t>(ix)));
            h = CounterRng::mix64(h ^ static_cast<std::uint64_t>(static_cast<std::uint32_t>(iy)));
            h = CounterRng::mix64(h ^ static_cast<std::uint64_t>(static_cast<std::uint32_t>(iz)));
            return static_cast<double>(h >> 11) * 0x1.0p-52 - 1.0; // [-1, 1)
        }

        void load_cell(int ix, int iy, int iz)
        {
            cx_ = ix;
            cy_ = iy;
            cz_ = iz;
            for (int c = 0; c < 8; ++c)
                corner_[c] = lattice(ix + (c & 1), iy + ((c >> 1) & 1), iz + ((c >> 2) & 1));
        }

        std::uint64_t seed_;
        double cell_;
        int cx_ = INT_MIN, cy_ = INT_MIN, cz_ = INT_MIN;
        double corner_[8] {};
    };

    // 6-connected erosion; out-of-grid counts as outside
    std::vector<std::uint8_t> erode6(const IVec3& dims, const std::vector<std::uint8_t>& in, int iterations)
    {
        std::vector<std::uint8_t> cur = in, next(in.size());
        auto idx = [&](int x, int y, int z) {
            return static_cast<std::size_t>(x) + static_cast<std::size_t>(dims.x) * (static_cast<std::size_t>(y) + static_cast<std::size_t>(dims.y) * z);
        };
        for (int it = 0; it < iterations; ++it) {
            for (int z = 0; z < dims.z; ++z)
                for (int y = 0; y < dims.y; ++y)
                    for (int x = 0; x < dims.x; ++x) {
                        bool keep = cur[idx(x, y, z)] != 0;
                        keep = keep && x > 0 && cur[idx(x - 1, y, z)] && x + 1 < dims.x && cur[idx(x + 1, y, z)];
                        keep = keep && y > 0 && cur[idx(x, y - 1, z)] && y + 1 < dims.y && cur[idx(x, y + 1, z)];
                        keep = keep && z > 0 && cur[idx(x, y, z - 1)] && z + 1 < dims.z && cur[idx(x, y, z + 1)];
                        next[idx(x, y, z)] = keep ? 1 : 0;
                    }
            cur.swap(next);
        }
        return cur;
    }

} // namespace

VoxelPhantom generate_phantom(const PhantomParams& params, const Config& cfg)
{
    params.validate();

    const double p = params.pitch_mm;
    const double depth = params.extent_mm[0]; // chest wall -> nipple
    const double half_lat = params.extent_mm[1] / 2.0;
    const double half_cc = params.extent_mm[2] / 2.0;

    // one air voxel on every face; chest wall plane sits at x = pitch
    const IVec3 dims {
        static_cast<int>(std::ceil(depth / p)) + 2,
        static_cast<int>(std::ceil(2 * half_lat / p)) + 2,
        static_cast<int>(std::ceil(2 * half_cc / p)) + 2,
    };
    const std::size_t n = static_cast<std::size_t>(dims.x) * dims.y * dims.z;
    if (n > (std::size_t(1) << 31))
        throw ConfigError("phantom grid does not fit in memory budget");

    const double x_cw = p; // chest wall plane
    const double cy = dims.y * p / 2.0;
    const double cz = p + half_cc; // tissue rests one voxel above the grid floor

    std::vector<std::uint8_t> inside(n, 0);
    for (int iz = 0; iz < dims.z; ++iz)
        for (int iy = 0; iy < dims.y; ++iy)
            for (int ix = 0; ix < dims.x; ++ix) {
                const double x = (ix + 0.5) * p - x_cw;
                if (x < 0)
                    continue;
                const double y = (iy + 0.5) * p - cy;
                const double z = (iz + 0.5) * p - cz;
                const double q = (x / depth) * (x / depth) + (y / half_lat) * (y / half_lat) + (z / half_cc) * (z / half_cc);
                if (q <= 1.0)
                    inside[static_cast<std::size_t>(ix) + static_cast<std::size_t>(dims.x) * (static_cast<std::size_t>(iy) + static_cast<std::size_t>(dims.y) * iz)] = 1;
            }

    const std::vector<std::uint8_t> core = erode6(dims, inside, cfg.skin_voxels);
    std::size_t n_core = 0;
    for (std::uint8_t c : core)
        n_core += c;
    if (n_core == 0)
        throw GenerationError("phantom interior vanished after skin erosion; extent too small for pitch");

    // depth map over the interior (distance to the skin band); the gland
    // preference plateaus past the subcutaneous rim so the interior texture
    // stays stationary while the fat-rich rim survives
    std::vector<std::uint8_t> not_core(n);
    for (std::size_t i = 0; i < n; ++i)
        not_core[i] = core[i] ? 0 : 1;
    const std::vector<float> d2 = squared_edt(dims, not_core);
    const double ramp = std::max(cfg.bias_ramp_mm, p);

    // three-octave texture field + centrality bias
    std::vector<NoiseOctave> octaves;
    std::vector<double> weights;
    for (int o = 0; o < cfg.noise_octaves; ++o) {
        octaves.emplace_back(params.seed, o, cfg.noise_cell_mm / (1 << o));
        weights.push_back(1.0 / (1 << o));
    }
    std::vector<float> field(n, 0.0f);
    for (int iz = 0; iz < dims.z; ++iz)
        for (int iy = 0; iy < dims.y; ++iy)
            for (int ix = 0; ix < dims.x; ++ix) {
                const std::size_t i = static_cast<std::size_t>(ix) + static_cast<std::size_t>(dims.x) * (static_cast<std::size_t>(iy) + static_cast<std::size_t>(dims.y) * iz);
                if (!core[i])
                    continue;
                const Vec3 pos { (ix + 0.5) * p, (iy + 0.5) * p, (iz + 0.5) * p };
                double v = 0;
                for (std::size_t o = 0; o < octaves.size(); ++o)
                    v += weights[o] * octaves[o].sample(pos);
                v += cfg.gland_depth_bias * std::min(1.0, std::sqrt(static_cast<double>(d2[i])) * p / ramp);
                field[i] = static_cast<float>(v);
            }

    // threshold so that the gland share of the interior hits the target;
    // bisection on the monotone fraction(threshold) curve
    float lo = 1e9f, hi = -1e9f;
    for (std::size_t i = 0; i < n; ++i)
        if (core[i]) {
            lo = std::min(lo, field[i]);
            hi = std::max(hi, field[i]);
        }
    lo -= 1e-3f;
    hi += 1e-3f;
    const double target = params.target_glandular_fraction;
    for (int it = 0; it < 32; ++it) {
        const float mid = 0.5f * (lo + hi);
        std::size_t above = 0;
        for (std::size_t i = 0; i < n; ++i)
            if (core[i] && field[i] >= mid)
                ++above;
        if (static_cast<double>(above) / static_cast<double>(n_core) > target)
            lo = mid;
        else
            hi = mid;
    }
    const float threshold = 0.5f * (lo + hi);

    VoxelPhantom ph;
    ph.dims = dims;
    ph.pitch_mm = p;
    ph.density_class = params.density_class;
    ph.seed = params.seed;
    ph.labels.assign(n, static_cast<std::uint8_t>(Material::Air));
    std::size_t n_gland = 0;
    for (std::size_t i = 0; i < n; ++i) {
        if (core[i]) {
            const bool gland = field[i] >= threshold;
            n_gland += gland;
            ph.labels[i] = static_cast<std::uint8_t>(gland ? Material::Gland : Material::Fat);
        } else if (inside[i]) {
            ph.labels[i] = static_cast<std::uint8_t>(Material::Skin);
        }
    }
    ph.glandular_fraction_achieved = static_cast<double>(n_gland) / static_cast<double>(n_core);
    if (std::abs(ph.glandular_fraction_achieved - target) > 0.05)
        throw GenerationError("glandular fraction unattainable: achieved " + std::to_string(ph.glandular_fraction_achieved) + " vs target " + std::to_string(target));
    return ph;
}

void CohortSpec::validate() const
{
    if (size < 2)
        throw ConfigError("cohort size must be >= 2");
    if (!(signal_present_fraction >= 0 && signal_present_fraction <= 1))
        throw ConfigError("signal_present_fraction must lie in [0,1]");
    base.validate();
}

std::vector<CohortCaseSpec> plan_cohort(const CohortSpec& spec)
{
    spec.validate();
    const int n_signal = static_cast<int>(std::ceil(spec.size * spec.signal_present_fraction));

    std::vector<CohortCaseSpec> plan;
    plan.reserve(spec.size);
    std::unordered_set<std::uint64_t> seen;
    for (int k = 0; k < spec.size; ++k) {
        CohortCaseSpec c;
        c.index = k;
        c.case_seed = derive_seed(spec.base_seed, static_cast<std::uint64_t>(k));
        c.signal_present = k < n_signal;
        c.params = spec.base;
        c.params.seed = c.case_seed;
        CounterRng rng(c.case_seed, 0xC0);
        for (int a = 0; a < 3; ++a)
            c.params.extent_mm[a] += rng.uniform(-spec.extent_jitter_mm, spec.extent_jitter_mm);
        c.params.target_glandular_fraction = std::clamp(
            c.params.target_glandular_fraction + rng.uniform(-spec.fraction_jitter, spec.fraction_jitter), 0.02, 0.98);
        if (!seen.insert(c.case_seed).second)
            throw InternalError("cohort seed collision");
        plan.push_back(c);
    }
    return plan;
}

std::vector<CohortCase> sample_cohort(const CohortSpec& spec, const Config& cfg)
{
    std::vector<CohortCase> out;
    for (const CohortCaseSpec& c : plan_cohort(spec)) {
        try {
            out.push_back({ generate_phantom(c.params, cfg), c.signal_present, c.case_seed, c.index });
        } catch (const Error& e) {
            throw GenerationError("cohort case " + std::to_string(c.index) + ": " + e.what());
        }
    }
    return out;
}

std::vector<IVec3> candidate_sites(const VoxelPhantom& phantom, double min_margin_mm)
{
    const std::size_t n = phantom.labels.size();
    std::vector<std::uint8_t> barrier(n);
    for (std::size_t i = 0; i < n; ++i) {
        const Material m = static_cast<Material>(phantom.labels[i]);
        barrier[i] = (m == Material::Air || m == Material::Skin) ? 1 : 0;
    }
    const std::vector<float> d2 = squared_edt(phantom.dims, barrier);
    const double margin_vox2 = (min_margin_mm / phantom.pitch_mm) * (min_margin_mm / phantom.pitch_mm);

    std::vector<IVec3> sites;
    for (int ix = 0; ix < phantom.dims.x; ++ix)
        for (int iy = 0; iy < phantom.dims.y; ++iy)
            for (int iz = 0; iz < phantom.dims.z; ++iz) {
                const std::size_t i = phantom.index(ix, iy, iz);
                if (phantom.labels[i] == static_cast<std::uint8_t>(Material::Gland) && d2[i] >= margin_vox2)
                    sites.push_back({ ix, iy, iz });
            }
    return sites;
}

double glandular_fraction(const VoxelPhantom& phantom)
{
    std::size_t gland = 0, fat = 0;
    for (std::uint8_t l : phantom.labels) {
        if (l == static_cast<std::uint8_t>(Material::Gland))
            ++gland;
        else if (l == static_cast<std::uint8_t>(Material::Fat))
            ++fat;
    }
    if (gland + fat == 0)
        throw InvalidInputError("glandular_fraction: phantom has no fat or gland voxels");
    return static_cast<double>(gland) / static_cast<double>(gland + fat);
}

} // namespace mammo
