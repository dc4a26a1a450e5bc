#pragma once

#include "mammo/config.hpp"
#include "mammo/materials.hpp"
#include "mammo/phantom.hpp"

#include <array>
#include <cstdint>
#include <optional>

namespace mammo {

// PrimaryOnly integrates exp(-mu t) deterministically along each sampled ray
// (no collisions), which doubles as an analytic oracle for the full chain.
// FullTransport is the collision-by-collision mode: Woodcock tracking,
// photoelectric absorption, Klein-Nishina Compton, coherent redirects.
enum class ScatterMode {
    PrimaryOnly,
    FullTransport,
};

struct GridSpec {
    double ratio = 5.0;
    double frequency_lpmm = 31.0;
    bool enabled = true;
    double primary_transmission = 0.72;
};

struct AcquisitionConfig {
    double sdd_mm = 650.0; // source to detector
    double det_pitch_mm = 0.25;
    int det_nx = 448;
    int det_ny = 448;
    std::uint64_t histories = 1000000;
    Spectrum spectrum;
    double focal_fwhm_um = 300.0;
    GridSpec grid;
    double electronic_noise_sigma = 0.5; // pixel units
    ScatterMode scatter_mode = ScatterMode::FullTransport;
    bool fluorescence = false; // detector K-fluorescence escape
    double detector_thickness_mm = 0.2;
    std::uint64_t seed = 0;
    int threads = 1;
    std::uint64_t batch_size = 1u << 16;

    void validate() const;
};

// Energy bookkeeping over a run, absolute keV. Every emitted keV lands in
// exactly one bucket.
struct DoseTally {
    double emitted = 0;
    std::array<double, kNumMaterials> deposited {}; // by phantom material
    double detector = 0;
    double grid_absorbed = 0;
    double escaped = 0;

    double phantom_total() const
    {
        double s = 0;
        for (double d : deposited)
            s += d;
        return s;
    }
    double glandular() const { return deposited[static_cast<int>(Material::Gland)]; }
    double accounted() const { return phantom_total() + detector + grid_absorbed + escaped; }

    void add(const DoseTally& o)
    {
        emitted += o.emitted;
        for (int i = 0; i < kNumMaterials; ++i)
            deposited[i] += o.deposited[i];
        detector += o.detector;
        grid_absorbed += o.grid_absorbed;
        escaped += o.escaped;
    }
};

// Pixel units are keV deposited per 10^6 histories, so images taken at
// different dose levels are directly comparable.
struct Projection {
    Image2<double> pixels;
    Image2<double> primary_pixels; // scatter-free component; == pixels in PrimaryOnly
    std::optional<std::array<double, 2>> lesion_px;
    double mean_glandular_dose_estimate = 0; // keV per gram of gland, absolute over the run
    std::uint64_t seed = 0;
    std::uint64_t histories = 0;
    ScatterMode scatter_mode = ScatterMode::FullTransport;
    DoseTally tally;
    std::uint64_t detector_hits = 0;
};

Projection simulate_projection(const VoxelPhantom& phantom, const AcquisitionConfig& config, const MaterialTable& materials);

// class 100%-dose history count scaled linearly by the relative dose
std::uint64_t histories_for(int relative_dose_percent, DensityClass cls, const Config& cfg);

// energy deposited in gland voxels over the run, keV; FullTransport only
double glandular_dose_estimate(const VoxelPhantom& phantom, const AcquisitionConfig& config, const MaterialTable& materials);

// unit-testable pieces of the chain
Vec3 apply_focal_blur(const Vec3& origin, double fwhm_um, CounterRng& rng);
double grid_transmission(const GridSpec& grid, bool primary, double tan_deviation);
void add_electronic_noise(Image2<double>& pixels, double sigma, std::uint64_t seed);

} // namespace mammo
