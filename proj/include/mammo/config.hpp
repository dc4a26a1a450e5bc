#pragma once

#include "mammo/core.hpp"

#include <array>
#include <cstdint>
#include <filesystem>
#include <string>

namespace mammo {

// Per-density-class acquisition and anatomy defaults. One row per class; a
// row can be overridden from the config file.
struct ClassDefaults {
    std::array<double, 3> extent_mm {}; // uncompressed (depth, lateral, craniocaudal)
    double glandular_fraction = 0;
    double compressed_thickness_mm = 0;
    double kvp = 28;
    double histories_100 = 0; // 100% relative dose, original scale
};

struct Config {
    // phantom
    double pitch_mm = 0.85;
    int skin_voxels = 2;
    double noise_cell_mm = 2.5; // coarsest value-noise octave
    int noise_octaves = 3;
    double gland_depth_bias = 1.0; // interior gland preference (plateau)
    double bias_ramp_mm = 6.0; // subcutaneous fat-rich rim width
    double extent_jitter_mm = 1.0; // cohort per-case size variation
    double fraction_jitter = 0.01;

    // lesion
    int spicule_count_min = 10;
    int spicule_count_max = 18;
    double spicule_len_min = 1.2; // × radius, from mass center
    double spicule_len_max = 2.0;
    double spicule_width_min = 0.22; // base half-width, × radius
    double spicule_width_max = 0.38;
    double core_noise_amp = 0.15;
    double site_guard_mm = 5.0; // clearance beyond worst-case mass reach
    double candidate_margin_mm = 5.0; // default for candidate_sites

    // compression
    double bulge_beta = 0.08;

    // acquisition
    double sdd_mm = 650.0;
    double det_pitch_mm = 0.25;
    int det_nx = 448;
    int det_ny = 448;
    double focal_fwhm_um = 300.0;
    double grid_ratio = 5.0;
    double grid_frequency_lpmm = 31.0;
    double grid_primary_transmission = 0.72;
    bool grid_enabled = true;
    double electronic_noise_sigma = 0.1; // pixel units (keV per 1e6 histories)
    double detector_thickness_mm = 0.2;
    double filter_um = 50.0; // rhodium

    // sweep scale
    double dose_scale = 1e4; // histories divided by this at desk scale
    int cohort_size = 150; // 100 train / 25 val / 25 test
    int reader_seeds = 3;

    std::array<ClassDefaults, 4> classes {}; // indexed by DensityClass

    std::filesystem::path data_dir; // material / spectrum tables

    const ClassDefaults& for_class(DensityClass c) const { return classes[static_cast<int>(c)]; }
    ClassDefaults& for_class(DensityClass c) { return classes[static_cast<int>(c)]; }

    static Config defaults();

    // key = value overlay; unknown keys are an error
    void load_file(const std::filesystem::path& path);
    void set(const std::string& key, const std::string& value);
};

// MAMMOSIM_DATA_DIR env var, else the build-time bundled table directory.
std::filesystem::path default_data_dir();

} // namespace mammo
