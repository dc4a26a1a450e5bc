#pragma once

#include "mammo/config.hpp"
#include "mammo/io.hpp"
#include "mammo/materials.hpp"
#include "mammo/reader.hpp"

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace mammo {

// Cross-product parameter grid. Mass sizes that cannot fit their class
// ((dense,9mm) and (hetero,9mm)) are pruned automatically.
struct SweepGrid {
    std::vector<DensityClass> classes { DensityClass::Dense, DensityClass::Hetero, DensityClass::Scattered, DensityClass::Fatty };
    std::vector<double> mass_radii { 5.0, 7.0, 9.0 };
    std::vector<double> mass_densities { 1.0, 1.06, 1.1 };
    std::vector<int> doses { 20, 40, 60, 80, 100 };
    int cohort_size = 150;
    double signal_fraction = 0.5;
    double dose_scale = 1e4;
    std::uint64_t base_seed = 1;
    int threads = 0; // 0 = hardware
    bool save_phantoms = false;
    bool train_readers = true;

    void validate() const;
    std::vector<GridPoint> points() const; // pruned, deterministic order
};

struct CaseRecord {
    GridPoint gp;
    int file_id = 0;
    std::uint64_t case_seed = 0;
    bool signal = false;
    std::string case_dir; // relative to out_dir
    std::vector<std::string> files; // relative paths
    std::vector<std::uint64_t> file_hashes;
    double t_phantom_s = 0, t_insert_s = 0, t_compress_s = 0, t_project_s = 0;
    std::string error; // empty = ok
};

struct CellResult {
    GridPoint gp;
    double auc = 0, variance = 0, ci_lo = 0, ci_hi = 0;
    std::vector<double> reader_aucs;
    int n_test = 0;
    std::string error;
};

struct RunManifest {
    std::uint64_t base_seed = 0;
    double dose_scale = 0;
    int cohort_size = 0;
    std::vector<CaseRecord> cases;
    std::vector<CellResult> results;

    int error_count() const;
    // stable digest of everything the sweep emitted, timing fields excluded
    std::uint64_t content_hash() const;

    void save_json(const std::filesystem::path& path) const;
    static RunManifest load_json(const std::filesystem::path& path);
};

RunManifest run_sweep(const SweepGrid& grid, const std::filesystem::path& out_dir,
    const Config& cfg, const MaterialTable& materials);

// mean wall-clock minutes per stage by (density class, mass size)
std::string timing_report_csv(const RunManifest& manifest);

// results.csv plus the four AUC trend charts (mass size, mass density,
// breast density, dose), one series per breast density where data exists
void write_trend_outputs(const RunManifest& manifest, const std::filesystem::path& out_dir);

} // namespace mammo
