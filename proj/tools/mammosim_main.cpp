// mammosim: stochastic breast phantoms -> Monte Carlo mammography ->
// reader studies, from one binary. See README.md for examples.

#include "mammo/compress.hpp"
#include "mammo/io.hpp"
#include "mammo/lesion.hpp"
#include "mammo/sweep.hpp"
#include "mammo/xproj.hpp"

#include <CLI11.hpp>

#include <iostream>
#include <map>

using namespace mammo;

namespace {

struct CommonOpts {
    std::string config_file;
    std::string data_dir;
    std::uint64_t seed = 1;
    double dose_scale = 1e4;
    int grid_size = 0; // target voxels along the largest phantom axis
    int threads = 0;
    std::string out = "out";
};

void add_common(CLI::App* cmd, CommonOpts& o)
{
    cmd->add_option("--config", o.config_file, "key=value config file overlay");
    cmd->add_option("--data", o.data_dir, "material/spectrum table directory (or MAMMOSIM_DATA_DIR)");
    cmd->add_option("--seed", o.seed, "base random seed");
    cmd->add_option("--dose-scale", o.dose_scale, "divide per-class history counts by this factor");
    cmd->add_option("--grid-size", o.grid_size, "phantom voxels along the largest extent (sets pitch)");
    cmd->add_option("--threads", o.threads, "worker threads (0 = hardware)");
    cmd->add_option("--out", o.out, "output directory");
}

Config make_config(const CommonOpts& o)
{
    Config cfg = Config::defaults();
    if (!o.config_file.empty())
        cfg.load_file(o.config_file);
    if (!o.data_dir.empty())
        cfg.data_dir = o.data_dir;
    if (o.grid_size > 0) {
        double max_extent = 0;
        for (DensityClass c : kAllClasses)
            for (double e : cfg.for_class(c).extent_mm)
                max_extent = std::max(max_extent, e);
        cfg.pitch_mm = max_extent / o.grid_size;
    }
    cfg.dose_scale = o.dose_scale;
    return cfg;
}

DensityClass parse_class(const std::string& s)
{
    const auto c = class_from_name(s);
    if (!c)
        throw ConfigError("unknown breast density class '" + s + "' (dense/hetero/scattered/fatty)");
    return *c;
}

int cmd_generate(const CommonOpts& o, const std::string& cls_name, double mass_radius, double mass_density, bool no_compress)
{
    const Config cfg = make_config(o);
    const DensityClass cls = parse_class(cls_name);

    PhantomParams params = PhantomParams::defaults_for(cls, cfg, o.seed);
    VoxelPhantom phantom = generate_phantom(params, cfg);
    std::cout << "phantom " << phantom.dims.x << "x" << phantom.dims.y << "x" << phantom.dims.z
              << " @ " << phantom.pitch_mm << " mm, glandular fraction "
              << phantom.glandular_fraction_achieved << "\n";

    if (mass_radius > 0) {
        const MassModel mass = generate_mass(mass_radius, params.pitch_mm, derive_seed(o.seed, 1), mass_density, cfg);
        CounterRng rng(o.seed, 2);
        phantom = place_mass(phantom, mass, rng, cfg).first;
        std::cout << "inserted " << mass_radius << " mm mass (" << mass.voxel_count << " voxels)\n";
    }
    if (!no_compress) {
        CompressionSpec comp { cfg.for_class(cls).compressed_thickness_mm / 10.0 };
        phantom = compress(phantom, comp, cfg);
        std::cout << "compressed to " << phantom.tissue_thickness_mm() << " mm\n";
    }

    std::filesystem::create_directories(o.out);
    const std::filesystem::path mhd = std::filesystem::path(o.out) / "phantom.mhd";
    write_mhd_raw(volume_from_phantom(phantom), mhd);
    if (phantom.lesion)
        write_loc(*phantom.lesion, std::nullopt, std::filesystem::path(o.out) / "phantom.loc");
    std::cout << "wrote " << mhd.string() << "\n";
    return 0;
}

int cmd_project(const CommonOpts& o, const std::string& phantom_mhd, const std::string& cls_name, int dose, bool primary_only)
{
    const Config cfg = make_config(o);
    const DensityClass cls = parse_class(cls_name);
    const MaterialTable materials = MaterialTable::load(cfg.data_dir);

    const Volume vol = read_mhd_raw(phantom_mhd);
    VoxelPhantom phantom;
    phantom.dims = vol.dims;
    phantom.pitch_mm = vol.spacing.x;
    phantom.density_class = cls;
    const auto labels = vol.as<std::uint8_t>();
    phantom.labels.assign(labels.begin(), labels.end());

    AcquisitionConfig acq;
    acq.sdd_mm = cfg.sdd_mm;
    acq.det_pitch_mm = cfg.det_pitch_mm;
    acq.det_nx = cfg.det_nx;
    acq.det_ny = cfg.det_ny;
    acq.spectrum = build_spectrum(cfg.for_class(cls).kvp, cfg.filter_um, cfg.data_dir);
    acq.focal_fwhm_um = cfg.focal_fwhm_um;
    acq.grid = { cfg.grid_ratio, cfg.grid_frequency_lpmm, cfg.grid_enabled, cfg.grid_primary_transmission };
    acq.electronic_noise_sigma = cfg.electronic_noise_sigma;
    acq.detector_thickness_mm = cfg.detector_thickness_mm;
    acq.scatter_mode = primary_only ? ScatterMode::PrimaryOnly : ScatterMode::FullTransport;
    acq.histories = std::max<std::uint64_t>(10000,
        static_cast<std::uint64_t>(static_cast<double>(histories_for(dose, cls, cfg)) / cfg.dose_scale));
    acq.seed = o.seed;
    acq.threads = o.threads;

    const Projection proj = simulate_projection(phantom, acq, materials);
    std::filesystem::create_directories(o.out);
    const std::filesystem::path mhd = std::filesystem::path(o.out) / "projection_DM1.mhd";
    write_mhd_raw(Volume::from(proj.pixels, acq.det_pitch_mm, ElementType::F64), mhd);
    std::cout << "projected " << acq.histories << " histories, detector hits " << proj.detector_hits
              << ", glandular dose " << proj.mean_glandular_dose_estimate << " keV/g\n";
    std::cout << "wrote " << mhd.string() << "\n";
    return 0;
}

int cmd_sweep(const CommonOpts& o, const std::vector<std::string>& classes, const std::vector<double>& radii,
    const std::vector<double>& densities, const std::vector<int>& doses, int cohort, bool save_phantoms, bool no_readers)
{
    const Config cfg = make_config(o);
    const MaterialTable materials = MaterialTable::load(cfg.data_dir);

    SweepGrid grid;
    if (!classes.empty()) {
        grid.classes.clear();
        for (const std::string& s : classes)
            grid.classes.push_back(parse_class(s));
    }
    if (!radii.empty())
        grid.mass_radii = radii;
    if (!densities.empty())
        grid.mass_densities = densities;
    if (!doses.empty())
        grid.doses = doses;
    if (cohort > 0)
        grid.cohort_size = cohort;
    else
        grid.cohort_size = cfg.cohort_size;
    grid.dose_scale = o.dose_scale;
    grid.base_seed = o.seed;
    grid.threads = o.threads;
    grid.save_phantoms = save_phantoms;
    grid.train_readers = !no_readers;

    const RunManifest manifest = run_sweep(grid, o.out, cfg, materials);
    std::cout << "sweep complete: " << manifest.cases.size() << " cases, " << manifest.error_count()
              << " errors, manifest hash " << manifest.content_hash() << "\n";
    for (const CellResult& r : manifest.results) {
        std::cout << "  " << class_name(r.gp.cls) << " r=" << r.gp.mass_radius_mm
                  << " d=" << r.gp.mass_density << " dose=" << r.gp.dose_percent << "%: ";
        if (!r.error.empty())
            std::cout << "error: " << r.error << "\n";
        else if (r.n_test > 0)
            std::cout << "AUC " << r.auc << " [" << r.ci_lo << ", " << r.ci_hi << "]\n";
        else
            std::cout << "images only\n";
    }
    return 0;
}

int cmd_evaluate(const CommonOpts& o, const std::string& scores_csv)
{
    const auto rows = read_scores_csv(scores_csv);
    if (rows.empty())
        throw InvalidInputError("score CSV is empty");

    // group rows into fully-crossed studies per subgroup
    std::map<std::string, std::vector<ScoreRow>> groups;
    for (const ScoreRow& r : rows)
        groups[r.breast_density + "/" + format_mass_radius(r.mass_size) + "/" + format_mass_density(r.mass_density) + "/" + std::to_string(r.dose_percent)].push_back(r);

    std::filesystem::create_directories(o.out);
    std::ofstream out(std::filesystem::path(o.out) / "evaluation.csv");
    out << "subgroup,auc,variance,ci_lo,ci_hi,readers,cases\n";
    for (auto& [key, g] : groups) {
        std::map<std::uint64_t, int> case_label;
        std::map<int, std::map<std::uint64_t, double>> by_reader;
        for (const ScoreRow& r : g) {
            case_label[r.case_id] = r.label;
            by_reader[r.reader_id][r.case_id] = r.score;
        }
        std::vector<int> labels;
        std::vector<std::uint64_t> ids;
        for (auto& [id, l] : case_label) {
            ids.push_back(id);
            labels.push_back(l);
        }
        std::vector<std::vector<double>> matrix;
        for (auto& [rid, scores] : by_reader) {
            std::vector<double> row;
            for (std::uint64_t id : ids) {
                const auto it = scores.find(id);
                if (it == scores.end())
                    throw DesignError("score matrix incomplete for subgroup " + key);
                row.push_back(it->second);
            }
            matrix.push_back(std::move(row));
        }
        const MrmcResult m = mrmc_ci(matrix, labels);
        out << key << "," << m.auc << "," << m.variance << "," << m.ci_lo << "," << m.ci_hi
            << "," << matrix.size() << "," << labels.size() << "\n";
        std::cout << key << ": AUC " << m.auc << " [" << m.ci_lo << ", " << m.ci_hi << "]\n";
    }
    return 0;
}

int cmd_moments(const CommonOpts& o, const std::vector<std::string>& files)
{
    std::filesystem::create_directories(o.out);
    std::ofstream out(std::filesystem::path(o.out) / "moments.csv");
    out << "file,mean,variance,skewness,kurtosis,hyperskewness\n";
    for (const std::string& f : files) {
        const Volume v = read_mhd_raw(f);
        Image2<double> img(v.dims.x, v.dims.y * (v.ndims == 3 ? v.dims.z : 1));
        if (v.type == ElementType::F64) {
            const auto d = v.as<double>();
            std::copy(d.begin(), d.end(), img.data().begin());
        } else if (v.type == ElementType::F32) {
            const auto d = v.as<float>();
            std::copy(d.begin(), d.end(), img.data().begin());
        } else if (v.type == ElementType::U8) {
            const auto d = v.as<std::uint8_t>();
            std::copy(d.begin(), d.end(), img.data().begin());
        } else {
            const auto d = v.as<std::uint16_t>();
            std::copy(d.begin(), d.end(), img.data().begin());
        }
        const Moments m = image_moments(img);
        out << f << "," << m.mean << "," << m.variance << "," << m.skewness << "," << m.kurtosis
            << "," << m.hyperskewness << "\n";
        std::cout << f << ": mean " << m.mean << " var " << m.variance << " skew " << m.skewness
                  << " kurt " << m.kurtosis << " hyper " << m.hyperskewness << "\n";
    }
    return 0;
}

int cmd_report(const CommonOpts& o, const std::string& manifest_path)
{
    const RunManifest manifest = RunManifest::load_json(manifest_path);
    std::filesystem::create_directories(o.out);
    write_trend_outputs(manifest, o.out);
    std::cout << timing_report_csv(manifest);
    std::cout << "cases " << manifest.cases.size() << ", errors " << manifest.error_count()
              << ", content hash " << manifest.content_hash() << "\n";
    return 0;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app { "in silico mammography pipeline: phantoms, Monte Carlo projection, reader studies" };
    app.require_subcommand(1);

    CommonOpts common;

    auto* gen = app.add_subcommand("generate", "generate a voxel breast phantom (optionally with a mass)");
    std::string cls_name = "fatty";
    double mass_radius = 0, mass_density = 1.06;
    bool no_compress = false;
    add_common(gen, common);
    gen->add_option("--class", cls_name, "breast density class");
    gen->add_option("--mass-radius", mass_radius, "insert a spiculated mass of this radius (mm)");
    gen->add_option("--mass-density", mass_density, "mass density factor");
    gen->add_flag("--no-compress", no_compress, "skip craniocaudal compression");

    auto* proj = app.add_subcommand("project", "Monte Carlo projection of a phantom volume");
    std::string phantom_mhd;
    int dose = 100;
    bool primary_only = false;
    add_common(proj, common);
    proj->add_option("--phantom", phantom_mhd, "phantom .mhd path")->required();
    proj->add_option("--class", cls_name, "breast density class (kVp / dose table row)");
    proj->add_option("--dose", dose, "relative dose percent (20/40/60/80/100)");
    proj->add_flag("--primary-only", primary_only, "deterministic primary-only mode");

    auto* swp = app.add_subcommand("sweep", "run a parameter-grid sweep with reader studies");
    std::vector<std::string> classes;
    std::vector<double> radii, densities;
    std::vector<int> doses;
    int cohort = 0;
    bool save_phantoms = false, no_readers = false;
    add_common(swp, common);
    swp->add_option("--classes", classes, "breast density classes")->delimiter(',');
    swp->add_option("--radii", radii, "mass radii (mm)")->delimiter(',');
    swp->add_option("--densities", densities, "mass density factors")->delimiter(',');
    swp->add_option("--doses", doses, "relative doses (percent)")->delimiter(',');
    swp->add_option("--cohort", cohort, "cases per grid point");
    swp->add_flag("--save-phantoms", save_phantoms, "also write compressed phantom volumes");
    swp->add_flag("--no-readers", no_readers, "skip reader training (images only)");

    auto* eval = app.add_subcommand("evaluate", "MRMC evaluation of a score CSV (e.g. external model scores)");
    std::string scores_csv;
    add_common(eval, common);
    eval->add_option("--scores", scores_csv, "score matrix CSV")->required();

    auto* mom = app.add_subcommand("moments", "pixel-distribution moments of projection images");
    std::vector<std::string> files;
    add_common(mom, common);
    mom->add_option("files", files, "projection .mhd files")->required();

    auto* rep = app.add_subcommand("report", "re-emit results/timing/plots from a manifest");
    std::string manifest_path;
    add_common(rep, common);
    rep->add_option("--manifest", manifest_path, "manifest.json path")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (gen->parsed())
            return cmd_generate(common, cls_name, mass_radius, mass_density, no_compress);
        if (proj->parsed())
            return cmd_project(common, phantom_mhd, cls_name, dose, primary_only);
        if (swp->parsed())
            return cmd_sweep(common, classes, radii, densities, doses, cohort, save_phantoms, no_readers);
        if (eval->parsed())
            return cmd_evaluate(common, scores_csv);
        if (mom->parsed())
            return cmd_moments(common, files);
        if (rep->parsed())
            return cmd_report(common, manifest_path);
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
