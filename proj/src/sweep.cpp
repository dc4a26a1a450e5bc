#include "mammo/sweep.hpp"

#include "mammo/compress.hpp"
#include "mammo/lesion.hpp"
#include "mammo/parallel.hpp"
#include "mammo/svg.hpp"
#include "mammo/xproj.hpp"

#include <json.hpp>

#include <algorithm>
#include <chrono>
#include <fstream>
#include <map>
#include <set>

namespace mammo {

using nlohmann::json;

namespace {

    double seconds_since(const std::chrono::steady_clock::time_point& t0)
    {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    }

    bool excluded_combo(DensityClass cls, double radius_mm)
    {
        return radius_mm >= 9.0 && (cls == DensityClass::Dense || cls == DensityClass::Hetero);
    }

    std::string point_key(const GridPoint& gp)
    {
        return std::string(class_name(gp.cls)) + "/" + format_mass_radius(gp.mass_radius_mm) + "/"
            + format_mass_density(gp.mass_density) + "/" + std::to_string(gp.dose_percent);
    }

} // namespace

void SweepGrid::validate() const
{
    if (classes.empty() || mass_radii.empty() || mass_densities.empty() || doses.empty())
        throw ConfigError("sweep grid must cover at least one value per axis");
    if (cohort_size < 6)
        throw ConfigError("sweep cohort must have at least 6 cases");
    if (!(signal_fraction > 0 && signal_fraction < 1))
        throw ConfigError("sweep signal fraction must be in (0,1)");
    if (!(dose_scale >= 1))
        throw ConfigError("dose scale must be >= 1");
    if (points().empty())
        throw ConfigError("sweep grid is empty after pruning excluded combinations");
}

std::vector<GridPoint> SweepGrid::points() const
{
    std::vector<GridPoint> out;
    for (DensityClass c : classes)
        for (double r : mass_radii)
            for (double d : mass_densities)
                for (int dose : doses) {
                    if (excluded_combo(c, r))
                        continue;
                    out.push_back({ c, r, d, dose });
                }
    return out;
}

int RunManifest::error_count() const
{
    int n = 0;
    for (const CaseRecord& c : cases)
        n += !c.error.empty();
    return n;
}

std::uint64_t RunManifest::content_hash() const
{
    std::uint64_t h = fnv1a("mammosim-manifest-v1");
    h = fnv1a(std::to_string(base_seed) + "/" + std::to_string(dose_scale) + "/" + std::to_string(cohort_size), h);
    for (const CaseRecord& c : cases) {
        h = fnv1a(point_key(c.gp), h);
        h = fnv1a(std::to_string(c.file_id) + ":" + std::to_string(c.case_seed) + ":" + (c.signal ? "1" : "0"), h);
        h = fnv1a(c.case_dir, h);
        h = fnv1a(c.error, h);
        for (std::size_t i = 0; i < c.files.size(); ++i)
            h = fnv1a(c.files[i] + "=" + std::to_string(i < c.file_hashes.size() ? c.file_hashes[i] : 0), h);
    }
    for (const CellResult& r : results) {
        h = fnv1a(point_key(r.gp), h);
        char buf[160];
        std::snprintf(buf, sizeof buf, "%.12g %.12g %.12g %.12g %d", r.auc, r.variance, r.ci_lo, r.ci_hi, r.n_test);
        h = fnv1a(std::string(buf), h);
        h = fnv1a(r.error, h);
    }
    return h;
}

namespace {

    json grid_point_json(const GridPoint& gp)
    {
        return json {
            { "breast_density", class_name(gp.cls) },
            { "mass_radius_mm", gp.mass_radius_mm },
            { "mass_density", gp.mass_density },
            { "dose_percent", gp.dose_percent },
        };
    }

    GridPoint grid_point_from_json(const json& j)
    {
        GridPoint gp;
        const auto cls = class_from_name(j.at("breast_density").get<std::string>());
        if (!cls)
            throw IoError("manifest: unknown breast density");
        gp.cls = *cls;
        gp.mass_radius_mm = j.at("mass_radius_mm").get<double>();
        gp.mass_density = j.at("mass_density").get<double>();
        gp.dose_percent = j.at("dose_percent").get<int>();
        return gp;
    }

} // namespace

void RunManifest::save_json(const std::filesystem::path& path) const
{
    std::set<std::string> seen;
    for (const CaseRecord& c : cases)
        for (const std::string& f : c.files)
            if (!seen.insert(f).second)
                throw InternalError("manifest lists file twice: " + f);

    json j;
    j["base_seed"] = base_seed;
    j["dose_scale"] = dose_scale;
    j["cohort_size"] = cohort_size;
    j["content_hash"] = content_hash();
    j["cases"] = json::array();
    for (const CaseRecord& c : cases) {
        json jc = grid_point_json(c.gp);
        jc["file_id"] = c.file_id;
        jc["case_seed"] = c.case_seed;
        jc["signal"] = c.signal;
        jc["case_dir"] = c.case_dir;
        jc["files"] = c.files;
        jc["file_hashes"] = c.file_hashes;
        jc["t_phantom_s"] = c.t_phantom_s;
        jc["t_insert_s"] = c.t_insert_s;
        jc["t_compress_s"] = c.t_compress_s;
        jc["t_project_s"] = c.t_project_s;
        jc["error"] = c.error;
        j["cases"].push_back(std::move(jc));
    }
    j["results"] = json::array();
    for (const CellResult& r : results) {
        json jr = grid_point_json(r.gp);
        jr["auc"] = r.auc;
        jr["variance"] = r.variance;
        jr["ci_lo"] = r.ci_lo;
        jr["ci_hi"] = r.ci_hi;
        jr["reader_aucs"] = r.reader_aucs;
        jr["n_test"] = r.n_test;
        jr["error"] = r.error;
        j["results"].push_back(std::move(jr));
    }
    std::ofstream out(path);
    if (!out)
        throw IoError("cannot write " + path.string());
    out << j.dump(1) << "\n";
}

RunManifest RunManifest::load_json(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in)
        throw IoError("cannot open " + path.string());
    json j;
    in >> j;
    RunManifest m;
    m.base_seed = j.at("base_seed").get<std::uint64_t>();
    m.dose_scale = j.at("dose_scale").get<double>();
    m.cohort_size = j.at("cohort_size").get<int>();
    for (const json& jc : j.at("cases")) {
        CaseRecord c;
        c.gp = grid_point_from_json(jc);
        c.file_id = jc.at("file_id").get<int>();
        c.case_seed = jc.at("case_seed").get<std::uint64_t>();
        c.signal = jc.at("signal").get<bool>();
        c.case_dir = jc.at("case_dir").get<std::string>();
        c.files = jc.at("files").get<std::vector<std::string>>();
        c.file_hashes = jc.at("file_hashes").get<std::vector<std::uint64_t>>();
        c.t_phantom_s = jc.at("t_phantom_s").get<double>();
        c.t_insert_s = jc.at("t_insert_s").get<double>();
        c.t_compress_s = jc.at("t_compress_s").get<double>();
        c.t_project_s = jc.at("t_project_s").get<double>();
        c.error = jc.at("error").get<std::string>();
        m.cases.push_back(std::move(c));
    }
    for (const json& jr : j.at("results")) {
        CellResult r;
        r.gp = grid_point_from_json(jr);
        r.auc = jr.at("auc").get<double>();
        r.variance = jr.at("variance").get<double>();
        r.ci_lo = jr.at("ci_lo").get<double>();
        r.ci_hi = jr.at("ci_hi").get<double>();
        r.reader_aucs = jr.at("reader_aucs").get<std::vector<double>>();
        r.n_test = jr.at("n_test").get<int>();
        r.error = jr.at("error").get<std::string>();
        m.results.push_back(std::move(r));
    }
    return m;
}

namespace {

    struct CaseOutput {
        Image2<float> reader_image; // 224x224
        int label = 0;
        std::uint64_t case_id = 0;
        bool ok = false;
    };

    // one end-to-end case: phantom -> (mass) -> compression -> projection,
    // files written under out_dir/case_dir
    void run_case(const GridPoint& gp, const CohortCaseSpec& spec, const Config& cfg,
        const MaterialTable& materials, const Spectrum& spectrum, double dose_scale,
        const std::filesystem::path& out_dir, bool save_phantom,
        CaseRecord& rec, CaseOutput& out)
    {
        namespace fs = std::filesystem;
        const fs::path case_dir = out_dir / rec.case_dir;
        fs::create_directories(case_dir);

        auto t0 = std::chrono::steady_clock::now();
        VoxelPhantom phantom = generate_phantom(spec.params, cfg);
        rec.t_phantom_s = seconds_since(t0);

        if (rec.signal) {
            t0 = std::chrono::steady_clock::now();
            const std::uint64_t mass_seed = derive_seed(spec.case_seed, 1);
            const MassModel mass = generate_mass(gp.mass_radius_mm, spec.params.pitch_mm, mass_seed, gp.mass_density, cfg);
            CounterRng site_rng(spec.case_seed, 2);
            phantom = place_mass(phantom, mass, site_rng, cfg).first;
            rec.t_insert_s = seconds_since(t0);
        }

        t0 = std::chrono::steady_clock::now();
        CompressionSpec comp;
        comp.target_thickness_cm = cfg.for_class(gp.cls).compressed_thickness_mm / 10.0;
        phantom = compress(phantom, comp, cfg);
        rec.t_compress_s = seconds_since(t0);

        t0 = std::chrono::steady_clock::now();
        AcquisitionConfig acq;
        acq.sdd_mm = cfg.sdd_mm;
        acq.det_pitch_mm = cfg.det_pitch_mm;
        acq.det_nx = cfg.det_nx;
        acq.det_ny = cfg.det_ny;
        acq.spectrum = spectrum;
        acq.focal_fwhm_um = cfg.focal_fwhm_um;
        acq.grid = { cfg.grid_ratio, cfg.grid_frequency_lpmm, cfg.grid_enabled, cfg.grid_primary_transmission };
        acq.electronic_noise_sigma = cfg.electronic_noise_sigma;
        acq.detector_thickness_mm = cfg.detector_thickness_mm;
        acq.scatter_mode = ScatterMode::FullTransport;
        acq.histories = std::max<std::uint64_t>(10000,
            static_cast<std::uint64_t>(static_cast<double>(histories_for(gp.dose_percent, gp.cls, cfg)) / dose_scale));
        acq.seed = derive_seed(spec.case_seed, 3);
        acq.threads = 1; // cases run in parallel; keep each projection serial
        const Projection proj = simulate_projection(phantom, acq, materials);
        rec.t_project_s = seconds_since(t0);

        Image2<float> stored(proj.pixels.nx(), proj.pixels.ny());
        for (std::size_t i = 0; i < proj.pixels.size(); ++i)
            stored[i] = static_cast<float>(proj.pixels[i]);
        const fs::path mhd = case_dir / "projection_DM1.mhd";
        write_mhd_raw(Volume::from(stored, acq.det_pitch_mm, ElementType::F32), mhd);
        rec.files.push_back(rec.case_dir + "/projection_DM1.mhd");
        rec.files.push_back(rec.case_dir + "/projection_DM1.raw");
        if (phantom.lesion) {
            write_loc(*phantom.lesion, proj.lesion_px, case_dir / "projection_DM1.loc");
            rec.files.push_back(rec.case_dir + "/projection_DM1.loc");
        }
        if (save_phantom) {
            write_mhd_raw(volume_from_phantom(phantom), case_dir / "phantom.mhd");
            rec.files.push_back(rec.case_dir + "/phantom.mhd");
            rec.files.push_back(rec.case_dir + "/phantom.raw");
        }
        for (const std::string& f : rec.files)
            rec.file_hashes.push_back(hash_file(out_dir / f));

        out.reader_image = downsample_to_reader(proj.pixels);
        out.label = rec.signal ? 1 : 0;
        out.case_id = static_cast<std::uint64_t>(rec.file_id);
        out.ok = true;
    }

    // stratified 4:1:1 split by class label, deterministic in case order
    void split_cases(const std::vector<CaseOutput>& cases, CaseSet& train, CaseSet& val, CaseSet& test, const GridPoint& gp)
    {
        std::vector<std::size_t> pos, neg;
        for (std::size_t i = 0; i < cases.size(); ++i) {
            if (!cases[i].ok)
                continue;
            (cases[i].label ? pos : neg).push_back(i);
        }
        auto assign = [&](const std::vector<std::size_t>& idx, bool flip) {
            const std::size_t n = idx.size();
            const std::size_t n_train = (n * 4 + 3) / 6; // 4/6 of the cohort
            std::size_t n_val = (n - n_train) / 2;
            std::size_t n_test = n - n_train - n_val;
            if (flip)
                std::swap(n_val, n_test);
            for (std::size_t k = 0; k < n; ++k) {
                const CaseOutput& c = cases[idx[k]];
                ReaderCase rc;
                rc.image = c.reader_image;
                rc.label = c.label;
                rc.case_id = c.case_id;
                rc.meta = { gp.cls, c.label ? gp.mass_radius_mm : 0.0, c.label ? gp.mass_density : 0.0, gp.dose_percent };
                if (k < n_train)
                    train.cases.push_back(std::move(rc));
                else if (k < n_train + n_val)
                    val.cases.push_back(std::move(rc));
                else
                    test.cases.push_back(std::move(rc));
            }
        };
        // flip val/test rounding between classes so both splits keep both labels
        assign(pos, false);
        assign(neg, true);
        train.split = Split::Train;
        val.split = Split::Val;
        test.split = Split::Test;
    }

} // namespace

RunManifest run_sweep(const SweepGrid& grid, const std::filesystem::path& out_dir,
    const Config& cfg, const MaterialTable& materials)
{
    grid.validate();
    namespace fs = std::filesystem;
    fs::create_directories(out_dir);
    fs::create_directories(out_dir / "results");

    RunManifest manifest;
    manifest.base_seed = grid.base_seed;
    manifest.dose_scale = grid.dose_scale;
    manifest.cohort_size = grid.cohort_size;

    // per-class spectra, shared read-only across workers
    std::map<DensityClass, Spectrum> spectra;
    for (DensityClass c : kAllClasses) {
        Spectrum s = build_spectrum(cfg.for_class(c).kvp, cfg.filter_um, cfg.data_dir);
        s.prepare();
        spectra.emplace(c, std::move(s));
    }

    const auto points = grid.points();
    const auto bank = ChannelBank::standard();
    const int threads = resolve_threads(grid.threads);

    for (const GridPoint& gp : points) {
        // the cohort depends only on the class (and base seed): the same
        // anatomy is re-imaged at every size/density/dose combination
        CohortSpec cohort;
        cohort.size = grid.cohort_size;
        cohort.signal_present_fraction = grid.signal_fraction;
        cohort.base_seed = derive_seed(grid.base_seed, static_cast<std::uint64_t>(gp.cls));
        cohort.base = PhantomParams::defaults_for(gp.cls, cfg, 0);
        cohort.extent_jitter_mm = cfg.extent_jitter_mm;
        cohort.fraction_jitter = cfg.fraction_jitter;
        const auto plan = plan_cohort(cohort);

        const int n_signal = static_cast<int>(std::count_if(plan.begin(), plan.end(),
            [](const CohortCaseSpec& c) { return c.signal_present; }));

        std::vector<CaseRecord> records(plan.size());
        std::vector<CaseOutput> outputs(plan.size());
        for (std::size_t k = 0; k < plan.size(); ++k) {
            CaseRecord& rec = records[k];
            rec.gp = gp;
            rec.case_seed = plan[k].case_seed;
            rec.signal = plan[k].signal_present;
            // lesion-present cases take the odd file ids
            rec.file_id = rec.signal ? 2 * plan[k].index + 1 : 2 * (plan[k].index - n_signal) + 2;
            rec.case_dir = layout_case_dir(gp, rec.file_id, cfg);
        }

        parallel_for(plan.size(), threads, [&](std::size_t k) {
            try {
                run_case(gp, plan[k], cfg, materials, spectra.at(gp.cls), grid.dose_scale,
                    out_dir, grid.save_phantoms, records[k], outputs[k]);
            } catch (const Error& e) {
                records[k].error = e.what();
            }
        });

        CellResult cell;
        cell.gp = gp;
        if (grid.train_readers) {
            try {
                CaseSet train, val, test;
                split_cases(outputs, train, val, test, gp);
                if (!train.has_both_labels() || !test.has_both_labels())
                    throw DegenerateLabelsError("cell splits lost a class (too many failed cases?)");

                const FeatureSet ft = extract_features(*bank, train, threads);
                const FeatureSet fv = extract_features(*bank, val, threads);
                const FeatureSet fe = extract_features(*bank, test, threads);

                const std::uint64_t cell_seed = derive_seed(grid.base_seed ^ fnv1a(point_key(gp)), 7);
                std::vector<std::vector<double>> score_matrix;
                std::vector<ScoreRow> score_rows;
                std::vector<Reader> readers(static_cast<std::size_t>(cfg.reader_seeds));
                parallel_for(readers.size(), threads, [&](std::size_t r) {
                    readers[r] = train_reader(ft, fv, derive_seed(cell_seed, r), bank);
                });
                for (std::size_t r = 0; r < readers.size(); ++r) {
                    std::vector<double> row(fe.features.size());
                    for (std::size_t i = 0; i < fe.features.size(); ++i) {
                        row[i] = readers[r].score_features(fe.features[i]);
                        score_rows.push_back({ static_cast<int>(r), fe.case_ids[i], fe.labels[i],
                            class_name(gp.cls), gp.mass_radius_mm, gp.mass_density, gp.dose_percent, row[i] });
                    }
                    cell.reader_aucs.push_back(auc(row, fe.labels));
                    score_matrix.push_back(std::move(row));
                }
                const MrmcResult mrmc = mrmc_ci(score_matrix, fe.labels);
                cell.auc = mrmc.auc;
                cell.variance = mrmc.variance;
                cell.ci_lo = mrmc.ci_lo;
                cell.ci_hi = mrmc.ci_hi;
                cell.n_test = static_cast<int>(fe.labels.size());

                std::string cell_name = point_key(gp);
                std::replace(cell_name.begin(), cell_name.end(), '/', '_');
                write_scores_csv(score_rows, out_dir / "results" / ("scores_" + cell_name + ".csv"));
            } catch (const Error& e) {
                cell.error = e.what();
            }
        }
        manifest.results.push_back(std::move(cell));
        for (CaseRecord& r : records)
            manifest.cases.push_back(std::move(r));
    }

    write_trend_outputs(manifest, out_dir);
    manifest.save_json(out_dir / "manifest.json");
    return manifest;
}

std::string timing_report_csv(const RunManifest& manifest)
{
    struct Acc {
        double phantom = 0, insert = 0, compress = 0, project = 0;
        int n = 0, n_insert = 0;
    };
    std::map<std::pair<std::string, std::string>, Acc> acc; // (class, size)
    for (const CaseRecord& c : manifest.cases) {
        if (!c.error.empty())
            continue;
        Acc& a = acc[{ class_name(c.gp.cls), format_mass_radius(c.gp.mass_radius_mm) }];
        a.phantom += c.t_phantom_s;
        a.compress += c.t_compress_s;
        a.project += c.t_project_s;
        ++a.n;
        if (c.signal) {
            a.insert += c.t_insert_s;
            ++a.n_insert;
        }
    }
    std::string out = "breast_density,mass_size_mm,stage,mean_minutes\n";
    char buf[160];
    for (const auto& [key, a] : acc) {
        if (a.n == 0)
            continue;
        const auto emit = [&](const char* stage, double total, int n) {
            if (n == 0)
                return;
            std::snprintf(buf, sizeof buf, "%s,%s,%s,%.6f\n", key.first.c_str(), key.second.c_str(), stage, total / n / 60.0);
            out += buf;
        };
        emit("phantom", a.phantom, a.n);
        emit("insertion", a.insert, a.n_insert);
        emit("compression", a.compress, a.n);
        emit("projection", a.project, a.n);
    }
    return out;
}

void write_trend_outputs(const RunManifest& manifest, const std::filesystem::path& out_dir)
{
    namespace fs = std::filesystem;
    fs::create_directories(out_dir / "results");

    {
        std::ofstream csv(out_dir / "results" / "results.csv");
        csv << "breast_density,mass_radius_mm,mass_density,dose_percent,auc,variance,ci_lo,ci_hi,n_test,error\n";
        char buf[256];
        for (const CellResult& r : manifest.results) {
            std::snprintf(buf, sizeof buf, "%s,%s,%s,%d,%.6f,%.8f,%.6f,%.6f,%d,%s\n",
                class_name(r.gp.cls), format_mass_radius(r.gp.mass_radius_mm).c_str(),
                format_mass_density(r.gp.mass_density).c_str(), r.gp.dose_percent,
                r.auc, r.variance, r.ci_lo, r.ci_hi, r.n_test, r.error.c_str());
            csv << buf;
        }
    }
    {
        std::ofstream t(out_dir / "results" / "timing.csv");
        t << timing_report_csv(manifest);
    }

    auto cells_ok = [&](auto&& pred) {
        std::vector<const CellResult*> out;
        for (const CellResult& r : manifest.results)
            if (r.error.empty() && r.n_test > 0 && pred(r))
                out.push_back(&r);
        return out;
    };
    auto most_common_density = [&]() {
        std::map<double, int> count;
        for (const CellResult& r : manifest.results)
            if (r.error.empty())
                ++count[r.gp.mass_density];
        double best = 1.06;
        int bn = -1;
        for (auto& [d, n] : count)
            if (n > bn) {
                bn = n;
                best = d;
            }
        return best;
    }();
    const int ref_dose = 100;
    const double ref_size = 7.0;

    auto make_series = [&](DensityClass cls, auto&& xs_of, auto&& pred) {
        SvgSeries s;
        s.label = class_name(cls);
        std::map<double, const CellResult*> by_x;
        for (const CellResult* r : cells_ok([&](const CellResult& rr) { return rr.gp.cls == cls && pred(rr); }))
            by_x[xs_of(*r)] = r;
        for (auto& [x, r] : by_x) {
            s.x.push_back(x);
            s.y.push_back(r->auc);
            s.err.push_back((r->ci_hi - r->ci_lo) / 2.0);
        }
        return s;
    };

    // AUC vs mass size, per class, fixed density / 100% dose
    SvgChart size_chart { "AUC vs mass size", "mass radius (mm)", "AUC", {}, {}, 0.0, 1.0 };
    SvgChart dens_chart { "AUC vs mass density", "mass density factor", "AUC", {}, {}, 0.0, 1.0 };
    SvgChart breast_chart { "AUC vs breast density", "breast density class", "AUC", {}, {}, 0.0, 1.0 };
    SvgChart dose_chart { "AUC vs relative dose", "relative dose (%)", "AUC", {}, {}, 0.0, 1.0 };
    for (DensityClass cls : kAllClasses) {
        auto s1 = make_series(
            cls, [](const CellResult& r) { return r.gp.mass_radius_mm; },
            [&](const CellResult& r) { return r.gp.mass_density == most_common_density && r.gp.dose_percent == ref_dose; });
        if (s1.x.size() >= 2)
            size_chart.series.push_back(std::move(s1));
        auto s2 = make_series(
            cls, [](const CellResult& r) { return r.gp.mass_density; },
            [&](const CellResult& r) { return r.gp.mass_radius_mm == ref_size && r.gp.dose_percent == ref_dose; });
        if (s2.x.size() >= 2)
            dens_chart.series.push_back(std::move(s2));
        auto s3 = make_series(
            cls, [](const CellResult& r) { return static_cast<double>(r.gp.dose_percent); },
            [&](const CellResult& r) { return r.gp.mass_radius_mm == ref_size && r.gp.mass_density == most_common_density; });
        if (s3.x.size() >= 2)
            dose_chart.series.push_back(std::move(s3));
    }
    {
        SvgSeries s;
        s.label = "pooled";
        for (DensityClass cls : kAllClasses) {
            for (const CellResult* r : cells_ok([&](const CellResult& rr) {
                     return rr.gp.cls == cls && rr.gp.mass_radius_mm == ref_size
                         && rr.gp.mass_density == most_common_density && rr.gp.dose_percent == ref_dose;
                 })) {
                s.x.push_back(static_cast<double>(cls));
                s.y.push_back(r->auc);
                s.err.push_back((r->ci_hi - r->ci_lo) / 2.0);
                breast_chart.x_tick_labels.push_back(class_name(cls));
            }
        }
        if (s.x.size() >= 2)
            breast_chart.series.push_back(std::move(s));
    }
    if (!size_chart.series.empty())
        write_svg_chart(size_chart, out_dir / "results" / "auc_vs_mass_size.svg");
    if (!dens_chart.series.empty())
        write_svg_chart(dens_chart, out_dir / "results" / "auc_vs_mass_density.svg");
    if (!breast_chart.series.empty())
        write_svg_chart(breast_chart, out_dir / "results" / "auc_vs_breast_density.svg");
    if (!dose_chart.series.empty())
        write_svg_chart(dose_chart, out_dir / "results" / "auc_vs_dose.svg");
}

} // namespace mammo
