#include "mammo/config.hpp"

#include <cstdlib>
#include <fstream>
#include <sstream>

namespace mammo {

std::optional<DensityClass> class_from_name(const std::string& name)
{
    for (DensityClass c : kAllClasses)
        if (name == class_name(c))
            return c;
    return std::nullopt;
}

std::filesystem::path default_data_dir()
{
    if (const char* env = std::getenv("MAMMOSIM_DATA_DIR"); env && *env)
        return env;
#ifdef MAMMOSIM_DATA_DIR
    return MAMMOSIM_DATA_DIR;
#else
    return "data";
#endif
}

Config Config::defaults()
{
    Config c;
    c.data_dir = default_data_dir();

    // Uncompressed extents order the class volumes fatty > scattered >
    // hetero > dense, leave headroom above each compression target, and set
    // the deep-tissue clearance that decides which mass sizes fit: dense and
    // hetero interiors max out between the 7 mm and 9 mm site requirements,
    // scattered and fatty clear the 9 mm requirement. Glandular fractions
    // are placeholders chosen to order the classes correctly; adjust via
    // config file when measured values are available. The fatty 100%-dose
    // history count is the anchored reference; the other rows are nominal
    // and user-supplied.
    auto& dense = c.for_class(DensityClass::Dense);
    dense = { { 52.0, 52.0, 50.0 }, 0.50, 35.0, 30.0, 1.55e10 };
    auto& hetero = c.for_class(DensityClass::Hetero);
    hetero = { { 62.0, 62.0, 50.0 }, 0.34, 45.0, 30.0, 1.70e10 };
    auto& scattered = c.for_class(DensityClass::Scattered);
    scattered = { { 72.0, 72.0, 60.0 }, 0.17, 55.0, 28.0, 2.04e10 };
    auto& fatty = c.for_class(DensityClass::Fatty);
    fatty = { { 86.0, 86.0, 66.0 }, 0.07, 60.0, 28.0, 2.22e10 };
    return c;
}

namespace {

    double parse_double(const std::string& key, const std::string& v)
    {
        try {
            std::size_t pos = 0;
            const double d = std::stod(v, &pos);
            while (pos < v.size() && std::isspace(static_cast<unsigned char>(v[pos])))
                ++pos;
            if (pos != v.size())
                throw std::invalid_argument(v);
            return d;
        } catch (const std::exception&) {
            throw ConfigError("config key '" + key + "': cannot parse number from '" + v + "'");
        }
    }

    int parse_int(const std::string& key, const std::string& v)
    {
        const double d = parse_double(key, v);
        const int i = static_cast<int>(d);
        if (static_cast<double>(i) != d)
            throw ConfigError("config key '" + key + "': expected integer, got '" + v + "'");
        return i;
    }

    std::array<double, 3> parse_vec3(const std::string& key, const std::string& v)
    {
        std::istringstream is(v);
        std::array<double, 3> out {};
        if (!(is >> out[0] >> out[1] >> out[2]))
            throw ConfigError("config key '" + key + "': expected three numbers, got '" + v + "'");
        return out;
    }

} // namespace

void Config::set(const std::string& key, const std::string& value)
{
    // class-scoped keys: <class>.<field>
    if (const auto dot = key.find('.'); dot != std::string::npos) {
        if (auto cls = class_from_name(key.substr(0, dot))) {
            ClassDefaults& row = for_class(*cls);
            const std::string field = key.substr(dot + 1);
            if (field == "extent_mm")
                row.extent_mm = parse_vec3(key, value);
            else if (field == "glandular_fraction")
                row.glandular_fraction = parse_double(key, value);
            else if (field == "compressed_thickness_mm")
                row.compressed_thickness_mm = parse_double(key, value);
            else if (field == "kvp")
                row.kvp = parse_double(key, value);
            else if (field == "histories_100")
                row.histories_100 = parse_double(key, value);
            else
                throw ConfigError("unknown config key '" + key + "'");
            return;
        }
    }

    if (key == "pitch_mm")
        pitch_mm = parse_double(key, value);
    else if (key == "skin_voxels")
        skin_voxels = parse_int(key, value);
    else if (key == "noise_cell_mm")
        noise_cell_mm = parse_double(key, value);
    else if (key == "noise_octaves")
        noise_octaves = parse_int(key, value);
    else if (key == "gland_depth_bias")
        gland_depth_bias = parse_double(key, value);
    else if (key == "extent_jitter_mm")
        extent_jitter_mm = parse_double(key, value);
    else if (key == "fraction_jitter")
        fraction_jitter = parse_double(key, value);
    else if (key == "spicule_count_min")
        spicule_count_min = parse_int(key, value);
    else if (key == "spicule_count_max")
        spicule_count_max = parse_int(key, value);
    else if (key == "spicule_len_min")
        spicule_len_min = parse_double(key, value);
    else if (key == "spicule_len_max")
        spicule_len_max = parse_double(key, value);
    else if (key == "spicule_width_min")
        spicule_width_min = parse_double(key, value);
    else if (key == "spicule_width_max")
        spicule_width_max = parse_double(key, value);
    else if (key == "core_noise_amp")
        core_noise_amp = parse_double(key, value);
    else if (key == "site_guard_mm")
        site_guard_mm = parse_double(key, value);
    else if (key == "candidate_margin_mm")
        candidate_margin_mm = parse_double(key, value);
    else if (key == "bulge_beta")
        bulge_beta = parse_double(key, value);
    else if (key == "sdd_mm")
        sdd_mm = parse_double(key, value);
    else if (key == "det_pitch_mm")
        det_pitch_mm = parse_double(key, value);
    else if (key == "det_nx")
        det_nx = parse_int(key, value);
    else if (key == "det_ny")
        det_ny = parse_int(key, value);
    else if (key == "focal_fwhm_um")
        focal_fwhm_um = parse_double(key, value);
    else if (key == "grid_ratio")
        grid_ratio = parse_double(key, value);
    else if (key == "grid_frequency_lpmm")
        grid_frequency_lpmm = parse_double(key, value);
    else if (key == "grid_primary_transmission")
        grid_primary_transmission = parse_double(key, value);
    else if (key == "grid_enabled")
        grid_enabled = parse_int(key, value) != 0;
    else if (key == "electronic_noise_sigma")
        electronic_noise_sigma = parse_double(key, value);
    else if (key == "detector_thickness_mm")
        detector_thickness_mm = parse_double(key, value);
    else if (key == "filter_um")
        filter_um = parse_double(key, value);
    else if (key == "dose_scale")
        dose_scale = parse_double(key, value);
    else if (key == "cohort_size")
        cohort_size = parse_int(key, value);
    else if (key == "reader_seeds")
        reader_seeds = parse_int(key, value);
    else if (key == "data_dir")
        data_dir = value;
    else
        throw ConfigError("unknown config key '" + key + "'");
}

void Config::load_file(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in)
        throw ConfigError("cannot open config file " + path.string());
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (const auto hash = line.find('#'); hash != std::string::npos)
            line.erase(hash);
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            bool blank = true;
            for (char ch : line)
                if (!std::isspace(static_cast<unsigned char>(ch)))
                    blank = false;
            if (blank)
                continue;
            throw ConfigError(path.string() + ":" + std::to_string(lineno) + ": expected key = value");
        }
        auto trim = [](std::string s) {
            const auto b = s.find_first_not_of(" \t\r");
            const auto e = s.find_last_not_of(" \t\r");
            return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
        };
        set(trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
    }
}

} // namespace mammo
