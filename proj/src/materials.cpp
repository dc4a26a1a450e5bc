#include "mammo/materials.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

namespace mammo {

namespace {

    // log-log interpolation of one channel between bracketing rows; linear
    // fallback when a sample is zero (synthetic tables)
    double interp_channel(const std::vector<double>& e, const std::vector<double>& v, std::size_t i, double energy)
    {
        const double e0 = e[i], e1 = e[i + 1];
        if (e1 <= e0)
            return v[i + 1]; // duplicated edge row: take the right side
        const double t = (energy - e0) / (e1 - e0);
        if (v[i] > 0 && v[i + 1] > 0) {
            const double tl = (std::log(energy) - std::log(e0)) / (std::log(e1) - std::log(e0));
            return std::exp(std::log(v[i]) + tl * (std::log(v[i + 1]) - std::log(v[i])));
        }
        return v[i] + t * (v[i + 1] - v[i]);
    }

} // namespace

AttenuationTable::Components AttenuationTable::at(double energy_keV) const
{
    if (e_keV.empty())
        throw InternalError("attenuation table '" + name + "' is empty");
    if (energy_keV <= e_keV.front())
        return { pe.front(), incoh.front(), coh.front() };
    if (energy_keV >= e_keV.back())
        return { pe.back(), incoh.back(), coh.back() };
    const auto it = std::upper_bound(e_keV.begin(), e_keV.end(), energy_keV);
    const std::size_t i = static_cast<std::size_t>(it - e_keV.begin()) - 1;
    return {
        interp_channel(e_keV, pe, i, energy_keV),
        interp_channel(e_keV, incoh, i, energy_keV),
        interp_channel(e_keV, coh, i, energy_keV),
    };
}

void AttenuationTable::validate() const
{
    if (e_keV.size() < 2 || e_keV.size() != pe.size() || e_keV.size() != incoh.size() || e_keV.size() != coh.size())
        throw IoError("attenuation table '" + name + "': inconsistent column lengths");
    if (!(density > 0))
        throw IoError("attenuation table '" + name + "': density must be positive");
    for (std::size_t i = 0; i < e_keV.size(); ++i) {
        if (i > 0 && e_keV[i] < e_keV[i - 1])
            throw IoError("attenuation table '" + name + "': energies must be non-decreasing");
        if (pe[i] < 0 || incoh[i] < 0 || coh[i] < 0)
            throw IoError("attenuation table '" + name + "': negative coefficient");
    }
    if (e_keV.front() > 5.0 || e_keV.back() < 40.0)
        throw IoError("attenuation table '" + name + "': must cover 5-40 keV");
}

AttenuationTable AttenuationTable::load(const std::filesystem::path& file)
{
    std::ifstream in(file);
    if (!in)
        throw IoError("cannot open attenuation table " + file.string());
    AttenuationTable t;
    t.name = file.stem().string();
    std::string line;
    while (std::getline(in, line)) {
        if (const auto hash = line.find('#'); hash != std::string::npos)
            line.erase(hash);
        std::istringstream is(line);
        std::string first;
        if (!(is >> first))
            continue;
        if (first == "density") {
            if (!(is >> t.density))
                throw IoError(file.string() + ": bad density line");
            continue;
        }
        if (first == "name") {
            is >> t.name;
            continue;
        }
        double e = 0, a = 0, b = 0, c = 0;
        try {
            e = std::stod(first);
        } catch (const std::exception&) {
            throw IoError(file.string() + ": unexpected token '" + first + "'");
        }
        if (!(is >> a >> b >> c))
            throw IoError(file.string() + ": expected 4 columns per row");
        t.e_keV.push_back(e);
        t.pe.push_back(a);
        t.incoh.push_back(b);
        t.coh.push_back(c);
    }
    t.validate();
    return t;
}

AttenuationTable AttenuationTable::flat(const std::string& name, double density, double pe, double incoh, double coh,
    double e_lo, double e_hi)
{
    AttenuationTable t;
    t.name = name;
    t.density = density;
    t.e_keV = { e_lo, e_hi };
    t.pe = { pe, pe };
    t.incoh = { incoh, incoh };
    t.coh = { coh, coh };
    t.validate();
    return t;
}

MaterialTable MaterialTable::load(const std::filesystem::path& data_dir)
{
    MaterialTable t;
    t.mats_[static_cast<int>(Material::Air)] = AttenuationTable::load(data_dir / "mat_air.txt");
    t.mats_[static_cast<int>(Material::Skin)] = AttenuationTable::load(data_dir / "mat_skin.txt");
    t.mats_[static_cast<int>(Material::Fat)] = AttenuationTable::load(data_dir / "mat_adipose.txt");
    t.mats_[static_cast<int>(Material::Gland)] = AttenuationTable::load(data_dir / "mat_glandular.txt");
    t.mats_[static_cast<int>(Material::Mass)] = t.mats_[static_cast<int>(Material::Gland)];
    t.mats_[static_cast<int>(Material::Mass)].name = "mass";
    t.filter_ = AttenuationTable::load(data_dir / "filter_rh.txt");
    t.detector_ = AttenuationTable::load(data_dir / "detector_se.txt");
    return t;
}

MaterialTable MaterialTable::synthetic(const std::array<AttenuationTable, kNumMaterials>& mats,
    AttenuationTable filter, AttenuationTable detector)
{
    MaterialTable t;
    t.mats_ = mats;
    t.filter_ = std::move(filter);
    t.detector_ = std::move(detector);
    return t;
}

void Spectrum::validate() const
{
    if (energy_keV.empty() || energy_keV.size() != fluence.size())
        throw ConfigError("spectrum: empty or mismatched bins");
    double sum = 0;
    for (std::size_t i = 0; i < fluence.size(); ++i) {
        if (fluence[i] < 0)
            throw ConfigError("spectrum: negative fluence");
        if (energy_keV[i] > kvp + 1e-9)
            throw ConfigError("spectrum: bin energy above kVp");
        sum += fluence[i];
    }
    if (std::abs(sum - 1.0) > 1e-9)
        throw ConfigError("spectrum: fluence must be normalized");
}

void Spectrum::normalize()
{
    double sum = 0;
    for (double f : fluence)
        sum += f;
    if (sum <= 0)
        throw ConfigError("spectrum: zero total fluence");
    for (double& f : fluence)
        f /= sum;
    cdf_.clear();
}

double Spectrum::mean_energy() const
{
    double m = 0;
    for (std::size_t i = 0; i < fluence.size(); ++i)
        m += energy_keV[i] * fluence[i];
    return m;
}

void Spectrum::prepare() const
{
    if (!cdf_.empty())
        return;
    cdf_.resize(fluence.size());
    double acc = 0;
    for (std::size_t i = 0; i < fluence.size(); ++i) {
        acc += fluence[i];
        cdf_[i] = acc;
    }
    cdf_.back() = 1.0;
}

double Spectrum::sample(CounterRng& rng) const
{
    prepare();
    const double u = rng.uniform();
    const auto it = std::lower_bound(cdf_.begin(), cdf_.end(), u);
    const std::size_t i = std::min(static_cast<std::size_t>(it - cdf_.begin()), cdf_.size() - 1);
    return energy_keV[i];
}

Spectrum Spectrum::mono(double energy_keV)
{
    Spectrum s;
    s.energy_keV = { energy_keV };
    s.fluence = { 1.0 };
    s.kvp = energy_keV;
    s.anode = "mono";
    s.filter = "none";
    return s;
}

Spectrum build_spectrum(double kvp, double filter_um, const std::filesystem::path& data_dir)
{
    if (filter_um < 0)
        throw ConfigError("filter thickness must be non-negative");

    const std::filesystem::path file = data_dir / "anode_w.txt";
    std::ifstream in(file);
    if (!in)
        throw IoError("cannot open anode spectrum table " + file.string());

    std::vector<double> kvps; // column voltages, from the header
    Spectrum s;
    s.kvp = kvp;
    std::string line;
    int col = -1;
    while (std::getline(in, line)) {
        if (const auto hash = line.find('#'); hash != std::string::npos)
            line.erase(hash);
        std::istringstream is(line);
        std::string first;
        if (!(is >> first))
            continue;
        if (first == "kvp") {
            double v = 0;
            while (is >> v)
                kvps.push_back(v);
            for (std::size_t i = 0; i < kvps.size(); ++i)
                if (std::abs(kvps[i] - kvp) < 1e-9)
                    col = static_cast<int>(i);
            if (col < 0) {
                std::string avail;
                for (double v2 : kvps)
                    avail += " " + std::to_string(v2);
                throw ConfigError("kvp " + std::to_string(kvp) + " not in anode table (available:" + avail + ")");
            }
            continue;
        }
        const double e = std::stod(first);
        std::vector<double> vals;
        double v = 0;
        while (is >> v)
            vals.push_back(v);
        if (static_cast<int>(vals.size()) <= col)
            throw IoError(file.string() + ": row with too few columns");
        if (e > kvp + 1e-9 || vals[col] <= 0)
            continue;
        s.energy_keV.push_back(e);
        s.fluence.push_back(vals[col]);
    }
    if (col < 0)
        throw IoError(file.string() + ": missing kvp header row");
    if (s.energy_keV.empty())
        throw ConfigError("anode table has no bins at or below " + std::to_string(kvp) + " kVp");

    if (filter_um > 0) {
        const AttenuationTable rh = AttenuationTable::load(data_dir / "filter_rh.txt");
        const double t_cm = filter_um * 1e-4;
        for (std::size_t i = 0; i < s.energy_keV.size(); ++i)
            s.fluence[i] *= std::exp(-rh.mu_rho_total(s.energy_keV[i]) * rh.density * t_cm);
    }
    s.normalize();
    s.validate();
    return s;
}

} // namespace mammo
