#pragma once

#include "mammo/core.hpp"
#include "mammo/rng.hpp"

#include <array>
#include <filesystem>
#include <string>
#include <vector>

namespace mammo {

// Mass attenuation coefficients for one material, split by interaction
// channel, tabulated over energy. Loaded from the bundled plain-text tables
// (columns: energy keV, photoelectric, incoherent, coherent; cm^2/g).
struct AttenuationTable {
    std::string name;
    double density = 0; // g/cm3
    std::vector<double> e_keV, pe, incoh, coh;

    struct Components {
        double pe = 0, incoh = 0, coh = 0;
        double total() const { return pe + incoh + coh; }
    };

    // log-log interpolation; clamped at the table ends
    Components at(double energy_keV) const;
    double mu_rho_total(double energy_keV) const { return at(energy_keV).total(); }

    double e_min() const { return e_keV.front(); }
    double e_max() const { return e_keV.back(); }

    void validate() const;

    static AttenuationTable load(const std::filesystem::path& file);
    // flat synthetic table (tests): constant mu/rho split over the channels
    static AttenuationTable flat(const std::string& name, double density, double pe, double incoh, double coh,
        double e_lo = 4.0, double e_hi = 45.0);
};

// The five phantom materials plus the rhodium filter and selenium converter.
// Mass shares the glandular coefficients; its density is glandular density
// times the lesion's density factor.
class MaterialTable {
public:
    static MaterialTable load(const std::filesystem::path& data_dir);
    static MaterialTable synthetic(const std::array<AttenuationTable, kNumMaterials>& mats,
        AttenuationTable filter, AttenuationTable detector);

    const AttenuationTable& material(Material m) const { return mats_[static_cast<int>(m)]; }
    const AttenuationTable& filter() const { return filter_; }
    const AttenuationTable& detector() const { return detector_; }

    double density(Material m, double mass_density_factor = 1.0) const
    {
        if (m == Material::Mass)
            return mats_[static_cast<int>(Material::Gland)].density * mass_density_factor;
        return mats_[static_cast<int>(m)].density;
    }

    // linear attenuation, 1/cm
    double mu_linear(Material m, double energy_keV, double mass_density_factor = 1.0) const
    {
        const Material lookup = m == Material::Mass ? Material::Gland : m;
        return material(lookup).mu_rho_total(energy_keV) * density(m, mass_density_factor);
    }

private:
    std::array<AttenuationTable, kNumMaterials> mats_ {};
    AttenuationTable filter_ {};
    AttenuationTable detector_ {};
};

// Normalized emission spectrum: relative fluence per discrete energy bin.
struct Spectrum {
    std::vector<double> energy_keV;
    std::vector<double> fluence; // sums to 1
    double kvp = 0;
    std::string anode = "W";
    std::string filter = "Rh";

    void validate() const;
    void normalize();
    double mean_energy() const;

    // inverse-CDF draw of a bin energy; call prepare() first when sampling
    // from several threads
    double sample(CounterRng& rng) const;
    void prepare() const;

    static Spectrum mono(double energy_keV);

private:
    mutable std::vector<double> cdf_; // built lazily
};

// Bundled tungsten anode table filtered through `filter_um` of rhodium via
// Beer-Lambert per bin, then renormalized.
Spectrum build_spectrum(double kvp, double filter_um, const std::filesystem::path& data_dir);

} // namespace mammo
