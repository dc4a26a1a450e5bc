// Regenerates the bundled attenuation and spectrum tables in data/.
//
// Tissue cross sections use a compact parameterization rather than a
// transcription of a reference database: incoherent scattering is the free-
// electron Klein-Nishina cross section times electrons per gram, and the
// photoelectric / coherent channels are power laws in energy with elemental
// Z mixing, calibrated against water reference values at 20 keV. Rhodium and
// selenium get dedicated anchored fits with K-edge jumps. Accuracy is a few
// percent over 5-40 keV, which is adequate for the imaging chain here; swap
// in measured tables through MAMMOSIM_DATA_DIR when exact values matter.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

namespace {

struct ElementFraction {
    int z;
    double a; // atomic mass
    double w; // mass fraction
};

struct MaterialSpec {
    std::string file;
    std::string name;
    double density;
    std::vector<ElementFraction> comp;
};

constexpr double kElectronRestKeV = 510.998950;
constexpr double kAvogadro = 6.02214076e23;

// total Klein-Nishina cross section per free electron, cm^2
double kn_total_cm2(double energy_keV)
{
    const double k = energy_keV / kElectronRestKeV;
    const double k2 = k * k;
    const double lk = std::log(1.0 + 2.0 * k);
    const double f = (1.0 + k) / k2 * (2.0 * (1.0 + k) / (1.0 + 2.0 * k) - lk / k)
        + lk / (2.0 * k)
        - (1.0 + 3.0 * k) / ((1.0 + 2.0 * k) * (1.0 + 2.0 * k));
    const double re2 = 7.94077e-26; // classical electron radius squared, cm^2
    return 2.0 * M_PI * re2 * f;
}

double electrons_per_gram(const std::vector<ElementFraction>& comp)
{
    double za = 0;
    for (const auto& e : comp)
        za += e.w * e.z / e.a;
    return kAvogadro * za;
}

// water calibration sums for the photoelectric / coherent Z-mixing laws
double pe_mix(const std::vector<ElementFraction>& comp)
{
    double s = 0;
    for (const auto& e : comp)
        s += e.w * (e.z / e.a) * std::pow(e.z, 3.8);
    return s;
}

double coh_mix(const std::vector<ElementFraction>& comp)
{
    double s = 0;
    for (const auto& e : comp)
        s += e.w * (e.z / e.a) * std::pow(e.z, 1.9);
    return s;
}

const std::vector<ElementFraction> kWater = { { 1, 1.008, 0.1119 }, { 8, 15.999, 0.8881 } };
constexpr double kWaterPe20 = 0.5437; // cm^2/g at 20 keV
constexpr double kWaterCoh20 = 0.0575;
constexpr double kPeExponent = 3.17;
constexpr double kCohExponent = 1.65;

void write_tissue(const std::filesystem::path& dir, const MaterialSpec& m)
{
    const double pe_scale = kWaterPe20 * pe_mix(m.comp) / pe_mix(kWater);
    const double coh_scale = kWaterCoh20 * coh_mix(m.comp) / coh_mix(kWater);
    const double ne = electrons_per_gram(m.comp);

    FILE* f = std::fopen((dir / m.file).string().c_str(), "w");
    std::fprintf(f, "# %s mass attenuation coefficients, cm^2/g\n", m.name.c_str());
    std::fprintf(f, "# parameterized fit: Klein-Nishina free-electron incoherent; photoelectric\n");
    std::fprintf(f, "# and coherent power laws (E^-%.2f, E^-%.2f) with elemental Z mixing,\n", kPeExponent, kCohExponent);
    std::fprintf(f, "# calibrated to water at 20 keV. Accuracy a few percent over 5-40 keV.\n");
    std::fprintf(f, "# columns: energy_keV photoelectric incoherent coherent\n");
    std::fprintf(f, "density %.6g\n", m.density);
    for (double e = 4.0; e <= 45.001; e += 0.5) {
        const double pe = pe_scale * std::pow(20.0 / e, kPeExponent);
        const double incoh = kn_total_cm2(e) * ne;
        const double coh = coh_scale * std::pow(20.0 / e, kCohExponent);
        std::fprintf(f, "%.2f %.6e %.6e %.6e\n", e, pe, incoh, coh);
    }
    std::fclose(f);
    std::printf("wrote %s (pe20=%.4f incoh20=%.4f coh20=%.4f)\n", m.file.c_str(),
        pe_scale, kn_total_cm2(20) * ne, coh_scale);
}

// dedicated fits for the high-Z filter / converter, with K-edge jumps
void write_high_z(const std::filesystem::path& dir, const std::string& file, const std::string& name,
    double density, double z, double a, double k_edge, double pe20_above_ref, double edge_jump)
{
    // pe20_above_ref anchors the photoelectric channel at 20 keV on the
    // branch containing 20 keV (below the edge for Rh, above for Se)
    const double ne = kAvogadro * z / a;
    FILE* f = std::fopen((dir / file).string().c_str(), "w");
    std::fprintf(f, "# %s mass attenuation coefficients, cm^2/g\n", name.c_str());
    std::fprintf(f, "# anchored power-law fit with K edge at %.3f keV (jump x%.1f)\n", k_edge, edge_jump);
    std::fprintf(f, "# columns: energy_keV photoelectric incoherent coherent\n");
    std::fprintf(f, "density %.6g\n", density);
    const double exp_pe = 2.9;
    auto pe_at = [&](double e) {
        // continuous branch through the 20 keV anchor; the other branch is
        // scaled by the edge jump
        const bool anchor_below = 20.0 < k_edge;
        double v = pe20_above_ref * std::pow(20.0 / e, exp_pe);
        const bool below = e < k_edge;
        if (below != anchor_below)
            v *= anchor_below ? edge_jump : 1.0 / edge_jump;
        return v;
    };
    auto coh_at = [&](double e) { return 0.30 * std::pow(z / 34.0, 1.9) * std::pow(20.0 / e, kCohExponent); };
    std::vector<double> energies;
    for (double e = 4.0; e <= 45.001; e += 0.5)
        energies.push_back(e);
    energies.push_back(k_edge - 0.01);
    energies.push_back(k_edge + 0.01);
    std::sort(energies.begin(), energies.end());
    for (double e : energies)
        std::fprintf(f, "%.3f %.6e %.6e %.6e\n", e, pe_at(e), kn_total_cm2(e) * ne, coh_at(e));
    std::fclose(f);
    std::printf("wrote %s\n", file.c_str());
}

// unfiltered tungsten anode: Kramers continuum + L lines, 0.5 keV bins
void write_anode(const std::filesystem::path& dir)
{
    const std::vector<double> kvps = { 28.0, 30.0 };
    FILE* f = std::fopen((dir / "anode_w.txt").string().c_str(), "w");
    std::fprintf(f, "# unfiltered tungsten anode spectra, relative fluence per 0.5 keV bin\n");
    std::fprintf(f, "# Kramers continuum (kvp - E)/E with W L-series lines at 8.40/9.67/11.29 keV\n");
    std::fprintf(f, "# filter applied downstream (build_spectrum) via Beer-Lambert\n");
    std::fprintf(f, "kvp");
    for (double k : kvps)
        std::fprintf(f, " %g", k);
    std::fprintf(f, "\n");
    const std::map<double, double> l_lines = { { 8.40, 1.2 }, { 9.67, 0.9 }, { 11.29, 0.35 } };
    for (double e = 5.25; e < 30.0; e += 0.5) {
        std::fprintf(f, "%.2f", e);
        for (double k : kvps) {
            double v = e < k ? (k - e) / e : 0.0;
            for (const auto& [le, amp] : l_lines)
                if (std::abs(e - le) <= 0.25 && e < k)
                    v += amp * (k - le) / le;
            std::fprintf(f, " %.6e", v);
        }
        std::fprintf(f, "\n");
    }
    std::fclose(f);
    std::printf("wrote anode_w.txt\n");
}

} // namespace

int main(int argc, char** argv)
{
    const std::filesystem::path dir = argc > 1 ? argv[1] : "data";
    std::filesystem::create_directories(dir);

    const std::vector<MaterialSpec> tissues = {
        { "mat_air.txt", "air", 0.001205, { { 6, 12.011, 0.0001 }, { 7, 14.007, 0.7553 }, { 8, 15.999, 0.2318 }, { 18, 39.948, 0.0128 } } },
        { "mat_adipose.txt", "adipose tissue", 0.95, { { 1, 1.008, 0.114 }, { 6, 12.011, 0.598 }, { 7, 14.007, 0.007 }, { 8, 15.999, 0.278 }, { 11, 22.990, 0.001 }, { 16, 32.06, 0.001 }, { 17, 35.45, 0.001 } } },
        { "mat_glandular.txt", "glandular tissue", 1.02, { { 1, 1.008, 0.106 }, { 6, 12.011, 0.332 }, { 7, 14.007, 0.030 }, { 8, 15.999, 0.527 }, { 11, 22.990, 0.001 }, { 15, 30.974, 0.001 }, { 16, 32.06, 0.002 }, { 17, 35.45, 0.001 } } },
        { "mat_skin.txt", "skin", 1.09, { { 1, 1.008, 0.100 }, { 6, 12.011, 0.204 }, { 7, 14.007, 0.042 }, { 8, 15.999, 0.645 }, { 11, 22.990, 0.002 }, { 15, 30.974, 0.001 }, { 16, 32.06, 0.002 }, { 17, 35.45, 0.003 }, { 19, 39.098, 0.001 } } },
    };
    for (const auto& m : tissues)
        write_tissue(dir, m);

    // rhodium filter: K edge 23.220 keV; 20 keV sits below the edge
    write_high_z(dir, "filter_rh.txt", "rhodium", 12.41, 45, 102.906, 23.220, 13.6, 5.6);
    // amorphous selenium converter: K edge 12.658 keV; 20 keV sits above
    write_high_z(dir, "detector_se.txt", "selenium", 4.28, 34, 78.971, 12.658, 8.9, 6.7);

    write_anode(dir);
    return 0;
}
