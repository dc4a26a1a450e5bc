#include "mammo/io.hpp"

#include "mammo/xproj.hpp"

#include <cinttypes>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace mammo {

const char* element_type_name(ElementType t)
{
    switch (t) {
    case ElementType::U8:
        return "MET_UCHAR";
    case ElementType::U16:
        return "MET_USHORT";
    case ElementType::F32:
        return "MET_FLOAT";
    case ElementType::F64:
        return "MET_DOUBLE";
    }
    return "?";
}

std::size_t element_size(ElementType t)
{
    switch (t) {
    case ElementType::U8:
        return 1;
    case ElementType::U16:
        return 2;
    case ElementType::F32:
        return 4;
    case ElementType::F64:
        return 8;
    }
    return 0;
}

static ElementType element_type_from(const std::string& s)
{
    if (s == "MET_UCHAR")
        return ElementType::U8;
    if (s == "MET_USHORT")
        return ElementType::U16;
    if (s == "MET_FLOAT")
        return ElementType::F32;
    if (s == "MET_DOUBLE")
        return ElementType::F64;
    throw IoError("unsupported MHD element type " + s);
}

Volume volume_from_phantom(const VoxelPhantom& phantom)
{
    Volume v;
    v.ndims = 3;
    v.dims = phantom.dims;
    v.spacing = { phantom.pitch_mm, phantom.pitch_mm, phantom.pitch_mm };
    v.type = ElementType::U8;
    v.bytes.assign(phantom.labels.begin(), phantom.labels.end());
    return v;
}

void write_mhd_raw(const Volume& v, const std::filesystem::path& mhd_path)
{
    if (v.bytes.size() != v.element_count() * element_size(v.type))
        throw IoError("volume payload size does not match dims");
    std::filesystem::path raw_path = mhd_path;
    raw_path.replace_extension(".raw");

    std::ofstream mhd(mhd_path);
    if (!mhd)
        throw IoError("cannot write " + mhd_path.string());
    mhd << "ObjectType = Image\n";
    mhd << "NDims = " << v.ndims << "\n";
    mhd << "DimSize = " << v.dims.x << " " << v.dims.y;
    if (v.ndims == 3)
        mhd << " " << v.dims.z;
    mhd << "\n";
    mhd << "ElementSpacing = " << v.spacing.x << " " << v.spacing.y;
    if (v.ndims == 3)
        mhd << " " << v.spacing.z;
    mhd << "\n";
    mhd << "ElementByteOrderMSB = False\n";
    mhd << "ElementType = " << element_type_name(v.type) << "\n";
    mhd << "ElementDataFile = " << raw_path.filename().string() << "\n";
    mhd.close();

    std::ofstream raw(raw_path, std::ios::binary);
    if (!raw)
        throw IoError("cannot write " + raw_path.string());
    raw.write(reinterpret_cast<const char*>(v.bytes.data()), static_cast<std::streamsize>(v.bytes.size()));
}

Volume read_mhd_raw(const std::filesystem::path& mhd_path)
{
    std::ifstream mhd(mhd_path);
    if (!mhd)
        throw IoError("cannot open " + mhd_path.string());
    Volume v;
    std::string data_file;
    std::string line;
    bool have_dims = false, have_type = false;
    while (std::getline(mhd, line)) {
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            continue;
        std::string key = line.substr(0, eq);
        std::string val = line.substr(eq + 1);
        auto trim = [](std::string& s) {
            const auto b = s.find_first_not_of(" \t\r");
            const auto e = s.find_last_not_of(" \t\r");
            s = b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
        };
        trim(key);
        trim(val);
        if (key == "NDims") {
            v.ndims = std::stoi(val);
            if (v.ndims != 2 && v.ndims != 3)
                throw IoError(mhd_path.string() + ": unsupported NDims " + val);
        } else if (key == "DimSize") {
            std::istringstream is(val);
            is >> v.dims.x >> v.dims.y;
            if (!(is >> v.dims.z))
                v.dims.z = 1;
            have_dims = true;
        } else if (key == "ElementSpacing") {
            std::istringstream is(val);
            is >> v.spacing.x >> v.spacing.y;
            if (!(is >> v.spacing.z))
                v.spacing.z = 1;
        } else if (key == "ElementType") {
            v.type = element_type_from(val);
            have_type = true;
        } else if (key == "ElementByteOrderMSB") {
            if (val == "True")
                throw IoError(mhd_path.string() + ": big-endian payloads not supported");
        } else if (key == "ElementDataFile") {
            data_file = val;
        }
    }
    if (!have_dims || !have_type || data_file.empty())
        throw IoError(mhd_path.string() + ": incomplete MHD header");

    const std::filesystem::path raw_path = mhd_path.parent_path() / data_file;
    std::ifstream raw(raw_path, std::ios::binary | std::ios::ate);
    if (!raw)
        throw IoError("cannot open " + raw_path.string());
    const std::size_t size = static_cast<std::size_t>(raw.tellg());
    const std::size_t expected = v.element_count() * element_size(v.type);
    if (size != expected)
        throw IoError(raw_path.string() + ": payload is " + std::to_string(size) + " bytes, header implies " + std::to_string(expected));
    v.bytes.resize(size);
    raw.seekg(0);
    raw.read(reinterpret_cast<char*>(v.bytes.data()), static_cast<std::streamsize>(size));
    return v;
}

void write_loc(const LesionRecord& record, const std::optional<std::array<double, 2>>& image_px,
    const std::filesystem::path& path)
{
    std::ofstream out(path);
    if (!out)
        throw IoError("cannot write " + path.string());
    char buf[512];
    int n = std::snprintf(buf, sizeof buf, "%d %d %d %.17g %.17g %d %d %d %d %d %d %" PRIu64,
        record.center.x, record.center.y, record.center.z,
        record.nominal_radius_mm, record.density_factor,
        record.bbox_lo.x, record.bbox_lo.y, record.bbox_lo.z,
        record.bbox_hi.x, record.bbox_hi.y, record.bbox_hi.z,
        record.mass_seed);
    if (image_px)
        n += std::snprintf(buf + n, sizeof buf - n, " %.17g %.17g", (*image_px)[0], (*image_px)[1]);
    out << buf << "\n";
}

LocData read_loc(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in)
        throw IoError("cannot open " + path.string());
    std::string line;
    if (!std::getline(in, line))
        throw IoError(path.string() + ": empty .loc file");
    std::istringstream is(line);
    LocData d;
    if (!(is >> d.record.center.x >> d.record.center.y >> d.record.center.z
            >> d.record.nominal_radius_mm >> d.record.density_factor
            >> d.record.bbox_lo.x >> d.record.bbox_lo.y >> d.record.bbox_lo.z
            >> d.record.bbox_hi.x >> d.record.bbox_hi.y >> d.record.bbox_hi.z
            >> d.record.mass_seed))
        throw IoError(path.string() + ": malformed .loc line");
    double u = 0, v = 0;
    if (is >> u >> v)
        d.image_px = { { u, v } };
    return d;
}

std::string format_mass_density(double d)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", d);
    std::string s = buf;
    if (s.size() > 3 && s.back() == '0')
        s.pop_back(); // 1.00 -> 1.0, 1.10 -> 1.1
    return s;
}

std::string format_mass_radius(double r)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.1f", r);
    return buf;
}

static std::string format_dose_count(std::uint64_t histories)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3g", static_cast<double>(histories));
    return buf;
}

std::string layout_case_dir(const GridPoint& gp, int file_id, const Config& cfg)
{
    const std::string dens = format_mass_density(gp.mass_density);
    const std::string size = format_mass_radius(gp.mass_radius_mm);
    const std::string cls = class_name(gp.cls);
    const std::string dose = format_dose_count(histories_for(gp.dose_percent, gp.cls, cfg));
    std::ostringstream os;
    os << "data/device_data_VICTREPhantoms_spic_" << dens << "/" << dose << "/" << cls
       << "/2/" << size << "/SIM/P2_" << size << "_" << cls << ".8337609." << file_id
       << "/" << file_id;
    return os.str();
}

std::pair<GridPoint, int> parse_layout_case_dir(const std::string& rel_dir, const Config& cfg)
{
    std::vector<std::string> parts;
    std::string cur;
    for (char c : rel_dir) {
        if (c == '/') {
            parts.push_back(cur);
            cur.clear();
        } else {
            cur.push_back(c);
        }
    }
    if (!cur.empty())
        parts.push_back(cur);
    if (parts.size() != 9 || parts[0] != "data" || parts[4] != "2" || parts[6] != "SIM")
        throw IoError("unrecognized case directory layout: " + rel_dir);

    GridPoint gp;
    const std::string prefix = "device_data_VICTREPhantoms_spic_";
    if (parts[1].rfind(prefix, 0) != 0)
        throw IoError("unrecognized dataset directory: " + parts[1]);
    gp.mass_density = std::stod(parts[1].substr(prefix.size()));

    const auto cls = class_from_name(parts[3]);
    if (!cls)
        throw IoError("unknown density class in path: " + parts[3]);
    gp.cls = *cls;
    gp.mass_radius_mm = std::stod(parts[5]);

    // recover the relative dose by matching the class dose ladder
    gp.dose_percent = -1;
    for (int pct : { 20, 40, 60, 80, 100 })
        if (format_dose_count(histories_for(pct, gp.cls, cfg)) == parts[2])
            gp.dose_percent = pct;
    if (gp.dose_percent < 0)
        throw IoError("dose directory '" + parts[2] + "' does not match the " + parts[3] + " ladder");

    const int file_id = std::stoi(parts[8]);
    const std::string expect = "P2_" + format_mass_radius(gp.mass_radius_mm) + "_" + std::string(class_name(gp.cls))
        + ".8337609." + std::to_string(file_id);
    if (parts[7] != expect)
        throw IoError("case directory '" + parts[7] + "' does not match '" + expect + "'");
    return { gp, file_id };
}

void write_scores_csv(const std::vector<ScoreRow>& rows, const std::filesystem::path& path)
{
    std::ofstream out(path);
    if (!out)
        throw IoError("cannot write " + path.string());
    out << "reader_id,case_id,label,breast_density,mass_size,mass_density,dose,score\n";
    char buf[256];
    for (const ScoreRow& r : rows) {
        std::snprintf(buf, sizeof buf, "%d,%" PRIu64 ",%d,%s,%s,%s,%d,%.17g\n",
            r.reader_id, r.case_id, r.label, r.breast_density.c_str(),
            format_mass_radius(r.mass_size).c_str(), format_mass_density(r.mass_density).c_str(),
            r.dose_percent, r.score);
        out << buf;
    }
}

std::vector<ScoreRow> read_scores_csv(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in)
        throw IoError("cannot open " + path.string());
    std::string line;
    if (!std::getline(in, line))
        throw IoError(path.string() + ": empty CSV");
    std::vector<ScoreRow> rows;
    while (std::getline(in, line)) {
        if (line.empty())
            continue;
        std::vector<std::string> f;
        std::string cur;
        for (char c : line) {
            if (c == ',') {
                f.push_back(cur);
                cur.clear();
            } else {
                cur.push_back(c);
            }
        }
        f.push_back(cur);
        if (f.size() != 8)
            throw IoError(path.string() + ": expected 8 columns, got " + std::to_string(f.size()));
        ScoreRow r;
        r.reader_id = std::stoi(f[0]);
        r.case_id = std::stoull(f[1]);
        r.label = std::stoi(f[2]);
        r.breast_density = f[3];
        r.mass_size = std::stod(f[4]);
        r.mass_density = std::stod(f[5]);
        r.dose_percent = std::stoi(f[6]);
        r.score = std::stod(f[7]);
        rows.push_back(r);
    }
    return rows;
}

std::uint64_t fnv1a(const void* data, std::size_t n, std::uint64_t h)
{
    const auto* p = static_cast<const unsigned char*>(data);
    for (std::size_t i = 0; i < n; ++i) {
        h ^= p[i];
        h *= 1099511628211ull;
    }
    return h;
}

std::uint64_t fnv1a(const std::string& s, std::uint64_t h)
{
    return fnv1a(s.data(), s.size(), h);
}

std::uint64_t hash_file(const std::filesystem::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw IoError("cannot open " + path.string() + " for hashing");
    std::uint64_t h = 1469598103934665603ull;
    char buf[65536];
    while (in) {
        in.read(buf, sizeof buf);
        h = fnv1a(buf, static_cast<std::size_t>(in.gcount()), h);
    }
    return h;
}

} // namespace mammo
