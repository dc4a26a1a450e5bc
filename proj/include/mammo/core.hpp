#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace mammo {

// ---------------------------------------------------------------------------
// Error taxonomy. Every throwing operation uses one of these so callers can
// tell a bad configuration from a physics blow-up or a lesion that does not
// fit the breast.
// ---------------------------------------------------------------------------

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class ConfigError : public Error {
public:
    using Error::Error;
};

class InvalidInputError : public Error {
public:
    using Error::Error;
};

// phantom texture synthesis could not reach the requested composition
class GenerationError : public Error {
public:
    using Error::Error;
};

// structure too small for the voxel pitch
class ResolutionError : public Error {
public:
    using Error::Error;
};

// mass would overwrite air or skin
class DoesNotFitError : public Error {
public:
    using Error::Error;
};

class PhysicsError : public Error {
public:
    using Error::Error;
};

class GeometryError : public Error {
public:
    using Error::Error;
};

class DegenerateLabelsError : public Error {
public:
    using Error::Error;
};

class UnsupportedModeError : public Error {
public:
    using Error::Error;
};

// study design violations (incomplete score matrix, single reader, ...)
class DesignError : public Error {
public:
    using Error::Error;
};

class IoError : public Error {
public:
    using Error::Error;
};

class InternalError : public Error {
public:
    using Error::Error;
};

// ---------------------------------------------------------------------------
// Small math types
// ---------------------------------------------------------------------------

struct Vec3 {
    double x = 0, y = 0, z = 0;

    Vec3 operator+(const Vec3& o) const { return { x + o.x, y + o.y, z + o.z }; }
    Vec3 operator-(const Vec3& o) const { return { x - o.x, y - o.y, z - o.z }; }
    Vec3 operator*(double s) const { return { x * s, y * s, z * s }; }
    double dot(const Vec3& o) const { return x * o.x + y * o.y + z * o.z; }
    double norm() const { return std::sqrt(dot(*this)); }
    Vec3 normalized() const
    {
        const double n = norm();
        return { x / n, y / n, z / n };
    }
    double operator[](int i) const { return i == 0 ? x : (i == 1 ? y : z); }
};

struct IVec3 {
    int x = 0, y = 0, z = 0;

    bool operator==(const IVec3& o) const { return x == o.x && y == o.y && z == o.z; }
    bool operator!=(const IVec3& o) const { return !(*this == o); }
    int operator[](int i) const { return i == 0 ? x : (i == 1 ? y : z); }
    int& operator[](int i) { return i == 0 ? x : (i == 1 ? y : z); }
};

// Dense 3D grid, x fastest. Index math kept in one place.
template <typename T>
class Grid3 {
public:
    Grid3() = default;
    Grid3(IVec3 dims, T fill = T {})
        : dims_(dims)
        , data_(static_cast<std::size_t>(dims.x) * dims.y * dims.z, fill)
    {
    }

    const IVec3& dims() const { return dims_; }
    std::size_t size() const { return data_.size(); }

    std::size_t index(int ix, int iy, int iz) const
    {
        return static_cast<std::size_t>(ix) + static_cast<std::size_t>(dims_.x) * (static_cast<std::size_t>(iy) + static_cast<std::size_t>(dims_.y) * iz);
    }
    bool in_bounds(int ix, int iy, int iz) const
    {
        return ix >= 0 && iy >= 0 && iz >= 0 && ix < dims_.x && iy < dims_.y && iz < dims_.z;
    }

    T& operator()(int ix, int iy, int iz) { return data_[index(ix, iy, iz)]; }
    const T& operator()(int ix, int iy, int iz) const { return data_[index(ix, iy, iz)]; }
    T& operator[](std::size_t i) { return data_[i]; }
    const T& operator[](std::size_t i) const { return data_[i]; }

    std::vector<T>& data() { return data_; }
    const std::vector<T>& data() const { return data_; }

private:
    IVec3 dims_ {};
    std::vector<T> data_;
};

// Dense 2D image, x fastest.
template <typename T>
class Image2 {
public:
    Image2() = default;
    Image2(int nx, int ny, T fill = T {})
        : nx_(nx)
        , ny_(ny)
        , data_(static_cast<std::size_t>(nx) * ny, fill)
    {
    }

    int nx() const { return nx_; }
    int ny() const { return ny_; }
    std::size_t size() const { return data_.size(); }

    T& operator()(int ix, int iy) { return data_[static_cast<std::size_t>(ix) + static_cast<std::size_t>(nx_) * iy]; }
    const T& operator()(int ix, int iy) const { return data_[static_cast<std::size_t>(ix) + static_cast<std::size_t>(nx_) * iy]; }
    T& operator[](std::size_t i) { return data_[i]; }
    const T& operator[](std::size_t i) const { return data_[i]; }

    std::vector<T>& data() { return data_; }
    const std::vector<T>& data() const { return data_; }

private:
    int nx_ = 0, ny_ = 0;
    std::vector<T> data_;
};

// ---------------------------------------------------------------------------
// Voxel materials
// ---------------------------------------------------------------------------

enum class Material : std::uint8_t {
    Air = 0,
    Skin = 1,
    Fat = 2,
    Gland = 3,
    Mass = 4,
};
inline constexpr int kNumMaterials = 5;

inline const char* material_name(Material m)
{
    switch (m) {
    case Material::Air:
        return "air";
    case Material::Skin:
        return "skin";
    case Material::Fat:
        return "adipose";
    case Material::Gland:
        return "glandular";
    case Material::Mass:
        return "mass";
    }
    return "?";
}

inline bool is_tissue(Material m)
{
    return m == Material::Fat || m == Material::Gland || m == Material::Mass;
}

enum class DensityClass {
    Dense = 0,
    Hetero = 1,
    Scattered = 2,
    Fatty = 3,
};
inline constexpr std::array<DensityClass, 4> kAllClasses = {
    DensityClass::Dense, DensityClass::Hetero, DensityClass::Scattered, DensityClass::Fatty
};

inline const char* class_name(DensityClass c)
{
    switch (c) {
    case DensityClass::Dense:
        return "dense";
    case DensityClass::Hetero:
        return "hetero";
    case DensityClass::Scattered:
        return "scattered";
    case DensityClass::Fatty:
        return "fatty";
    }
    return "?";
}

std::optional<DensityClass> class_from_name(const std::string& name);

} // namespace mammo
