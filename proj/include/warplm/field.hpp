#pragma once

#include <array>
#include <cstdint>
#include <cstddef>
#include <vector>

namespace warplm {

using Vec3 = std::array<double, 3>;

inline double dot(const Vec3& a, const Vec3& b) {
    return a[0] * b[0] + a[1] * b[1] + a[2] * b[2];
}
inline double norm2(const Vec3& v) { return dot(v, v); }

/// Grid extents of a volume or displacement field, voxels.
struct Dims3 {
    int nx = 0, ny = 0, nz = 0;

    std::size_t voxels() const {
        return static_cast<std::size_t>(nx) * static_cast<std::size_t>(ny) *
               static_cast<std::size_t>(nz);
    }
    std::size_t index(int x, int y, int z) const {
        return static_cast<std::size_t>(x) +
               static_cast<std::size_t>(nx) *
                   (static_cast<std::size_t>(y) +
                    static_cast<std::size_t>(ny) * static_cast<std::size_t>(z));
    }
    bool operator==(const Dims3&) const = default;
};

/// Dense scalar 3-D image on a regular grid, x-fastest layout.
/// Voxel centers sit at integer coordinates with the origin at (0,0,0);
/// spacing is unit and isotropic.
struct Volume3 {
    Dims3 dims;
    std::vector<double> data;

    Volume3() = default;
    explicit Volume3(Dims3 d) : dims(d), data(d.voxels(), 0.0) {}

    double& at(int x, int y, int z) { return data[dims.index(x, y, z)]; }
    double at(int x, int y, int z) const { return data[dims.index(x, y, z)]; }
};

/// Dense per-voxel 3-vector field in voxel units, x-fastest and
/// component-innermost. The zero field is the identity warp.
struct DispField3 {
    Dims3 dims;
    std::vector<double> data;

    DispField3() = default;
    explicit DispField3(Dims3 d) : dims(d), data(3 * d.voxels(), 0.0) {}

    double& at(int x, int y, int z, int c) { return data[3 * dims.index(x, y, z) + c]; }
    double at(int x, int y, int z, int c) const { return data[3 * dims.index(x, y, z) + c]; }

    Vec3 vec(int x, int y, int z) const {
        const std::size_t i = 3 * dims.index(x, y, z);
        return {data[i], data[i + 1], data[i + 2]};
    }
    void set_vec(int x, int y, int z, const Vec3& v) {
        const std::size_t i = 3 * dims.index(x, y, z);
        data[i] = v[0];
        data[i + 1] = v[1];
        data[i + 2] = v[2];
    }
};

/// Controls the step-length normalization of Eq.-style compositive updates:
/// eps is chosen so the applied increment never moves a voxel by more than
/// target_max_disp along any axis.
struct StepScale {
    double target_max_disp = 0.4;  // voxels, must stay in (0, 0.5)
    double floor = 1e-12;
};

/// Trilinear interpolation with clamp-to-edge boundaries. Exact at integer
/// grid points. Returns NaN if p is not finite.
double sample_trilinear(const Volume3& vol, double px, double py, double pz);

/// Sample and the analytic spatial gradient of the interpolant at p.
/// The gradient is zero along axes where p is clamped outside the grid.
struct SampleGrad {
    double value = 0.0;
    Vec3 grad{0.0, 0.0, 0.0};
};
SampleGrad sample_trilinear_grad(const Volume3& vol, double px, double py, double pz);

/// Samples each displacement component of u trilinearly at p.
Vec3 sample_field(const DispField3& u, double px, double py, double pz);

/// Compositive warp update: u'(x) = eps*v(x) + u(x + eps*v(x)).
DispField3 compose_warp(const DispField3& u, const DispField3& v, double eps);

/// Max absolute component over the field.
double max_abs_component(const DispField3& v);

/// Step normalization: eps = target_max_disp / max(max-abs-component(v), floor).
/// v itself is left unchanged; eps*v then has max per-axis displacement equal
/// to target_max_disp whenever v is nonzero.
double normalize_step(const DispField3& v, const StepScale& s);

/// Minimum over interior voxels of det(I + grad u), central differences.
/// Positive everywhere means the warp Id + u is locally invertible.
double jacobian_det_min(const DispField3& u);

/// Separable Gaussian smoothing, kernel truncated at 3*sigma with weights
/// renormalized near the borders (constants are preserved exactly).
/// sigma <= 0 returns the input unchanged.
Volume3 gaussian_smooth(const Volume3& vol, double sigma);
DispField3 gaussian_smooth(const DispField3& field, double sigma);

bool all_finite(const Volume3& vol);
bool all_finite(const DispField3& field);

}  // namespace warplm
