#include "warplm/field.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <utility>

namespace warplm {

namespace {

struct AxisSample {
    int i0 = 0, i1 = 0;
    double t = 0.0;      // fraction within [i0, i1]
    bool clamped = false;  // p fell outside [0, n-1]
};

AxisSample resolve_axis(double p, int n) {
    AxisSample a;
    if (n == 1) {
        a.clamped = true;
        return a;
    }
    double c = p;
    if (c <= 0.0) {
        a.clamped = (c < 0.0);
        c = 0.0;
    } else if (c >= static_cast<double>(n - 1)) {
        a.clamped = (c > static_cast<double>(n - 1));
        c = static_cast<double>(n - 1);
    }
    int i0 = static_cast<int>(c);
    if (i0 > n - 2) i0 = n - 2;
    a.i0 = i0;
    a.i1 = i0 + 1;
    a.t = c - static_cast<double>(i0);
    return a;
}

}  // namespace

double sample_trilinear(const Volume3& vol, double px, double py, double pz) {
    return sample_trilinear_grad(vol, px, py, pz).value;
}

SampleGrad sample_trilinear_grad(const Volume3& vol, double px, double py, double pz) {
    SampleGrad out;
    if (!std::isfinite(px) || !std::isfinite(py) || !std::isfinite(pz)) {
        out.value = std::numeric_limits<double>::quiet_NaN();
        return out;
    }
    const AxisSample ax = resolve_axis(px, vol.dims.nx);
    const AxisSample ay = resolve_axis(py, vol.dims.ny);
    const AxisSample az = resolve_axis(pz, vol.dims.nz);

    const double c000 = vol.at(ax.i0, ay.i0, az.i0);
    const double c100 = vol.at(ax.i1, ay.i0, az.i0);
    const double c010 = vol.at(ax.i0, ay.i1, az.i0);
    const double c110 = vol.at(ax.i1, ay.i1, az.i0);
    const double c001 = vol.at(ax.i0, ay.i0, az.i1);
    const double c101 = vol.at(ax.i1, ay.i0, az.i1);
    const double c011 = vol.at(ax.i0, ay.i1, az.i1);
    const double c111 = vol.at(ax.i1, ay.i1, az.i1);

    const double tx = ax.t, ty = ay.t, tz = az.t;

    // Collapse x, then y, then z; keep the x-differences for the gradient.
    const double d00 = c100 - c000, d10 = c110 - c010;
    const double d01 = c101 - c001, d11 = c111 - c011;
    const double v00 = c000 + tx * d00;
    const double v10 = c010 + tx * d10;
    const double v01 = c001 + tx * d01;
    const double v11 = c011 + tx * d11;

    const double v0 = v00 + ty * (v10 - v00);
    const double v1 = v01 + ty * (v11 - v01);
    out.value = v0 + tz * (v1 - v0);

    const double gx0 = d00 + ty * (d10 - d00);
    const double gx1 = d01 + ty * (d11 - d01);
    out.grad[0] = ax.clamped ? 0.0 : gx0 + tz * (gx1 - gx0);

    const double gy0 = v10 - v00;
    const double gy1 = v11 - v01;
    out.grad[1] = ay.clamped ? 0.0 : gy0 + tz * (gy1 - gy0);

    out.grad[2] = az.clamped ? 0.0 : v1 - v0;
    return out;
}

Vec3 sample_field(const DispField3& u, double px, double py, double pz) {
    if (!std::isfinite(px) || !std::isfinite(py) || !std::isfinite(pz)) {
        const double nan = std::numeric_limits<double>::quiet_NaN();
        return {nan, nan, nan};
    }
    const AxisSample ax = resolve_axis(px, u.dims.nx);
    const AxisSample ay = resolve_axis(py, u.dims.ny);
    const AxisSample az = resolve_axis(pz, u.dims.nz);
    const double tx = ax.t, ty = ay.t, tz = az.t;

    Vec3 out{};
    for (int c = 0; c < 3; ++c) {
        const double c000 = u.at(ax.i0, ay.i0, az.i0, c);
        const double c100 = u.at(ax.i1, ay.i0, az.i0, c);
        const double c010 = u.at(ax.i0, ay.i1, az.i0, c);
        const double c110 = u.at(ax.i1, ay.i1, az.i0, c);
        const double c001 = u.at(ax.i0, ay.i0, az.i1, c);
        const double c101 = u.at(ax.i1, ay.i0, az.i1, c);
        const double c011 = u.at(ax.i0, ay.i1, az.i1, c);
        const double c111 = u.at(ax.i1, ay.i1, az.i1, c);
        const double v00 = c000 + tx * (c100 - c000);
        const double v10 = c010 + tx * (c110 - c010);
        const double v01 = c001 + tx * (c101 - c001);
        const double v11 = c011 + tx * (c111 - c011);
        const double v0 = v00 + ty * (v10 - v00);
        const double v1 = v01 + ty * (v11 - v01);
        out[c] = v0 + tz * (v1 - v0);
    }
    return out;
}

DispField3 compose_warp(const DispField3& u, const DispField3& v, double eps) {
    if (!(u.dims == v.dims)) {
        throw std::invalid_argument("compose_warp: dimension mismatch");
    }
    DispField3 out(u.dims);
    for (int z = 0; z < u.dims.nz; ++z) {
        for (int y = 0; y < u.dims.ny; ++y) {
            for (int x = 0; x < u.dims.nx; ++x) {
                const Vec3 vv = v.vec(x, y, z);
                const double px = x + eps * vv[0];
                const double py = y + eps * vv[1];
                const double pz = z + eps * vv[2];
                const Vec3 uu = sample_field(u, px, py, pz);
                out.set_vec(x, y, z,
                            {eps * vv[0] + uu[0], eps * vv[1] + uu[1], eps * vv[2] + uu[2]});
            }
        }
    }
    return out;
}

double max_abs_component(const DispField3& v) {
    double m = 0.0;
    for (double d : v.data) m = std::max(m, std::abs(d));
    return m;
}

double normalize_step(const DispField3& v, const StepScale& s) {
    if (!(s.target_max_disp > 0.0 && s.target_max_disp < 0.5)) {
        throw std::invalid_argument("normalize_step: target_max_disp must lie in (0, 0.5)");
    }
    return s.target_max_disp / std::max(max_abs_component(v), s.floor);
}

namespace {

inline double axis_derivative(const DispField3& u, int x, int y, int z, int c, int axis) {
    const int n = axis == 0 ? u.dims.nx : axis == 1 ? u.dims.ny : u.dims.nz;
    const int p = axis == 0 ? x : axis == 1 ? y : z;
    auto value = [&](int q) {
        return axis == 0 ? u.at(q, y, z, c) : axis == 1 ? u.at(x, q, z, c) : u.at(x, y, q, c);
    };
    if (p >= 1 && p + 1 <= n - 1) return 0.5 * (value(p + 1) - value(p - 1));
    if (p == 0) return value(1) - value(0);  // one-sided, only hit when n == 2
    return value(p) - value(p - 1);
}

}  // namespace

double jacobian_det_min(const DispField3& u) {
    const Dims3& d = u.dims;
    if (d.nx < 2 || d.ny < 2 || d.nz < 2) {
        throw std::invalid_argument("jacobian_det_min: dims must be >= 2 per axis");
    }
    auto range = [](int n) { return n >= 3 ? std::pair<int, int>{1, n - 2} : std::pair<int, int>{0, n - 1}; };
    const auto [x0, x1] = range(d.nx);
    const auto [y0, y1] = range(d.ny);
    const auto [z0, z1] = range(d.nz);

    double mn = std::numeric_limits<double>::infinity();
    for (int z = z0; z <= z1; ++z) {
        for (int y = y0; y <= y1; ++y) {
            for (int x = x0; x <= x1; ++x) {
                double J[3][3];
                for (int c = 0; c < 3; ++c) {
                    for (int a = 0; a < 3; ++a) {
                        J[c][a] = axis_derivative(u, x, y, z, c, a);
                    }
                    J[c][c] += 1.0;
                }
                const double det = J[0][0] * (J[1][1] * J[2][2] - J[1][2] * J[2][1]) -
                                   J[0][1] * (J[1][0] * J[2][2] - J[1][2] * J[2][0]) +
                                   J[0][2] * (J[1][0] * J[2][1] - J[1][1] * J[2][0]);
                mn = std::min(mn, det);
            }
        }
    }
    return mn;
}

namespace {

std::vector<double> gaussian_kernel(double sigma, int& radius) {
    radius = static_cast<int>(std::ceil(3.0 * sigma));
    if (radius < 1) radius = 1;
    std::vector<double> w(2 * radius + 1);
    for (int i = -radius; i <= radius; ++i) {
        w[i + radius] = std::exp(-0.5 * (i * i) / (sigma * sigma));
    }
    return w;
}

// One separable pass along `axis` over `nchan` interleaved channels.
// Border weights are renormalized over the in-bounds support.
void smooth_axis(std::vector<double>& data, Dims3 d, int nchan, int axis,
                 const std::vector<double>& w, int radius) {
    const int n = axis == 0 ? d.nx : axis == 1 ? d.ny : d.nz;
    if (n == 1) return;
    const int na = axis == 0 ? d.ny : d.nx;
    const int nb = axis == 2 ? d.ny : d.nz;
    auto index_of = [&](int p, int a, int b) {
        if (axis == 0) return d.index(p, a, b);
        if (axis == 1) return d.index(a, p, b);
        return d.index(a, b, p);
    };
    std::vector<double> line(static_cast<std::size_t>(n));
    for (int c = 0; c < nchan; ++c) {
        for (int b = 0; b < nb; ++b) {
            for (int a = 0; a < na; ++a) {
                for (int p = 0; p < n; ++p) {
                    line[p] = data[static_cast<std::size_t>(nchan) * index_of(p, a, b) + c];
                }
                for (int p = 0; p < n; ++p) {
                    double acc = 0.0, wsum = 0.0;
                    const int lo = std::max(0, p - radius);
                    const int hi = std::min(n - 1, p + radius);
                    for (int q = lo; q <= hi; ++q) {
                        const double wq = w[q - p + radius];
                        acc += wq * line[q];
                        wsum += wq;
                    }
                    data[static_cast<std::size_t>(nchan) * index_of(p, a, b) + c] = acc / wsum;
                }
            }
        }
    }
}

}  // namespace

Volume3 gaussian_smooth(const Volume3& vol, double sigma) {
    if (sigma <= 0.0) return vol;
    int radius = 0;
    const std::vector<double> w = gaussian_kernel(sigma, radius);
    Volume3 out = vol;
    for (int axis = 0; axis < 3; ++axis) smooth_axis(out.data, out.dims, 1, axis, w, radius);
    return out;
}

DispField3 gaussian_smooth(const DispField3& field, double sigma) {
    if (sigma <= 0.0) return field;
    int radius = 0;
    const std::vector<double> w = gaussian_kernel(sigma, radius);
    DispField3 out = field;
    for (int axis = 0; axis < 3; ++axis) smooth_axis(out.data, out.dims, 3, axis, w, radius);
    return out;
}

bool all_finite(const Volume3& vol) {
    for (double v : vol.data) {
        if (!std::isfinite(v)) return false;
    }
    return true;
}

bool all_finite(const DispField3& field) {
    for (double v : field.data) {
        if (!std::isfinite(v)) return false;
    }
    return true;
}

}  // namespace warplm
