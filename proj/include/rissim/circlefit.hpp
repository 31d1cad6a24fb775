#pragma once

#include <cmath>
#include <span>

#include "rissim/errors.hpp"
#include "rissim/types.hpp"

namespace rissim {

struct CircleFit {
    cdouble center{0.0, 0.0};
    double radius = 0.0;
    double rms_residual = 0.0;
};

/// Algebraic least-squares circle fit (Kasa form): fit x^2 + y^2 =
/// a x + b y + c linearly, then center = (a/2, b/2). Data is centered on its
/// mean first for conditioning. Closed-form and deterministic; degenerate
/// (collinear) input is rejected.
inline CircleFit circle_fit(std::span<const cdouble> points) {
    if (points.size() < 3) throw FitError("circle fit: need at least 3 points");

    double mx = 0.0, my = 0.0;
    for (const cdouble& p : points) {
        mx += p.real();
        my += p.imag();
    }
    mx /= static_cast<double>(points.size());
    my /= static_cast<double>(points.size());

    // Normal equations of [x y 1] [a b c]^T = x^2 + y^2 on centered data.
    double sxx = 0, sxy = 0, syy = 0, sx = 0, sy = 0;
    double sxz = 0, syz = 0, sz = 0;
    for (const cdouble& p : points) {
        const double x = p.real() - mx;
        const double y = p.imag() - my;
        const double z = x * x + y * y;
        sxx += x * x;
        sxy += x * y;
        syy += y * y;
        sx += x;
        sy += y;
        sxz += x * z;
        syz += y * z;
        sz += z;
    }
    const double n = static_cast<double>(points.size());
    // 3x3 solve by Cramer's rule.
    const double det = sxx * (syy * n - sy * sy) - sxy * (sxy * n - sy * sx) +
                       sx * (sxy * sy - syy * sx);
    const double scale = sxx + syy;
    if (std::abs(det) <= 1e-12 * scale * scale * n || scale == 0.0)
        throw FitError("circle fit: degenerate (collinear or coincident) points");

    const double det_a = sxz * (syy * n - sy * sy) - sxy * (syz * n - sy * sz) +
                         sx * (syz * sy - syy * sz);
    const double det_b = sxx * (syz * n - sy * sz) - sxz * (sxy * n - sy * sx) +
                         sx * (sxy * sz - syz * sx);
    const double det_c = sxx * (syy * sz - syz * sy) - sxy * (sxy * sz - syz * sx) +
                         sxz * (sxy * sy - syy * sx);

    const double a = det_a / det;
    const double b = det_b / det;
    const double c = det_c / det;

    CircleFit fit;
    const double cx = 0.5 * a;
    const double cy = 0.5 * b;
    fit.center = {cx + mx, cy + my};
    const double r2 = c + cx * cx + cy * cy;
    fit.radius = r2 > 0.0 ? std::sqrt(r2) : 0.0;

    double ss = 0.0;
    for (const cdouble& p : points) {
        const double d = std::abs(p - fit.center) - fit.radius;
        ss += d * d;
    }
    fit.rms_residual = std::sqrt(ss / n);
    return fit;
}

}  // namespace rissim
