#ifndef AUTOMATTE_IMAGE_HPP
#define AUTOMATTE_IMAGE_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "automatte/error.hpp"
#include "automatte/parallel.hpp"

// Image containers shared by the whole pipeline. All of them are plain
// row-major buffers; pixel (x, y) lives at index y * width + x.

namespace automatte {

// 8-bit RGB image, interleaved R,G,B triples.
struct RgbImage {
    int width = 0;
    int height = 0;
    std::vector<std::uint8_t> data;

    RgbImage() = default;
    RgbImage(int w, int h) : width(w), height(h) {
        if (w < 1 || h < 1) throw InvalidArgument("RgbImage: dimensions must be positive");
        data.assign(static_cast<std::size_t>(w) * h * 3, 0);
    }

    std::int64_t pixels() const { return static_cast<std::int64_t>(width) * height; }
    std::uint8_t* at(int x, int y) { return &data[(static_cast<std::size_t>(y) * width + x) * 3]; }
    const std::uint8_t* at(int x, int y) const {
        return &data[(static_cast<std::size_t>(y) * width + x) * 3];
    }
};

// CIELAB image: interleaved L,a,b as doubles. L in [0,100] for sRGB input.
struct LabImage {
    int width = 0;
    int height = 0;
    std::vector<double> data;

    LabImage() = default;
    LabImage(int w, int h) : width(w), height(h) {
        if (w < 1 || h < 1) throw InvalidArgument("LabImage: dimensions must be positive");
        data.assign(static_cast<std::size_t>(w) * h * 3, 0.0);
    }

    double* at(int x, int y) { return &data[(static_cast<std::size_t>(y) * width + x) * 3]; }
    const double* at(int x, int y) const {
        return &data[(static_cast<std::size_t>(y) * width + x) * 3];
    }
};

// One real value per pixel. Carries saliency maps, grayscale images and
// alpha mattes; most stages expect values in [0,1].
struct ScalarField {
    int width = 0;
    int height = 0;
    std::vector<double> values;

    ScalarField() = default;
    ScalarField(int w, int h, double fill = 0.0) : width(w), height(h) {
        if (w < 1 || h < 1) throw InvalidArgument("ScalarField: dimensions must be positive");
        values.assign(static_cast<std::size_t>(w) * h, fill);
    }

    double& at(int x, int y) { return values[static_cast<std::size_t>(y) * width + x]; }
    double at(int x, int y) const { return values[static_cast<std::size_t>(y) * width + x]; }
};

// Strictly two-valued per-pixel map (0 or 1).
struct BinaryMap {
    int width = 0;
    int height = 0;
    std::vector<std::uint8_t> values;

    BinaryMap() = default;
    BinaryMap(int w, int h, std::uint8_t fill = 0) : width(w), height(h) {
        if (w < 1 || h < 1) throw InvalidArgument("BinaryMap: dimensions must be positive");
        values.assign(static_cast<std::size_t>(w) * h, fill ? 1 : 0);
    }

    std::uint8_t& at(int x, int y) { return values[static_cast<std::size_t>(y) * width + x]; }
    std::uint8_t at(int x, int y) const { return values[static_cast<std::size_t>(y) * width + x]; }
};

namespace detail {

inline double srgb_linearize(double c8) {
    double c = c8 / 255.0;
    return c <= 0.04045 ? c / 12.92 : std::pow((c + 0.055) / 1.055, 2.4);
}

inline double srgb_delinearize(double c) {
    double v = c <= 0.0031308 ? 12.92 * c : 1.055 * std::pow(c, 1.0 / 2.4) - 0.055;
    return std::clamp(v, 0.0, 1.0) * 255.0;
}

// sRGB D65 matrix; the white point is the row sums so that (255,255,255)
// maps to exactly L=100, a=b=0.
inline constexpr double kXr = 0.4124564, kXg = 0.3575761, kXb = 0.1804375;
inline constexpr double kYr = 0.2126729, kYg = 0.7151522, kYb = 0.0721750;
inline constexpr double kZr = 0.0193339, kZg = 0.1191920, kZb = 0.9503041;
inline constexpr double kXn = kXr + kXg + kXb;
inline constexpr double kYn = kYr + kYg + kYb;
inline constexpr double kZn = kZr + kZg + kZb;

inline double lab_f(double t) {
    constexpr double d = 6.0 / 29.0;
    return t > d * d * d ? std::cbrt(t) : t / (3 * d * d) + 4.0 / 29.0;
}

inline double lab_f_inv(double ft) {
    constexpr double d = 6.0 / 29.0;
    return ft > d ? ft * ft * ft : 3 * d * d * (ft - 4.0 / 29.0);
}

inline void rgb_to_lab_pixel(const std::uint8_t* rgb, double* lab) {
    double r = srgb_linearize(rgb[0]);
    double g = srgb_linearize(rgb[1]);
    double b = srgb_linearize(rgb[2]);
    double fx = lab_f((kXr * r + kXg * g + kXb * b) / kXn);
    double fy = lab_f((kYr * r + kYg * g + kYb * b) / kYn);
    double fz = lab_f((kZr * r + kZg * g + kZb * b) / kZn);
    lab[0] = 116.0 * fy - 16.0;
    lab[1] = 500.0 * (fx - fy);
    lab[2] = 200.0 * (fy - fz);
}

inline void lab_to_rgb_pixel(const double* lab, std::uint8_t* rgb) {
    double fy = (lab[0] + 16.0) / 116.0;
    double fx = fy + lab[1] / 500.0;
    double fz = fy - lab[2] / 200.0;
    double x = lab_f_inv(fx) * kXn;
    double y = lab_f_inv(fy) * kYn;
    double z = lab_f_inv(fz) * kZn;
    double r = 3.2404542 * x - 1.5371385 * y - 0.4985314 * z;
    double g = -0.9692660 * x + 1.8760108 * y + 0.0415560 * z;
    double b = 0.0556434 * x - 0.2040259 * y + 1.0572252 * z;
    rgb[0] = static_cast<std::uint8_t>(std::lround(srgb_delinearize(r)));
    rgb[1] = static_cast<std::uint8_t>(std::lround(srgb_delinearize(g)));
    rgb[2] = static_cast<std::uint8_t>(std::lround(srgb_delinearize(b)));
}

} // namespace detail

inline LabImage rgb_to_lab(const RgbImage& img) {
    LabImage out(img.width, img.height);
    parallel_rows(img.height, [&](int y0, int y1) {
        for (int y = y0; y < y1; ++y)
            for (int x = 0; x < img.width; ++x)
                detail::rgb_to_lab_pixel(img.at(x, y), out.at(x, y));
    });
    return out;
}

inline RgbImage lab_to_rgb(const LabImage& img) {
    RgbImage out(img.width, img.height);
    parallel_rows(img.height, [&](int y0, int y1) {
        for (int y = y0; y < y1; ++y)
            for (int x = 0; x < img.width; ++x)
                detail::lab_to_rgb_pixel(img.at(x, y), out.at(x, y));
    });
    return out;
}

// L channel rescaled to [0,1]; the one grayscale used by frequency-domain code.
inline ScalarField gray_from_lab(const LabImage& lab) {
    ScalarField out(lab.width, lab.height);
    for (std::int64_t i = 0, n = out.values.size(); i < n; ++i)
        out.values[i] = lab.data[static_cast<std::size_t>(i) * 3] / 100.0;
    return out;
}

// Affine rescale to [0,1]; a constant field maps to all zeros.
inline ScalarField normalize(const ScalarField& field) {
    double lo = std::numeric_limits<double>::infinity();
    double hi = -std::numeric_limits<double>::infinity();
    for (double v : field.values) {
        if (!std::isfinite(v)) throw InvalidArgument("normalize: non-finite value");
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    ScalarField out(field.width, field.height);
    if (hi > lo) {
        double scale = hi - lo;
        for (std::size_t i = 0; i < field.values.size(); ++i)
            out.values[i] = (field.values[i] - lo) / scale;
    }
    return out;
}

} // namespace automatte

#endif
