#ifndef AUTOMATTE_IO_HPP
#define AUTOMATTE_IO_HPP

#include <cerrno>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <string>
#include <vector>

#include "automatte/detail/png.hpp"
#include "automatte/detail/pnm.hpp"
#include "automatte/image.hpp"

// File-level image I/O: PNG (primary) and binary PPM/PGM (debug). Formats are
// detected from magic bytes, never from the file extension.

namespace automatte {

namespace detail {

inline std::vector<std::uint8_t> read_file(const std::string& path) {
    std::FILE* f = std::fopen(path.c_str(), "rb");
    if (!f) {
        throw IoError(IoError::Kind::NotFound, "cannot open '" + path + "' for reading");
    }
    std::vector<std::uint8_t> out;
    std::uint8_t buf[65536];
    std::size_t n;
    while ((n = std::fread(buf, 1, sizeof buf, f)) > 0) out.insert(out.end(), buf, buf + n);
    bool bad = std::ferror(f) != 0;
    std::fclose(f);
    if (bad) throw IoError(IoError::Kind::NotFound, "read error on '" + path + "'");
    return out;
}

inline void write_file(const std::string& path, const std::vector<std::uint8_t>& bytes) {
    std::FILE* f = std::fopen(path.c_str(), "wb");
    if (!f) throw IoError(IoError::Kind::Unwritable, "cannot open '" + path + "' for writing");
    std::size_t n = std::fwrite(bytes.data(), 1, bytes.size(), f);
    bool bad = n != bytes.size() || std::fclose(f) != 0;
    if (bad) {
        if (n != bytes.size()) std::fclose(f);
        throw IoError(IoError::Kind::Unwritable, "write error on '" + path + "'");
    }
}

inline DecodedImage decode_any(const std::vector<std::uint8_t>& bytes, const std::string& path) {
    if (looks_like_png(bytes.data(), bytes.size())) return png_decode(bytes.data(), bytes.size());
    if (looks_like_pnm(bytes.data(), bytes.size())) return pnm_decode(bytes.data(), bytes.size());
    throw IoError(IoError::Kind::Unsupported,
                  "'" + path + "' is neither PNG nor binary PPM/PGM");
}

} // namespace detail

// Any supported input becomes 3-channel: gray is replicated, alpha dropped.
inline RgbImage load_rgb(const std::string& path) {
    detail::DecodedImage d = detail::decode_any(detail::read_file(path), path);
    RgbImage img(d.width, d.height);
    const std::uint8_t* src = d.pixels.data();
    for (std::int64_t i = 0, n = img.pixels(); i < n; ++i) {
        std::uint8_t* px = &img.data[static_cast<std::size_t>(i) * 3];
        switch (d.channels) {
        case 1: px[0] = px[1] = px[2] = src[i]; break;
        case 2: px[0] = px[1] = px[2] = src[i * 2]; break;
        case 3: std::memcpy(px, src + i * 3, 3); break;
        default: std::memcpy(px, src + i * 4, 3); break;
        }
    }
    return img;
}

// Grayscale load; color inputs are reduced by Rec.601 luma. Values in [0,1].
inline ScalarField load_gray(const std::string& path) {
    detail::DecodedImage d = detail::decode_any(detail::read_file(path), path);
    ScalarField out(d.width, d.height);
    const std::uint8_t* src = d.pixels.data();
    for (std::size_t i = 0; i < out.values.size(); ++i) {
        double v;
        switch (d.channels) {
        case 1: v = src[i]; break;
        case 2: v = src[i * 2]; break;
        default:
            v = 0.299 * src[i * d.channels] + 0.587 * src[i * d.channels + 1] +
                0.114 * src[i * d.channels + 2];
            break;
        }
        out.values[i] = v / 255.0;
    }
    return out;
}

// 8-bit grayscale PNG with byte = round(value * 255). Values must already be
// in [0,1]; that contract is checked before anything is written.
inline void save_gray(const ScalarField& field, const std::string& path) {
    std::vector<std::uint8_t> bytes(field.values.size());
    for (std::size_t i = 0; i < field.values.size(); ++i) {
        double v = field.values[i];
        if (!(v >= 0.0 && v <= 1.0))
            throw InvalidArgument("save_gray: value " + std::to_string(v) + " outside [0,1]");
        bytes[i] = static_cast<std::uint8_t>(std::lround(v * 255.0));
    }
    detail::write_file(path, detail::png_encode(field.width, field.height, 1, bytes.data()));
}

inline void save_rgb(const RgbImage& img, const std::string& path) {
    detail::write_file(path, detail::png_encode(img.width, img.height, 3, img.data.data()));
}

// Debug dumps in PNM form.
inline void save_ppm(const RgbImage& img, const std::string& path) {
    detail::write_file(path, detail::pnm_encode(img.width, img.height, 3, img.data.data()));
}

inline void save_pgm16(int width, int height, const std::vector<std::uint16_t>& values,
                       const std::string& path) {
    if (static_cast<std::size_t>(width) * height != values.size())
        throw InvalidArgument("save_pgm16: size mismatch");
    detail::write_file(path, detail::pgm16_encode(width, height, values));
}

inline void save_text(const std::string& path, const std::string& text) {
    detail::write_file(path, std::vector<std::uint8_t>(text.begin(), text.end()));
}

} // namespace automatte

#endif
