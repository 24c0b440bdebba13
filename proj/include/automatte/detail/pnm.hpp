#ifndef AUTOMATTE_DETAIL_PNM_HPP
#define AUTOMATTE_DETAIL_PNM_HPP

#include <cctype>
#include <cstdint>
#include <string>
#include <vector>

#include "automatte/detail/png.hpp" // DecodedImage
#include "automatte/error.hpp"

// Binary PPM (P6) / PGM (P5) reader and writer. Reading accepts maxval up to
// 65535 (two-byte big-endian samples rescaled by integer division by 257).

namespace automatte::detail {

namespace pnmimpl {

struct Lexer {
    const std::uint8_t* data;
    std::size_t size;
    std::size_t pos = 0;

    int next_token_int() {
        // skip whitespace and '#' comments
        for (;;) {
            if (pos >= size) throw IoError(IoError::Kind::Corrupt, "pnm: truncated header");
            if (std::isspace(data[pos])) {
                ++pos;
            } else if (data[pos] == '#') {
                while (pos < size && data[pos] != '\n') ++pos;
            } else {
                break;
            }
        }
        if (!std::isdigit(data[pos])) throw IoError(IoError::Kind::Corrupt, "pnm: bad header token");
        long v = 0;
        while (pos < size && std::isdigit(data[pos])) {
            v = v * 10 + (data[pos] - '0');
            if (v > 1 << 30) throw IoError(IoError::Kind::Corrupt, "pnm: header value out of range");
            ++pos;
        }
        return static_cast<int>(v);
    }

    void expect_single_whitespace() {
        if (pos >= size || !std::isspace(data[pos]))
            throw IoError(IoError::Kind::Corrupt, "pnm: missing separator before raster");
        ++pos;
    }
};

} // namespace pnmimpl

inline bool looks_like_pnm(const std::uint8_t* data, std::size_t size) {
    return size >= 2 && data[0] == 'P' && (data[1] == '5' || data[1] == '6');
}

inline DecodedImage pnm_decode(const std::uint8_t* data, std::size_t size) {
    if (!looks_like_pnm(data, size))
        throw IoError(IoError::Kind::Unsupported, "pnm: not a binary PGM/PPM");
    int channels = data[1] == '6' ? 3 : 1;
    pnmimpl::Lexer lex{data, size, 2};
    int width = lex.next_token_int();
    int height = lex.next_token_int();
    int maxval = lex.next_token_int();
    lex.expect_single_whitespace();
    if (width < 1 || height < 1 || maxval < 1 || maxval > 65535)
        throw IoError(IoError::Kind::Corrupt, "pnm: bad header values");

    DecodedImage img;
    img.width = width;
    img.height = height;
    img.channels = channels;
    std::size_t samples = static_cast<std::size_t>(width) * height * channels;
    int bytes_per = maxval > 255 ? 2 : 1;
    if (size - lex.pos < samples * bytes_per)
        throw IoError(IoError::Kind::Corrupt, "pnm: truncated raster");
    img.pixels.resize(samples);
    const std::uint8_t* p = data + lex.pos;
    if (bytes_per == 1) {
        for (std::size_t i = 0; i < samples; ++i) img.pixels[i] = p[i];
    } else {
        for (std::size_t i = 0; i < samples; ++i) {
            int v = p[2 * i] * 256 + p[2 * i + 1];
            img.pixels[i] = static_cast<std::uint8_t>(v / 257);
        }
    }
    return img;
}

inline std::vector<std::uint8_t> pnm_encode(int width, int height, int channels,
                                            const std::uint8_t* pixels) {
    if (channels != 1 && channels != 3)
        throw InvalidArgument("pnm_encode: channels must be 1 or 3");
    std::string header = std::string(channels == 3 ? "P6" : "P5") + "\n" +
                         std::to_string(width) + " " + std::to_string(height) + "\n255\n";
    std::vector<std::uint8_t> out(header.begin(), header.end());
    out.insert(out.end(), pixels,
               pixels + static_cast<std::size_t>(width) * height * channels);
    return out;
}

// 16-bit PGM (big-endian samples), used for superpixel label dumps.
inline std::vector<std::uint8_t> pgm16_encode(int width, int height,
                                              const std::vector<std::uint16_t>& values) {
    std::string header = "P5\n" + std::to_string(width) + " " + std::to_string(height) + "\n65535\n";
    std::vector<std::uint8_t> out(header.begin(), header.end());
    out.reserve(out.size() + values.size() * 2);
    for (std::uint16_t v : values) {
        out.push_back(std::uint8_t(v >> 8));
        out.push_back(std::uint8_t(v & 0xff));
    }
    return out;
}

} // namespace automatte::detail

#endif
