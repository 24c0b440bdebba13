#ifndef AUTOMATTE_DETAIL_PNG_HPP
#define AUTOMATTE_DETAIL_PNG_HPP

#include <algorithm>
#include <cstdint>
#include <cstdlib>
#include <cstring>
#include <string>
#include <vector>

#include <zlib.h>

#include "automatte/error.hpp"

// Minimal PNG codec over zlib. Reads non-interlaced gray / palette / RGB(A)
// at bit depths 1..16; writes 8-bit gray or RGB with filter type None.
// 16-bit samples are rescaled to 8-bit by integer division by 257.

namespace automatte::detail {

struct DecodedImage {
    int width = 0;
    int height = 0;
    int channels = 0; // 1 gray, 2 gray+alpha, 3 rgb, 4 rgba
    std::vector<std::uint8_t> pixels;
};

namespace pngimpl {

inline const std::uint8_t kSignature[8] = {137, 80, 78, 71, 13, 10, 26, 10};

struct Reader {
    const std::uint8_t* data;
    std::size_t size;
    std::size_t pos = 0;

    bool remaining(std::size_t n) const { return size - pos >= n; }

    const std::uint8_t* take(std::size_t n) {
        if (!remaining(n)) throw IoError(IoError::Kind::Corrupt, "png: truncated file");
        const std::uint8_t* p = data + pos;
        pos += n;
        return p;
    }

    std::uint32_t u32() {
        const std::uint8_t* p = take(4);
        return (std::uint32_t(p[0]) << 24) | (std::uint32_t(p[1]) << 16) |
               (std::uint32_t(p[2]) << 8) | std::uint32_t(p[3]);
    }
};

inline std::vector<std::uint8_t> inflate_exact(const std::vector<std::uint8_t>& src,
                                               std::size_t expected) {
    std::vector<std::uint8_t> out(expected);
    z_stream zs{};
    if (inflateInit(&zs) != Z_OK) throw IoError(IoError::Kind::Corrupt, "png: inflate init failed");
    zs.next_in = const_cast<Bytef*>(src.data());
    zs.avail_in = static_cast<uInt>(src.size());
    zs.next_out = out.data();
    zs.avail_out = static_cast<uInt>(out.size());
    int rc = inflate(&zs, Z_FINISH);
    bool ok = rc == Z_STREAM_END && zs.total_out == expected;
    inflateEnd(&zs);
    if (!ok) throw IoError(IoError::Kind::Corrupt, "png: compressed image data is truncated or invalid");
    return out;
}

inline int paeth(int a, int b, int c) {
    int p = a + b - c;
    int pa = std::abs(p - a), pb = std::abs(p - b), pc = std::abs(p - c);
    if (pa <= pb && pa <= pc) return a;
    return pb <= pc ? b : c;
}

inline void unfilter(std::vector<std::uint8_t>& raw, int height, std::size_t rowbytes, int bpp) {
    for (int y = 0; y < height; ++y) {
        std::uint8_t* row = raw.data() + static_cast<std::size_t>(y) * (rowbytes + 1);
        const std::uint8_t* prev =
            y > 0 ? raw.data() + static_cast<std::size_t>(y - 1) * (rowbytes + 1) + 1 : nullptr;
        int filter = row[0];
        std::uint8_t* cur = row + 1;
        switch (filter) {
        case 0:
            break;
        case 1:
            for (std::size_t i = bpp; i < rowbytes; ++i) cur[i] = std::uint8_t(cur[i] + cur[i - bpp]);
            break;
        case 2:
            if (prev)
                for (std::size_t i = 0; i < rowbytes; ++i) cur[i] = std::uint8_t(cur[i] + prev[i]);
            break;
        case 3:
            for (std::size_t i = 0; i < rowbytes; ++i) {
                int left = i >= static_cast<std::size_t>(bpp) ? cur[i - bpp] : 0;
                int up = prev ? prev[i] : 0;
                cur[i] = std::uint8_t(cur[i] + (left + up) / 2);
            }
            break;
        case 4:
            for (std::size_t i = 0; i < rowbytes; ++i) {
                int left = i >= static_cast<std::size_t>(bpp) ? cur[i - bpp] : 0;
                int up = prev ? prev[i] : 0;
                int ul = (prev && i >= static_cast<std::size_t>(bpp)) ? prev[i - bpp] : 0;
                cur[i] = std::uint8_t(cur[i] + paeth(left, up, ul));
            }
            break;
        default:
            throw IoError(IoError::Kind::Corrupt, "png: invalid filter type");
        }
    }
}

// Expands one unfiltered scanline to 8-bit samples (per-channel for depth
// >= 8, palette/gray indices for sub-byte depths).
inline void expand_row(const std::uint8_t* row, int width, int channels, int depth,
                       std::uint8_t* out) {
    if (depth == 8) {
        std::memcpy(out, row, static_cast<std::size_t>(width) * channels);
    } else if (depth == 16) {
        for (int i = 0; i < width * channels; ++i) {
            int v = row[2 * i] * 256 + row[2 * i + 1];
            out[i] = static_cast<std::uint8_t>(v / 257);
        }
    } else { // 1, 2, 4 bit gray or palette indices
        int per_byte = 8 / depth;
        int mask = (1 << depth) - 1;
        for (int x = 0; x < width; ++x) {
            int byte = row[x / per_byte];
            int shift = 8 - depth * (x % per_byte + 1);
            out[x] = static_cast<std::uint8_t>((byte >> shift) & mask);
        }
    }
}

} // namespace pngimpl

inline bool looks_like_png(const std::uint8_t* data, std::size_t size) {
    return size >= 8 && std::memcmp(data, pngimpl::kSignature, 8) == 0;
}

inline DecodedImage png_decode(const std::uint8_t* data, std::size_t size) {
    using namespace pngimpl;
    if (!looks_like_png(data, size))
        throw IoError(IoError::Kind::Unsupported, "png: bad signature");
    Reader r{data, size, 8};

    int width = 0, height = 0, depth = 0, color_type = -1;
    std::vector<std::uint8_t> palette;
    std::vector<std::uint8_t> idat;
    bool saw_ihdr = false, saw_iend = false;

    while (!saw_iend) {
        std::uint32_t len = r.u32();
        if (len > (1u << 30)) throw IoError(IoError::Kind::Corrupt, "png: oversized chunk");
        const std::uint8_t* type = r.take(4);
        const std::uint8_t* payload = r.take(len);
        std::uint32_t crc = r.u32();
        std::uint32_t actual = static_cast<std::uint32_t>(
            crc32(crc32(0, type, 4), payload, static_cast<uInt>(len)));
        if (crc != actual) throw IoError(IoError::Kind::Corrupt, "png: chunk crc mismatch");

        if (std::memcmp(type, "IHDR", 4) == 0) {
            if (len != 13) throw IoError(IoError::Kind::Corrupt, "png: bad IHDR length");
            width = int((std::uint32_t(payload[0]) << 24) | (payload[1] << 16) | (payload[2] << 8) |
                        payload[3]);
            height = int((std::uint32_t(payload[4]) << 24) | (payload[5] << 16) | (payload[6] << 8) |
                         payload[7]);
            depth = payload[8];
            color_type = payload[9];
            if (width <= 0 || height <= 0 ||
                static_cast<std::int64_t>(width) * height > (std::int64_t(1) << 30))
                throw IoError(IoError::Kind::Corrupt, "png: bad dimensions");
            if (payload[10] != 0 || payload[11] != 0)
                throw IoError(IoError::Kind::Corrupt, "png: bad compression/filter method");
            if (payload[12] != 0)
                throw IoError(IoError::Kind::Unsupported, "png: interlaced images not supported");
            bool ok = (color_type == 0 && (depth == 1 || depth == 2 || depth == 4 || depth == 8 ||
                                           depth == 16)) ||
                      (color_type == 2 && (depth == 8 || depth == 16)) ||
                      (color_type == 3 && (depth == 1 || depth == 2 || depth == 4 || depth == 8)) ||
                      (color_type == 4 && (depth == 8 || depth == 16)) ||
                      (color_type == 6 && (depth == 8 || depth == 16));
            if (!ok) throw IoError(IoError::Kind::Unsupported, "png: unsupported depth/color type");
            saw_ihdr = true;
        } else if (std::memcmp(type, "PLTE", 4) == 0) {
            if (len % 3 != 0 || len == 0) throw IoError(IoError::Kind::Corrupt, "png: bad PLTE");
            palette.assign(payload, payload + len);
        } else if (std::memcmp(type, "IDAT", 4) == 0) {
            idat.insert(idat.end(), payload, payload + len);
        } else if (std::memcmp(type, "IEND", 4) == 0) {
            saw_iend = true;
        }
        // ancillary chunks are skipped
    }
    if (!saw_ihdr || idat.empty())
        throw IoError(IoError::Kind::Corrupt, "png: missing IHDR or IDAT");

    int raw_channels = color_type == 2 ? 3 : color_type == 4 ? 2 : color_type == 6 ? 4 : 1;
    std::size_t rowbits = static_cast<std::size_t>(width) * raw_channels * depth;
    std::size_t rowbytes = (rowbits + 7) / 8;
    std::vector<std::uint8_t> raw =
        inflate_exact(idat, static_cast<std::size_t>(height) * (rowbytes + 1));
    int bpp = std::max(1, raw_channels * depth / 8);
    unfilter(raw, height, rowbytes, bpp);

    DecodedImage img;
    img.width = width;
    img.height = height;
    img.channels = color_type == 3 ? 3 : raw_channels;
    img.pixels.resize(static_cast<std::size_t>(width) * height * img.channels);

    std::vector<std::uint8_t> line(static_cast<std::size_t>(width) * raw_channels);
    for (int y = 0; y < height; ++y) {
        const std::uint8_t* row = raw.data() + static_cast<std::size_t>(y) * (rowbytes + 1) + 1;
        expand_row(row, width, raw_channels, depth, line.data());
        std::uint8_t* out = img.pixels.data() + static_cast<std::size_t>(y) * width * img.channels;
        if (color_type == 3) {
            for (int x = 0; x < width; ++x) {
                std::size_t idx = static_cast<std::size_t>(line[x]) * 3;
                if (idx + 2 >= palette.size())
                    throw IoError(IoError::Kind::Corrupt, "png: palette index out of range");
                out[x * 3 + 0] = palette[idx + 0];
                out[x * 3 + 1] = palette[idx + 1];
                out[x * 3 + 2] = palette[idx + 2];
            }
        } else if (color_type == 0 && depth < 8) {
            int scale = 255 / ((1 << depth) - 1);
            for (int x = 0; x < width; ++x) out[x] = static_cast<std::uint8_t>(line[x] * scale);
        } else {
            std::memcpy(out, line.data(), line.size());
        }
    }
    return img;
}

namespace pngimpl {

inline void put_u32(std::vector<std::uint8_t>& out, std::uint32_t v) {
    out.push_back(std::uint8_t(v >> 24));
    out.push_back(std::uint8_t(v >> 16));
    out.push_back(std::uint8_t(v >> 8));
    out.push_back(std::uint8_t(v));
}

inline void put_chunk(std::vector<std::uint8_t>& out, const char* type,
                      const std::uint8_t* data, std::size_t len) {
    put_u32(out, static_cast<std::uint32_t>(len));
    std::size_t start = out.size();
    out.insert(out.end(), type, type + 4);
    if (len > 0) out.insert(out.end(), data, data + len);
    std::uint32_t crc = static_cast<std::uint32_t>(
        crc32(0, out.data() + start, static_cast<uInt>(4 + len)));
    put_u32(out, crc);
}

} // namespace pngimpl

// channels must be 1 (gray) or 3 (rgb); always 8-bit, filter None, one IDAT.
inline std::vector<std::uint8_t> png_encode(int width, int height, int channels,
                                            const std::uint8_t* pixels) {
    using namespace pngimpl;
    if (width < 1 || height < 1 || (channels != 1 && channels != 3))
        throw InvalidArgument("png_encode: bad dimensions or channel count");

    std::size_t rowbytes = static_cast<std::size_t>(width) * channels;
    std::vector<std::uint8_t> raw;
    raw.reserve((rowbytes + 1) * height);
    for (int y = 0; y < height; ++y) {
        raw.push_back(0); // filter: None
        const std::uint8_t* row = pixels + static_cast<std::size_t>(y) * rowbytes;
        raw.insert(raw.end(), row, row + rowbytes);
    }
    uLongf bound = compressBound(static_cast<uLong>(raw.size()));
    std::vector<std::uint8_t> compressed(bound);
    if (compress2(compressed.data(), &bound, raw.data(), static_cast<uLong>(raw.size()), 6) != Z_OK)
        throw IoError(IoError::Kind::Unwritable, "png: deflate failed");
    compressed.resize(bound);

    std::vector<std::uint8_t> out(kSignature, kSignature + 8);
    std::uint8_t ihdr[13];
    ihdr[0] = std::uint8_t(width >> 24);
    ihdr[1] = std::uint8_t(width >> 16);
    ihdr[2] = std::uint8_t(width >> 8);
    ihdr[3] = std::uint8_t(width);
    ihdr[4] = std::uint8_t(height >> 24);
    ihdr[5] = std::uint8_t(height >> 16);
    ihdr[6] = std::uint8_t(height >> 8);
    ihdr[7] = std::uint8_t(height);
    ihdr[8] = 8;
    ihdr[9] = channels == 1 ? 0 : 2;
    ihdr[10] = ihdr[11] = ihdr[12] = 0;
    put_chunk(out, "IHDR", ihdr, 13);
    put_chunk(out, "IDAT", compressed.data(), compressed.size());
    put_chunk(out, "IEND", nullptr, 0);
    return out;
}

} // namespace automatte::detail

#endif
