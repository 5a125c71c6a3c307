#include "courtaug/png.hpp"

#include <zlib.h>

#include <cstring>
#include <fstream>
#include <stdexcept>

namespace courtaug {

namespace {

void put_u32(std::vector<std::uint8_t>& out, std::uint32_t v) {
    out.push_back(std::uint8_t(v >> 24));
    out.push_back(std::uint8_t(v >> 16));
    out.push_back(std::uint8_t(v >> 8));
    out.push_back(std::uint8_t(v));
}

std::uint32_t read_u32(const std::uint8_t* p) {
    return (std::uint32_t(p[0]) << 24) | (std::uint32_t(p[1]) << 16) |
           (std::uint32_t(p[2]) << 8) | std::uint32_t(p[3]);
}

void write_chunk(std::vector<std::uint8_t>& out, const char type[4],
                 const std::uint8_t* payload, std::size_t n) {
    put_u32(out, std::uint32_t(n));
    std::size_t start = out.size();
    out.insert(out.end(), type, type + 4);
    if (n) out.insert(out.end(), payload, payload + n);
    std::uint32_t crc = std::uint32_t(
        ::crc32(0, out.data() + start, uInt(4 + n)));
    put_u32(out, crc);
}

int paeth(int a, int b, int c) {
    int p = a + b - c;
    int pa = std::abs(p - a), pb = std::abs(p - b), pc = std::abs(p - c);
    if (pa <= pb && pa <= pc) return a;
    if (pb <= pc) return b;
    return c;
}

constexpr std::uint8_t kSignature[8] = {137, 80, 78, 71, 13, 10, 26, 10};

} // namespace

std::vector<std::uint8_t> png_encode(const ImageBuffer& img) {
    if (img.width < 1 || img.height < 1 ||
        (img.channels != 1 && img.channels != 3))
        throw std::invalid_argument("png_encode: need 1- or 3-channel image with positive dims");

    const int bpp = img.channels;
    const std::size_t stride = std::size_t(img.width) * bpp;

    // Raw scanlines, filter type 0 on every row.
    std::vector<std::uint8_t> raw;
    raw.reserve((stride + 1) * img.height);
    for (int y = 0; y < img.height; ++y) {
        raw.push_back(0);
        const std::uint8_t* row = img.data.data() + std::size_t(y) * stride;
        raw.insert(raw.end(), row, row + stride);
    }

    uLongf comp_cap = ::compressBound(uLong(raw.size()));
    std::vector<std::uint8_t> comp(comp_cap);
    if (::compress2(comp.data(), &comp_cap, raw.data(), uLong(raw.size()), 6) != Z_OK)
        throw std::runtime_error("png_encode: deflate failed");
    comp.resize(comp_cap);

    std::vector<std::uint8_t> out;
    out.insert(out.end(), kSignature, kSignature + 8);

    std::uint8_t ihdr[13];
    ihdr[0] = std::uint8_t(std::uint32_t(img.width) >> 24);
    ihdr[1] = std::uint8_t(std::uint32_t(img.width) >> 16);
    ihdr[2] = std::uint8_t(std::uint32_t(img.width) >> 8);
    ihdr[3] = std::uint8_t(img.width);
    ihdr[4] = std::uint8_t(std::uint32_t(img.height) >> 24);
    ihdr[5] = std::uint8_t(std::uint32_t(img.height) >> 16);
    ihdr[6] = std::uint8_t(std::uint32_t(img.height) >> 8);
    ihdr[7] = std::uint8_t(img.height);
    ihdr[8] = 8;                               // bit depth
    ihdr[9] = img.channels == 1 ? 0 : 2;       // color type
    ihdr[10] = 0;                              // compression
    ihdr[11] = 0;                              // filter method
    ihdr[12] = 0;                              // no interlace
    write_chunk(out, "IHDR", ihdr, sizeof ihdr);
    write_chunk(out, "IDAT", comp.data(), comp.size());
    write_chunk(out, "IEND", nullptr, 0);
    return out;
}

ImageBuffer png_decode(const std::uint8_t* bytes, std::size_t size) {
    if (size < 8 || std::memcmp(bytes, kSignature, 8) != 0)
        throw std::runtime_error("png_decode: not a PNG file");

    std::size_t pos = 8;
    int width = 0, height = 0, color_type = -1;
    std::vector<std::uint8_t> idat;
    bool done = false;
    while (pos + 8 <= size && !done) {
        std::uint32_t len = read_u32(bytes + pos);
        if (pos + 12 + len > size)
            throw std::runtime_error("png_decode: truncated chunk");
        const char* type = reinterpret_cast<const char*>(bytes + pos + 4);
        const std::uint8_t* payload = bytes + pos + 8;
        if (std::memcmp(type, "IHDR", 4) == 0) {
            if (len != 13) throw std::runtime_error("png_decode: bad IHDR");
            width = int(read_u32(payload));
            height = int(read_u32(payload + 4));
            int depth = payload[8];
            color_type = payload[9];
            if (depth != 8)
                throw std::runtime_error("png_decode: only 8-bit depth supported");
            if (payload[12] != 0)
                throw std::runtime_error("png_decode: interlaced PNG not supported");
            if (color_type != 0 && color_type != 2 && color_type != 4 && color_type != 6)
                throw std::runtime_error("png_decode: unsupported color type");
        } else if (std::memcmp(type, "IDAT", 4) == 0) {
            idat.insert(idat.end(), payload, payload + len);
        } else if (std::memcmp(type, "IEND", 4) == 0) {
            done = true;
        }
        pos += 12 + len;
    }
    if (width < 1 || height < 1 || idat.empty())
        throw std::runtime_error("png_decode: missing IHDR/IDAT");

    const int src_ch = color_type == 0 ? 1 : color_type == 2 ? 3
                     : color_type == 4 ? 2 : 4;
    const std::size_t stride = std::size_t(width) * src_ch;
    std::vector<std::uint8_t> raw((stride + 1) * height);
    uLongf raw_len = uLongf(raw.size());
    if (::uncompress(raw.data(), &raw_len, idat.data(), uLong(idat.size())) != Z_OK ||
        raw_len != raw.size())
        throw std::runtime_error("png_decode: inflate failed");

    // Undo per-row filters in place.
    std::vector<std::uint8_t> prev(stride, 0);
    std::vector<std::uint8_t> cur(stride);
    const int out_ch = src_ch >= 3 ? 3 : 1;
    ImageBuffer img(width, height, out_ch);
    for (int y = 0; y < height; ++y) {
        const std::uint8_t* rowp = raw.data() + std::size_t(y) * (stride + 1);
        int filter = rowp[0];
        const std::uint8_t* src = rowp + 1;
        for (std::size_t i = 0; i < stride; ++i) {
            int a = i >= std::size_t(src_ch) ? cur[i - src_ch] : 0;
            int b = prev[i];
            int c = i >= std::size_t(src_ch) ? prev[i - src_ch] : 0;
            int x = src[i];
            switch (filter) {
                case 0: break;
                case 1: x += a; break;
                case 2: x += b; break;
                case 3: x += (a + b) / 2; break;
                case 4: x += paeth(a, b, c); break;
                default: throw std::runtime_error("png_decode: bad filter type");
            }
            cur[i] = std::uint8_t(x);
        }
        for (int xpix = 0; xpix < width; ++xpix)
            for (int ch = 0; ch < out_ch; ++ch)
                img.at(xpix, y, ch) = cur[std::size_t(xpix) * src_ch + ch];
        std::swap(prev, cur);
    }
    return img;
}

ImageBuffer png_decode(const std::vector<std::uint8_t>& bytes) {
    return png_decode(bytes.data(), bytes.size());
}

ImageBuffer load_png(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open image: " + path);
    std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(f)),
                                    std::istreambuf_iterator<char>());
    return png_decode(bytes);
}

void save_png(const std::string& path, const ImageBuffer& img) {
    auto bytes = png_encode(img);
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f) throw std::runtime_error("cannot write image: " + path);
    f.write(reinterpret_cast<const char*>(bytes.data()),
            std::streamsize(bytes.size()));
    if (!f) throw std::runtime_error("cannot write image: " + path);
}

} // namespace courtaug
