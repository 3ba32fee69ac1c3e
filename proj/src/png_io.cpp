#include "gsw/png_io.hpp"

#include <zlib.h>

#include <cmath>
#include <cstring>
#include <fstream>
#include <vector>

#include "gsw/error.hpp"

namespace gsw {

namespace {

constexpr unsigned char kSignature[8] = {0x89, 'P', 'N', 'G', '\r', '\n', 0x1a, '\n'};

void put_u32(std::vector<unsigned char>& out, uint32_t v) {
    out.push_back(static_cast<unsigned char>(v >> 24));
    out.push_back(static_cast<unsigned char>(v >> 16));
    out.push_back(static_cast<unsigned char>(v >> 8));
    out.push_back(static_cast<unsigned char>(v));
}

uint32_t read_u32(const unsigned char* p) {
    return (static_cast<uint32_t>(p[0]) << 24) | (static_cast<uint32_t>(p[1]) << 16) |
           (static_cast<uint32_t>(p[2]) << 8) | p[3];
}

void append_chunk(std::vector<unsigned char>& out, const char type[4],
                  const std::vector<unsigned char>& data) {
    put_u32(out, static_cast<uint32_t>(data.size()));
    size_t type_at = out.size();
    out.insert(out.end(), type, type + 4);
    out.insert(out.end(), data.begin(), data.end());
    uLong crc = crc32(0L, out.data() + type_at, static_cast<uInt>(4 + data.size()));
    put_u32(out, static_cast<uint32_t>(crc));
}

unsigned char paeth(int a, int b, int c) {
    int p = a + b - c;
    int pa = std::abs(p - a), pb = std::abs(p - b), pc = std::abs(p - c);
    if (pa <= pb && pa <= pc) return static_cast<unsigned char>(a);
    if (pb <= pc) return static_cast<unsigned char>(b);
    return static_cast<unsigned char>(c);
}

}  // namespace

void write_png(const FrameImage& img, const std::string& path) {
    require(img.width > 0 && img.height > 0, "write_png '", path, "': empty image");
    require(img.data.size() == static_cast<size_t>(img.width) * img.height * 3, "write_png '",
            path, "': buffer size mismatch");

    const size_t row_bytes = static_cast<size_t>(img.width) * 3;
    std::vector<unsigned char> raw((row_bytes + 1) * img.height);
    size_t at = 0;
    for (int y = 0; y < img.height; ++y) {
        raw[at++] = 0;  // filter: None
        const double* row = img.pixel(0, y);
        for (size_t i = 0; i < row_bytes; ++i) {
            double v = std::clamp(row[i], 0.0, 1.0);
            raw[at++] = static_cast<unsigned char>(std::floor(v * 255.0 + 0.5));
        }
    }

    uLongf comp_len = compressBound(static_cast<uLong>(raw.size()));
    std::vector<unsigned char> comp(comp_len);
    int rc = compress2(comp.data(), &comp_len, raw.data(), static_cast<uLong>(raw.size()), 6);
    if (rc != Z_OK) fail("write_png '", path, "': deflate failed (zlib rc ", rc, ")");
    comp.resize(comp_len);

    std::vector<unsigned char> ihdr;
    put_u32(ihdr, static_cast<uint32_t>(img.width));
    put_u32(ihdr, static_cast<uint32_t>(img.height));
    ihdr.push_back(8);  // bit depth
    ihdr.push_back(2);  // color type: truecolor RGB
    ihdr.push_back(0);  // compression
    ihdr.push_back(0);  // filter method
    ihdr.push_back(0);  // no interlace

    std::vector<unsigned char> file(kSignature, kSignature + 8);
    append_chunk(file, "IHDR", ihdr);
    append_chunk(file, "IDAT", comp);
    append_chunk(file, "IEND", {});

    std::ofstream out(path, std::ios::binary);
    if (!out) fail("write_png: cannot open '", path, "' for writing");
    out.write(reinterpret_cast<const char*>(file.data()), static_cast<std::streamsize>(file.size()));
    if (!out) fail("write_png: write failed for '", path, "'");
}

FrameImage read_png(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) fail("read_png: cannot open '", path, "'");
    std::vector<unsigned char> file((std::istreambuf_iterator<char>(in)),
                                    std::istreambuf_iterator<char>());
    if (file.size() < 8 || std::memcmp(file.data(), kSignature, 8) != 0)
        fail("read_png '", path, "': not a PNG file");

    int width = 0, height = 0;
    std::vector<unsigned char> idat;
    bool saw_ihdr = false;
    size_t at = 8;
    while (at + 8 <= file.size()) {
        uint32_t len = read_u32(&file[at]);
        if (at + 12 + len > file.size()) fail("read_png '", path, "': truncated chunk");
        std::string type(reinterpret_cast<const char*>(&file[at + 4]), 4);
        const unsigned char* data = &file[at + 8];
        if (type == "IHDR") {
            if (len != 13) fail("read_png '", path, "': bad IHDR length");
            width = static_cast<int>(read_u32(data));
            height = static_cast<int>(read_u32(data + 4));
            if (data[8] != 8 || data[9] != 2 || data[12] != 0)
                fail("read_png '", path, "': unsupported format (need 8-bit RGB, no interlace)");
            saw_ihdr = true;
        } else if (type == "IDAT") {
            idat.insert(idat.end(), data, data + len);
        } else if (type == "IEND") {
            break;
        }
        at += 12 + len;
    }
    if (!saw_ihdr || width <= 0 || height <= 0) fail("read_png '", path, "': missing IHDR");
    if (idat.empty()) fail("read_png '", path, "': missing IDAT");

    const size_t row_bytes = static_cast<size_t>(width) * 3;
    std::vector<unsigned char> raw((row_bytes + 1) * height);
    uLongf raw_len = static_cast<uLongf>(raw.size());
    int rc = uncompress(raw.data(), &raw_len, idat.data(), static_cast<uLong>(idat.size()));
    if (rc != Z_OK || raw_len != raw.size())
        fail("read_png '", path, "': inflate failed (zlib rc ", rc, ")");

    FrameImage img(width, height);
    std::vector<unsigned char> prev(row_bytes, 0);
    std::vector<unsigned char> cur(row_bytes);
    for (int y = 0; y < height; ++y) {
        const unsigned char* src = &raw[(row_bytes + 1) * y];
        unsigned char filter = src[0];
        const unsigned char* s = src + 1;
        for (size_t i = 0; i < row_bytes; ++i) {
            int left = i >= 3 ? cur[i - 3] : 0;
            int up = prev[i];
            int ul = i >= 3 ? prev[i - 3] : 0;
            int v = s[i];
            switch (filter) {
                case 0: break;
                case 1: v += left; break;
                case 2: v += up; break;
                case 3: v += (left + up) / 2; break;
                case 4: v += paeth(left, up, ul); break;
                default: fail("read_png '", path, "': unknown filter ", int(filter));
            }
            cur[i] = static_cast<unsigned char>(v);
        }
        double* dst = img.pixel(0, y);
        for (size_t i = 0; i < row_bytes; ++i) dst[i] = cur[i] / 255.0;
        std::swap(prev, cur);
    }
    return img;
}

}  // namespace gsw
