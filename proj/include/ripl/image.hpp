#ifndef RIPL_IMAGE_HPP
#define RIPL_IMAGE_HPP

#include <cstdint>
#include <vector>

namespace ripl {

// Grayscale frame, row-major, 8-bit pixels. (x, y) lives at y*width + x.
struct Image {
    long long width = 0;
    long long height = 0;
    std::vector<uint8_t> pixels;

    Image() = default;
    Image(long long w, long long h, uint8_t fill = 0)
        : width(w), height(h), pixels(static_cast<size_t>(w * h), fill) {}

    uint8_t at(long long x, long long y) const {
        return pixels[static_cast<size_t>(y * width + x)];
    }
    void set(long long x, long long y, uint8_t v) {
        pixels[static_cast<size_t>(y * width + x)] = v;
    }
    long long size() const { return width * height; }

    bool operator==(const Image&) const = default;
};

inline uint8_t clamp_pixel(long long v) {
    if (v < 0) return 0;
    if (v > 255) return 255;
    return static_cast<uint8_t>(v);
}

} // namespace ripl

#endif
