#ifndef RIPL_PGM_HPP
#define RIPL_PGM_HPP

#include <cctype>
#include <string>
#include <string_view>

#include "ripl/diag.hpp"
#include "ripl/image.hpp"

namespace ripl {

enum class PgmFormat { P5, P2 };

namespace detail {

struct PgmScanner {
    std::string_view data;
    size_t pos = 0;

    // Header tokens are separated by whitespace; '#' comments run to the
    // end of the line and may appear anywhere in the header.
    bool next_token(std::string& out) {
        for (;;) {
            while (pos < data.size() &&
                   std::isspace(static_cast<unsigned char>(data[pos])))
                ++pos;
            if (pos < data.size() && data[pos] == '#') {
                while (pos < data.size() && data[pos] != '\n') ++pos;
                continue;
            }
            break;
        }
        if (pos >= data.size()) return false;
        size_t start = pos;
        while (pos < data.size() && !std::isspace(static_cast<unsigned char>(data[pos])) &&
               data[pos] != '#')
            ++pos;
        out = std::string(data.substr(start, pos - start));
        return true;
    }

    bool next_int(long long& out) {
        std::string tok;
        if (!next_token(tok)) return false;
        try {
            size_t used = 0;
            out = std::stoll(tok, &used);
            return used == tok.size();
        } catch (...) {
            return false;
        }
    }
};

} // namespace detail

// P5 (binary) and P2 (ASCII) grayscale up to maxval 255.
inline Result<Image> read_pgm(std::string_view bytes) {
    auto fail = [](const char* code, const std::string& msg) {
        return Result<Image>::failure(Diag{code, SourcePos{1, 1}, msg});
    };

    detail::PgmScanner sc{bytes};
    std::string magic;
    if (!sc.next_token(magic) || (magic != "P5" && magic != "P2"))
        return fail("E_MAGIC", "not a P2/P5 PGM file");
    bool binary = magic == "P5";

    long long w = 0, h = 0, maxval = 0;
    if (!sc.next_int(w) || !sc.next_int(h) || w < 1 || h < 1)
        return fail("E_HEADER", "malformed width/height");
    if (!sc.next_int(maxval) || maxval < 1)
        return fail("E_HEADER", "malformed maxval");
    if (maxval > 255)
        return fail("E_MAXVAL", "maxval " + std::to_string(maxval) + " exceeds 255");

    Image im(w, h);
    const long long count = w * h;
    if (binary) {
        // exactly one whitespace byte after maxval, then raw pixels
        if (sc.pos >= bytes.size() ||
            !std::isspace(static_cast<unsigned char>(bytes[sc.pos])))
            return fail("E_HEADER", "missing separator after maxval");
        size_t start = sc.pos + 1;
        if (bytes.size() - start < static_cast<size_t>(count))
            return fail("E_TRUNCATED", "pixel data ends early (need " + std::to_string(count) +
                                           " bytes, have " +
                                           std::to_string(bytes.size() - start) + ")");
        for (long long i = 0; i < count; ++i) {
            unsigned char v = static_cast<unsigned char>(bytes[start + static_cast<size_t>(i)]);
            if (v > maxval)
                return fail("E_TRUNCATED", "pixel value " + std::to_string(v) +
                                               " exceeds maxval " + std::to_string(maxval));
            im.pixels[static_cast<size_t>(i)] = v;
        }
    } else {
        for (long long i = 0; i < count; ++i) {
            long long v;
            if (!sc.next_int(v))
                return fail("E_TRUNCATED", "pixel data ends early at pixel " + std::to_string(i));
            if (v < 0 || v > maxval)
                return fail("E_TRUNCATED", "pixel value " + std::to_string(v) +
                                               " out of range 0.." + std::to_string(maxval));
            im.pixels[static_cast<size_t>(i)] = static_cast<uint8_t>(v);
        }
    }
    return Result<Image>::success(std::move(im));
}

// Canonical writer: equal images always produce identical bytes.
inline std::string write_pgm(const Image& im, PgmFormat format = PgmFormat::P5) {
    std::string out;
    if (format == PgmFormat::P5) {
        out = "P5\n" + std::to_string(im.width) + " " + std::to_string(im.height) + "\n255\n";
        out.append(reinterpret_cast<const char*>(im.pixels.data()), im.pixels.size());
    } else {
        out = "P2\n" + std::to_string(im.width) + " " + std::to_string(im.height) + "\n255\n";
        for (long long y = 0; y < im.height; ++y) {
            for (long long x = 0; x < im.width; ++x) {
                if (x) out += ' ';
                out += std::to_string(im.at(x, y));
            }
            out += '\n';
        }
    }
    return out;
}

} // namespace ripl

#endif
