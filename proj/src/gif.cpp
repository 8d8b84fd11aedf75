// First-frame GIF decoding. OpenCV's imgcodecs has no GIF support, and the
// corpus scanner has to accept GIFs, so this implements the subset needed:
// GIF87a/89a, global/local color tables, LZW, interlacing, transparency.

#include <cstddef>
#include <cstdint>
#include <vector>

#include "huescan/errors.hpp"
#include "huescan/image.hpp"

namespace huescan::detail {

namespace {

class ByteReader {
public:
    explicit ByteReader(const std::vector<std::uint8_t>& data) : data_(data) {}

    std::uint8_t u8() {
        if (pos_ >= data_.size()) {
            throw DecodeError("gif: truncated stream");
        }
        return data_[pos_++];
    }

    std::uint16_t u16le() {
        const std::uint16_t lo = u8();
        const std::uint16_t hi = u8();
        return static_cast<std::uint16_t>(lo | (hi << 8));
    }

    void skip(std::size_t n) {
        if (pos_ + n > data_.size()) {
            throw DecodeError("gif: truncated stream");
        }
        pos_ += n;
    }

    void read(std::uint8_t* dst, std::size_t n) {
        if (pos_ + n > data_.size()) {
            throw DecodeError("gif: truncated stream");
        }
        std::copy(data_.begin() + pos_, data_.begin() + pos_ + n, dst);
        pos_ += n;
    }

private:
    const std::vector<std::uint8_t>& data_;
    std::size_t pos_ = 0;
};

struct ColorTable {
    std::vector<Rgb8> entries;
};

ColorTable read_color_table(ByteReader& r, int size_field) {
    ColorTable t;
    const int n = 1 << (size_field + 1);
    t.entries.resize(n);
    for (int i = 0; i < n; ++i) {
        std::uint8_t rgb[3];
        r.read(rgb, 3);
        t.entries[i] = {rgb[0], rgb[1], rgb[2]};
    }
    return t;
}

void skip_sub_blocks(ByteReader& r) {
    for (std::uint8_t n = r.u8(); n != 0; n = r.u8()) {
        r.skip(n);
    }
}

std::vector<std::uint8_t> read_sub_blocks(ByteReader& r) {
    std::vector<std::uint8_t> out;
    for (std::uint8_t n = r.u8(); n != 0; n = r.u8()) {
        const std::size_t off = out.size();
        out.resize(off + n);
        r.read(out.data() + off, n);
    }
    return out;
}

// GIF-flavored LZW: codes read LSB-first, dictionary capped at 12 bits.
std::vector<std::uint8_t> lzw_decode(const std::vector<std::uint8_t>& data, int min_code_size,
                                     std::size_t expected_pixels) {
    if (min_code_size < 2 || min_code_size > 11) {
        throw DecodeError("gif: bad LZW minimum code size");
    }
    const int clear_code = 1 << min_code_size;
    const int end_code = clear_code + 1;
    constexpr int kMaxCodes = 4096;

    std::vector<int> prefix(kMaxCodes, -1);
    std::vector<std::uint8_t> suffix(kMaxCodes, 0);
    for (int i = 0; i < clear_code; ++i) {
        suffix[i] = static_cast<std::uint8_t>(i);
    }

    int next_code = end_code + 1;
    int code_size = min_code_size + 1;
    int prev = -1;

    std::size_t bit_pos = 0;
    const std::size_t bit_end = data.size() * 8;
    auto read_code = [&]() -> int {
        if (bit_pos + code_size > bit_end) {
            return -1;
        }
        int value = 0;
        for (int i = 0; i < code_size; ++i, ++bit_pos) {
            if (data[bit_pos >> 3] & (1u << (bit_pos & 7))) {
                value |= 1 << i;
            }
        }
        return value;
    };

    std::vector<std::uint8_t> out;
    out.reserve(expected_pixels);
    std::vector<std::uint8_t> stack;

    auto emit = [&](int code) {
        stack.clear();
        for (int c = code; c >= 0; c = prefix[c]) {
            stack.push_back(suffix[c]);
        }
        out.insert(out.end(), stack.rbegin(), stack.rend());
    };
    auto first_byte = [&](int code) {
        while (prefix[code] >= 0) {
            code = prefix[code];
        }
        return suffix[code];
    };

    while (out.size() < expected_pixels) {
        const int code = read_code();
        if (code < 0 || code == end_code) {
            break;
        }
        if (code == clear_code) {
            next_code = end_code + 1;
            code_size = min_code_size + 1;
            prev = -1;
            continue;
        }
        if (prev == -1) {
            if (code >= clear_code) {
                throw DecodeError("gif: invalid first LZW code");
            }
            emit(code);
            prev = code;
            continue;
        }
        if (code > next_code) {
            throw DecodeError("gif: LZW code out of range");
        }
        if (code == next_code) {
            // Not yet defined: prev's string plus its own first byte.
            if (next_code >= kMaxCodes) {
                throw DecodeError("gif: LZW code out of range");
            }
            prefix[next_code] = prev;
            suffix[next_code] = first_byte(prev);
            ++next_code;
            emit(code);
        } else {
            if (next_code < kMaxCodes) {
                prefix[next_code] = prev;
                suffix[next_code] = first_byte(code);
                ++next_code;
            }
            emit(code);
        }
        if (next_code == (1 << code_size) && code_size < 12) {
            ++code_size;
        }
        prev = code;
    }

    if (out.size() < expected_pixels) {
        throw DecodeError("gif: LZW stream ended early");
    }
    out.resize(expected_pixels);
    return out;
}

} // namespace

bool looks_like_gif(const std::vector<std::uint8_t>& bytes) {
    static const std::uint8_t kMagic87[] = {'G', 'I', 'F', '8', '7', 'a'};
    static const std::uint8_t kMagic89[] = {'G', 'I', 'F', '8', '9', 'a'};
    if (bytes.size() < 6) {
        return false;
    }
    return std::equal(kMagic87, kMagic87 + 6, bytes.begin()) ||
           std::equal(kMagic89, kMagic89 + 6, bytes.begin());
}

Raster decode_gif_first_frame(const std::vector<std::uint8_t>& bytes) {
    if (!looks_like_gif(bytes)) {
        throw DecodeError("gif: bad signature");
    }
    ByteReader r(bytes);
    r.skip(6);

    const int screen_w = r.u16le();
    const int screen_h = r.u16le();
    const std::uint8_t packed = r.u8();
    r.skip(2); // background color index, aspect ratio
    if (screen_w <= 0 || screen_h <= 0) {
        throw DecodeError("gif: zero logical screen");
    }

    ColorTable global;
    if (packed & 0x80) {
        global = read_color_table(r, packed & 0x07);
    }

    Raster img;
    img.width = screen_w;
    img.height = screen_h;
    img.pixels.assign(static_cast<std::size_t>(screen_w) * screen_h, Rgba8{0, 0, 0, 0});

    int transparent_index = -1;
    while (true) {
        const std::uint8_t block = r.u8();
        if (block == 0x3B) { // trailer before any image data
            throw DecodeError("gif: no image data");
        }
        if (block == 0x21) { // extension
            const std::uint8_t label = r.u8();
            if (label == 0xF9) { // graphic control
                const std::uint8_t size = r.u8();
                if (size != 4) {
                    throw DecodeError("gif: bad graphic control block");
                }
                const std::uint8_t flags = r.u8();
                r.skip(2); // delay
                const std::uint8_t tindex = r.u8();
                if (flags & 0x01) {
                    transparent_index = tindex;
                }
                if (r.u8() != 0) {
                    throw DecodeError("gif: unterminated graphic control block");
                }
            } else {
                skip_sub_blocks(r);
            }
            continue;
        }
        if (block != 0x2C) {
            throw DecodeError("gif: unexpected block type");
        }

        // Image descriptor for the first frame.
        const int left = r.u16le();
        const int top = r.u16le();
        const int fw = r.u16le();
        const int fh = r.u16le();
        const std::uint8_t fpacked = r.u8();
        if (fw <= 0 || fh <= 0) {
            throw DecodeError("gif: empty frame");
        }

        ColorTable local;
        const ColorTable* table = &global;
        if (fpacked & 0x80) {
            local = read_color_table(r, fpacked & 0x07);
            table = &local;
        }
        if (table->entries.empty()) {
            throw DecodeError("gif: missing color table");
        }

        const int min_code_size = r.u8();
        const std::vector<std::uint8_t> data = read_sub_blocks(r);
        const std::vector<std::uint8_t> indices =
            lzw_decode(data, min_code_size, static_cast<std::size_t>(fw) * fh);

        const bool interlaced = (fpacked & 0x40) != 0;
        static const int kInterlaceStart[4] = {0, 4, 2, 1};
        static const int kInterlaceStep[4] = {8, 8, 4, 2};

        std::size_t src = 0;
        for (int pass = 0; pass < (interlaced ? 4 : 1); ++pass) {
            const int start = interlaced ? kInterlaceStart[pass] : 0;
            const int step = interlaced ? kInterlaceStep[pass] : 1;
            for (int fy = start; fy < fh; fy += step) {
                for (int fx = 0; fx < fw; ++fx, ++src) {
                    const std::uint8_t idx = indices[src];
                    const int x = left + fx;
                    const int y = top + fy;
                    if (x >= screen_w || y >= screen_h) {
                        continue;
                    }
                    if (idx == transparent_index) {
                        continue;
                    }
                    if (static_cast<std::size_t>(idx) >= table->entries.size()) {
                        throw DecodeError("gif: color index out of range");
                    }
                    const Rgb8 c = table->entries[idx];
                    img.pixels[static_cast<std::size_t>(y) * screen_w + x] = {c.r, c.g, c.b, 255};
                }
            }
        }
        break; // first frame only
    }
    return img;
}

} // namespace huescan::detail
