#include "huescan/image.hpp"

#include <fstream>

#include <opencv2/core.hpp>
#include <opencv2/imgcodecs.hpp>

#include "huescan/errors.hpp"

namespace huescan {

Raster decode_image(const std::vector<std::uint8_t>& bytes) {
    if (bytes.empty()) {
        throw DecodeError("empty byte stream");
    }
    if (detail::looks_like_gif(bytes)) {
        return detail::decode_gif_first_frame(bytes);
    }

    cv::Mat mat;
    try {
        mat = cv::imdecode(bytes, cv::IMREAD_UNCHANGED);
    } catch (const cv::Exception& e) {
        throw DecodeError(std::string("image decode failed: ") + e.what());
    }
    if (mat.empty()) {
        throw DecodeError("unsupported or corrupt image data");
    }
    if (mat.depth() == CV_16U) {
        mat.convertTo(mat, CV_8U, 1.0 / 257.0);
    }
    if (mat.depth() != CV_8U) {
        throw DecodeError("unsupported pixel depth");
    }

    Raster img;
    img.width = mat.cols;
    img.height = mat.rows;
    img.pixels.resize(static_cast<std::size_t>(mat.cols) * mat.rows);

    const int ch = mat.channels();
    for (int y = 0; y < mat.rows; ++y) {
        const std::uint8_t* row = mat.ptr<std::uint8_t>(y);
        for (int x = 0; x < mat.cols; ++x) {
            Rgba8& px = img.pixels[static_cast<std::size_t>(y) * mat.cols + x];
            const std::uint8_t* p = row + static_cast<std::size_t>(x) * ch;
            switch (ch) {
            case 1:
                px = {p[0], p[0], p[0], 255};
                break;
            case 3: // OpenCV decodes as BGR
                px = {p[2], p[1], p[0], 255};
                break;
            case 4:
                px = {p[2], p[1], p[0], p[3]};
                break;
            default:
                throw DecodeError("unsupported channel count");
            }
        }
    }
    return img;
}

std::vector<std::uint8_t> encode_png(const Raster& img) {
    bool has_alpha = false;
    for (const Rgba8& px : img.pixels) {
        if (px.a != 255) {
            has_alpha = true;
            break;
        }
    }
    cv::Mat mat(img.height, img.width, has_alpha ? CV_8UC4 : CV_8UC3);
    for (int y = 0; y < img.height; ++y) {
        std::uint8_t* row = mat.ptr<std::uint8_t>(y);
        for (int x = 0; x < img.width; ++x) {
            const Rgba8& px = img.at(x, y);
            std::uint8_t* p = row + static_cast<std::size_t>(x) * (has_alpha ? 4 : 3);
            p[0] = px.b;
            p[1] = px.g;
            p[2] = px.r;
            if (has_alpha) {
                p[3] = px.a;
            }
        }
    }
    std::vector<std::uint8_t> out;
    if (!cv::imencode(".png", mat, out)) {
        throw Error("png encode failed");
    }
    return out;
}

std::vector<std::uint8_t> read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw DecodeError("cannot open file: " + path.string());
    }
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void write_file(const std::filesystem::path& path, const std::vector<std::uint8_t>& bytes) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw Error("cannot write file: " + path.string());
    }
    out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
}

} // namespace huescan
