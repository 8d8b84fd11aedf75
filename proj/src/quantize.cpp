#include "huescan/quantize.hpp"

#include <algorithm>
#include <cassert>
#include <limits>
#include <random>
#include <stdexcept>
#include <tuple>

#include "huescan/errors.hpp"
#include "huescan/transport.hpp"

namespace huescan {

namespace {

double uniform01(std::mt19937_64& rng) {
    // 53-bit mantissa draw; identical on every platform, unlike
    // std::uniform_real_distribution.
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

bool entry_order(const PaletteEntry& a, const PaletteEntry& b) {
    if (a.weight != b.weight) {
        return a.weight > b.weight;
    }
    return std::tie(a.centroid.h, a.centroid.s, a.centroid.v) <
           std::tie(b.centroid.h, b.centroid.s, b.centroid.v);
}

// k-means++ over weighted points: each next centroid is drawn with
// probability proportional to count * D^2 from the current centroid set.
std::vector<CylPoint> kmeanspp_init(const std::vector<detail::WeightedColor>& colors, int k,
                                    std::mt19937_64& rng) {
    const std::size_t n = colors.size();
    std::vector<CylPoint> centroids;
    centroids.reserve(k);

    double total_count = 0.0;
    for (const auto& c : colors) total_count += c.count;

    // First pick: weighted uniform over pixels.
    double x = uniform01(rng) * total_count;
    std::size_t first = n - 1;
    for (std::size_t i = 0; i < n; ++i) {
        x -= colors[i].count;
        if (x < 0.0) {
            first = i;
            break;
        }
    }
    centroids.push_back(colors[first].point);

    std::vector<double> d2(n);
    for (std::size_t i = 0; i < n; ++i) {
        d2[i] = squared_distance(colors[i].point, centroids[0]);
    }

    while (static_cast<int>(centroids.size()) < k) {
        double total = 0.0;
        for (std::size_t i = 0; i < n; ++i) total += colors[i].count * d2[i];

        // With n > k distinct points some d2 is always positive.
        std::size_t pick = n;
        double y = uniform01(rng) * total;
        for (std::size_t i = 0; i < n; ++i) {
            y -= colors[i].count * d2[i];
            if (y < 0.0) {
                pick = i;
                break;
            }
        }
        if (pick == n) { // rounding pushed y past the end; take the last live point
            for (std::size_t i = n; i-- > 0;) {
                if (d2[i] > 0.0) {
                    pick = i;
                    break;
                }
            }
        }
        centroids.push_back(colors[pick].point);
        for (std::size_t i = 0; i < n; ++i) {
            d2[i] = std::min(d2[i], squared_distance(colors[i].point, colors[pick].point));
        }
    }
    return centroids;
}

} // namespace

namespace detail {

std::vector<WeightedColor> unique_colors(const PixelCloud& cloud) {
    std::vector<Hsv> sorted(cloud.pixels);
    std::sort(sorted.begin(), sorted.end());

    std::vector<WeightedColor> out;
    for (std::size_t i = 0; i < sorted.size();) {
        std::size_t j = i;
        while (j < sorted.size() && sorted[j] == sorted[i]) ++j;
        out.push_back({sorted[i], hsv_to_cyl(sorted[i]), static_cast<double>(j - i)});
        i = j;
    }
    return out;
}

LloydResult lloyd_restart(const std::vector<WeightedColor>& colors, int k, std::uint64_t seed,
                          int max_iter, double tol) {
    const std::size_t n = colors.size();
    if (n <= static_cast<std::size_t>(k)) {
        throw std::invalid_argument("lloyd_restart: needs more distinct colors than k");
    }
    std::mt19937_64 rng(seed);

    LloydResult res;
    res.centroids = kmeanspp_init(colors, k, rng);
    res.assignment.assign(n, 0);

    auto assign_all = [&]() {
        for (std::size_t i = 0; i < n; ++i) {
            double best = std::numeric_limits<double>::infinity();
            int best_c = 0;
            for (int c = 0; c < k; ++c) {
                const double d = squared_distance(colors[i].point, res.centroids[c]);
                if (d < best) {
                    best = d;
                    best_c = c;
                }
            }
            res.assignment[i] = best_c;
        }
    };

    std::vector<double> cw(k);       // cluster pixel mass
    std::vector<CylPoint> sums(k);   // weighted coordinate sums

    for (int iter = 0; iter < max_iter; ++iter) {
        assign_all();

        std::fill(cw.begin(), cw.end(), 0.0);
        std::fill(sums.begin(), sums.end(), CylPoint{});
        for (std::size_t i = 0; i < n; ++i) {
            const int c = res.assignment[i];
            cw[c] += colors[i].count;
            sums[c].x += colors[i].count * colors[i].point.x;
            sums[c].y += colors[i].count * colors[i].point.y;
            sums[c].z += colors[i].count * colors[i].point.z;
        }

        // Empty clusters grab the point currently worst served.
        bool reseeded = false;
        std::vector<bool> taken(n, false);
        for (int c = 0; c < k; ++c) {
            if (cw[c] > 0.0) continue;
            double worst = -1.0;
            std::size_t worst_i = 0;
            for (std::size_t i = 0; i < n; ++i) {
                if (taken[i]) continue;
                const double d = squared_distance(colors[i].point, res.centroids[res.assignment[i]]);
                if (d > worst) {
                    worst = d;
                    worst_i = i;
                }
            }
            res.centroids[c] = colors[worst_i].point;
            taken[worst_i] = true;
            reseeded = true;
        }
        if (reseeded) {
            continue; // re-assign before judging movement
        }

        double movement = 0.0;
        for (int c = 0; c < k; ++c) {
            const CylPoint next{sums[c].x / cw[c], sums[c].y / cw[c], sums[c].z / cw[c]};
            movement = std::max(movement, distance(res.centroids[c], next));
            res.centroids[c] = next;
        }

        double wcss = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            wcss += colors[i].count *
                    squared_distance(colors[i].point, res.centroids[res.assignment[i]]);
        }
        assert(res.wcss_trace.empty() || wcss <= res.wcss_trace.back() + 1e-9);
        res.wcss_trace.push_back(wcss);

        if (movement < tol) {
            break;
        }
    }

    assign_all();
    res.wcss = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        res.wcss +=
            colors[i].count * squared_distance(colors[i].point, res.centroids[res.assignment[i]]);
    }
    return res;
}

} // namespace detail

PixelCloud load_pixels(const std::vector<std::uint8_t>& bytes, const QuantizeConfig& config) {
    return cloud_from_raster(decode_image(bytes), config.max_pixels);
}

PixelCloud cloud_from_raster(const Raster& img, std::size_t max_pixels) {
    const std::size_t n = img.pixels.size();
    if (n == 0) {
        throw EmptyImage("image has no pixels");
    }
    if (max_pixels == 0) {
        throw std::invalid_argument("max_pixels must be positive");
    }
    const std::size_t stride = n > max_pixels ? (n + max_pixels - 1) / max_pixels : 1;

    PixelCloud cloud;
    cloud.width = img.width;
    cloud.height = img.height;
    cloud.source_pixel_count = n;
    cloud.pixels.reserve(n / stride + 1);
    for (std::size_t i = 0; i < n; i += stride) {
        const Rgba8& px = img.pixels[i];
        if (px.a < 128) {
            continue;
        }
        cloud.pixels.push_back(rgb_to_hsv({px.r, px.g, px.b}));
    }
    if (cloud.pixels.empty()) {
        throw EmptyImage("image has no opaque pixels");
    }
    return cloud;
}

PixelCloud dense_cloud(const Raster& img) {
    if (img.pixels.empty()) {
        throw EmptyImage("image has no pixels");
    }
    PixelCloud cloud;
    cloud.width = img.width;
    cloud.height = img.height;
    cloud.source_pixel_count = img.pixels.size();
    cloud.pixels.reserve(img.pixels.size());
    for (const Rgba8& px : img.pixels) {
        cloud.pixels.push_back(rgb_to_hsv({px.r, px.g, px.b}));
    }
    return cloud;
}

Palette kmeans_palette(const PixelCloud& cloud, const QuantizeConfig& config) {
    if (cloud.pixels.empty()) {
        throw std::invalid_argument("kmeans_palette: empty cloud");
    }
    if (config.k < 1 || config.max_iter < 1 || config.n_init < 1 || config.tol <= 0.0) {
        throw std::invalid_argument("kmeans_palette: bad config");
    }

    const std::vector<detail::WeightedColor> colors = detail::unique_colors(cloud);
    const double total = static_cast<double>(cloud.pixels.size());

    Palette palette;
    if (colors.size() <= static_cast<std::size_t>(config.k)) {
        // Fewer distinct colors than clusters: the colors themselves are the
        // exact optimum.
        for (const auto& c : colors) {
            palette.entries.push_back({c.color, c.count / total});
        }
        std::sort(palette.entries.begin(), palette.entries.end(), entry_order);
        palette.effective_k = static_cast<int>(palette.entries.size());
        return palette;
    }

    detail::LloydResult best;
    best.wcss = std::numeric_limits<double>::infinity();
    for (int r = 0; r < config.n_init; ++r) {
        detail::LloydResult res = detail::lloyd_restart(colors, config.k, config.seed + r,
                                                        config.max_iter, config.tol);
        if (res.wcss < best.wcss) {
            best = std::move(res);
        }
    }

    // Cluster populations; a cluster of exactly one distinct color reports
    // that color bit-exactly instead of round-tripping the embedding.
    std::vector<double> counts(config.k, 0.0);
    std::vector<CylPoint> sums(config.k);
    std::vector<int> single(config.k, -1); // -1 none, -2 mixed, else color index
    for (std::size_t i = 0; i < colors.size(); ++i) {
        const int c = best.assignment[i];
        counts[c] += colors[i].count;
        sums[c].x += colors[i].count * colors[i].point.x;
        sums[c].y += colors[i].count * colors[i].point.y;
        sums[c].z += colors[i].count * colors[i].point.z;
        single[c] = single[c] == -1 ? static_cast<int>(i) : -2;
    }
    for (int c = 0; c < config.k; ++c) {
        if (counts[c] <= 0.0) {
            continue;
        }
        Hsv centroid;
        if (single[c] >= 0) {
            centroid = colors[single[c]].color;
        } else {
            centroid =
                cyl_to_hsv({sums[c].x / counts[c], sums[c].y / counts[c], sums[c].z / counts[c]});
        }
        palette.entries.push_back({centroid, counts[c] / total});
    }
    std::sort(palette.entries.begin(), palette.entries.end(), entry_order);
    palette.effective_k = static_cast<int>(palette.entries.size());
    return palette;
}

double kmeans_objective(const PixelCloud& cloud, const Palette& palette) {
    if (palette.entries.empty()) {
        throw std::invalid_argument("kmeans_objective: empty palette");
    }
    std::vector<CylPoint> centroids;
    centroids.reserve(palette.entries.size());
    for (const auto& e : palette.entries) {
        centroids.push_back(hsv_to_cyl(e.centroid));
    }
    double wcss = 0.0;
    for (const Hsv& px : cloud.pixels) {
        const CylPoint p = hsv_to_cyl(px);
        double best = std::numeric_limits<double>::infinity();
        for (const CylPoint& c : centroids) {
            best = std::min(best, squared_distance(p, c));
        }
        wcss += best;
    }
    return wcss;
}

double palette_distance(const Palette& a, const Palette& b) {
    if (a.entries.empty() || b.entries.empty()) {
        throw std::invalid_argument("palette_distance: empty palette");
    }
    const std::size_t m = a.entries.size();
    const std::size_t n = b.entries.size();
    std::vector<double> wa(m);
    std::vector<double> wb(n);
    std::vector<CylPoint> pa(m);
    std::vector<CylPoint> pb(n);
    for (std::size_t i = 0; i < m; ++i) {
        wa[i] = a.entries[i].weight;
        pa[i] = hsv_to_cyl(a.entries[i].centroid);
    }
    for (std::size_t j = 0; j < n; ++j) {
        wb[j] = b.entries[j].weight;
        pb[j] = hsv_to_cyl(b.entries[j].centroid);
    }
    std::vector<double> cost(m * n);
    for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            cost[i * n + j] = distance(pa[i], pb[j]);
        }
    }
    return solve_transport(wa, wb, cost);
}

} // namespace huescan
