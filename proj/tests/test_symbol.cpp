#include <fstream>

#include <doctest.h>

#include "huescan/errors.hpp"
#include "huescan/symbol.hpp"
#include "testutil.hpp"

using namespace huescan;

namespace {

// 20x20 logo, black with a yellow band: exactly 80% / 20% by pixel count.
Raster two_color_logo() {
    return testutil::make_raster(20, 20, [](int, int y) {
        return y < 4 ? Rgba8{255, 255, 0, 255} : Rgba8{0, 0, 0, 255};
    });
}

PixelCloud cloud_of_raster(const Raster& img) {
    PixelCloud c;
    c.width = img.width;
    c.height = img.height;
    c.source_pixel_count = img.pixels.size();
    for (const Rgba8& px : img.pixels) {
        c.pixels.push_back(rgb_to_hsv({px.r, px.g, px.b}));
    }
    return c;
}

QuantizeConfig config_k(int k) {
    QuantizeConfig c;
    c.k = k;
    return c;
}

} // namespace

TEST_SUITE("symbol") {

TEST_CASE("signature_from_image recovers a two-color logo exactly") {
    const SymbolSignature sig =
        signature_from_image(encode_png(two_color_logo()), "bee", config_k(2));
    REQUIRE(sig.palette.entries.size() == 2);
    CHECK(sig.palette.entries[0].centroid == rgb_to_hsv({0, 0, 0}));
    CHECK(sig.palette.entries[0].weight == doctest::Approx(0.8).epsilon(1e-12));
    CHECK(sig.palette.entries[1].centroid == rgb_to_hsv({255, 255, 0}));
    CHECK(sig.palette.entries[1].weight == doctest::Approx(0.2).epsilon(1e-12));
}

TEST_CASE("solid logo is legal but collapses to one color") {
    const SymbolSignature sig = signature_from_image(
        encode_png(testutil::solid_raster(16, 16, {10, 160, 220, 255})), "mono", config_k(3));
    CHECK(sig.palette.effective_k == 1);
}

TEST_CASE("fully transparent reference image is an error") {
    CHECK_THROWS_AS(
        signature_from_image(read_file(testutil::fixture("transparent_all.png")), "ghost",
                             config_k(2)),
        EmptyImage);
}

TEST_CASE("tile that is the logo itself matches with near-perfect similarity") {
    const Raster logo = two_color_logo();
    const SymbolSignature sig = signature_from_image(encode_png(logo), "bee", config_k(2));
    const SymbolMatch m = match_tile(cloud_of_raster(logo), sig);
    CHECK(m.matched);
    CHECK(m.ratio_similarity >= 0.99);
}

TEST_CASE("unrelated uniform tile does not match") {
    const SymbolSignature sig =
        signature_from_image(encode_png(two_color_logo()), "bee", config_k(2));
    const SymbolMatch m =
        match_tile(cloud_of_raster(testutil::solid_raster(32, 32, {200, 40, 40, 255})), sig);
    CHECK_FALSE(m.matched);
    CHECK(m.ratio_similarity == 0.0);
}

TEST_CASE("inverted proportions: colors present but ratios wrong") {
    const SymbolSignature sig =
        signature_from_image(encode_png(two_color_logo()), "bee", config_k(2));
    // 80% yellow / 20% black: swapped relative to the 80/20 black/yellow sig
    const Raster inverted = testutil::make_raster(20, 20, [](int, int y) {
        return y < 16 ? Rgba8{255, 255, 0, 255} : Rgba8{0, 0, 0, 255};
    });
    const SymbolMatch m = match_tile(cloud_of_raster(inverted), sig);
    // cosine((0.2, 0.8), (0.8, 0.2)) = 0.32 / 0.68
    CHECK(m.ratio_similarity == doctest::Approx(0.32 / 0.68).epsilon(1e-6));
    CHECK_FALSE(m.matched);
}

TEST_CASE("missing required color blocks a match regardless of similarity") {
    const SymbolSignature sig =
        signature_from_image(encode_png(two_color_logo()), "bee", config_k(2));
    // all black: cosine((1,0),(0.8,0.2)) ~ 0.97 >= theta, but yellow absent
    const SymbolMatch m =
        match_tile(cloud_of_raster(testutil::solid_raster(20, 20, {0, 0, 0, 255})), sig);
    CHECK(m.ratio_similarity >= 0.9);
    CHECK_FALSE(m.matched);
}

TEST_CASE("tile grid geometry") {
    CHECK(default_tile_size(512, 512) == 64);
    CHECK(default_tile_size(100, 300) == 32); // 100/8 = 12 -> floor of 32

    const TileGrid grid = make_tile_grid(100, 50, 32);
    REQUIRE(grid.tiles.size() == 8); // 4 x 2
    long long area = 0;
    for (const TileRect& t : grid.tiles) {
        CHECK(t.width >= 1);
        CHECK(t.height >= 1);
        CHECK(t.x + t.width <= 100);
        CHECK(t.y + t.height <= 50);
        area += static_cast<long long>(t.width) * t.height;
    }
    CHECK(area == 100 * 50); // disjoint cover
    CHECK(grid.tiles[0].x == 0);
    CHECK(grid.tiles[3].width == 4); // 100 - 3*32
    CHECK_THROWS_AS(make_tile_grid(0, 10, 32), Error);
}

TEST_CASE("paste harness: logo pasted at (128,128) in a 512x512 background") {
    const Raster logo = testutil::make_raster(64, 64, [](int, int y) {
        return y < 13 ? Rgba8{255, 255, 0, 255} : Rgba8{0, 0, 0, 255};
    });
    const SymbolSignature sig = signature_from_image(encode_png(logo), "bee", config_k(2));

    Raster bg = testutil::solid_raster(512, 512, {128, 128, 128, 255});
    const MatchResult clean = match_symbols(encode_png(bg), {{sig, std::nullopt}});
    CHECK_FALSE(clean.flags.at("bee").flagged);
    for (const SymbolMatch& m : clean.matches) {
        CHECK_FALSE(m.matched);
    }

    for (int y = 0; y < 64; ++y) {
        for (int x = 0; x < 64; ++x) {
            bg.at(128 + x, 128 + y) = logo.at(x, y);
        }
    }
    const MatchResult planted = match_symbols(encode_png(bg), {{sig, std::nullopt}});
    CHECK(planted.flags.at("bee").flagged);
    bool hit_at_paste = false;
    for (const SymbolMatch& m : planted.matches) {
        if (m.matched) {
            // default tile size for 512x512 is 64 -> aligned with the paste
            CHECK(m.tile_x == 128);
            CHECK(m.tile_y == 128);
            hit_at_paste = true;
        }
    }
    CHECK(hit_at_paste);
}

TEST_CASE("translation property: every tile-aligned paste position matches") {
    const Raster logo = testutil::make_raster(32, 32, [](int, int y) {
        return y < 7 ? Rgba8{255, 255, 0, 255} : Rgba8{0, 0, 0, 255};
    });
    const SymbolSignature sig = signature_from_image(encode_png(logo), "bee", config_k(2));

    for (int ty = 0; ty < 8; ++ty) {
        for (int tx = 0; tx < 8; ++tx) {
            Raster bg = testutil::solid_raster(256, 256, {128, 128, 128, 255});
            for (int y = 0; y < 32; ++y) {
                for (int x = 0; x < 32; ++x) {
                    bg.at(tx * 32 + x, ty * 32 + y) = logo.at(x, y);
                }
            }
            MatchOptions options;
            options.tile_size = 32;
            const MatchResult res = match_symbols(encode_png(bg), {{sig, std::nullopt}}, options);
            bool hit = false;
            for (const SymbolMatch& m : res.matches) {
                hit = hit || (m.matched && m.tile_x == tx * 32 && m.tile_y == ty * 32);
            }
            INFO("paste at tile (", tx, ",", ty, ")");
            CHECK(hit);
        }
    }
}

TEST_CASE("scaling the reference image leaves weights within 0.02") {
    const Raster logo = two_color_logo();
    const Raster doubled = testutil::make_raster(40, 40, [&](int x, int y) {
        return logo.at(x / 2, y / 2);
    });
    const SymbolSignature s1 = signature_from_image(encode_png(logo), "bee", config_k(2));
    const SymbolSignature s2 = signature_from_image(encode_png(doubled), "bee", config_k(2));
    REQUIRE(s1.palette.entries.size() == s2.palette.entries.size());
    for (std::size_t i = 0; i < s1.palette.entries.size(); ++i) {
        CHECK(std::fabs(s1.palette.entries[i].weight - s2.palette.entries[i].weight) <= 0.02);
    }
}

TEST_CASE("match list is sorted by symbol then row-major tile") {
    const SymbolSignature a =
        signature_from_image(encode_png(two_color_logo()), "alpha", config_k(2));
    const SymbolSignature b =
        signature_from_image(encode_png(testutil::solid_raster(8, 8, {0, 80, 160, 255})), "zeta",
                             config_k(1));
    const Raster img = testutil::solid_raster(100, 60, {50, 50, 50, 255});
    MatchOptions options;
    options.tile_size = 32;
    const MatchResult res =
        match_symbols(encode_png(img), {{b, std::nullopt}, {a, std::nullopt}}, options);

    const std::size_t tiles = make_tile_grid(100, 60, 32).tiles.size();
    REQUIRE(res.matches.size() == 2 * tiles);
    for (std::size_t i = 0; i < tiles; ++i) {
        CHECK(res.matches[i].symbol_name == "alpha");
        CHECK(res.matches[tiles + i].symbol_name == "zeta");
    }
    for (std::size_t i = 1; i < tiles; ++i) {
        const auto& prev = res.matches[i - 1];
        const auto& cur = res.matches[i];
        CHECK((cur.tile_y > prev.tile_y || (cur.tile_y == prev.tile_y && cur.tile_x > prev.tile_x)));
    }
}

TEST_CASE("per-symbol theta override and flag aggregation") {
    const SymbolSignature sig =
        signature_from_image(encode_png(two_color_logo()), "bee", config_k(2));
    // 70/30 tile vs 80/20 signature: present but similarity ~ 0.98
    const Raster off = testutil::make_raster(20, 20, [](int, int y) {
        return y < 6 ? Rgba8{255, 255, 0, 255} : Rgba8{0, 0, 0, 255};
    });
    MatchOptions options;
    options.tile_size = 20;

    const MatchResult strict =
        match_symbols(encode_png(off), {{sig, 0.999}}, options);
    CHECK_FALSE(strict.flags.at("bee").flagged);
    CHECK(strict.flags.at("bee").best_similarity > 0.9);

    const MatchResult loose = match_symbols(encode_png(off), {{sig, 0.9}}, options);
    CHECK(loose.flags.at("bee").flagged);
}

TEST_CASE("match_symbols validates inputs") {
    CHECK_THROWS_AS(match_symbols(encode_png(testutil::solid_raster(8, 8, {1, 2, 3, 255})), {}),
                    Error);
}

TEST_CASE("symbol database loading") {
    testutil::TempDir tmp("symdb");
    write_file(tmp.path / "bee.png", encode_png(two_color_logo()));
    write_file(tmp.path / "dot.png", encode_png(testutil::solid_raster(8, 8, {0, 0, 255, 255})));

    {
        std::ofstream out(tmp.path / "symbols.json");
        out << R"({"version": 1, "symbols": [
            {"name": "bee", "image": "bee.png", "k": 2},
            {"name": "dot", "image": "dot.png", "theta": 0.5}
        ]})";
    }
    const std::vector<SymbolDbEntry> db = load_symbol_db(tmp.path, config_k(5));
    REQUIRE(db.size() == 2);
    CHECK(db[0].signature.name == "bee");
    CHECK(db[0].signature.palette.entries.size() == 2);
    CHECK_FALSE(db[0].theta.has_value());
    CHECK(db[1].theta == doctest::Approx(0.5));

    {
        std::ofstream out(tmp.path / "symbols.json");
        out << R"({"version": 2, "symbols": []})";
    }
    CHECK_THROWS_AS(load_symbol_db(tmp.path, config_k(5)), ManifestParseError);

    {
        std::ofstream out(tmp.path / "symbols.json");
        out << R"({"version": 1, "symbols": [
            {"name": "bee", "image": "bee.png"},
            {"name": "bee", "image": "dot.png"}
        ]})";
    }
    CHECK_THROWS_AS(load_symbol_db(tmp.path, config_k(5)), ManifestParseError);

    {
        std::ofstream out(tmp.path / "symbols.json");
        out << "not json";
    }
    CHECK_THROWS_AS(load_symbol_db(tmp.path, config_k(5)), ManifestParseError);

    CHECK_THROWS_AS(load_symbol_db(tmp.path / "missing", config_k(5)), ManifestParseError);
}

} // TEST_SUITE
