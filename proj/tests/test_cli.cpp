#include <cmath>
#include <cstdlib>
#include <fstream>
#include <set>
#include <sstream>
#include <string>

#include <sys/wait.h>

#include <doctest.h>
#include <nlohmann/json.hpp>

#include "huescan/image.hpp"
#include "testutil.hpp"

namespace {

struct RunResult {
    int exit_code = -1;
    std::string out;
    std::string err;
};

std::string read_text(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

std::string quoted(const std::string& s) {
    return "\"" + s + "\"";
}

RunResult run_cli(const std::string& args) {
    static const std::string cli = HUESCAN_CLI_PATH;
    testutil::TempDir io("cliio");
    const std::filesystem::path out_path = io.path / "out";
    const std::filesystem::path err_path = io.path / "err";
    const std::string cmd = quoted(cli) + " " + args + " > " + quoted(out_path.string()) +
                            " 2> " + quoted(err_path.string());
    const int status = std::system(cmd.c_str());
    RunResult result;
    result.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    result.out = read_text(out_path);
    result.err = read_text(err_path);
    return result;
}

std::string monk_flag() {
    return "--monk-scale " + quoted(testutil::data_file("monk_scale.conf").string());
}

// 20% yellow / 80% blue everywhere, so any tile keeps the ratio.
huescan::Raster ratio_pattern(int w, int h) {
    return testutil::make_raster(w, h, [](int x, int y) {
        return (x + y * 7) % 10 < 2 ? huescan::Rgba8{255, 255, 0, 255}
                                    : huescan::Rgba8{0, 0, 255, 255};
    });
}

} // namespace

TEST_SUITE("cli") {

TEST_CASE("usage errors exit 1, input errors exit 2") {
    CHECK(run_cli("").exit_code == 1);                    // missing subcommand
    CHECK(run_cli("frobnicate x.png").exit_code == 1);    // unknown subcommand
    CHECK(run_cli("quantize").exit_code == 1);            // missing argument
    CHECK(run_cli("quantize x.png --bogus").exit_code == 1);
    CHECK(run_cli("quantize x.png -k 200").exit_code == 1); // out of range

    const RunResult missing = run_cli("quantize /no/such/file.png");
    CHECK(missing.exit_code == 2);
    CHECK(missing.err.find("error:") != std::string::npos);
    CHECK(run_cli("quantize " + quoted(testutil::fixture("corrupt.png").string())).exit_code ==
          2);
    CHECK(run_cli("corpus scan /no/such/dir " + monk_flag()).exit_code == 2);
    CHECK(run_cli("--help").exit_code == 0);
}

TEST_CASE("quantize writes palette, swatch, and scatter") {
    testutil::TempDir tmp("cliquant");
    const RunResult res =
        run_cli("quantize " + quoted(testutil::fixture("pattern.png").string()) + " -k 4 " +
                monk_flag() + " --outdir " + quoted(tmp.path.string()));
    REQUIRE(res.exit_code == 0);

    const auto j = nlohmann::json::parse(res.out);
    CHECK(j.at("effective_k") == 2);
    REQUIRE(j.at("entries").size() == 2);
    std::set<std::string> hexes{j["entries"][0].at("rgb_hex").get<std::string>(),
                                j["entries"][1].at("rgb_hex").get<std::string>()};
    CHECK(hexes == std::set<std::string>{"#ff0000", "#0000ff"});
    CHECK(j["entries"][0].at("weight").get<double>() == doctest::Approx(0.5));

    CHECK(read_text(tmp.path / "pattern.palette.json") == res.out);

    const huescan::Raster swatch =
        huescan::decode_image(huescan::read_file(tmp.path / "pattern.swatch.png"));
    CHECK(swatch.width == 512);
    CHECK(swatch.height == 64);

    const std::string svg = read_text(tmp.path / "pattern.scatter.svg");
    CHECK(svg.rfind("<?xml", 0) == 0);
    CHECK(svg.find("<svg") != std::string::npos);
    CHECK(svg.find("<circle") != std::string::npos);
}

TEST_CASE("quantize: scatter space changes the figure but never the palette") {
    testutil::TempDir hsv_dir("clihsv");
    testutil::TempDir rgb_dir("clirgb");
    const std::string image = quoted(testutil::fixture("pattern.png").string());
    const RunResult hsv = run_cli("quantize " + image + " --space hsv " + monk_flag() +
                                  " --outdir " + quoted(hsv_dir.path.string()));
    const RunResult rgb = run_cli("quantize " + image + " --space rgb " + monk_flag() +
                                  " --outdir " + quoted(rgb_dir.path.string()));
    REQUIRE(hsv.exit_code == 0);
    REQUIRE(rgb.exit_code == 0);
    CHECK(hsv.out == rgb.out);
    CHECK(read_text(hsv_dir.path / "pattern.palette.json") ==
          read_text(rgb_dir.path / "pattern.palette.json"));
    CHECK(read_text(hsv_dir.path / "pattern.scatter.svg") !=
          read_text(rgb_dir.path / "pattern.scatter.svg"));

    CHECK(run_cli("quantize " + image + " --space xyz").exit_code == 1);
}

TEST_CASE("flag-skin flags the skin-tone fixture and honors --out") {
    testutil::TempDir tmp("cliskin");
    const std::filesystem::path out = tmp.path / "report.json";
    const RunResult res = run_cli("flag-skin " +
                                  quoted(testutil::fixture("monkfill.png").string()) + " " +
                                  monk_flag() + " --out " + quoted(out.string()));
    REQUIRE(res.exit_code == 0);
    CHECK(res.out.empty());

    const auto j = nlohmann::json::parse(read_text(out));
    CHECK(j.at("flagged") == true);
    CHECK(j.at("total_matched_fraction").get<double>() == doctest::Approx(1.0));
    CHECK(j.at("per_tone").size() == 10);

    const RunResult blue = run_cli("flag-skin " +
                                   quoted(testutil::fixture("pattern.png").string()) + " " +
                                   monk_flag());
    REQUIRE(blue.exit_code == 0);
    CHECK(nlohmann::json::parse(blue.out).at("flagged") == false);
}

TEST_CASE("forensics verdict through the CLI") {
    const RunResult res = run_cli("forensics " +
                                  quoted(testutil::fixture("twopanel.png").string()) +
                                  " --region-a 0,0,64,64 --region-b 64,0,64,64");
    REQUIRE(res.exit_code == 0);
    const auto j = nlohmann::json::parse(res.out);
    CHECK(j.at("verdict") == "inconsistent");
    CHECK(j.at("distance").get<double>() == doctest::Approx(std::sqrt(3.0)).epsilon(1e-9));

    CHECK(run_cli("forensics " + quoted(testutil::fixture("twopanel.png").string()) +
                  " --region-a 0,0,64,64 --region-b 120,0,64,64")
              .exit_code == 2); // out of bounds
    CHECK(run_cli("forensics " + quoted(testutil::fixture("twopanel.png").string()) +
                  " --region-a nonsense --region-b 0,0,8,8")
              .exit_code == 2);
}

TEST_CASE("match-symbol against a symbol database directory") {
    testutil::TempDir db("clidb");
    huescan::write_file(db.path / "acme.png", testutil::png_of(ratio_pattern(20, 20)));
    huescan::write_file(db.path / "symbols.json",
                        [] {
                            const std::string text =
                                "{\"version\": 1, \"symbols\": ["
                                "{\"name\": \"acme\", \"image\": \"acme.png\", \"k\": 3}]}";
                            return std::vector<std::uint8_t>(text.begin(), text.end());
                        }());

    testutil::TempDir imgs("cliimgs");
    huescan::write_file(imgs.path / "planted.png", testutil::png_of(ratio_pattern(64, 64)));
    huescan::write_file(imgs.path / "clean.png",
                        testutil::png_of(testutil::solid_raster(64, 64, {0, 200, 0, 255})));

    const RunResult hit = run_cli("match-symbol " + quoted((imgs.path / "planted.png").string()) +
                                  " --symbols " + quoted(db.path.string()));
    REQUIRE(hit.exit_code == 0);
    const auto hj = nlohmann::json::parse(hit.out);
    CHECK(hj.at("symbols").at("acme").at("flagged") == true);
    CHECK_FALSE(hj.at("matches").empty());

    const RunResult miss = run_cli("match-symbol " + quoted((imgs.path / "clean.png").string()) +
                                   " --symbols " + quoted(db.path.string()) + " --all-tiles");
    REQUIRE(miss.exit_code == 0);
    const auto mj = nlohmann::json::parse(miss.out);
    CHECK(mj.at("symbols").at("acme").at("flagged") == false);
    CHECK(mj.at("matches").size() == 4); // 64x64 at tile 32: all tiles reported

    CHECK(run_cli("match-symbol " + quoted((imgs.path / "clean.png").string()) +
                  " --symbols /no/such/db")
              .exit_code == 2);
}

TEST_CASE("corpus pipeline: scan, cluster, sample, summarize, evaluate") {
    testutil::TempDir corpus("clicorpus");
    for (int i = 0; i < 2; ++i) {
        huescan::write_file(corpus.path / ("red" + std::to_string(i) + ".png"),
                            testutil::png_of(testutil::solid_raster(8, 8, {250, 10, 10, 255})));
        huescan::write_file(corpus.path / ("blue" + std::to_string(i) + ".png"),
                            testutil::png_of(testutil::solid_raster(8, 8, {10, 10, 250, 255})));
    }
    huescan::write_file(corpus.path / "skin.png",
                        huescan::read_file(testutil::fixture("monkfill.png")));

    testutil::TempDir work("cliwork");
    const std::filesystem::path report = work.path / "report.json";
    const std::filesystem::path assignment = work.path / "assignment.json";

    const RunResult scanned = run_cli("corpus scan " + quoted(corpus.path.string()) + " " +
                                      monk_flag() + " --out " + quoted(report.string()));
    REQUIRE(scanned.exit_code == 0);
    const auto records = nlohmann::json::parse(read_text(report));
    REQUIRE(records.size() == 5);
    CHECK(records[0].at("path") == "blue0.png"); // sorted by path
    for (const auto& rec : records) {
        CHECK(rec.at("status") == "ok");
    }

    // a second scan with more workers produces identical bytes
    const std::filesystem::path report2 = work.path / "report2.json";
    REQUIRE(run_cli("corpus scan " + quoted(corpus.path.string()) + " " + monk_flag() +
                    " --workers 3 --out " + quoted(report2.string()))
                .exit_code == 0);
    CHECK(read_text(report) == read_text(report2));

    const RunResult clustered = run_cli("corpus cluster --report " + quoted(report.string()) +
                                        " -g 2 --out " + quoted(assignment.string()));
    REQUIRE(clustered.exit_code == 0);
    const auto aj = nlohmann::json::parse(read_text(assignment));
    CHECK(aj.at("g") == 2);
    CHECK(aj.at("medoids").size() == 2);
    CHECK(aj.at("groups").size() == 5);

    const RunResult sampled = run_cli("corpus sample --report " + quoted(report.string()) +
                                      " --assignment " + quoted(assignment.string()) +
                                      " -n 2 --strategy stratified-cluster --seed 7");
    REQUIRE(sampled.exit_code == 0);
    const auto sj = nlohmann::json::parse(sampled.out);
    CHECK(sj.size() == 2);
    CHECK(run_cli("corpus sample --report " + quoted(report.string()) +
                  " -n 3 --strategy stratified-cluster")
              .exit_code == 2); // no assignment provided
    CHECK(run_cli("corpus sample --report " + quoted(report.string()) + " -n 99").exit_code ==
          2); // larger than corpus

    const RunResult summary = run_cli("corpus summarize --report " + quoted(report.string()) +
                                      " --format csv");
    REQUIRE(summary.exit_code == 0);
    CHECK(summary.out.rfind("metric,value\n", 0) == 0);
    CHECK(summary.out.find("n_images,5") != std::string::npos);
    CHECK(summary.out.find("n_skin_flagged,1") != std::string::npos);

    const std::filesystem::path labels = work.path / "labels.csv";
    huescan::write_file(labels, [] {
        const std::string text = "path,task,label\n"
                                 "skin.png,skin,true\n"
                                 "red0.png,skin,false\n"
                                 "ghost.png,skin,true\n";
        return std::vector<std::uint8_t>(text.begin(), text.end());
    }());
    const RunResult evaluated = run_cli("corpus evaluate --report " + quoted(report.string()) +
                                        " --labels " + quoted(labels.string()));
    REQUIRE(evaluated.exit_code == 0);
    const auto ej = nlohmann::json::parse(evaluated.out);
    REQUIRE(ej.size() == 1);
    CHECK(ej[0].at("task") == "skin");
    CHECK(ej[0].at("tp") == 1);
    CHECK(ej[0].at("tn") == 1);
    CHECK(ej[0].at("fp") == 0);
    CHECK(ej[0].at("fn") == 0);
    CHECK(ej[0].at("unmatched") == 1);
    CHECK(ej[0].at("error_rate") == 0.0);
}

} // TEST_SUITE
