// huescan command-line tool: palette quantization, skin-tone and symbol
// flagging, region forensics, and corpus batch processing.
//
// Exit codes: 0 success, 1 usage error, 2 input error, 3 internal error.
// stdout carries machine-readable output only; diagnostics go to stderr.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "huescan/corpus.hpp"
#include "huescan/digest.hpp"
#include "huescan/errors.hpp"
#include "huescan/forensics.hpp"
#include "huescan/image.hpp"
#include "huescan/json_io.hpp"
#include "huescan/monk.hpp"
#include "huescan/plots.hpp"
#include "huescan/quantize.hpp"
#include "huescan/symbol.hpp"

namespace {

using namespace huescan;

void add_quantize_flags(CLI::App* cmd, QuantizeConfig& config) {
    cmd->add_option("-k,--colors", config.k, "Palette size (recommended 4-6)")
        ->capture_default_str()
        ->check(CLI::Range(1, 64));
    cmd->add_option("--seed", config.seed, "Deterministic RNG seed")->capture_default_str();
    cmd->add_option("--max-iter", config.max_iter, "Lloyd iteration cap")
        ->capture_default_str()
        ->check(CLI::PositiveNumber);
    cmd->add_option("--tol", config.tol, "Convergence tolerance (centroid movement)")
        ->capture_default_str()
        ->check(CLI::PositiveNumber);
    cmd->add_option("--n-init", config.n_init, "Independent k-means++ restarts")
        ->capture_default_str()
        ->check(CLI::PositiveNumber);
    cmd->add_option("--max-pixels", config.max_pixels,
                    "Subsample images above this many pixels")
        ->capture_default_str()
        ->check(CLI::PositiveNumber);
}

std::filesystem::path resolve_monk_scale(const std::string& flag_value) {
    if (!flag_value.empty()) {
        return flag_value;
    }
    if (const char* env = std::getenv("HUESCAN_MONK_SCALE")) {
        return env;
    }
    return "data/monk_scale.conf";
}

void emit(const std::string& text, const std::string& out_path) {
    if (out_path.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream out(out_path, std::ios::binary);
    if (!out || !(out << text)) {
        throw Error("cannot write " + out_path);
    }
}

std::string slurp(const std::filesystem::path& path) {
    const std::vector<std::uint8_t> bytes = read_file(path);
    return std::string(bytes.begin(), bytes.end());
}

// ---------------------------------------------------------------------------
// quantize

struct QuantizeOpts {
    std::string image;
    QuantizeConfig config;
    std::string space = "hsv";
    std::string outdir = ".";
    std::string monk_scale;
    bool monk_scale_given = false;
};

void cmd_quantize(const QuantizeOpts& opt) {
    const std::vector<std::uint8_t> bytes = read_file(opt.image);
    const PixelCloud cloud = load_pixels(bytes, opt.config);
    const Palette palette = kmeans_palette(cloud, opt.config);

    std::vector<bool> highlight(palette.entries.size(), false);
    try {
        highlight = palette_band_matches(palette,
                                         load_monk_scale(resolve_monk_scale(opt.monk_scale)));
    } catch (const ParseError&) {
        if (opt.monk_scale_given) {
            throw;
        }
        std::cerr << "warning: no skin-tone table found; swatch highlighting disabled\n";
    }

    std::filesystem::create_directories(opt.outdir);
    const std::string stem = std::filesystem::path(opt.image).stem().string();
    const std::filesystem::path base = std::filesystem::path(opt.outdir) / stem;

    const std::string palette_text = dump_json(palette_json(palette));
    emit(palette_text, (base.string() + ".palette.json"));
    const std::vector<std::uint8_t> png = encode_png(palette_swatch(palette, highlight));
    write_file(base.string() + ".swatch.png", png);
    emit(scatter_svg(cloud, palette, opt.space), base.string() + ".scatter.svg");

    std::cout << palette_text;
}

// ---------------------------------------------------------------------------
// flag-skin

struct FlagSkinOpts {
    std::string image;
    std::string monk_scale;
    double tau = 0.05;
    std::size_t max_pixels = 100000;
    std::string out;
};

void cmd_flag_skin(const FlagSkinOpts& opt) {
    const MonkScaleConfig scale = load_monk_scale(resolve_monk_scale(opt.monk_scale), opt.tau);
    QuantizeConfig config;
    config.max_pixels = opt.max_pixels;
    const PixelCloud cloud = load_pixels(read_file(opt.image), config);
    emit(dump_json(skin_json(flag_skin(cloud, scale))), opt.out);
}

// ---------------------------------------------------------------------------
// match-symbol

struct MatchSymbolOpts {
    std::string image;
    std::string symbols_dir;
    QuantizeConfig config;
    MatchOptions match;
    bool all_tiles = false;
    std::string out;
};

void cmd_match_symbol(const MatchSymbolOpts& opt) {
    const std::vector<SymbolDbEntry> db = load_symbol_db(opt.symbols_dir, opt.config);
    for (const SymbolDbEntry& entry : db) {
        if (entry.signature.palette.effective_k == 1) {
            std::cerr << "warning: signature \"" << entry.signature.name
                      << "\" has a single color; ratio matching will be weak\n";
        }
    }
    const MatchResult result = match_symbols(read_file(opt.image), db, opt.match);
    emit(dump_json(match_result_json(result, !opt.all_tiles)), opt.out);
}

// ---------------------------------------------------------------------------
// forensics

struct ForensicsOpts {
    std::string image;
    std::string region_a;
    std::string region_b;
    ForensicsConfig config;
    std::string out;
};

void cmd_forensics(const ForensicsOpts& opt) {
    const ForensicsReport report = compare_regions(
        read_file(opt.image), parse_region(opt.region_a), parse_region(opt.region_b), opt.config);
    emit(dump_json(forensics_json(report)), opt.out);
}

// ---------------------------------------------------------------------------
// corpus

struct ScanOpts {
    std::string dir;
    ScanOptions options;
    std::string monk_scale;
    double tau = 0.05;
    std::string symbols_dir;
    std::string out;
};

void cmd_corpus_scan(const ScanOpts& opt) {
    ScanOptions options = opt.options;
    options.monk = load_monk_scale(resolve_monk_scale(opt.monk_scale), opt.tau);
    if (!opt.symbols_dir.empty()) {
        options.signatures = load_symbol_db(opt.symbols_dir, options.quantize);
    }
    emit(dump_json(records_json(scan(opt.dir, options))), opt.out);
}

struct ClusterOpts {
    std::string report;
    int g = 0;
    std::uint64_t seed = 0;
    std::string out;
};

void cmd_corpus_cluster(const ClusterOpts& opt) {
    const std::vector<ImageRecord> records = records_from_json_text(slurp(opt.report));
    emit(dump_json(assignment_json(cluster_corpus(records, opt.g, opt.seed))), opt.out);
}

struct SampleOpts {
    std::string report;
    std::string assignment;
    std::size_t n = 0;
    std::string strategy = "uniform";
    std::uint64_t seed = 0;
    std::string out;
};

void cmd_corpus_sample(const SampleOpts& opt) {
    const std::vector<ImageRecord> records = records_from_json_text(slurp(opt.report));
    const SampleStrategy strategy = parse_strategy(opt.strategy);

    std::optional<ClusterAssignment> assignment;
    if (!opt.assignment.empty()) {
        assignment = assignment_from_json_text(slurp(opt.assignment));
    } else if (strategy == SampleStrategy::StratifiedCluster) {
        throw Error("stratified-cluster sampling needs --assignment");
    }

    const SampleResult result =
        sample(records, assignment ? &*assignment : nullptr, opt.n, strategy, opt.seed);
    if (!result.warning.empty()) {
        std::cerr << "warning: " << result.warning << '\n';
    }
    emit(dump_json(nlohmann::ordered_json(result.paths)), opt.out);
}

struct SummarizeOpts {
    std::string report;
    std::string format = "json";
    std::string out;
};

void cmd_corpus_summarize(const SummarizeOpts& opt) {
    const CorpusSummary summary = summarize(records_from_json_text(slurp(opt.report)));
    emit(opt.format == "csv" ? summary_csv(summary) : dump_json(summary_json(summary)), opt.out);
}

struct EvaluateOpts {
    std::string report;
    std::string labels;
    std::string out;
};

void cmd_corpus_evaluate(const EvaluateOpts& opt) {
    const std::vector<ImageRecord> records = records_from_json_text(slurp(opt.report));
    emit(dump_json(eval_json(evaluate(records, slurp(opt.labels)))), opt.out);
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"huescan: color quantization, palette analysis, and image-corpus flagging"};
    app.require_subcommand(1);
    app.set_config("--config")->envname("HUESCAN_CONFIG");

    auto quantize = std::make_shared<QuantizeOpts>();
    {
        CLI::App* cmd = app.add_subcommand(
            "quantize", "Extract a weighted palette plus swatch and 3D-scatter figures");
        cmd->add_option("image", quantize->image, "Input image (png/jpg/jpeg/gif/bmp/webp)")
            ->required();
        add_quantize_flags(cmd, quantize->config);
        cmd->add_option("--space", quantize->space,
                        "Scatter coordinate space; the palette itself never depends on this")
            ->capture_default_str()
            ->check(CLI::IsMember({"hsv", "rgb"}));
        cmd->add_option("--outdir", quantize->outdir, "Directory for the three output files")
            ->capture_default_str();
        CLI::Option* ms =
            cmd->add_option("--monk-scale", quantize->monk_scale,
                            "Skin-tone table for swatch highlighting (default: "
                            "$HUESCAN_MONK_SCALE, then data/monk_scale.conf)");
        cmd->callback([quantize, ms] {
            quantize->monk_scale_given = ms->count() > 0;
            cmd_quantize(*quantize);
        });
    }

    auto flagskin = std::make_shared<FlagSkinOpts>();
    {
        CLI::App* cmd = app.add_subcommand(
            "flag-skin", "Report the pixel fraction inside Monk Skin Tone bands");
        cmd->add_option("image", flagskin->image, "Input image")->required();
        cmd->add_option("--monk-scale", flagskin->monk_scale,
                        "Skin-tone table (default: $HUESCAN_MONK_SCALE, then "
                        "data/monk_scale.conf)");
        cmd->add_option("--tau", flagskin->tau, "Flagging threshold on the matched fraction")
            ->capture_default_str()
            ->check(CLI::Range(1e-9, 1.0));
        cmd->add_option("--max-pixels", flagskin->max_pixels,
                        "Subsample images above this many pixels")
            ->capture_default_str()
            ->check(CLI::PositiveNumber);
        cmd->add_option("--out", flagskin->out, "Write JSON here instead of stdout");
        cmd->callback([flagskin] { cmd_flag_skin(*flagskin); });
    }

    auto matchsym = std::make_shared<MatchSymbolOpts>();
    {
        CLI::App* cmd = app.add_subcommand(
            "match-symbol", "Match color-ratio symbol signatures against image tiles");
        cmd->add_option("image", matchsym->image, "Input image")->required();
        cmd->add_option("--symbols", matchsym->symbols_dir,
                        "Symbol database directory (symbols.json plus reference images)")
            ->required();
        add_quantize_flags(cmd, matchsym->config);
        cmd->add_option("--theta", matchsym->match.theta,
                        "Minimum ratio similarity for a tile match")
            ->capture_default_str()
            ->check(CLI::Range(0.0, 1.0));
        cmd->add_option("--tile-size", matchsym->match.tile_size,
                        "Tile edge in pixels (0: max(32, min(w,h)/8))")
            ->capture_default_str()
            ->check(CLI::NonNegativeNumber);
        cmd->add_flag("--all-tiles", matchsym->all_tiles,
                      "Report every (symbol, tile) score, not just matches");
        cmd->add_option("--out", matchsym->out, "Write JSON here instead of stdout");
        cmd->callback([matchsym] { cmd_match_symbol(*matchsym); });
    }

    auto forensics = std::make_shared<ForensicsOpts>();
    {
        CLI::App* cmd = app.add_subcommand(
            "forensics", "Compare the color distributions of two image regions");
        cmd->add_option("image", forensics->image, "Input image")->required();
        cmd->add_option("--region-a", forensics->region_a, "First region as x,y,w,h")->required();
        cmd->add_option("--region-b", forensics->region_b, "Second region as x,y,w,h")
            ->required();
        cmd->add_option("-k,--colors", forensics->config.k, "Palette size per region")
            ->capture_default_str()
            ->check(CLI::Range(1, 64));
        cmd->add_option("--delta", forensics->config.delta,
                        "Distance above which the verdict is inconsistent")
            ->capture_default_str()
            ->check(CLI::PositiveNumber);
        cmd->add_option("--seed", forensics->config.seed, "Deterministic RNG seed")
            ->capture_default_str();
        cmd->add_option("--max-pixels", forensics->config.max_pixels,
                        "Subsample regions above this many pixels")
            ->capture_default_str()
            ->check(CLI::PositiveNumber);
        cmd->add_option("--out", forensics->out, "Write JSON here instead of stdout");
        cmd->callback([forensics] { cmd_forensics(*forensics); });
    }

    CLI::App* corpus =
        app.add_subcommand("corpus", "Batch scanning, clustering, sampling, and evaluation");
    corpus->require_subcommand(1);

    auto scan_opts = std::make_shared<ScanOpts>();
    {
        CLI::App* cmd = corpus->add_subcommand(
            "scan", "Analyze every image under a directory into a JSON report");
        cmd->add_option("dir", scan_opts->dir, "Corpus root directory")->required();
        add_quantize_flags(cmd, scan_opts->options.quantize);
        cmd->add_option("--monk-scale", scan_opts->monk_scale,
                        "Skin-tone table (default: $HUESCAN_MONK_SCALE, then "
                        "data/monk_scale.conf)");
        cmd->add_option("--tau", scan_opts->tau, "Skin flagging threshold")
            ->capture_default_str()
            ->check(CLI::Range(1e-9, 1.0));
        cmd->add_option("--symbols", scan_opts->symbols_dir,
                        "Symbol database directory (omit to skip the symbol pass)");
        cmd->add_option("--theta", scan_opts->options.match.theta,
                        "Minimum ratio similarity for a tile match")
            ->capture_default_str()
            ->check(CLI::Range(0.0, 1.0));
        cmd->add_option("--tile-size", scan_opts->options.match.tile_size,
                        "Tile edge in pixels (0: automatic)")
            ->capture_default_str()
            ->check(CLI::NonNegativeNumber);
        cmd->add_option("--workers", scan_opts->options.workers, "Analysis thread count")
            ->capture_default_str()
            ->check(CLI::PositiveNumber);
        cmd->add_option("--out", scan_opts->out, "Write the report here instead of stdout");
        cmd->callback([scan_opts] { cmd_corpus_scan(*scan_opts); });
    }

    auto cluster_opts = std::make_shared<ClusterOpts>();
    {
        CLI::App* cmd = corpus->add_subcommand(
            "cluster", "Group scanned images by palette similarity (k-medoids)");
        cmd->add_option("--report", cluster_opts->report, "Scan report JSON")->required();
        cmd->add_option("-g,--groups", cluster_opts->g, "Number of groups")
            ->required()
            ->check(CLI::PositiveNumber);
        cmd->add_option("--seed", cluster_opts->seed,
                        "Accepted for interface stability; clustering is deterministic")
            ->capture_default_str();
        cmd->add_option("--out", cluster_opts->out, "Write JSON here instead of stdout");
        cmd->callback([cluster_opts] { cmd_corpus_cluster(*cluster_opts); });
    }

    auto sample_opts = std::make_shared<SampleOpts>();
    {
        CLI::App* cmd =
            corpus->add_subcommand("sample", "Draw image paths for human qualitative coding");
        cmd->add_option("--report", sample_opts->report, "Scan report JSON")->required();
        cmd->add_option("--assignment", sample_opts->assignment,
                        "Cluster assignment JSON (needed for stratified-cluster)");
        cmd->add_option("-n,--size", sample_opts->n, "Sample size")->required();
        cmd->add_option("--strategy", sample_opts->strategy,
                        "uniform | stratified-cluster | flagged-only")
            ->capture_default_str();
        cmd->add_option("--seed", sample_opts->seed, "Deterministic RNG seed")
            ->capture_default_str();
        cmd->add_option("--out", sample_opts->out, "Write JSON here instead of stdout");
        cmd->callback([sample_opts] { cmd_corpus_sample(*sample_opts); });
    }

    auto summarize_opts = std::make_shared<SummarizeOpts>();
    {
        CLI::App* cmd = corpus->add_subcommand(
            "summarize", "Descriptive statistics over a scan report");
        cmd->add_option("--report", summarize_opts->report, "Scan report JSON")->required();
        cmd->add_option("--format", summarize_opts->format, "Output format")
            ->capture_default_str()
            ->check(CLI::IsMember({"json", "csv"}));
        cmd->add_option("--out", summarize_opts->out, "Write here instead of stdout");
        cmd->callback([summarize_opts] { cmd_corpus_summarize(*summarize_opts); });
    }

    auto evaluate_opts = std::make_shared<EvaluateOpts>();
    {
        CLI::App* cmd = corpus->add_subcommand(
            "evaluate", "Confusion counts of flags against a labeled manifest");
        cmd->add_option("--report", evaluate_opts->report, "Scan report JSON")->required();
        cmd->add_option("--labels", evaluate_opts->labels, "CSV manifest: path,task,label")
            ->required();
        cmd->add_option("--out", evaluate_opts->out, "Write JSON here instead of stdout");
        cmd->callback([evaluate_opts] { cmd_corpus_evaluate(*evaluate_opts); });
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::Success& e) {
        return app.exit(e); // --help and friends
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 1;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << '\n';
        return 3;
    }
    return 0;
}
