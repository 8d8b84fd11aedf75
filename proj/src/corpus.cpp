#include "huescan/corpus.hpp"

#include <algorithm>
#include <atomic>
#include <cassert>
#include <cctype>
#include <cmath>
#include <limits>
#include <random>
#include <sstream>
#include <thread>

#include "huescan/digest.hpp"
#include "huescan/errors.hpp"
#include "huescan/image.hpp"

namespace huescan {

namespace {

bool supported_extension(const std::filesystem::path& p) {
    std::string ext = p.extension().string();
    std::transform(ext.begin(), ext.end(), ext.begin(),
                   [](unsigned char c) { return std::tolower(c); });
    return ext == ".png" || ext == ".jpg" || ext == ".jpeg" || ext == ".gif" || ext == ".bmp" ||
           ext == ".webp";
}

std::string lower(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(),
                   [](unsigned char c) { return std::tolower(c); });
    return s;
}

// Draws n indices from [0, pool) without replacement, order fixed by seed.
std::vector<std::size_t> draw_without_replacement(std::size_t pool, std::size_t n,
                                                  std::mt19937_64& rng) {
    std::vector<std::size_t> idx(pool);
    for (std::size_t i = 0; i < pool; ++i) {
        idx[i] = i;
    }
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t j = i + rng() % (pool - i);
        std::swap(idx[i], idx[j]);
    }
    idx.resize(n);
    return idx;
}

struct ManifestRow {
    std::string path;
    std::string task;
    bool label = false;
};

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> fields;
    std::string field;
    for (char c : line) {
        if (c == ',') {
            fields.push_back(field);
            field.clear();
        } else if (c != '\r') {
            field.push_back(c);
        }
    }
    fields.push_back(field);
    return fields;
}

std::vector<ManifestRow> parse_manifest(const std::string& csv) {
    std::istringstream in(csv);
    std::string line;
    if (!std::getline(in, line)) {
        throw ManifestParseError("labels manifest is empty");
    }
    {
        const auto header = split_csv_line(line);
        if (header.size() != 3 || lower(header[0]) != "path" || lower(header[1]) != "task" ||
            lower(header[2]) != "label") {
            throw ManifestParseError("labels manifest must start with header path,task,label");
        }
    }
    std::vector<ManifestRow> rows;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line == "\r") {
            continue;
        }
        const auto fields = split_csv_line(line);
        if (fields.size() != 3) {
            throw ManifestParseError("labels manifest line " + std::to_string(line_no) +
                                     ": expected 3 fields, got " +
                                     std::to_string(fields.size()));
        }
        ManifestRow row;
        row.path = fields[0];
        row.task = lower(fields[1]);
        if (row.task != "skin" && row.task != "symbol") {
            throw ManifestParseError("labels manifest line " + std::to_string(line_no) +
                                     ": unknown task \"" + fields[1] + "\"");
        }
        const std::string label = lower(fields[2]);
        if (label == "true" || label == "1" || label == "yes") {
            row.label = true;
        } else if (label == "false" || label == "0" || label == "no") {
            row.label = false;
        } else {
            throw ManifestParseError("labels manifest line " + std::to_string(line_no) +
                                     ": label must be boolean, got \"" + fields[2] + "\"");
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

} // namespace

ImageRecord analyze_image(const std::string& rel_path, const std::vector<std::uint8_t>& bytes,
                          const ScanOptions& options) {
    ImageRecord rec;
    rec.path = rel_path;
    rec.content_digest = sha256_hex(bytes);
    try {
        const Raster img = decode_image(bytes);
        rec.width = img.width;
        rec.height = img.height;
        const PixelCloud cloud = cloud_from_raster(img, options.quantize.max_pixels);
        rec.palette = kmeans_palette(cloud, options.quantize);
        rec.skin = flag_skin(cloud, options.monk);
        if (!options.signatures.empty()) {
            rec.symbol_flags = match_symbols(bytes, options.signatures, options.match).flags;
        }
        rec.status = "ok";
    } catch (const EmptyImage& e) {
        rec.status = "empty";
        rec.error = e.what();
    } catch (const std::exception& e) {
        rec.status = "decode_failed";
        rec.error = e.what();
    }
    return rec;
}

std::vector<ImageRecord> scan(const std::filesystem::path& dir, const ScanOptions& options) {
    std::error_code ec;
    if (!std::filesystem::is_directory(dir, ec)) {
        throw DirectoryUnreadable("not a readable directory: " + dir.string());
    }

    std::vector<std::filesystem::path> files;
    for (auto it = std::filesystem::recursive_directory_iterator(dir, ec);
         it != std::filesystem::recursive_directory_iterator(); it.increment(ec)) {
        if (ec) {
            throw DirectoryUnreadable("cannot traverse " + dir.string() + ": " + ec.message());
        }
        if (it->is_regular_file() && supported_extension(it->path())) {
            files.push_back(it->path());
        }
    }
    if (ec) {
        throw DirectoryUnreadable("cannot open " + dir.string() + ": " + ec.message());
    }

    std::vector<std::string> rel_paths(files.size());
    for (std::size_t i = 0; i < files.size(); ++i) {
        rel_paths[i] = files[i].lexically_relative(dir).generic_string();
    }
    std::vector<std::size_t> order(files.size());
    for (std::size_t i = 0; i < order.size(); ++i) {
        order[i] = i;
    }
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return rel_paths[a] < rel_paths[b]; });

    std::vector<ImageRecord> records(files.size());
    const int workers = std::max(1, options.workers);
    std::atomic<std::size_t> next{0};
    auto work = [&]() {
        for (std::size_t i = next.fetch_add(1); i < order.size(); i = next.fetch_add(1)) {
            const std::size_t f = order[i];
            try {
                records[i] = analyze_image(rel_paths[f], read_file(files[f]), options);
            } catch (const std::exception& e) {
                records[i].path = rel_paths[f];
                records[i].status = "decode_failed";
                records[i].error = e.what();
            }
        }
    };
    if (workers == 1) {
        work();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(workers);
        for (int w = 0; w < workers; ++w) {
            pool.emplace_back(work);
        }
        for (auto& t : pool) {
            t.join();
        }
    }
    return records;
}

CorpusSummary summarize(const std::vector<ImageRecord>& records) {
    CorpusSummary s;
    s.n_images = records.size();
    double sat_sum = 0.0;
    double val_sum = 0.0;
    for (const ImageRecord& rec : records) {
        if (rec.status != "ok") {
            ++s.n_failed;
            continue;
        }
        ++s.n_ok;
        if (rec.skin.flagged) {
            ++s.n_skin_flagged;
        }
        for (const auto& [name, flag] : rec.symbol_flags) {
            s.symbol_match_counts[name] += flag.flagged ? 1 : 0;
        }
        for (const PaletteEntry& e : rec.palette.entries) {
            const int bin = std::min(11, static_cast<int>(e.centroid.h / 30.0));
            s.hue_histogram[bin] += e.weight;
            sat_sum += e.weight * e.centroid.s;
            val_sum += e.weight * e.centroid.v;
        }
    }
    if (s.n_ok > 0) {
        s.mean_saturation = sat_sum / static_cast<double>(s.n_ok);
        s.mean_value = val_sum / static_cast<double>(s.n_ok);
    }
    return s;
}

ClusterAssignment cluster_corpus(const std::vector<ImageRecord>& records, int g,
                                 std::uint64_t /*seed: PAM here is deterministic*/) {
    if (g <= 0) {
        throw Error("group count must be positive");
    }
    std::vector<const ImageRecord*> ok;
    for (const ImageRecord& rec : records) {
        if (rec.status == "ok") {
            ok.push_back(&rec);
        }
    }
    const std::size_t n = ok.size();
    if (n < static_cast<std::size_t>(g)) {
        throw TooFewImages("need at least " + std::to_string(g) + " analyzable images, have " +
                           std::to_string(n));
    }
    std::sort(ok.begin(), ok.end(),
              [](const ImageRecord* a, const ImageRecord* b) { return a->path < b->path; });

    std::vector<double> dist(n * n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            const double d = palette_distance(ok[i]->palette, ok[j]->palette);
            dist[i * n + j] = d;
            dist[j * n + i] = d;
        }
    }

    // BUILD: start from the 1-medoid optimum, then greedily add the point
    // that lowers total cost the most (ties -> lowest index).
    std::vector<std::size_t> medoids;
    std::vector<bool> is_medoid(n, false);
    std::vector<double> nearest(n, std::numeric_limits<double>::infinity());
    while (medoids.size() < static_cast<std::size_t>(g)) {
        std::size_t best = n;
        double best_cost = std::numeric_limits<double>::infinity();
        for (std::size_t c = 0; c < n; ++c) {
            if (is_medoid[c]) {
                continue;
            }
            double cost = 0.0;
            for (std::size_t p = 0; p < n; ++p) {
                cost += std::min(nearest[p], dist[c * n + p]);
            }
            if (cost < best_cost) {
                best_cost = cost;
                best = c;
            }
        }
        medoids.push_back(best);
        is_medoid[best] = true;
        for (std::size_t p = 0; p < n; ++p) {
            nearest[p] = std::min(nearest[p], dist[best * n + p]);
        }
    }

    auto total_cost = [&](const std::vector<std::size_t>& meds) {
        double cost = 0.0;
        for (std::size_t p = 0; p < n; ++p) {
            double d = std::numeric_limits<double>::infinity();
            for (std::size_t m : meds) {
                d = std::min(d, dist[m * n + p]);
            }
            cost += d;
        }
        return cost;
    };

    // SWAP: apply the single best-improving (medoid, candidate) exchange
    // until none improves. Deterministic scan order fixes tie-breaks.
    double cost = total_cost(medoids);
    for (bool improved = true; improved;) {
        improved = false;
        std::size_t best_m = 0;
        std::size_t best_c = 0;
        double best_cost = cost;
        for (std::size_t mi = 0; mi < medoids.size(); ++mi) {
            std::vector<std::size_t> trial = medoids;
            for (std::size_t c = 0; c < n; ++c) {
                if (is_medoid[c]) {
                    continue;
                }
                trial[mi] = c;
                const double t = total_cost(trial);
                if (t < best_cost - 1e-12) {
                    best_cost = t;
                    best_m = mi;
                    best_c = c;
                    improved = true;
                }
            }
        }
        if (improved) {
            assert(best_cost <= cost);
            is_medoid[medoids[best_m]] = false;
            is_medoid[best_c] = true;
            medoids[best_m] = best_c;
            cost = best_cost;
        }
    }

    // Group ids follow medoid path order so output is stable.
    std::sort(medoids.begin(), medoids.end());
    ClusterAssignment out;
    out.g = g;
    for (std::size_t m : medoids) {
        out.medoids.push_back(ok[m]->path);
    }
    for (std::size_t p = 0; p < n; ++p) {
        int group = 0;
        double best = std::numeric_limits<double>::infinity();
        for (std::size_t gi = 0; gi < medoids.size(); ++gi) {
            const double d = dist[medoids[gi] * n + p];
            if (d < best) {
                best = d;
                group = static_cast<int>(gi);
            }
        }
        out.group_of[ok[p]->path] = group;
        out.total_cost += best;
    }
    return out;
}

SampleStrategy parse_strategy(const std::string& name) {
    if (name == "uniform") {
        return SampleStrategy::Uniform;
    }
    if (name == "stratified-cluster") {
        return SampleStrategy::StratifiedCluster;
    }
    if (name == "flagged-only") {
        return SampleStrategy::FlaggedOnly;
    }
    throw ParseError("unknown sampling strategy \"" + name +
                     "\" (expected uniform, stratified-cluster, or flagged-only)");
}

SampleResult sample(const std::vector<ImageRecord>& records, const ClusterAssignment* assignment,
                    std::size_t n, SampleStrategy strategy, std::uint64_t seed) {
    std::vector<const ImageRecord*> ok;
    for (const ImageRecord& rec : records) {
        if (rec.status == "ok") {
            ok.push_back(&rec);
        }
    }
    std::sort(ok.begin(), ok.end(),
              [](const ImageRecord* a, const ImageRecord* b) { return a->path < b->path; });

    SampleResult result;
    std::mt19937_64 rng(seed);

    if (strategy == SampleStrategy::FlaggedOnly) {
        std::vector<const ImageRecord*> flagged;
        for (const ImageRecord* rec : ok) {
            bool any_symbol = false;
            for (const auto& [name, flag] : rec->symbol_flags) {
                any_symbol = any_symbol || flag.flagged;
            }
            if (rec->skin.flagged || any_symbol) {
                flagged.push_back(rec);
            }
        }
        std::size_t take = n;
        if (flagged.size() < n) {
            take = flagged.size();
            result.warning = "flagged pool has only " + std::to_string(flagged.size()) +
                             " images; requested " + std::to_string(n);
        }
        for (std::size_t i : draw_without_replacement(flagged.size(), take, rng)) {
            result.paths.push_back(flagged[i]->path);
        }
        return result;
    }

    if (n > ok.size()) {
        throw SampleTooLarge("sample size " + std::to_string(n) + " exceeds " +
                             std::to_string(ok.size()) + " analyzable images");
    }

    if (strategy == SampleStrategy::Uniform) {
        for (std::size_t i : draw_without_replacement(ok.size(), n, rng)) {
            result.paths.push_back(ok[i]->path);
        }
        return result;
    }

    // StratifiedCluster: proportional per-group quotas via largest-remainder
    // rounding; quotas beyond a group's size spill over to groups with room.
    if (assignment == nullptr) {
        throw Error("stratified-cluster sampling needs a cluster assignment");
    }
    std::vector<std::vector<const ImageRecord*>> groups(assignment->medoids.size());
    for (const ImageRecord* rec : ok) {
        const auto it = assignment->group_of.find(rec->path);
        if (it == assignment->group_of.end()) {
            throw Error("cluster assignment does not cover image " + rec->path);
        }
        groups.at(it->second).push_back(rec);
    }

    const double total = static_cast<double>(ok.size());
    std::vector<std::size_t> quota(groups.size(), 0);
    std::vector<double> remainder(groups.size(), 0.0);
    std::size_t assigned = 0;
    for (std::size_t gi = 0; gi < groups.size(); ++gi) {
        const double exact = n * (groups[gi].size() / total);
        quota[gi] = static_cast<std::size_t>(exact);
        remainder[gi] = exact - static_cast<double>(quota[gi]);
        assigned += quota[gi];
    }
    std::vector<std::size_t> by_remainder(groups.size());
    for (std::size_t gi = 0; gi < groups.size(); ++gi) {
        by_remainder[gi] = gi;
    }
    std::stable_sort(by_remainder.begin(), by_remainder.end(), [&](std::size_t a, std::size_t b) {
        return remainder[a] > remainder[b];
    });
    // Floor quotas never exceed group sizes, so topping up by remainder rank
    // while skipping full groups both finishes the count and redistributes
    // away from empty/exhausted strata. n <= n_ok guarantees termination.
    for (std::size_t i = 0; assigned < n; i = (i + 1) % by_remainder.size()) {
        const std::size_t gi = by_remainder[i];
        if (quota[gi] < groups[gi].size()) {
            ++quota[gi];
            ++assigned;
        }
    }

    for (std::size_t gi = 0; gi < groups.size(); ++gi) {
        for (std::size_t i : draw_without_replacement(groups[gi].size(), quota[gi], rng)) {
            result.paths.push_back(groups[gi][i]->path);
        }
    }
    return result;
}

std::vector<EvalResult> evaluate(const std::vector<ImageRecord>& records,
                                 const std::string& manifest_csv) {
    const std::vector<ManifestRow> rows = parse_manifest(manifest_csv);

    std::map<std::string, const ImageRecord*> by_path;
    for (const ImageRecord& rec : records) {
        if (rec.status == "ok") {
            by_path[rec.path] = &rec;
        }
    }

    std::map<std::string, EvalResult> per_task;
    for (const ManifestRow& row : rows) {
        EvalResult& r = per_task[row.task];
        r.task = row.task;
        const auto it = by_path.find(row.path);
        if (it == by_path.end()) {
            ++r.unmatched;
            continue;
        }
        bool predicted = false;
        if (row.task == "skin") {
            predicted = it->second->skin.flagged;
        } else {
            for (const auto& [name, flag] : it->second->symbol_flags) {
                predicted = predicted || flag.flagged;
            }
        }
        if (predicted && row.label) {
            ++r.tp;
        } else if (predicted && !row.label) {
            ++r.fp;
        } else if (!predicted && row.label) {
            ++r.fn;
        } else {
            ++r.tn;
        }
    }

    std::vector<EvalResult> out;
    for (auto& [task, r] : per_task) {
        const std::size_t total = r.tp + r.fp + r.tn + r.fn;
        r.error_rate = total > 0 ? static_cast<double>(r.fp + r.fn) / total : 0.0;
        out.push_back(r);
    }
    return out;
}

} // namespace huescan
