#include "huescan/json_io.hpp"

#include <cstdio>
#include <sstream>

#include "huescan/errors.hpp"

namespace huescan {

namespace {

std::string hex_of(const Hsv& color) {
    const Rgb8 c = hsv_to_rgb(color);
    char buf[8];
    std::snprintf(buf, sizeof(buf), "#%02x%02x%02x", c.r, c.g, c.b);
    return buf;
}

template <typename Fn>
auto parse_guard(const char* what, Fn fn) {
    try {
        return fn();
    } catch (const nlohmann::json::exception& e) {
        throw ManifestParseError(std::string(what) + ": " + e.what());
    }
}

} // namespace

nlohmann::ordered_json palette_json(const Palette& palette) {
    nlohmann::ordered_json entries = nlohmann::ordered_json::array();
    for (const PaletteEntry& e : palette.entries) {
        entries.push_back({{"h", e.centroid.h},
                           {"s", e.centroid.s},
                           {"v", e.centroid.v},
                           {"weight", e.weight},
                           {"rgb_hex", hex_of(e.centroid)}});
    }
    return {{"entries", std::move(entries)}, {"effective_k", palette.effective_k}};
}

Palette palette_from_json(const nlohmann::json& j) {
    return parse_guard("palette", [&] {
        Palette p;
        p.effective_k = j.at("effective_k").get<int>();
        for (const auto& e : j.at("entries")) {
            p.entries.push_back({{e.at("h").get<double>(), e.at("s").get<double>(),
                                  e.at("v").get<double>()},
                                 e.at("weight").get<double>()});
        }
        return p;
    });
}

nlohmann::ordered_json skin_json(const SkinFlagReport& report) {
    nlohmann::ordered_json tones = nlohmann::ordered_json::array();
    for (std::size_t i = 0; i < report.per_tone_fraction.size(); ++i) {
        tones.push_back({{"tone", i < report.tone_ids.size() ? report.tone_ids[i]
                                                             : static_cast<int>(i) + 1},
                         {"fraction", report.per_tone_fraction[i]}});
    }
    return {{"flagged", report.flagged},
            {"total_matched_fraction", report.total_matched_fraction},
            {"tau", report.tau_used},
            {"per_tone", std::move(tones)}};
}

SkinFlagReport skin_from_json(const nlohmann::json& j) {
    return parse_guard("skin report", [&] {
        SkinFlagReport r;
        r.flagged = j.at("flagged").get<bool>();
        r.total_matched_fraction = j.at("total_matched_fraction").get<double>();
        r.tau_used = j.at("tau").get<double>();
        for (const auto& tone : j.at("per_tone")) {
            r.tone_ids.push_back(tone.at("tone").get<int>());
            r.per_tone_fraction.push_back(tone.at("fraction").get<double>());
        }
        return r;
    });
}

nlohmann::ordered_json match_result_json(const MatchResult& result, bool matched_only) {
    nlohmann::ordered_json matches = nlohmann::ordered_json::array();
    for (const SymbolMatch& m : result.matches) {
        if (matched_only && !m.matched) {
            continue;
        }
        matches.push_back({{"symbol", m.symbol_name},
                           {"tile_x", m.tile_x},
                           {"tile_y", m.tile_y},
                           {"ratio_similarity", m.ratio_similarity},
                           {"matched", m.matched}});
    }
    nlohmann::ordered_json flags = nlohmann::ordered_json::object();
    for (const auto& [name, flag] : result.flags) {
        flags[name] = {{"flagged", flag.flagged}, {"best_similarity", flag.best_similarity}};
    }
    return {{"matches", std::move(matches)}, {"symbols", std::move(flags)}};
}

namespace {

nlohmann::ordered_json region_json(const RegionSpec& r) {
    return {{"x", r.x}, {"y", r.y}, {"width", r.width}, {"height", r.height}};
}

nlohmann::ordered_json histograms_json(const ChannelHistograms& h) {
    return {{"r", h.r}, {"g", h.g}, {"b", h.b}};
}

} // namespace

nlohmann::ordered_json forensics_json(const ForensicsReport& report) {
    return {{"region_a", region_json(report.region_a)},
            {"region_b", region_json(report.region_b)},
            {"distance", report.distance},
            {"delta", report.delta_used},
            {"verdict", report.verdict},
            {"palette_a", palette_json(report.palette_a)},
            {"palette_b", palette_json(report.palette_b)},
            {"channel_histograms",
             {{"a", histograms_json(report.histograms_a)},
              {"b", histograms_json(report.histograms_b)}}}};
}

nlohmann::ordered_json record_json(const ImageRecord& record) {
    nlohmann::ordered_json j{{"path", record.path},
                             {"digest", record.content_digest},
                             {"status", record.status},
                             {"width", record.width},
                             {"height", record.height}};
    if (record.status == "ok") {
        j["palette"] = palette_json(record.palette);
        j["skin"] = skin_json(record.skin);
        nlohmann::ordered_json symbols = nlohmann::ordered_json::object();
        for (const auto& [name, flag] : record.symbol_flags) {
            symbols[name] = {{"flagged", flag.flagged},
                             {"best_similarity", flag.best_similarity}};
        }
        j["symbols"] = std::move(symbols);
    } else {
        j["error"] = record.error;
    }
    return j;
}

ImageRecord record_from_json(const nlohmann::json& j) {
    return parse_guard("image record", [&] {
        ImageRecord rec;
        rec.path = j.at("path").get<std::string>();
        rec.content_digest = j.at("digest").get<std::string>();
        rec.status = j.at("status").get<std::string>();
        rec.width = j.at("width").get<int>();
        rec.height = j.at("height").get<int>();
        if (rec.status == "ok") {
            rec.palette = palette_from_json(j.at("palette"));
            rec.skin = skin_from_json(j.at("skin"));
            for (const auto& [name, flag] : j.at("symbols").items()) {
                rec.symbol_flags[name] = {flag.at("flagged").get<bool>(),
                                          flag.at("best_similarity").get<double>()};
            }
        } else {
            rec.error = j.value("error", "");
        }
        return rec;
    });
}

nlohmann::ordered_json records_json(const std::vector<ImageRecord>& records) {
    nlohmann::ordered_json out = nlohmann::ordered_json::array();
    for (const ImageRecord& rec : records) {
        out.push_back(record_json(rec));
    }
    return out;
}

std::vector<ImageRecord> records_from_json_text(const std::string& text) {
    return parse_guard("scan report", [&] {
        const auto j = nlohmann::json::parse(text);
        if (!j.is_array()) {
            throw ManifestParseError("scan report must be a JSON array of records");
        }
        std::vector<ImageRecord> out;
        out.reserve(j.size());
        for (const auto& row : j) {
            out.push_back(record_from_json(row));
        }
        return out;
    });
}

nlohmann::ordered_json summary_json(const CorpusSummary& summary) {
    return {{"n_images", summary.n_images},
            {"n_ok", summary.n_ok},
            {"n_failed", summary.n_failed},
            {"n_skin_flagged", summary.n_skin_flagged},
            {"symbol_match_counts", summary.symbol_match_counts},
            {"hue_histogram", summary.hue_histogram},
            {"mean_saturation", summary.mean_saturation},
            {"mean_value", summary.mean_value}};
}

std::string summary_csv(const CorpusSummary& summary) {
    std::ostringstream out;
    out << "metric,value\n";
    out << "n_images," << summary.n_images << '\n';
    out << "n_ok," << summary.n_ok << '\n';
    out << "n_failed," << summary.n_failed << '\n';
    out << "n_skin_flagged," << summary.n_skin_flagged << '\n';
    for (const auto& [name, count] : summary.symbol_match_counts) {
        out << "symbol_count_" << name << ',' << count << '\n';
    }
    for (std::size_t bin = 0; bin < summary.hue_histogram.size(); ++bin) {
        out << "hue_bin_" << bin * 30 << ','
            << nlohmann::ordered_json(summary.hue_histogram[bin]).dump() << '\n';
    }
    out << "mean_saturation," << nlohmann::ordered_json(summary.mean_saturation).dump() << '\n';
    out << "mean_value," << nlohmann::ordered_json(summary.mean_value).dump() << '\n';
    return out.str();
}

nlohmann::ordered_json assignment_json(const ClusterAssignment& assignment) {
    return {{"g", assignment.g},
            {"total_cost", assignment.total_cost},
            {"medoids", assignment.medoids},
            {"groups", assignment.group_of}};
}

ClusterAssignment assignment_from_json_text(const std::string& text) {
    return parse_guard("cluster assignment", [&] {
        const auto j = nlohmann::json::parse(text);
        ClusterAssignment a;
        a.g = j.at("g").get<int>();
        a.total_cost = j.at("total_cost").get<double>();
        a.medoids = j.at("medoids").get<std::vector<std::string>>();
        for (const auto& [path, group] : j.at("groups").items()) {
            a.group_of[path] = group.get<int>();
        }
        return a;
    });
}

nlohmann::ordered_json eval_json(const std::vector<EvalResult>& results) {
    nlohmann::ordered_json out = nlohmann::ordered_json::array();
    for (const EvalResult& r : results) {
        out.push_back({{"task", r.task},
                       {"tp", r.tp},
                       {"fp", r.fp},
                       {"tn", r.tn},
                       {"fn", r.fn},
                       {"unmatched", r.unmatched},
                       {"error_rate", r.error_rate}});
    }
    return out;
}

std::string dump_json(const nlohmann::ordered_json& j) {
    return j.dump(2) + "\n";
}

} // namespace huescan
