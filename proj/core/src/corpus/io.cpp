#include "psyrisk/corpus/io.hpp"

#include <fstream>
#include <functional>
#include <set>
#include <sstream>

#include <json.hpp>

#include "psyrisk/errors.hpp"

namespace psyrisk {

namespace fs = std::filesystem;
using nlohmann::json;
using nlohmann::ordered_json;

namespace {

std::string where(const fs::path& path, std::size_t line)
{
    return path.string() + ":" + std::to_string(line);
}

void for_each_json_line(const fs::path& path, const std::function<void(const json&, std::size_t)>& fn)
{
    std::ifstream in(path);
    if (!in) {
        throw DataError("cannot open " + path.string());
    }
    std::string line;
    std::size_t number = 0;
    while (std::getline(in, line)) {
        ++number;
        if (line.find_first_not_of(" \t\r") == std::string::npos) {
            continue;
        }
        json j;
        try {
            j = json::parse(line);
        } catch (const json::exception& e) {
            throw DataError(where(path, number) + ": invalid JSON: " + e.what());
        }
        if (!j.is_object()) {
            throw DataError(where(path, number) + ": expected a JSON object");
        }
        try {
            fn(j, number);
        } catch (const json::exception& e) {
            throw DataError(where(path, number) + ": " + e.what());
        }
    }
}

std::vector<Domain> parse_labels(const json& arr, const std::string& context)
{
    if (!arr.is_array()) {
        throw DataError(context + ": labels must be an array");
    }
    std::vector<Domain> labels;
    for (const auto& item : arr) {
        const auto name = item.get<std::string>();
        const auto d = parse_domain(name);
        if (!d) {
            throw DataError(context + ": unknown domain '" + name + "'");
        }
        labels.push_back(*d);
    }
    try {
        validate_label_list(labels);
    } catch (const DataError& e) {
        throw DataError(context + ": " + e.what());
    }
    return labels;
}

ordered_json labels_json(const std::vector<Domain>& labels)
{
    auto arr = ordered_json::array();
    for (auto d : labels) {
        arr.push_back(domain_name(d));
    }
    return arr;
}

std::string require_id(const json& j, const std::string& context, std::set<std::string>& seen)
{
    auto id = j.at("id").get<std::string>();
    if (id.empty()) {
        throw DataError(context + ": empty id");
    }
    if (!seen.insert(id).second) {
        throw DataError(context + ": duplicate id '" + id + "'");
    }
    return id;
}

void write_lines(const fs::path& path, const std::vector<std::string>& lines)
{
    std::string contents;
    for (const auto& l : lines) {
        contents += l;
        contents.push_back('\n');
    }
    write_text_file(path, contents);
}

}  // namespace

std::string read_text_file(const fs::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw DataError("cannot open " + path.string());
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_text_file(const fs::path& path, const std::string& contents)
{
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw DataError("cannot write " + path.string());
    }
    out << contents;
    if (!out) {
        throw DataError("failed writing " + path.string());
    }
}

std::vector<Paragraph> read_paragraphs(const fs::path& path)
{
    std::vector<Paragraph> out;
    std::set<std::string> seen;
    for_each_json_line(path, [&](const json& j, std::size_t line) {
        const auto ctx = where(path, line);
        Paragraph p;
        p.id = require_id(j, ctx, seen);
        p.text = j.at("text").get<std::string>();
        if (p.text.empty()) {
            throw DataError(ctx + ": paragraph text is empty");
        }
        const auto src = j.value("source", std::string("target"));
        const auto parsed = parse_source(src);
        if (!parsed) {
            throw DataError(ctx + ": unknown source '" + src + "'");
        }
        p.source = *parsed;
        out.push_back(std::move(p));
    });
    return out;
}

void write_paragraphs(const fs::path& path, std::span<const Paragraph> paragraphs)
{
    std::vector<std::string> lines;
    lines.reserve(paragraphs.size());
    for (const auto& p : paragraphs) {
        ordered_json j{{"id", p.id}, {"text", p.text}, {"source", source_name(p.source)}};
        lines.push_back(j.dump());
    }
    write_lines(path, lines);
}

std::vector<GoldRecord> read_gold(const fs::path& path)
{
    std::vector<GoldRecord> out;
    std::set<std::string> seen;
    for_each_json_line(path, [&](const json& j, std::size_t line) {
        const auto ctx = where(path, line);
        GoldRecord g;
        g.id = require_id(j, ctx, seen);
        g.labels = parse_labels(j.at("labels"), ctx);
        out.push_back(std::move(g));
    });
    return out;
}

void write_gold(const fs::path& path, std::span<const GoldRecord> gold)
{
    std::vector<std::string> lines;
    lines.reserve(gold.size());
    for (const auto& g : gold) {
        ordered_json j{{"id", g.id}, {"labels", labels_json(g.labels)}};
        lines.push_back(j.dump());
    }
    write_lines(path, lines);
}

std::vector<GoldRecord> to_gold_records(std::span<const AnnotatedParagraph> annotated)
{
    std::vector<GoldRecord> out;
    out.reserve(annotated.size());
    for (const auto& a : annotated) {
        out.push_back({a.paragraph.id, a.labels});
    }
    return out;
}

KeywordLexicon parse_lexicon_json(const std::string& text)
{
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        throw ConfigError(std::string("lexicon is not valid JSON: ") + e.what());
    }
    if (!j.is_object()) {
        throw ConfigError("lexicon must be a JSON object keyed by domain name");
    }
    KeywordLexicon lex;
    try {
        for (const auto& [name, entry] : j.items()) {
            const auto d = parse_domain(name);
            if (!d || !is_risk_domain(*d)) {
                throw ConfigError("lexicon has unknown or non-risk domain '" + name + "'");
            }
            for (const auto& k : entry.value("keywords", json::array())) {
                lex[*d].keywords.push_back(k.get<std::string>());
            }
            for (const auto& p : entry.value("keyphrases", json::array())) {
                lex[*d].keyphrases.push_back(parse_phrase(p.get<std::string>(), *d));
            }
        }
    } catch (const json::exception& e) {
        throw ConfigError(std::string("malformed lexicon: ") + e.what());
    }
    lex.validate();
    return lex;
}

KeywordLexicon read_lexicon(const fs::path& path)
{
    const auto text = read_text_file(path);
    try {
        return parse_lexicon_json(text);
    } catch (const ConfigError& e) {
        throw ConfigError(path.string() + ": " + e.what());
    }
}

std::string lexicon_to_json(const KeywordLexicon& lexicon)
{
    ordered_json j = ordered_json::object();
    for (auto d : kRiskDomains) {
        auto phrases = ordered_json::array();
        for (const auto& p : lexicon[d].keyphrases) {
            phrases.push_back(p.text());
        }
        j[std::string(domain_name(d))] = {{"keywords", lexicon[d].keywords},
                                          {"keyphrases", phrases}};
    }
    return j.dump(2) + "\n";
}

void write_lexicon(const fs::path& path, const KeywordLexicon& lexicon)
{
    write_text_file(path, lexicon_to_json(lexicon));
}

std::vector<AnnotationRecord> read_annotations(const fs::path& path)
{
    std::vector<AnnotationRecord> out;
    std::set<std::string> seen;
    for_each_json_line(path, [&](const json& j, std::size_t line) {
        const auto ctx = where(path, line);
        AnnotationRecord rec;
        rec.id = require_id(j, ctx, seen);
        const auto& arr = j.at("annotations");
        if (!arr.is_array() || arr.size() != kAnnotators) {
            throw DataError(ctx + ": expected exactly " + std::to_string(kAnnotators)
                            + " annotator label lists");
        }
        for (std::size_t r = 0; r < kAnnotators; ++r) {
            rec.annotators[r] = parse_labels(arr[r], ctx);
        }
        out.push_back(std::move(rec));
    });
    return out;
}

void write_annotations(const fs::path& path, std::span<const AnnotationRecord> annotations)
{
    std::vector<std::string> lines;
    lines.reserve(annotations.size());
    for (const auto& rec : annotations) {
        auto arr = ordered_json::array();
        for (const auto& labels : rec.annotators) {
            arr.push_back(labels_json(labels));
        }
        ordered_json j{{"id", rec.id}, {"annotations", arr}};
        lines.push_back(j.dump());
    }
    write_lines(path, lines);
}

std::string prediction_to_json_line(const ScoredPrediction& prediction)
{
    ordered_json scores = ordered_json::object();
    for (auto d : kRiskDomains) {
        scores[std::string(domain_name(d))] = prediction.scores[domain_index(d)];
    }
    ordered_json j{{"id", prediction.id}, {"labels", labels_json(prediction.labels)},
                   {"scores", scores}};
    return j.dump();
}

void write_predictions(const fs::path& path, std::span<const ScoredPrediction> predictions)
{
    std::vector<std::string> lines;
    lines.reserve(predictions.size());
    for (const auto& p : predictions) {
        lines.push_back(prediction_to_json_line(p));
    }
    write_lines(path, lines);
}

std::vector<GoldRecord> read_prediction_labels(const fs::path& path)
{
    // Same shape as gold for the fields evaluation needs.
    return read_gold(path);
}

}  // namespace psyrisk
