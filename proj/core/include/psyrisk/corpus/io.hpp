#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "psyrisk/corpus/corpus.hpp"
#include "psyrisk/domain.hpp"
#include "psyrisk/evaluation/agreement.hpp"

namespace psyrisk {

// File formats. All JSON-lines readers skip blank lines and report the
// offending path and line number in DataError messages.
//
//   corpus       {"id": "...", "text": "...", "source": "training|target|synthetic"}
//   gold         {"id": "...", "labels": ["Mood", "Substance"]}
//   predictions  {"id": "...", "labels": [...], "scores": {"Appearance": 0.1, ...}}
//   annotations  {"id": "...", "annotations": [[...], [...], [...]]}
//   lexicon      {"Mood": {"keywords": [...], "keyphrases": ["panic attack", ...]}, ...}
//
// Domain names are spelled as domain_name() returns them.

std::vector<Paragraph> read_paragraphs(const std::filesystem::path& path);
void write_paragraphs(const std::filesystem::path& path, std::span<const Paragraph> paragraphs);

std::vector<GoldRecord> read_gold(const std::filesystem::path& path);
void write_gold(const std::filesystem::path& path, std::span<const GoldRecord> gold);
std::vector<GoldRecord> to_gold_records(std::span<const AnnotatedParagraph> annotated);

KeywordLexicon read_lexicon(const std::filesystem::path& path);
void write_lexicon(const std::filesystem::path& path, const KeywordLexicon& lexicon);
KeywordLexicon parse_lexicon_json(const std::string& text);
std::string lexicon_to_json(const KeywordLexicon& lexicon);

std::vector<AnnotationRecord> read_annotations(const std::filesystem::path& path);
void write_annotations(const std::filesystem::path& path,
                       std::span<const AnnotationRecord> annotations);

struct ScoredPrediction {
    std::string id;
    std::vector<Domain> labels;
    DomainScores scores{};
};

/// One JSON object per line, no trailing newline handling beyond "\n".
std::string prediction_to_json_line(const ScoredPrediction& prediction);
void write_predictions(const std::filesystem::path& path,
                       std::span<const ScoredPrediction> predictions);
/// Reads only ids and labels; scores are not needed for evaluation.
std::vector<GoldRecord> read_prediction_labels(const std::filesystem::path& path);

/// Whole-file helpers that throw DataError with the path on failure.
std::string read_text_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, const std::string& contents);

}  // namespace psyrisk
