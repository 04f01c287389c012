#pragma once

#include <filesystem>

#include "psyrisk/classification/pipeline.hpp"

namespace psyrisk {

inline constexpr int kBundleFormatVersion = 1;

/// Creation parameters and training summary recorded in the manifest.
struct BundleRecord {
    TrainOptions options;
    TrainReport report;
};

// Layout of a bundle directory:
//
//   manifest.json   format version, model kind, domain order, parameters,
//                   thresholds (when calibrated), training summary, and an
//                   "arrays" map of {file, shape}
//   vocab.txt       one "term<TAB>df" line per vocabulary entry, in index order
//   lexicon.json    the lexicon whose keyphrases the analyzer fuses
//   *.f64           raw little-endian doubles, row-major
//
// Saving writes a sibling temporary directory and renames it into place, so
// a failed save leaves no partial bundle. Output bytes depend only on the
// pipeline and record.

void save_bundle(const std::filesystem::path& dir, const Pipeline& pipeline,
                 const BundleRecord& record);

/// Throws DataError on a missing file, a format version other than
/// kBundleFormatVersion, or an array whose size disagrees with its shape.
Pipeline load_bundle(const std::filesystem::path& dir);

}  // namespace psyrisk
