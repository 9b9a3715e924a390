#pragma once

#include <cstdint>
#include <filesystem>
#include <string>

#include "banglapredict/corpus.hpp"
#include "banglapredict/counts.hpp"

namespace banglapredict {

inline constexpr const char* kCountsFile = "counts.tsv";
inline constexpr const char* kManifestFile = "manifest";

/// Metadata written next to the count file by `train`.
struct ModelManifest {
  std::string corpus_fingerprint;
  int max_order = 3;
  std::uint64_t sentences = 0;
  std::uint64_t tokens = 0;
  std::uint64_t word_forms = 0;
  std::string model_id;  // hash of the count file bytes
};

struct Model {
  NgramTable table;
  ModelManifest manifest;
};

ModelManifest save_model(const std::filesystem::path& directory, const Corpus& corpus,
                         const NgramTable& table);

/// Throws NoModelError when the directory or its files are missing, and
/// LoadError when they are malformed.
Model load_model(const std::filesystem::path& directory);

std::string hex_digest(std::string_view bytes);

}  // namespace banglapredict
