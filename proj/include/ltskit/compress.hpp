#ifndef LTSKIT_COMPRESS_HPP_
#define LTSKIT_COMPRESS_HPP_

#include <map>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "ltskit/eval.hpp"

namespace lts {

// Trained model + exception list reproducing the source lexicon exactly.
// Exceptions are keyed by (word, pos); homographs sharing a key keep every
// variant, and any entry whose key lands in the exceptions is stored there
// too so lookups are never shadowed by the tree.
struct CompressedLexicon {
  Model model;
  std::map<std::pair<std::string, std::string>,
           std::vector<std::vector<std::string>>>
      exceptions;

  struct Stats {
    std::uint64_t nodes = 0;
    double coverage_pct = 0.0;
    std::size_t exception_count = 0;  // entries stored as exceptions
    std::size_t entry_count = 0;
    std::size_t unalignable_count = 0;
    std::size_t source_bytes = 0;
    std::size_t model_bytes = 0;
    std::size_t exceptions_bytes = 0;
    double ratio_vs_text = 0.0;  // source_bytes / (model + exceptions bytes)
  } stats;
};

// Train on the FULL lexicon (train = test: compression memorizes the corpus
// compactly). Entries without an alignment contribute no training vectors
// but stay in the corpus and the coverage denominator; mispredicted entries
// go to the exceptions. Byte sizes are measured on the declared external
// formats.
CompressedLexicon compress(std::span<const LexiconEntry> entries,
                           std::span<const std::optional<Alignment>> alignments,
                           const FeatureConfig& cfg, const TrainConfig& tc,
                           StressConvention conv, int threads = 0);

// Exceptions first (all stored variants), else the model transcription.
std::vector<std::vector<std::string>> lookup(const CompressedLexicon& lex,
                                             const std::string& word,
                                             const std::string& pos = "");

void write_exceptions_tsv(const CompressedLexicon& lex, std::ostream& out);
void read_exceptions_tsv(std::istream& in, CompressedLexicon& lex);
// Flat `key=value` lines.
void write_stats(const CompressedLexicon::Stats& stats, std::ostream& out);

}  // namespace lts

#endif  // LTSKIT_COMPRESS_HPP_
