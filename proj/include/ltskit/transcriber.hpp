#ifndef LTSKIT_TRANSCRIBER_HPP_
#define LTSKIT_TRANSCRIBER_HPP_

#include <span>
#include <string>
#include <vector>

#include "ltskit/id3.hpp"

namespace lts {

enum class UnknownLetterPolicy {
  kFail,         // default: silent errors corrupt accuracy metrics
  kSkipEpsilon,  // emit epsilon for letters outside the model alphabet
};

struct TranscribeOptions {
  UnknownLetterPolicy unknown = UnknownLetterPolicy::kFail;
};

struct Transcription {
  std::vector<std::string> phones;  // post-processed: no epsilon, no pseudos
  std::vector<std::string> raw;     // aligned outputs, one per letter
};

// Visit letters in the model's direction, building prediction vectors from
// the symbols produced so far (the model sees what it produced, epsilons
// and pseudo-phones included); with separate stress trees, attach predicted
// markers to vowel outputs by position. Output order is always surface
// left-to-right. Throws DataError for an unknown grapheme under kFail.
Transcription transcribe(const Model& model, const std::string& word,
                         const std::string& pos = "",
                         const TranscribeOptions& opts = {});

struct BatchResult {
  std::vector<Transcription> items;  // index-aligned with the input
  struct Error {
    std::size_t index;
    std::string message;
  };
  std::vector<Error> errors;  // failed entries (their items are empty)
};

// Order-preserving parallel map of transcribe; per-entry errors are
// aggregated, not thrown. Deterministic across thread counts.
BatchResult transcribe_batch(const Model& model,
                             std::span<const LexiconEntry> entries,
                             int threads = 0,
                             const TranscribeOptions& opts = {});

// CLI `predict` output: `word<TAB>pos<TAB>ph ph ...`.
void write_predictions_tsv(std::span<const LexiconEntry> entries,
                           const BatchResult& batch, std::ostream& out);

}  // namespace lts

#endif  // LTSKIT_TRANSCRIBER_HPP_
