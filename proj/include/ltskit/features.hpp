#ifndef LTSKIT_FEATURES_HPP_
#define LTSKIT_FEATURES_HPP_

#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "ltskit/alignment.hpp"
#include "ltskit/symbols.hpp"

namespace lts {

enum class Direction { kLeftToRight, kRightToLeft };

enum class StressMode {
  kMerged,    // one tree set over fused phone+stress symbols
  kSeparate,  // phone trees on stripped symbols + stress-marker trees
  kNone,      // stress stripped everywhere
};

struct FeatureConfig {
  int window = 3;    // N letters each side of the focus letter
  int feedback = 0;  // K previously transcribed symbols (0 disables)
  Direction direction = Direction::kLeftToRight;
  bool use_pos = false;
  StressMode stress = StressMode::kMerged;

  int attr_count() const {
    return 2 * window + 1 + feedback + (use_pos ? 1 : 0);
  }
  void validate() const;  // throws DataError
};

// One learning vector: categorical attributes
// [N left letters, focus, N right letters] ++ [K feedback]? ++ [POS]?
// and (for training) the aligned output symbol as target.
struct FeatureVector {
  std::vector<Sym> attrs;
  Sym target = -1;  // -1 when absent (prediction vectors)
};

// Stress-marker target written for positions without a marker.
inline constexpr const char* kNoStressMarker = "none";

// Attribute value for a symbol unseen at training time. It matches no tree
// edge, so prediction falls through to the node defaults.
inline constexpr Sym kUnseenSym = -2;

// Letter windows always read in left-to-right surface order; the direction
// only changes the visit order and where feedback comes from. Feedback
// attributes are the aligned symbols of the K nearest already-visited
// surface positions, kept in surface order and padded with kPad outside
// the word:  LTR focus p -> positions [p-K, p),  RTL focus p -> (p, p+K].
class FeatureExtractor {
 public:
  // Training mode: attribute and target symbols are interned into *symbols.
  FeatureExtractor(const FeatureConfig& cfg, StressConvention conv,
                   SymbolTable* symbols);
  // Prediction mode: the table stays read-only (safe to share across
  // threads); attribute strings it does not know become kUnseenSym.
  FeatureExtractor(const FeatureConfig& cfg, StressConvention conv,
                   const SymbolTable* symbols);

  // One vector per letter, visited in cfg.direction order (teacher forcing:
  // feedback comes from the reference aligned symbols). Targets follow
  // cfg.stress: fused (merged), stripped (separate/none).
  std::vector<FeatureVector> training_vectors(
      const LexiconEntry& entry, const std::vector<std::string>& aligned_out)
      const;

  // Same visits, same attributes, but targets are the stress markers
  // ("*" / digits; kNoStressMarker elsewhere). Only meaningful when
  // cfg.stress == kSeparate.
  std::vector<FeatureVector> stress_training_vectors(
      const LexiconEntry& entry, const std::vector<std::string>& aligned_out)
      const;

  // Prediction-time vector for `position` (a surface index): feedback comes
  // from `produced`, the model outputs for all previously visited positions
  // in visit order. Throws DataError on a bad position or length mismatch.
  FeatureVector prediction_vector(const std::string& word,
                                  std::size_t position,
                                  std::span<const std::string> produced,
                                  const std::string& pos) const;

  // Low-level builder shared with the transcriber: `out_by_surface` holds
  // the (reference or produced) symbol per surface position, empty string
  // where nothing is available yet.
  FeatureVector vector_at(const std::string& word, std::size_t position,
                          std::span<const std::string> out_by_surface,
                          const std::string& pos) const;

  // Surface positions in visit order for a word of length n.
  std::vector<std::size_t> visit_order(std::size_t n) const;

  const FeatureConfig& config() const { return cfg_; }
  StressConvention convention() const { return conv_; }

 private:
  Sym sym_for(const std::string& name) const;  // intern or read-only lookup

  FeatureConfig cfg_;
  StressConvention conv_;
  SymbolTable* symbols_ = nullptr;           // training mode
  const SymbolTable* ro_symbols_ = nullptr;  // prediction mode
};

// Debug TSV: attributes space-joined, `-> target`; kPad printed as `-`
// (Table-3 style display shares `-` between padding and epsilon).
void dump_vectors(std::span<const FeatureVector> vectors,
                  const SymbolTable& symbols, std::ostream& out);

}  // namespace lts

#endif  // LTSKIT_FEATURES_HPP_
