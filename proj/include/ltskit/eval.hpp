#ifndef LTSKIT_EVAL_HPP_
#define LTSKIT_EVAL_HPP_

#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "ltskit/transcriber.hpp"

namespace lts {

struct Metrics {
  double word_acc_stress = 0.0;    // exact phone+stress string match, %
  double word_acc_nostress = 0.0;  // same with stress markers stripped, %
  double phone_acc = 0.0;          // slot-wise over the one-to-one alignment
  double phone_acc_edit = 0.0;     // edit-distance variant, clearly labeled
  std::size_t words = 0;
  std::size_t slots = 0;
};

// Score predictions against references. phone_acc compares the raw aligned
// outputs slot by slot (epsilon slots count, stress included); the word
// accuracies compare post-processed phone strings. Batch errors score as
// wrong. Throws DataError on a batch length mismatch.
Metrics score(std::span<const LexiconEntry> references,
              std::span<const Alignment> reference_alignments,
              const BatchResult& predictions, StressConvention conv);

void write_metrics_tsv(const Metrics& m, std::ostream& out);
void write_metrics_table(const Metrics& m, std::ostream& out);

// --- accuracy / size sweep (Figure-1 style) ------------------------------

enum class FeaturePreset { kG, kGP, kGPPos };  // grapheme / +phoneme / +POS

struct SweepRow {
  FeaturePreset preset;
  int depth = 0;  // -1 = unbounded
  std::uint64_t size = 0;
  double word_acc_stress = 0.0;
};

// For each preset and depth cap: train on `train`, score on `test`
// (train and test may be the same corpus, as in the compression study).
std::vector<SweepRow> accuracy_size_sweep(
    std::span<const LexiconEntry> train_entries,
    std::span<const Alignment> train_alignments,
    std::span<const LexiconEntry> test_entries,
    std::span<const Alignment> test_alignments, const FeatureConfig& base_cfg,
    std::span<const int> depth_grid, std::span<const FeaturePreset> presets,
    StressConvention conv, int threads = 0);

// CSV `preset,depth,size,word_stress_acc`.
void write_sweep_csv(std::span<const SweepRow> rows, std::ostream& out);

const char* to_string(FeaturePreset p);

}  // namespace lts

#endif  // LTSKIT_EVAL_HPP_
