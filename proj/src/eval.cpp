#include "ltskit/eval.hpp"

#include <algorithm>
#include <iomanip>
#include <ostream>

#include "ltskit/error.hpp"

namespace lts {
namespace {

std::vector<std::string> strip_all(const std::vector<std::string>& phones,
                                   StressConvention conv) {
  std::vector<std::string> out;
  out.reserve(phones.size());
  for (const auto& ph : phones) out.push_back(strip_stress_sym(ph, conv));
  return out;
}

std::size_t edit_distance(const std::vector<std::string>& a,
                          const std::vector<std::string>& b) {
  std::vector<std::size_t> prev(b.size() + 1), cur(b.size() + 1);
  for (std::size_t j = 0; j <= b.size(); ++j) prev[j] = j;
  for (std::size_t i = 1; i <= a.size(); ++i) {
    cur[0] = i;
    for (std::size_t j = 1; j <= b.size(); ++j)
      cur[j] = std::min({prev[j] + 1, cur[j - 1] + 1,
                         prev[j - 1] + (a[i - 1] == b[j - 1] ? 0 : 1)});
    std::swap(prev, cur);
  }
  return prev[b.size()];
}

}  // namespace

Metrics score(std::span<const LexiconEntry> references,
              std::span<const Alignment> reference_alignments,
              const BatchResult& predictions, StressConvention conv) {
  check_data(references.size() == reference_alignments.size(),
             "score: references / alignments size mismatch");
  check_data(references.size() == predictions.items.size(),
             "score: references / predictions size mismatch");
  check_data(!references.empty(), "score: nothing to score");

  Metrics m;
  m.words = references.size();
  std::size_t word_ok = 0, word_ok_nostress = 0, slot_ok = 0, slots = 0;
  std::size_t edits = 0, ref_phones_total = 0;
  for (std::size_t i = 0; i < references.size(); ++i) {
    const Alignment& ref = reference_alignments[i];
    check_data(ref.out.size() == references[i].word.size(),
               "score: alignment length mismatch for: " + references[i].word);
    std::vector<std::string> ref_phones = postprocess_output(ref.out);
    const Transcription& pred = predictions.items[i];

    if (pred.phones == ref_phones) ++word_ok;
    if (strip_all(pred.phones, conv) == strip_all(ref_phones, conv))
      ++word_ok_nostress;

    slots += ref.out.size();
    for (std::size_t j = 0; j < ref.out.size(); ++j)
      if (j < pred.raw.size() && pred.raw[j] == ref.out[j]) ++slot_ok;

    edits += edit_distance(ref_phones, pred.phones);
    ref_phones_total += ref_phones.size();
  }
  auto pct = [](std::size_t num, std::size_t den) {
    return den ? 100.0 * static_cast<double>(num) / static_cast<double>(den)
               : 0.0;
  };
  m.word_acc_stress = pct(word_ok, m.words);
  m.word_acc_nostress = pct(word_ok_nostress, m.words);
  m.phone_acc = pct(slot_ok, slots);
  m.slots = slots;
  if (ref_phones_total) {
    double per = static_cast<double>(edits) /
                 static_cast<double>(ref_phones_total);
    m.phone_acc_edit = std::max(0.0, 100.0 * (1.0 - per));
  }
  return m;
}

void write_metrics_tsv(const Metrics& m, std::ostream& out) {
  out << std::fixed << std::setprecision(4);
  out << "word_acc_stress\t" << m.word_acc_stress << '\n';
  out << "word_acc_nostress\t" << m.word_acc_nostress << '\n';
  out << "phone_acc\t" << m.phone_acc << '\n';
  out << "phone_acc_edit\t" << m.phone_acc_edit << '\n';
  out << "words\t" << m.words << '\n';
  out << "slots\t" << m.slots << '\n';
}

void write_metrics_table(const Metrics& m, std::ostream& out) {
  out << std::fixed << std::setprecision(2);
  out << "words                 " << m.words << '\n';
  out << "slots                 " << m.slots << '\n';
  out << "word acc (stress)     " << m.word_acc_stress << "%\n";
  out << "word acc (no stress)  " << m.word_acc_nostress << "%\n";
  out << "phone acc (slots)     " << m.phone_acc << "%\n";
  out << "phone acc (edit)      " << m.phone_acc_edit << "%\n";
}

const char* to_string(FeaturePreset p) {
  switch (p) {
    case FeaturePreset::kG:
      return "g";
    case FeaturePreset::kGP:
      return "gp";
    case FeaturePreset::kGPPos:
      return "gppos";
  }
  return "?";
}

std::vector<SweepRow> accuracy_size_sweep(
    std::span<const LexiconEntry> train_entries,
    std::span<const Alignment> train_alignments,
    std::span<const LexiconEntry> test_entries,
    std::span<const Alignment> test_alignments, const FeatureConfig& base_cfg,
    std::span<const int> depth_grid, std::span<const FeaturePreset> presets,
    StressConvention conv, int threads) {
  check_data(!depth_grid.empty(), "sweep: empty depth grid");
  check_data(!presets.empty(), "sweep: no presets");
  for (int d : depth_grid)
    check_data(d >= -1, "sweep: depth must be >= 0 (or -1 for unbounded)");

  std::vector<SweepRow> rows;
  for (FeaturePreset preset : presets) {
    FeatureConfig cfg = base_cfg;
    switch (preset) {
      case FeaturePreset::kG:
        cfg.feedback = 0;
        cfg.use_pos = false;
        break;
      case FeaturePreset::kGP:
        cfg.feedback = base_cfg.feedback > 0 ? base_cfg.feedback : 3;
        cfg.use_pos = false;
        break;
      case FeaturePreset::kGPPos:
        cfg.feedback = base_cfg.feedback > 0 ? base_cfg.feedback : 3;
        cfg.use_pos = true;
        break;
    }
    for (int depth : depth_grid) {
      TrainConfig tc;
      if (depth >= 0) tc.max_depth = depth;
      Model model =
          train_model(train_entries, train_alignments, cfg, tc, conv, threads);
      BatchResult batch = transcribe_batch(model, test_entries, threads);
      Metrics m = score(test_entries, test_alignments, batch, conv);
      rows.push_back({preset, depth, model.size(), m.word_acc_stress});
    }
  }
  return rows;
}

void write_sweep_csv(std::span<const SweepRow> rows, std::ostream& out) {
  out << "preset,depth,size,word_stress_acc\n";
  out << std::fixed << std::setprecision(4);
  for (const auto& row : rows)
    out << to_string(row.preset) << ',' << row.depth << ',' << row.size << ','
        << row.word_acc_stress << '\n';
}

}  // namespace lts
