#include "ltskit/transcriber.hpp"

#include <ostream>

#include "ltskit/error.hpp"
#include "ltskit/parallel.hpp"

namespace lts {
namespace {

bool has_vowel_part(const std::string& sym, const Model& model) {
  for (const auto& part : pseudo_parts(sym))
    if (model.vowels.count(split_stress(part, model.stress_conv).base))
      return true;
  return false;
}

}  // namespace

Transcription transcribe(const Model& model, const std::string& word,
                         const std::string& pos,
                         const TranscribeOptions& opts) {
  check_data(!word.empty(), "empty word");
  check_data(!model.trees.empty(), "model has no trees");
  FeatureExtractor ext(model.cfg, model.stress_conv, &model.symbols);
  const std::size_t n = word.size();
  std::vector<std::string> out_by_surface(n);
  std::vector<std::size_t> order = ext.visit_order(n);

  for (std::size_t p : order) {
    auto tree = model.trees.find(word[p]);
    if (tree == model.trees.end()) {
      if (opts.unknown == UnknownLetterPolicy::kFail)
        throw DataError("unknown grapheme '" + std::string(1, word[p]) +
                        "' in: " + word);
      out_by_surface[p] = kEpsilon;
      continue;
    }
    FeatureVector v = ext.vector_at(word, p, out_by_surface, pos);
    out_by_surface[p] = model.symbols.name(predict(*tree->second, v.attrs));
  }

  if (model.cfg.stress == StressMode::kSeparate) {
    // Markers only alter already-produced symbols; the feature extractor
    // strips them from feedback in this mode, so pass order cannot matter.
    for (std::size_t p : order) {
      if (out_by_surface[p] == kEpsilon) continue;
      if (!has_vowel_part(out_by_surface[p], model)) continue;
      auto tree = model.stress_trees.find(word[p]);
      if (tree == model.stress_trees.end()) continue;
      FeatureVector v = ext.vector_at(word, p, out_by_surface, pos);
      const std::string& marker =
          model.symbols.name(predict(*tree->second, v.attrs));
      if (marker != kNoStressMarker)
        out_by_surface[p] = attach_stress_sym(out_by_surface[p], marker,
                                              model.vowels, model.stress_conv);
    }
  }

  Transcription result;
  result.phones = postprocess_output(out_by_surface);
  result.raw = std::move(out_by_surface);
  return result;
}

BatchResult transcribe_batch(const Model& model,
                             std::span<const LexiconEntry> entries,
                             int threads, const TranscribeOptions& opts) {
  BatchResult batch;
  batch.items.resize(entries.size());
  std::vector<std::string> failures(entries.size());
  std::vector<char> failed(entries.size(), 0);
  std::vector<char> fatal(entries.size(), 0);
  parallel_for(entries.size(), threads, [&](std::size_t i) {
    try {
      batch.items[i] = transcribe(model, entries[i].word, entries[i].pos, opts);
    } catch (const DataError& e) {
      failed[i] = 1;
      failures[i] = e.what();
    } catch (const std::exception& e) {
      fatal[i] = 1;
      failures[i] = e.what();
    }
  });
  for (std::size_t i = 0; i < entries.size(); ++i)
    check_internal(!fatal[i], "transcription failed for '" + entries[i].word +
                                  "': " + failures[i]);
  for (std::size_t i = 0; i < entries.size(); ++i)
    if (failed[i]) batch.errors.push_back({i, failures[i]});
  return batch;
}

void write_predictions_tsv(std::span<const LexiconEntry> entries,
                           const BatchResult& batch, std::ostream& out) {
  check_internal(entries.size() == batch.items.size(),
                 "predictions: size mismatch");
  for (std::size_t i = 0; i < entries.size(); ++i) {
    out << entries[i].word << '\t' << entries[i].pos << '\t';
    const auto& phones = batch.items[i].phones;
    for (std::size_t j = 0; j < phones.size(); ++j) {
      if (j) out << ' ';
      out << phones[j];
    }
    out << '\n';
  }
}

}  // namespace lts
