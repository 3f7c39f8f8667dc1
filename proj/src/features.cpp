#include "ltskit/features.hpp"

#include <ostream>

#include "ltskit/error.hpp"

namespace lts {

void FeatureConfig::validate() const {
  check_data(window >= 0 && window <= 32, "window must be in [0, 32]");
  check_data(feedback >= 0 && feedback <= 32, "feedback must be in [0, 32]");
}

FeatureExtractor::FeatureExtractor(const FeatureConfig& cfg,
                                   StressConvention conv, SymbolTable* symbols)
    : cfg_(cfg), conv_(conv), symbols_(symbols) {
  cfg_.validate();
  check_internal(symbols_ != nullptr, "feature extractor needs a symbol table");
}

FeatureExtractor::FeatureExtractor(const FeatureConfig& cfg,
                                   StressConvention conv,
                                   const SymbolTable* symbols)
    : cfg_(cfg), conv_(conv), ro_symbols_(symbols) {
  cfg_.validate();
  check_internal(ro_symbols_ != nullptr,
                 "feature extractor needs a symbol table");
}

Sym FeatureExtractor::sym_for(const std::string& name) const {
  if (symbols_) return symbols_->intern(name);
  return ro_symbols_->find(name).value_or(kUnseenSym);
}

std::vector<std::size_t> FeatureExtractor::visit_order(std::size_t n) const {
  std::vector<std::size_t> order(n);
  for (std::size_t k = 0; k < n; ++k)
    order[k] = cfg_.direction == Direction::kLeftToRight ? k : n - 1 - k;
  return order;
}

FeatureVector FeatureExtractor::vector_at(
    const std::string& word, std::size_t position,
    std::span<const std::string> out_by_surface, const std::string& pos) const {
  check_internal(position < word.size(), "feature position out of range");
  check_internal(out_by_surface.size() == word.size(),
                 "output buffer length mismatch");
  const std::ptrdiff_t n = static_cast<std::ptrdiff_t>(word.size());
  const std::ptrdiff_t p = static_cast<std::ptrdiff_t>(position);

  FeatureVector v;
  v.attrs.reserve(static_cast<std::size_t>(cfg_.attr_count()));
  for (std::ptrdiff_t q = p - cfg_.window; q <= p + cfg_.window; ++q)
    v.attrs.push_back(q < 0 || q >= n ? SymbolTable::kPad
                                      : sym_for(std::string(1, word[q])));

  // Feedback reads only already-visited surface positions; in separate and
  // stress-free modes the phone trees never see markers, so strip them here.
  const std::ptrdiff_t k = cfg_.feedback;
  const std::ptrdiff_t lo =
      cfg_.direction == Direction::kLeftToRight ? p - k : p + 1;
  for (std::ptrdiff_t q = lo; q < lo + k; ++q) {
    if (q < 0 || q >= n) {
      v.attrs.push_back(SymbolTable::kPad);
      continue;
    }
    const std::string& sym = out_by_surface[static_cast<std::size_t>(q)];
    check_internal(!sym.empty(), "feedback position not yet transcribed");
    v.attrs.push_back(sym_for(cfg_.stress == StressMode::kMerged
                                  ? sym
                                  : strip_stress_sym(sym, conv_)));
  }

  if (cfg_.use_pos)
    v.attrs.push_back(pos.empty() ? SymbolTable::kPad : sym_for(pos));
  return v;
}

std::vector<FeatureVector> FeatureExtractor::training_vectors(
    const LexiconEntry& entry, const std::vector<std::string>& aligned_out)
    const {
  check_data(aligned_out.size() == entry.word.size(),
             "alignment length mismatch for: " + entry.word);
  check_internal(symbols_ != nullptr, "training vectors need intern mode");
  std::vector<FeatureVector> vectors;
  vectors.reserve(entry.word.size());
  for (std::size_t p : visit_order(entry.word.size())) {
    FeatureVector v = vector_at(entry.word, p, aligned_out, entry.pos);
    const std::string& sym = aligned_out[p];
    v.target = symbols_->intern(cfg_.stress == StressMode::kMerged
                                    ? sym
                                    : strip_stress_sym(sym, conv_));
    vectors.push_back(std::move(v));
  }
  return vectors;
}

std::vector<FeatureVector> FeatureExtractor::stress_training_vectors(
    const LexiconEntry& entry, const std::vector<std::string>& aligned_out)
    const {
  check_data(aligned_out.size() == entry.word.size(),
             "alignment length mismatch for: " + entry.word);
  check_internal(symbols_ != nullptr, "training vectors need intern mode");
  std::vector<FeatureVector> vectors;
  vectors.reserve(entry.word.size());
  for (std::size_t p : visit_order(entry.word.size())) {
    FeatureVector v = vector_at(entry.word, p, aligned_out, entry.pos);
    std::string marker = stress_marker_of(aligned_out[p], conv_);
    v.target = symbols_->intern(marker.empty() ? kNoStressMarker : marker);
    vectors.push_back(std::move(v));
  }
  return vectors;
}

FeatureVector FeatureExtractor::prediction_vector(
    const std::string& word, std::size_t position,
    std::span<const std::string> produced, const std::string& pos) const {
  check_data(position < word.size(), "position out of range");
  check_data(produced.size() < word.size(),
             "word already fully transcribed: " + word);
  std::vector<std::size_t> order = visit_order(word.size());
  check_data(order[produced.size()] == position,
             "position is not the next one in visit order");
  std::vector<std::string> out_by_surface(word.size());
  for (std::size_t k = 0; k < produced.size(); ++k)
    out_by_surface[order[k]] = produced[k];
  return vector_at(word, position, out_by_surface, pos);
}

void dump_vectors(std::span<const FeatureVector> vectors,
                  const SymbolTable& symbols, std::ostream& out) {
  for (const auto& v : vectors) {
    for (std::size_t i = 0; i < v.attrs.size(); ++i) {
      if (i) out << ' ';
      Sym a = v.attrs[i];
      if (a == SymbolTable::kPad)
        out << '-';
      else if (a < 0)
        out << '?';
      else
        out << symbols.name(a);
    }
    out << " -> ";
    if (v.target < 0)
      out << '?';
    else
      out << symbols.name(v.target);
    out << '\n';
  }
}

}  // namespace lts
