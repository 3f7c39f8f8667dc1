#include "ltskit/compress.hpp"

#include <iomanip>
#include <istream>
#include <ostream>
#include <sstream>

#include "ltskit/error.hpp"

namespace lts {
namespace {

// Source-form phones: pseudo-phones split back apart.
std::vector<std::string> source_phones(const LexiconEntry& entry) {
  std::vector<std::string> phones;
  for (const auto& ph : entry.phones)
    for (auto& part : pseudo_parts(ph)) phones.push_back(std::move(part));
  return phones;
}

}  // namespace

CompressedLexicon compress(std::span<const LexiconEntry> entries,
                           std::span<const std::optional<Alignment>> alignments,
                           const FeatureConfig& cfg, const TrainConfig& tc,
                           StressConvention conv, int threads) {
  check_data(entries.size() == alignments.size(),
             "compress: entries / alignments size mismatch");
  check_data(!entries.empty(), "compress: empty lexicon");

  std::vector<LexiconEntry> train_entries;
  std::vector<Alignment> train_alignments;
  std::size_t unalignable = 0;
  for (std::size_t i = 0; i < entries.size(); ++i) {
    if (alignments[i]) {
      train_entries.push_back(entries[i]);
      train_alignments.push_back(*alignments[i]);
    } else {
      ++unalignable;
    }
  }
  check_data(!train_entries.empty(), "compress: no alignable entries");

  CompressedLexicon lex;
  lex.model =
      train_model(train_entries, train_alignments, cfg, tc, conv, threads);

  BatchResult batch = transcribe_batch(lex.model, entries, threads);
  std::vector<char> covered(entries.size(), 0);
  std::size_t covered_count = 0;
  for (std::size_t i = 0; i < entries.size(); ++i) {
    if (batch.items[i].phones == source_phones(entries[i])) {
      covered[i] = 1;
      ++covered_count;
    }
  }

  // A key goes to the exceptions as soon as one of its entries is missed;
  // every variant under the key is stored so the trees never shadow one.
  std::map<std::pair<std::string, std::string>, std::vector<std::size_t>>
      by_key;
  for (std::size_t i = 0; i < entries.size(); ++i)
    by_key[{entries[i].word, entries[i].pos}].push_back(i);
  for (const auto& [key, indices] : by_key) {
    bool all_covered = true;
    for (std::size_t i : indices)
      if (!covered[i]) {
        all_covered = false;
        break;
      }
    if (all_covered) continue;
    auto& variants = lex.exceptions[key];
    for (std::size_t i : indices) {
      auto phones = source_phones(entries[i]);
      bool duplicate = false;
      for (const auto& seen : variants)
        if (seen == phones) {
          duplicate = true;
          break;
        }
      if (!duplicate) variants.push_back(std::move(phones));
    }
  }

  auto& stats = lex.stats;
  stats.nodes = lex.model.size();
  stats.entry_count = entries.size();
  stats.unalignable_count = unalignable;
  stats.coverage_pct = 100.0 * static_cast<double>(covered_count) /
                       static_cast<double>(entries.size());
  for (const auto& [key, variants] : lex.exceptions)
    stats.exception_count += variants.size();

  std::ostringstream source;
  for (const auto& entry : entries) {
    LexiconEntry original{entry.word, entry.pos, source_phones(entry)};
    std::vector<LexiconEntry> one{std::move(original)};
    write_generic_tsv(one, source);
  }
  stats.source_bytes = source.str().size();
  std::ostringstream model_text;
  serialize_model(lex.model, model_text);
  stats.model_bytes = model_text.str().size();
  std::ostringstream exceptions_text;
  write_exceptions_tsv(lex, exceptions_text);
  stats.exceptions_bytes = exceptions_text.str().size();
  std::size_t compressed = stats.model_bytes + stats.exceptions_bytes;
  if (compressed)
    stats.ratio_vs_text = static_cast<double>(stats.source_bytes) /
                          static_cast<double>(compressed);
  return lex;
}

std::vector<std::vector<std::string>> lookup(const CompressedLexicon& lex,
                                             const std::string& word,
                                             const std::string& pos) {
  auto hit = lex.exceptions.find({word, pos});
  if (hit != lex.exceptions.end()) return hit->second;
  return {transcribe(lex.model, word, pos).phones};
}

void write_exceptions_tsv(const CompressedLexicon& lex, std::ostream& out) {
  for (const auto& [key, variants] : lex.exceptions)
    for (const auto& phones : variants) {
      out << key.first << '\t' << key.second << '\t';
      for (std::size_t j = 0; j < phones.size(); ++j) {
        if (j) out << ' ';
        out << phones[j];
      }
      out << '\n';
    }
}

void read_exceptions_tsv(std::istream& in, CompressedLexicon& lex) {
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::size_t t1 = line.find('\t');
    std::size_t t2 = t1 == std::string::npos ? t1 : line.find('\t', t1 + 1);
    check_data(t2 != std::string::npos,
               "exceptions line " + std::to_string(line_no) +
                   ": expected word<TAB>pos<TAB>phones");
    std::string word = line.substr(0, t1);
    std::string pos = line.substr(t1 + 1, t2 - t1 - 1);
    check_data(!word.empty(), "exceptions line " + std::to_string(line_no) +
                                  ": empty word");
    std::vector<std::string> phones;
    std::istringstream rest(line.substr(t2 + 1));
    std::string ph;
    while (rest >> ph) phones.push_back(std::move(ph));
    check_data(!phones.empty(), "exceptions line " + std::to_string(line_no) +
                                    ": no phones");
    lex.exceptions[{std::move(word), std::move(pos)}].push_back(
        std::move(phones));
  }
}

void write_stats(const CompressedLexicon::Stats& stats, std::ostream& out) {
  out << "nodes=" << stats.nodes << '\n';
  out << std::fixed << std::setprecision(2);
  out << "coverage_pct=" << stats.coverage_pct << '\n';
  out << "exception_count=" << stats.exception_count << '\n';
  out << "entry_count=" << stats.entry_count << '\n';
  out << "unalignable_count=" << stats.unalignable_count << '\n';
  out << "source_bytes=" << stats.source_bytes << '\n';
  out << "model_bytes=" << stats.model_bytes << '\n';
  out << "exceptions_bytes=" << stats.exceptions_bytes << '\n';
  out << std::setprecision(3);
  out << "ratio_vs_text=" << stats.ratio_vs_text << '\n';
}

}  // namespace lts
