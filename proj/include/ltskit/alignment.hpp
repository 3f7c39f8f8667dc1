#ifndef LTSKIT_ALIGNMENT_HPP_
#define LTSKIT_ALIGNMENT_HPP_

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "ltskit/lexicon.hpp"

namespace lts {

inline constexpr const char* kEpsilon = "-";

// A monotone one-to-one alignment: out[i] is the output symbol (phone,
// pseudo-phone, or epsilon) carried by letter i.
struct Alignment {
  std::vector<std::string> out;
  double score = 0.0;  // sum of log prob(G_i, out_i) under the scoring table
};

// prob(symbol | grapheme), rows summing to 1 over the symbols actually
// counted; unseen pairs read as a small positive floor so no path zeroes
// out. Epsilon is a first-class output symbol competing for mass.
class AssociationTable {
 public:
  static constexpr double kFloor = 1e-12;

  double prob(char g, const std::string& sym) const;
  double log_prob(char g, const std::string& sym) const;

  void set(char g, const std::string& sym, double p);
  // Row-normalize raw counts into probabilities.
  static AssociationTable from_counts(
      const std::map<char, std::map<std::string, double>>& counts);

  // Largest absolute probability difference over the union of stored keys
  // (missing entries read as the floor).
  double max_abs_delta(const AssociationTable& other) const;

  // TSV dump `G<TAB>P<TAB>prob`, sorted, for inspection.
  void dump_tsv(std::ostream& out) const;
  static AssociationTable load_tsv(std::istream& in);

  const std::map<char, std::map<std::string, double>>& rows() const {
    return rows_;
  }

 private:
  std::map<char, std::map<std::string, double>> rows_;
};

// --- epsilon scattering (fully automatic) --------------------------------

// Uniform counting over every monotone epsilon placement of every entry,
// computed exactly by lattice path-counting (forward x backward), then
// row-normalized. Entries must satisfy |phones| <= |word|.
AssociationTable init_counts(std::span<const LexiconEntry> entries);

// Insert epsilons on the maximum-probability path. Ties are broken by
// preferring epsilons at the rightmost feasible positions.
Alignment viterbi_align(const LexiconEntry& entry,
                        const AssociationTable& table);

struct EmResult {
  AssociationTable table;
  std::vector<Alignment> alignments;     // one per entry, final iteration
  std::vector<double> objective;         // sum of scores per iteration
  int iterations = 0;
  bool converged = false;
};

// Hard-EM loop: re-align all entries under the current table, re-estimate
// probabilities from the selected paths, stop on max |dprob| < tol,
// unchanged alignments, or max_iters.
EmResult em_train(std::span<const LexiconEntry> entries, int max_iters = 10,
                  double tol = 1e-4, int threads = 0);

// --- hand-seeded alignment -----------------------------------------------

// Context-free feasible letter -> symbol sets. Matching is on base symbols:
// stress markers are stripped from the candidate before lookup, and pseudo
// symbols match by their base-joined name.
class AllowablesTable {
 public:
  void allow(char g, const std::string& base_sym);  // kEpsilon allows eps
  bool allows(char g, const std::string& sym, StressConvention conv) const;
  bool allows_epsilon(char g) const;
  bool has(char g) const;
  const std::map<char, std::set<std::string>>& rows() const { return rows_; }

  // File lines `g: SYM SYM _ ...` where `_` is epsilon; `#` comments.
  static AllowablesTable load(const std::string& path);
  static AllowablesTable parse(const std::string& text);

 private:
  std::map<char, std::set<std::string>> rows_;
};

// All monotone one-to-one alignments whose every pair is allowed. An empty
// result marks the entry unalignable. Throws DataError when the number of
// alignments exceeds `cap` (an over-permissive table).
std::vector<std::vector<std::string>> enumerate_alignments(
    const LexiconEntry& entry, const AllowablesTable& allow,
    StressConvention conv, std::uint64_t cap = 10'000'000);

// Pair occurrences summed over ALL valid alignments of every alignable
// entry (exact lattice counting), normalized to P(symbol | letter).
// Throws DataError when no entry is alignable.
AssociationTable estimate_pair_probs(std::span<const LexiconEntry> entries,
                                     const AllowablesTable& allow,
                                     StressConvention conv);

// Argmax of sum log P(symbol|letter) over the valid alignments; nullopt for
// an unalignable entry. Same rightmost-epsilon tie rule as viterbi_align.
std::optional<Alignment> best_seeded_alignment(const LexiconEntry& entry,
                                               const AllowablesTable& allow,
                                               const AssociationTable& probs,
                                               StressConvention conv);

struct UnalignableReport {
  struct Item {
    std::size_t index = 0;     // entry index
    std::size_t stuck_at = 0;  // first letter no allowed symbol can extend past
  };
  std::vector<Item> items;
  std::size_t total = 0;
  double per_thousand = 0.0;
};

UnalignableReport report_unalignable(std::span<const LexiconEntry> entries,
                                     const AllowablesTable& allow,
                                     StressConvention conv);
void write_unalignable_tsv(const UnalignableReport& report,
                           std::span<const LexiconEntry> entries,
                           std::ostream& out);

// Alignment dump `word<TAB>pos<TAB>sym1 sym2 ...` with `-` for epsilon;
// input format of the feature extractor.
void write_alignments_tsv(std::span<const LexiconEntry> entries,
                          std::span<const Alignment> alignments,
                          std::ostream& out);

struct AlignedCorpus {
  std::vector<LexiconEntry> entries;  // phones re-derived via postprocess
  std::vector<Alignment> alignments;
};
AlignedCorpus read_alignments_tsv(std::istream& in);

}  // namespace lts

#endif  // LTSKIT_ALIGNMENT_HPP_
