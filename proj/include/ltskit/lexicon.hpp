#ifndef LTSKIT_LEXICON_HPP_
#define LTSKIT_LEXICON_HPP_

#include <array>
#include <cstddef>
#include <iosfwd>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "ltskit/symbols.hpp"

namespace lts {

// One pronunciation lexicon entry. Phones are rendered symbols with any
// stress marker fused in ("EH*", "AH1", plain "K"); after pseudo-phone
// merging they may also be compound ("K_S").
struct LexiconEntry {
  std::string word;                 // lowercase, non-empty
  std::string pos;                  // may be empty
  std::vector<std::string> phones;  // non-empty
};

enum class LexFormat { kCmu, kOaldLike, kGenericTsv };

// Phone inventory used to validate parsed symbols. An open inventory
// accepts and learns new base phones; a closed one (ARPAbet for the CMU
// format) rejects unknown symbols into the rejects report.
struct PhoneInventory {
  StressConvention stress = StressConvention::kAsterisk;
  bool open = true;
  std::set<std::string> bases;
  std::set<std::string> vowels;

  // CMU release inventory: 39 base phones, stress digits on vowels.
  static PhoneInventory arpabet();

  // Validation failure reason, or nullopt if `symbol` is acceptable.
  std::optional<std::string> validate(const std::string& symbol) const;

  // Record an accepted symbol (open inventories learn its base; any base
  // carrying a stress marker is learned as a vowel).
  void observe(const std::string& symbol);
};

struct RejectLine {
  std::size_t line_no = 0;  // 1-based
  std::string reason;
  std::string raw;
};

struct ParseOptions {
  bool drop_variants = false;  // drop CMU "WORD(2)" alternate pronunciations
  std::optional<PhoneInventory> inventory;  // overrides the format default
};

struct ParseResult {
  std::vector<LexiconEntry> entries;
  std::vector<RejectLine> rejects;
  PhoneInventory inventory;  // as observed (plus any declared bases)
};

// Parse a lexicon file. Malformed lines land in `rejects`, never silently
// dropped. Throws DataError for an unreadable file or when no entry at all
// parses. Formats (UTF-8, one entry per line):
//   kCmu        WORD  PH PH ...      ";;;" comments, "(n)" variant markers
//   kOaldLike   word<TAB>pos<TAB>ph ph ...   with *-marked primary stress
//   kGenericTsv word<TAB>pos<TAB>ph ph ...   stress convention auto-detected
ParseResult parse_lexicon(const std::string& path, LexFormat format,
                          const ParseOptions& opts = {});
ParseResult parse_lexicon_text(const std::string& text, LexFormat format,
                               const ParseOptions& opts = {});

// Serialize entries in the generic TSV form (the declared external format;
// also the byte-measured "text version" for compression ratios).
void write_generic_tsv(const std::vector<LexiconEntry>& entries,
                       std::ostream& out);
void write_rejects_tsv(const std::vector<RejectLine>& rejects,
                       std::ostream& out);

// --- pseudo-phonemes ------------------------------------------------------

// A fused pair of phones letting one letter map to one symbol. Parts are
// base phones; matching in an entry ignores stress markers, and the merged
// symbol fuses the rendered (stress-carrying) forms: W + AA1 -> "W_AA1".
struct PseudoPhone {
  std::string name;                  // base-joined, e.g. "K_S"
  std::array<std::string, 2> parts;  // base phones, no underscores
};

struct PseudoSet {
  std::vector<PseudoPhone> defs;

  // K_S, G_Z, W_A.
  static PseudoSet defaults();
  // Config lines "NAME = PART1 PART2"; '#' comments.
  static PseudoSet load(const std::string& path);
  static PseudoSet parse(const std::string& text);

  const PseudoPhone* match(const std::string& base1,
                           const std::string& base2) const;
};

struct MergeResult {
  LexiconEntry entry;     // phones possibly rewritten with pseudo symbols
  bool alignable = true;  // false: still |phones| > |word| after merging
};

// While the entry has more phones than letters, merge the leftmost adjacent
// pair found in `merges`; Unalignable is a value, not a failure.
MergeResult merge_pseudo_phones(const LexiconEntry& entry,
                                const PseudoSet& merges,
                                StressConvention conv);

// --- train/test split -----------------------------------------------------

struct SplitSpec {
  std::vector<std::size_t> train;
  std::vector<std::size_t> test;
  std::size_t n = 10;
  std::size_t offset = 0;
};

// Every-Nth selector: test = indices congruent to offset (mod n).
// Throws DataError when n < 2 or offset >= n.
SplitSpec split_every_nth(std::size_t entry_count, std::size_t n,
                          std::size_t offset);

// --- aligned-output post-processing --------------------------------------

// Drop epsilons and split pseudo-phones back into their parts.
std::vector<std::string> postprocess_output(
    const std::vector<std::string>& symbols);

}  // namespace lts

#endif  // LTSKIT_LEXICON_HPP_
