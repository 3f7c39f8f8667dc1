#ifndef LTSKIT_SYMBOLS_HPP_
#define LTSKIT_SYMBOLS_HPP_

#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace lts {

// Interned id for any categorical symbol: a letter, an output symbol
// (phone, pseudo-phone, epsilon), a POS tag, or the padding marker.
using Sym = int32_t;

// How stress is written on a vowel symbol.
enum class StressConvention {
  kAsterisk,   // primary accent only: EH*
  kCmuDigits,  // CMU digits kept verbatim: AH0 / AH1 / AH2
};

// String <-> id interning. Two symbols are reserved:
//   kPad ("#")  word-boundary padding / absent POS; printed "-" in debug
//               vector dumps (Table-3 style) but kept distinct internally
//               so trees never confuse "outside word" with "silent letter".
//   kEps ("-")  the epsilon output symbol.
class SymbolTable {
 public:
  static constexpr Sym kPad = 0;
  static constexpr Sym kEps = 1;

  SymbolTable();

  Sym intern(std::string_view name);
  std::optional<Sym> find(std::string_view name) const;
  const std::string& name(Sym id) const;
  Sym size() const { return static_cast<Sym>(names_.size()); }

  // Rank of each symbol when all names are sorted; used for the
  // "ties broken by symbol order" rules. Rebuilt on demand.
  std::vector<int32_t> string_ranks() const;

 private:
  std::vector<std::string> names_;
  std::unordered_map<std::string, Sym> ids_;
};

// --- stress-suffix helpers over rendered symbol text ---------------------

// Splits "EH*" -> {"EH","*"}, "AH1" -> {"AH","1"}, "K" -> {"K",""}.
// Pseudo-phones are handled part-wise by the _sym variants below.
struct BaseStress {
  std::string base;
  std::string marker;  // "" when unstressed / not a vowel
};

BaseStress split_stress(std::string_view phone, StressConvention conv);

// Strip every stress marker from a (possibly pseudo) output symbol.
// Epsilon passes through unchanged.
std::string strip_stress_sym(const std::string& sym, StressConvention conv);

// Stress marker carried by a (possibly pseudo) output symbol; for a pseudo
// the parts are scanned left to right and the last non-empty marker wins.
std::string stress_marker_of(const std::string& sym, StressConvention conv);

// Attach `marker` to the vowel of `sym` (last vowel part of a pseudo).
// Non-vowel symbols and empty markers come back unchanged.
std::string attach_stress_sym(const std::string& sym, const std::string& marker,
                              const std::set<std::string>& vowel_bases,
                              StressConvention conv);

// Split a pseudo-phone name on its first underscore; plain symbols come
// back as a single element.
std::vector<std::string> pseudo_parts(const std::string& sym);

bool is_pseudo(const std::string& sym);

const char* to_string(StressConvention conv);
std::optional<StressConvention> stress_convention_from(std::string_view name);

}  // namespace lts

#endif  // LTSKIT_SYMBOLS_HPP_
