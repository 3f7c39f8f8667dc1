#include "ltskit/lexicon.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <ostream>
#include <sstream>

#include "ltskit/error.hpp"

namespace lts {
namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  check_data(static_cast<bool>(in), "cannot read file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

std::vector<std::string> split_ws(const std::string& s) {
  std::vector<std::string> out;
  std::istringstream iss(s);
  std::string tok;
  while (iss >> tok) out.push_back(tok);
  return out;
}

std::vector<std::string> split_tabs(const std::string& s) {
  std::vector<std::string> out;
  std::size_t start = 0;
  for (;;) {
    std::size_t tab = s.find('\t', start);
    if (tab == std::string::npos) {
      out.push_back(s.substr(start));
      return out;
    }
    out.push_back(s.substr(start, tab - start));
    start = tab + 1;
  }
}

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) {
    return static_cast<char>(std::tolower(c));
  });
  return s;
}

bool valid_word(const std::string& w) {
  if (w.empty()) return false;
  for (char c : w)
    if (!((c >= 'a' && c <= 'z') || c == '\'')) return false;
  return true;
}

// "WORD(2)" -> {"word", 2}; no marker -> variant 0.
std::pair<std::string, int> strip_variant(const std::string& raw) {
  auto open = raw.find('(');
  if (open == std::string::npos || raw.back() != ')') return {raw, 0};
  std::string num = raw.substr(open + 1, raw.size() - open - 2);
  if (num.empty() ||
      !std::all_of(num.begin(), num.end(),
                   [](unsigned char c) { return std::isdigit(c); }))
    return {raw, 0};
  return {raw.substr(0, open), std::stoi(num)};
}

struct RawLine {
  std::size_t line_no;
  std::string word;
  std::string pos;
  std::vector<std::string> phones;
  int variant = 0;
};

}  // namespace

PhoneInventory PhoneInventory::arpabet() {
  PhoneInventory inv;
  inv.stress = StressConvention::kCmuDigits;
  inv.open = false;
  inv.bases = {"AA", "AE", "AH", "AO", "AW", "AY", "B",  "CH", "D",  "DH",
               "EH", "ER", "EY", "F",  "G",  "HH", "IH", "IY", "JH", "K",
               "L",  "M",  "N",  "NG", "OW", "OY", "P",  "R",  "S",  "SH",
               "T",  "TH", "UH", "UW", "V",  "W",  "Y",  "Z",  "ZH"};
  inv.vowels = {"AA", "AE", "AH", "AO", "AW", "AY", "EH", "ER",
                "EY", "IH", "IY", "OW", "OY", "UH", "UW"};
  return inv;
}

std::optional<std::string> PhoneInventory::validate(
    const std::string& symbol) const {
  if (symbol.empty()) return "empty phone";
  if (symbol == "-") return "reserved symbol '-'";
  if (symbol.find('_') != std::string::npos) return "underscore in phone";
  if (symbol.find_first_of(" \t") != std::string::npos)
    return "whitespace in phone";
  auto bs = split_stress(symbol, stress);
  if (!open) {
    if (!bases.count(bs.base)) return "unknown phone";
    if (!bs.marker.empty() && !vowels.count(bs.base))
      return "stress on non-vowel";
  }
  return std::nullopt;
}

void PhoneInventory::observe(const std::string& symbol) {
  auto bs = split_stress(symbol, stress);
  bases.insert(bs.base);
  if (!bs.marker.empty()) vowels.insert(bs.base);
}

ParseResult parse_lexicon(const std::string& path, LexFormat format,
                          const ParseOptions& opts) {
  return parse_lexicon_text(read_file(path), format, opts);
}

ParseResult parse_lexicon_text(const std::string& text, LexFormat format,
                               const ParseOptions& opts) {
  ParseResult result;
  std::vector<RawLine> raws;

  std::istringstream in(text);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() ||
        line.find_first_not_of(" \t") == std::string::npos)
      continue;
    if (format == LexFormat::kCmu) {
      if (line.rfind(";;;", 0) == 0) continue;
      auto toks = split_ws(line);
      if (toks.size() < 2) {
        result.rejects.push_back({line_no, "no phones", line});
        continue;
      }
      auto [word, variant] = strip_variant(toks.front());
      RawLine raw{line_no, lower(word), "", {}, variant};
      raw.phones.assign(toks.begin() + 1, toks.end());
      raws.push_back(std::move(raw));
    } else {
      if (!line.empty() && line.front() == '#') continue;
      auto fields = split_tabs(line);
      if (fields.size() != 3) {
        result.rejects.push_back(
            {line_no, "expected word<TAB>pos<TAB>phones", line});
        continue;
      }
      RawLine raw{line_no, lower(fields[0]), fields[1], split_ws(fields[2]), 0};
      raws.push_back(std::move(raw));
    }
  }

  // Stress convention: fixed per format, sniffed for generic TSV.
  PhoneInventory inv;
  if (opts.inventory) {
    inv = *opts.inventory;
  } else if (format == LexFormat::kCmu) {
    inv = PhoneInventory::arpabet();
  } else {
    inv.stress = StressConvention::kAsterisk;
    if (format == LexFormat::kGenericTsv) {
      bool saw_star = false, saw_digit = false;
      for (const auto& raw : raws)
        for (const auto& ph : raw.phones) {
          if (ph.size() < 2) continue;
          if (ph.back() == '*') saw_star = true;
          if (ph.back() >= '0' && ph.back() <= '2') saw_digit = true;
        }
      if (saw_digit && !saw_star) inv.stress = StressConvention::kCmuDigits;
    }
  }

  for (auto& raw : raws) {
    if (raw.variant > 0 && opts.drop_variants) continue;
    if (!valid_word(raw.word)) {
      result.rejects.push_back({raw.line_no, "invalid grapheme", raw.word});
      continue;
    }
    if (raw.phones.empty()) {
      result.rejects.push_back({raw.line_no, "no phones", raw.word});
      continue;
    }
    std::optional<std::string> bad;
    for (const auto& ph : raw.phones) {
      if (auto reason = inv.validate(ph)) {
        bad = *reason + ": " + ph;
        break;
      }
    }
    if (bad) {
      result.rejects.push_back({raw.line_no, *bad, raw.word});
      continue;
    }
    for (const auto& ph : raw.phones) inv.observe(ph);
    result.entries.push_back(
        {std::move(raw.word), std::move(raw.pos), std::move(raw.phones)});
  }

  check_data(!result.entries.empty(), "empty lexicon: no entry parsed");
  result.inventory = std::move(inv);
  return result;
}

void write_generic_tsv(const std::vector<LexiconEntry>& entries,
                       std::ostream& out) {
  for (const auto& e : entries) {
    out << e.word << '\t' << e.pos << '\t';
    for (std::size_t i = 0; i < e.phones.size(); ++i) {
      if (i) out << ' ';
      out << e.phones[i];
    }
    out << '\n';
  }
}

void write_rejects_tsv(const std::vector<RejectLine>& rejects,
                       std::ostream& out) {
  for (const auto& r : rejects)
    out << r.line_no << '\t' << r.reason << '\t' << r.raw << '\n';
}

PseudoSet PseudoSet::defaults() {
  PseudoSet set;
  set.defs = {{"K_S", {"K", "S"}}, {"G_Z", {"G", "Z"}}, {"W_A", {"W", "A"}}};
  return set;
}

PseudoSet PseudoSet::load(const std::string& path) {
  return parse(read_file(path));
}

PseudoSet PseudoSet::parse(const std::string& text) {
  PseudoSet set;
  std::istringstream in(text);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    auto toks = split_ws(line);
    if (toks.empty()) continue;
    check_data(toks.size() == 4 && toks[1] == "=",
               "pseudo-phone config line " + std::to_string(line_no) +
                   ": expected NAME = PART1 PART2");
    const std::string &name = toks[0], &p1 = toks[2], &p2 = toks[3];
    check_data(p1.find('_') == std::string::npos &&
                   p2.find('_') == std::string::npos,
               "pseudo-phone parts must be plain phones: " + name);
    check_data(name == p1 + "_" + p2,
               "pseudo-phone name must be PART1_PART2: " + name);
    set.defs.push_back({name, {p1, p2}});
  }
  return set;
}

const PseudoPhone* PseudoSet::match(const std::string& base1,
                                    const std::string& base2) const {
  for (const auto& def : defs)
    if (def.parts[0] == base1 && def.parts[1] == base2) return &def;
  return nullptr;
}

MergeResult merge_pseudo_phones(const LexiconEntry& entry,
                                const PseudoSet& merges,
                                StressConvention conv) {
  MergeResult res{entry, true};
  auto& phones = res.entry.phones;
  while (phones.size() > res.entry.word.size()) {
    bool merged = false;
    for (std::size_t i = 0; i + 1 < phones.size(); ++i) {
      if (is_pseudo(phones[i]) || is_pseudo(phones[i + 1])) continue;
      auto b1 = split_stress(phones[i], conv).base;
      auto b2 = split_stress(phones[i + 1], conv).base;
      if (merges.match(b1, b2)) {
        phones[i] = phones[i] + "_" + phones[i + 1];
        phones.erase(phones.begin() + static_cast<std::ptrdiff_t>(i) + 1);
        merged = true;
        break;
      }
    }
    if (!merged) break;
  }
  res.alignable = phones.size() <= res.entry.word.size();
  return res;
}

SplitSpec split_every_nth(std::size_t entry_count, std::size_t n,
                          std::size_t offset) {
  check_data(n >= 2, "split: n must be >= 2");
  check_data(offset < n, "split: offset must be < n");
  SplitSpec spec;
  spec.n = n;
  spec.offset = offset;
  for (std::size_t i = 0; i < entry_count; ++i)
    (i % n == offset ? spec.test : spec.train).push_back(i);
  return spec;
}

std::vector<std::string> postprocess_output(
    const std::vector<std::string>& symbols) {
  std::vector<std::string> phones;
  for (const auto& sym : symbols) {
    if (sym == "-") continue;
    for (auto& part : pseudo_parts(sym)) phones.push_back(std::move(part));
  }
  return phones;
}

}  // namespace lts
