#include <fstream>
#include <ostream>
#include <sstream>

#include "lattice.hpp"
#include "ltskit/alignment.hpp"
#include "ltskit/error.hpp"
#include "ltskit/symbols.hpp"

namespace lts {
namespace {

// Base name used for allowables lookup: stress stripped from every part.
std::string base_name(const std::string& sym, StressConvention conv) {
  return strip_stress_sym(sym, conv);
}

}  // namespace

void AllowablesTable::allow(char g, const std::string& base_sym) {
  rows_[g].insert(base_sym);
}

bool AllowablesTable::allows(char g, const std::string& sym,
                             StressConvention conv) const {
  auto row = rows_.find(g);
  if (row == rows_.end()) return false;
  if (sym == kEpsilon) return row->second.count(kEpsilon) > 0;
  return row->second.count(base_name(sym, conv)) > 0;
}

bool AllowablesTable::allows_epsilon(char g) const {
  auto row = rows_.find(g);
  return row != rows_.end() && row->second.count(kEpsilon) > 0;
}

bool AllowablesTable::has(char g) const { return rows_.count(g) > 0; }

AllowablesTable AllowablesTable::load(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  check_data(static_cast<bool>(in), "cannot read file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse(buf.str());
}

AllowablesTable AllowablesTable::parse(const std::string& text) {
  AllowablesTable table;
  std::istringstream in(text);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    std::istringstream toks(line);
    std::string head;
    if (!(toks >> head)) continue;
    check_data(head.size() == 2 && head[1] == ':',
               "allowables line " + std::to_string(line_no) +
                   ": expected `g: SYM SYM _ ...`");
    char g = head[0];
    std::string sym;
    std::size_t added = 0;
    while (toks >> sym) {
      table.allow(g, sym == "_" ? kEpsilon : sym);
      ++added;
    }
    check_data(added > 0, "allowables line " + std::to_string(line_no) +
                              ": no symbols for letter " + std::string(1, g));
  }
  check_data(!table.rows_.empty(), "empty allowables table");
  return table;
}

std::vector<std::vector<std::string>> enumerate_alignments(
    const LexiconEntry& entry, const AllowablesTable& allow,
    StressConvention conv, std::uint64_t cap) {
  const std::size_t n = entry.word.size(), m = entry.phones.size();
  std::vector<std::vector<std::string>> results;
  if (m > n) return results;
  std::vector<std::string> current(n);
  std::uint64_t count = 0;
  // DFS in fixed order (phone edge before epsilon edge) so the output
  // ordering is reproducible.
  auto walk = [&](auto&& self, std::size_t i, std::size_t j) -> void {
    if (i == n) {
      if (j == m) {
        check_data(++count <= cap,
                   "allowables too permissive: more than " +
                       std::to_string(cap) + " alignments for " + entry.word);
        results.push_back(current);
      }
      return;
    }
    if (m - j > n - i) return;  // not enough letters left
    char g = entry.word[i];
    if (j < m && allow.allows(g, entry.phones[j], conv)) {
      current[i] = entry.phones[j];
      self(self, i + 1, j + 1);
    }
    if (allow.allows_epsilon(g)) {
      current[i] = kEpsilon;
      self(self, i + 1, j);
    }
  };
  walk(walk, 0, 0);
  return results;
}

AssociationTable estimate_pair_probs(std::span<const LexiconEntry> entries,
                                     const AllowablesTable& allow,
                                     StressConvention conv) {
  check_data(!entries.empty(), "no entries to align");
  std::map<char, std::map<std::string, double>> counts;
  std::size_t alignable = 0;
  for (const auto& e : entries) {
    const std::size_t n = e.word.size(), m = e.phones.size();
    if (m > n) continue;
    auto pair_ok = [&](std::size_t i, std::size_t j) {
      return allow.allows(e.word[i], e.phones[j], conv);
    };
    auto eps_ok = [&](std::size_t i) { return allow.allows_epsilon(e.word[i]); };
    detail::Grid f = detail::forward_counts(n, m, pair_ok, eps_ok);
    detail::Grid b = detail::backward_counts(n, m, pair_ok, eps_ok);
    if (f.at(n, m) == 0.0) continue;
    ++alignable;
    for (std::size_t i = 0; i < n; ++i) {
      auto& row = counts[e.word[i]];
      for (std::size_t j = 0; j <= m; ++j) {
        if (f.at(i, j) == 0.0) continue;
        if (j < m && pair_ok(i, j)) {
          double c = f.at(i, j) * b.at(i + 1, j + 1);
          if (c > 0.0) row[e.phones[j]] += c;
        }
        if (eps_ok(i)) {
          double c = f.at(i, j) * b.at(i + 1, j);
          if (c > 0.0) row[kEpsilon] += c;
        }
      }
    }
  }
  check_data(alignable > 0, "no entry is alignable under the allowables");
  return AssociationTable::from_counts(counts);
}

std::optional<Alignment> best_seeded_alignment(const LexiconEntry& entry,
                                               const AllowablesTable& allow,
                                               const AssociationTable& probs,
                                               StressConvention conv) {
  const std::size_t n = entry.word.size(), m = entry.phones.size();
  if (m > n) return std::nullopt;
  std::vector<char> eps_at;
  Alignment aligned;
  bool ok = detail::lattice_viterbi(
      n, m,
      [&](std::size_t i, std::size_t j) {
        if (!allow.allows(entry.word[i], entry.phones[j], conv))
          return detail::kNegInf;
        return probs.log_prob(entry.word[i], entry.phones[j]);
      },
      [&](std::size_t i) {
        if (!allow.allows_epsilon(entry.word[i])) return detail::kNegInf;
        return probs.log_prob(entry.word[i], kEpsilon);
      },
      &eps_at, &aligned.score);
  if (!ok) return std::nullopt;
  aligned.out.reserve(n);
  std::size_t j = 0;
  for (std::size_t i = 0; i < n; ++i)
    aligned.out.push_back(eps_at[i] ? kEpsilon : entry.phones[j++]);
  return aligned;
}

UnalignableReport report_unalignable(std::span<const LexiconEntry> entries,
                                     const AllowablesTable& allow,
                                     StressConvention conv) {
  UnalignableReport report;
  for (std::size_t idx = 0; idx < entries.size(); ++idx) {
    const auto& e = entries[idx];
    const std::size_t n = e.word.size(), m = e.phones.size();
    auto pair_ok = [&](std::size_t i, std::size_t j) {
      return allow.allows(e.word[i], e.phones[j], conv);
    };
    auto eps_ok = [&](std::size_t i) { return allow.allows_epsilon(e.word[i]); };
    detail::Grid f = detail::forward_counts(n, m, pair_ok, eps_ok);
    if (m <= n && f.at(n, m) != 0.0) continue;
    // First letter no partial alignment gets past (== word length when the
    // letters run out before the phones do).
    std::size_t stuck = 0;
    for (std::size_t i = 0; i <= n; ++i)
      for (std::size_t j = 0; j <= m; ++j)
        if (f.at(i, j) != 0.0) stuck = std::max(stuck, i);
    report.items.push_back({idx, stuck});
  }
  report.total = report.items.size();
  if (!entries.empty())
    report.per_thousand =
        1000.0 * static_cast<double>(report.total) /
        static_cast<double>(entries.size());
  return report;
}

void write_unalignable_tsv(const UnalignableReport& report,
                           std::span<const LexiconEntry> entries,
                           std::ostream& out) {
  for (const auto& item : report.items) {
    check_internal(item.index < entries.size(), "unalignable index range");
    const auto& e = entries[item.index];
    out << e.word << '\t' << e.pos << '\t' << item.stuck_at << '\n';
  }
}

}  // namespace lts
