#include <algorithm>
#include <cmath>
#include <iomanip>
#include <istream>
#include <ostream>
#include <sstream>

#include "lattice.hpp"
#include "ltskit/alignment.hpp"
#include "ltskit/error.hpp"
#include "ltskit/parallel.hpp"

namespace lts {

double AssociationTable::prob(char g, const std::string& sym) const {
  auto row = rows_.find(g);
  if (row == rows_.end()) return kFloor;
  auto cell = row->second.find(sym);
  if (cell == row->second.end()) return kFloor;
  return std::max(cell->second, kFloor);
}

double AssociationTable::log_prob(char g, const std::string& sym) const {
  return std::log(prob(g, sym));
}

void AssociationTable::set(char g, const std::string& sym, double p) {
  rows_[g][sym] = p;
}

AssociationTable AssociationTable::from_counts(
    const std::map<char, std::map<std::string, double>>& counts) {
  AssociationTable table;
  for (const auto& [g, row] : counts) {
    double sum = 0.0;
    for (const auto& [sym, c] : row) sum += c;
    if (sum <= 0.0) continue;
    for (const auto& [sym, c] : row)
      if (c > 0.0) table.rows_[g][sym] = c / sum;
  }
  return table;
}

double AssociationTable::max_abs_delta(const AssociationTable& other) const {
  double worst = 0.0;
  auto scan = [&worst](const AssociationTable& a, const AssociationTable& b) {
    for (const auto& [g, row] : a.rows_)
      for (const auto& [sym, p] : row)
        worst = std::max(worst, std::abs(std::max(p, kFloor) - b.prob(g, sym)));
  };
  scan(*this, other);
  scan(other, *this);
  return worst;
}

void AssociationTable::dump_tsv(std::ostream& out) const {
  out << std::setprecision(17);
  for (const auto& [g, row] : rows_)
    for (const auto& [sym, p] : row)
      out << g << '\t' << sym << '\t' << p << '\n';
}

AssociationTable AssociationTable::load_tsv(std::istream& in) {
  AssociationTable table;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::istringstream fields(line);
    std::string g, sym, prob;
    check_data(static_cast<bool>(std::getline(fields, g, '\t') &&
                                 std::getline(fields, sym, '\t') &&
                                 std::getline(fields, prob)),
               "association table line " + std::to_string(line_no) +
                   ": expected G<TAB>P<TAB>prob");
    check_data(g.size() == 1, "association table line " +
                                  std::to_string(line_no) +
                                  ": grapheme must be one character");
    try {
      table.set(g[0], sym, std::stod(prob));
    } catch (const std::exception&) {
      throw DataError("association table line " + std::to_string(line_no) +
                      ": bad probability: " + prob);
    }
  }
  return table;
}

namespace {

void check_alignable(const LexiconEntry& e) {
  check_data(e.phones.size() <= e.word.size(),
             "entry not alignable (more phones than letters): " + e.word);
}

}  // namespace

AssociationTable init_counts(std::span<const LexiconEntry> entries) {
  check_data(!entries.empty(), "no entries to align");
  std::map<char, std::map<std::string, double>> counts;
  for (const auto& e : entries) {
    check_alignable(e);
    std::size_t n = e.word.size(), m = e.phones.size();
    auto any_pair = [](std::size_t, std::size_t) { return true; };
    auto any_eps = [](std::size_t) { return true; };
    detail::Grid f = detail::forward_counts(n, m, any_pair, any_eps);
    detail::Grid b = detail::backward_counts(n, m, any_pair, any_eps);
    for (std::size_t i = 0; i < n; ++i) {
      auto& row = counts[e.word[i]];
      for (std::size_t j = 0; j <= m; ++j) {
        if (f.at(i, j) == 0.0) continue;
        if (j < m) {
          double c = f.at(i, j) * b.at(i + 1, j + 1);
          if (c > 0.0) row[e.phones[j]] += c;
        }
        double c = f.at(i, j) * b.at(i + 1, j);
        if (c > 0.0) row[kEpsilon] += c;
      }
    }
  }
  return AssociationTable::from_counts(counts);
}

Alignment viterbi_align(const LexiconEntry& entry,
                        const AssociationTable& table) {
  check_alignable(entry);
  std::size_t n = entry.word.size(), m = entry.phones.size();
  std::vector<char> eps_at;
  Alignment aligned;
  bool ok = detail::lattice_viterbi(
      n, m,
      [&](std::size_t i, std::size_t j) {
        return table.log_prob(entry.word[i], entry.phones[j]);
      },
      [&](std::size_t i) { return table.log_prob(entry.word[i], kEpsilon); },
      &eps_at, &aligned.score);
  check_internal(ok, "alignment lattice unreachable for: " + entry.word);
  aligned.out.reserve(n);
  std::size_t j = 0;
  for (std::size_t i = 0; i < n; ++i)
    aligned.out.push_back(eps_at[i] ? kEpsilon : entry.phones[j++]);
  return aligned;
}

EmResult em_train(std::span<const LexiconEntry> entries, int max_iters,
                  double tol, int threads) {
  check_data(max_iters >= 1, "em: max_iters must be >= 1");
  EmResult res;
  res.table = init_counts(entries);
  res.alignments.resize(entries.size());
  std::vector<std::vector<std::string>> prev_outs(entries.size());
  for (int iter = 0; iter < max_iters; ++iter) {
    parallel_for(entries.size(), threads, [&](std::size_t idx) {
      res.alignments[idx] = viterbi_align(entries[idx], res.table);
    });
    double objective = 0.0;
    for (const auto& a : res.alignments) objective += a.score;
    res.objective.push_back(objective);
    res.iterations = iter + 1;

    std::map<char, std::map<std::string, double>> counts;
    bool changed = iter == 0;
    for (std::size_t idx = 0; idx < entries.size(); ++idx) {
      const auto& out = res.alignments[idx].out;
      const auto& word = entries[idx].word;
      for (std::size_t i = 0; i < word.size(); ++i)
        counts[word[i]][out[i]] += 1.0;
      if (!changed && out != prev_outs[idx]) changed = true;
    }
    AssociationTable next = AssociationTable::from_counts(counts);
    double delta = next.max_abs_delta(res.table);
    res.table = std::move(next);
    if (!changed || delta < tol) {
      res.converged = true;
      break;
    }
    for (std::size_t idx = 0; idx < entries.size(); ++idx)
      prev_outs[idx] = res.alignments[idx].out;
  }
  return res;
}

void write_alignments_tsv(std::span<const LexiconEntry> entries,
                          std::span<const Alignment> alignments,
                          std::ostream& out) {
  check_internal(entries.size() == alignments.size(),
                 "alignment dump: size mismatch");
  for (std::size_t idx = 0; idx < entries.size(); ++idx) {
    out << entries[idx].word << '\t' << entries[idx].pos << '\t';
    const auto& syms = alignments[idx].out;
    for (std::size_t i = 0; i < syms.size(); ++i) {
      if (i) out << ' ';
      out << syms[i];
    }
    out << '\n';
  }
}

AlignedCorpus read_alignments_tsv(std::istream& in) {
  AlignedCorpus corpus;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    auto err = [line_no](const std::string& what) {
      return DataError("alignments line " + std::to_string(line_no) + ": " +
                       what);
    };
    std::size_t t1 = line.find('\t');
    if (t1 == std::string::npos) throw err("expected word<TAB>pos<TAB>symbols");
    std::size_t t2 = line.find('\t', t1 + 1);
    if (t2 == std::string::npos) throw err("expected word<TAB>pos<TAB>symbols");
    LexiconEntry entry;
    entry.word = line.substr(0, t1);
    entry.pos = line.substr(t1 + 1, t2 - t1 - 1);
    if (entry.word.empty()) throw err("empty word");
    Alignment aligned;
    std::istringstream syms(line.substr(t2 + 1));
    std::string sym;
    while (syms >> sym) aligned.out.push_back(sym);
    if (aligned.out.size() != entry.word.size())
      throw err("symbol count does not match word length: " + entry.word);
    entry.phones = postprocess_output(aligned.out);
    if (entry.phones.empty()) throw err("alignment is all epsilon: " + entry.word);
    corpus.entries.push_back(std::move(entry));
    corpus.alignments.push_back(std::move(aligned));
  }
  check_data(!corpus.entries.empty(), "empty alignments file");
  return corpus;
}

}  // namespace lts
