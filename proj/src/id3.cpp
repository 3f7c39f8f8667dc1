#include "ltskit/id3.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "ltskit/error.hpp"
#include "ltskit/parallel.hpp"

namespace lts {
namespace {

double entropy_bits(const std::map<Sym, std::size_t>& counts,
                    std::size_t total) {
  double h = 0.0;
  for (const auto& [sym, c] : counts) {
    if (c == 0) continue;
    double p = static_cast<double>(c) / static_cast<double>(total);
    h -= p * std::log2(p);
  }
  return h;
}

double gain_indexed(std::span<const FeatureVector> all,
                    const std::vector<std::uint32_t>& idx, int attr) {
  std::map<Sym, std::size_t> base;
  std::map<Sym, std::map<Sym, std::size_t>> by_value;
  std::map<Sym, std::size_t> value_totals;
  for (std::uint32_t i : idx) {
    const FeatureVector& v = all[i];
    ++base[v.target];
    ++by_value[v.attrs[static_cast<std::size_t>(attr)]][v.target];
    ++value_totals[v.attrs[static_cast<std::size_t>(attr)]];
  }
  double cond = 0.0;
  for (const auto& [val, counts] : by_value) {
    std::size_t sub = value_totals[val];
    cond += static_cast<double>(sub) / static_cast<double>(idx.size()) *
            entropy_bits(counts, sub);
  }
  return entropy_bits(base, idx.size()) - cond;
}

bool partitions(std::span<const FeatureVector> all,
                const std::vector<std::uint32_t>& idx, int attr) {
  Sym first = all[idx.front()].attrs[static_cast<std::size_t>(attr)];
  for (std::uint32_t i : idx)
    if (all[i].attrs[static_cast<std::size_t>(attr)] != first) return true;
  return false;
}

std::unique_ptr<TreeNode> build(std::span<const FeatureVector> all,
                                std::vector<std::uint32_t> idx,
                                std::vector<char> used, int depth,
                                const TrainConfig& tc,
                                const std::vector<int32_t>& ranks) {
  std::map<Sym, std::size_t> counts;
  for (std::uint32_t i : idx) ++counts[all[i].target];
  Sym modal = -1;
  std::size_t modal_count = 0;
  for (const auto& [sym, c] : counts)
    if (c > modal_count ||
        (c == modal_count && ranks[static_cast<std::size_t>(sym)] <
                                 ranks[static_cast<std::size_t>(modal)])) {
      modal = sym;
      modal_count = c;
    }

  auto node = std::make_unique<TreeNode>();
  node->value = modal;
  if (counts.size() == 1) return node;
  if (tc.max_depth && depth >= *tc.max_depth) return node;

  const int n_attrs = static_cast<int>(all[idx.front()].attrs.size());
  int best_attr = -1;
  double best_gain = -1.0;
  for (int a = 0; a < n_attrs; ++a) {
    if (used[static_cast<std::size_t>(a)]) continue;
    double g = gain_indexed(all, idx, a);
    if (g > best_gain) {
      best_gain = g;
      best_attr = a;
    }
  }
  if (best_attr < 0) return node;  // every attribute used up

  if (tc.min_gain > 0.0) {
    if (best_gain <= tc.min_gain) return node;
  } else if (best_gain <= 0.0) {
    // Impure node, all gains zero: split on the first attribute that still
    // partitions the subset so consistent data reaches purity anyway.
    best_attr = -1;
    for (int a = 0; a < n_attrs && best_attr < 0; ++a)
      if (!used[static_cast<std::size_t>(a)] && partitions(all, idx, a))
        best_attr = a;
    if (best_attr < 0) return node;  // conflicting vectors
  }

  std::map<Sym, std::vector<std::uint32_t>> groups;
  for (std::uint32_t i : idx)
    groups[all[i].attrs[static_cast<std::size_t>(best_attr)]].push_back(i);
  idx.clear();
  idx.shrink_to_fit();

  std::vector<Sym> values;
  values.reserve(groups.size());
  for (const auto& [val, group] : groups) values.push_back(val);
  std::sort(values.begin(), values.end(), [&ranks](Sym a, Sym b) {
    return ranks[static_cast<std::size_t>(a)] <
           ranks[static_cast<std::size_t>(b)];
  });

  node->leaf = false;
  node->value = -1;
  node->attr = best_attr;
  node->default_value = modal;
  used[static_cast<std::size_t>(best_attr)] = 1;
  for (Sym val : values)
    node->children.emplace_back(
        val, build(all, std::move(groups[val]), used, depth + 1, tc, ranks));
  return node;
}

}  // namespace

double info_gain(std::span<const FeatureVector> vectors, int attr) {
  check_data(!vectors.empty(), "information gain over an empty vector set");
  check_data(attr >= 0 &&
                 attr < static_cast<int>(vectors.front().attrs.size()),
             "attribute index out of range");
  std::vector<std::uint32_t> idx(vectors.size());
  for (std::size_t i = 0; i < idx.size(); ++i)
    idx[i] = static_cast<std::uint32_t>(i);
  return gain_indexed(vectors, idx, attr);
}

std::unique_ptr<TreeNode> train_tree(std::span<const FeatureVector> vectors,
                                     const TrainConfig& tc,
                                     const SymbolTable& symbols) {
  check_data(!vectors.empty(), "no training vectors");
  const std::size_t n_attrs = vectors.front().attrs.size();
  for (const auto& v : vectors) {
    check_data(v.attrs.size() == n_attrs, "ragged attribute vectors");
    check_data(v.target >= 0 && v.target < symbols.size(),
               "vector without a target symbol");
  }
  std::vector<std::uint32_t> idx(vectors.size());
  for (std::size_t i = 0; i < idx.size(); ++i)
    idx[i] = static_cast<std::uint32_t>(i);
  return build(vectors, std::move(idx), std::vector<char>(n_attrs, 0), 0, tc,
               symbols.string_ranks());
}

Sym predict(const TreeNode& node, std::span<const Sym> attrs) {
  const TreeNode* cur = &node;
  while (!cur->leaf) {
    check_internal(cur->attr >= 0 &&
                       cur->attr < static_cast<int>(attrs.size()),
                   "tree tests an attribute the vector does not have");
    Sym val = attrs[static_cast<std::size_t>(cur->attr)];
    const TreeNode* next = nullptr;
    for (const auto& [v, child] : cur->children)
      if (v == val) {
        next = child.get();
        break;
      }
    if (!next) return cur->default_value;
    cur = next;
  }
  return cur->value;
}

std::uint64_t tree_size(const TreeNode& node) {
  if (node.leaf) return 1;
  std::uint64_t total = 1;
  for (const auto& [val, child] : node.children) total += 1 + tree_size(*child);
  return total;
}

std::uint64_t Model::phone_size() const {
  std::uint64_t total = 0;
  for (const auto& [g, tree] : trees) total += tree_size(*tree);
  return total;
}

std::uint64_t Model::stress_size() const {
  std::uint64_t total = 0;
  for (const auto& [g, tree] : stress_trees) total += tree_size(*tree);
  return total;
}

std::uint64_t Model::size() const { return phone_size() + stress_size(); }

Model train_model(std::span<const LexiconEntry> entries,
                  std::span<const Alignment> alignments,
                  const FeatureConfig& cfg, const TrainConfig& tc,
                  StressConvention conv, int threads) {
  check_data(entries.size() == alignments.size(),
             "entries / alignments size mismatch");
  check_data(!entries.empty(), "no training data");

  Model model;
  model.cfg = cfg;
  model.stress_conv = conv;
  FeatureExtractor ext(cfg, conv, &model.symbols);

  std::map<char, std::vector<FeatureVector>> phone_buckets;
  std::map<char, std::vector<FeatureVector>> stress_buckets;
  std::set<char> letters;
  for (std::size_t e = 0; e < entries.size(); ++e) {
    const LexiconEntry& entry = entries[e];
    const auto& out = alignments[e].out;
    auto order = ext.visit_order(entry.word.size());
    auto vectors = ext.training_vectors(entry, out);
    for (std::size_t k = 0; k < order.size(); ++k)
      phone_buckets[entry.word[order[k]]].push_back(std::move(vectors[k]));
    if (cfg.stress == StressMode::kSeparate) {
      auto stress_vectors = ext.stress_training_vectors(entry, out);
      for (std::size_t k = 0; k < order.size(); ++k)
        stress_buckets[entry.word[order[k]]].push_back(
            std::move(stress_vectors[k]));
    }
    for (char c : entry.word) letters.insert(c);
    for (const auto& ph : entry.phones)
      for (const auto& part : pseudo_parts(ph)) {
        auto bs = split_stress(part, conv);
        if (!bs.marker.empty()) model.vowels.insert(bs.base);
      }
  }
  model.alphabet.assign(letters.begin(), letters.end());

  std::vector<char> ordered(model.alphabet.begin(), model.alphabet.end());
  std::vector<std::unique_ptr<TreeNode>> phone_trees(ordered.size());
  parallel_for(ordered.size(), threads, [&](std::size_t i) {
    phone_trees[i] = train_tree(phone_buckets.at(ordered[i]), tc, model.symbols);
  });
  for (std::size_t i = 0; i < ordered.size(); ++i)
    model.trees[ordered[i]] = std::move(phone_trees[i]);

  if (cfg.stress == StressMode::kSeparate) {
    std::vector<std::unique_ptr<TreeNode>> stress_trees(ordered.size());
    parallel_for(ordered.size(), threads, [&](std::size_t i) {
      stress_trees[i] =
          train_tree(stress_buckets.at(ordered[i]), tc, model.symbols);
    });
    for (std::size_t i = 0; i < ordered.size(); ++i)
      model.stress_trees[ordered[i]] = std::move(stress_trees[i]);
  }
  return model;
}

// --- serialization --------------------------------------------------------
//
//   ltskit-model 1
//   window N / feedback K / direction ltr|rtl / pos 0|1
//   stress merged|separate|none / convention asterisk|digits
//   alphabet <letters>            (one token, the letters concatenated)
//   vowels SYM...                 (possibly empty)
//   tree g ( attr default ( value node ) ... ) | [ value ]
//   stress_tree g ...             (separate mode only)
//   end
//
// Tokens are whitespace-separated; symbol names are written verbatim, so
// they must be free of whitespace and of the bracket tokens.

namespace {

const std::string& checked_name(const SymbolTable& symbols, Sym id) {
  check_data(id >= 0 && id < symbols.size(), "dangling symbol id in model");
  const std::string& name = symbols.name(id);
  check_data(!name.empty() &&
                 name.find_first_of(" \t()[]") == std::string::npos,
             "symbol not serializable: " + name);
  return name;
}

void write_tree(const TreeNode& node, const SymbolTable& symbols,
                std::ostream& out) {
  if (node.leaf) {
    out << "[ " << checked_name(symbols, node.value) << " ]";
    return;
  }
  out << "( " << node.attr << ' ' << checked_name(symbols, node.default_value);
  for (const auto& [val, child] : node.children) {
    out << " ( " << checked_name(symbols, val) << ' ';
    write_tree(*child, symbols, out);
    out << " )";
  }
  out << " )";
}

class TokenCursor {
 public:
  TokenCursor(const std::string& text, std::size_t line_no)
      : line_no_(line_no) {
    std::istringstream in(text);
    std::string tok;
    while (in >> tok) tokens_.push_back(std::move(tok));
  }

  const std::string& next() {
    check_data(pos_ < tokens_.size(), "model line " + std::to_string(line_no_) +
                                          ": truncated tree");
    return tokens_[pos_++];
  }
  const std::string& peek() {
    check_data(pos_ < tokens_.size(), "model line " + std::to_string(line_no_) +
                                          ": truncated tree");
    return tokens_[pos_];
  }
  bool done() const { return pos_ == tokens_.size(); }
  void expect(const std::string& tok) {
    check_data(next() == tok, "model line " + std::to_string(line_no_) +
                                  ": expected `" + tok + "`");
  }
  std::size_t line_no() const { return line_no_; }

 private:
  std::vector<std::string> tokens_;
  std::size_t pos_ = 0;
  std::size_t line_no_;
};

std::unique_ptr<TreeNode> read_tree(TokenCursor& cur, SymbolTable& symbols,
                                    int attr_count) {
  auto node = std::make_unique<TreeNode>();
  const std::string& open = cur.next();
  if (open == "[") {
    node->value = symbols.intern(cur.next());
    cur.expect("]");
    return node;
  }
  check_data(open == "(", "model line " + std::to_string(cur.line_no()) +
                              ": expected `(` or `[`");
  node->leaf = false;
  try {
    node->attr = std::stoi(cur.next());
  } catch (const std::exception&) {
    throw DataError("model line " + std::to_string(cur.line_no()) +
                    ": bad attribute index");
  }
  check_data(node->attr >= 0 && node->attr < attr_count,
             "model line " + std::to_string(cur.line_no()) +
                 ": attribute index out of range");
  node->default_value = symbols.intern(cur.next());
  while (cur.peek() == "(") {
    cur.expect("(");
    Sym val = symbols.intern(cur.next());
    node->children.emplace_back(val, read_tree(cur, symbols, attr_count));
    cur.expect(")");
  }
  cur.expect(")");
  check_data(!node->children.empty(),
             "model line " + std::to_string(cur.line_no()) +
                 ": internal node without children");
  return node;
}

int parse_int(const std::string& tok, const char* what) {
  try {
    return std::stoi(tok);
  } catch (const std::exception&) {
    throw DataError(std::string("model: bad ") + what + ": " + tok);
  }
}

}  // namespace

void serialize_model(const Model& model, std::ostream& out) {
  out << "ltskit-model 1\n";
  out << "window " << model.cfg.window << '\n';
  out << "feedback " << model.cfg.feedback << '\n';
  out << "direction "
      << (model.cfg.direction == Direction::kLeftToRight ? "ltr" : "rtl")
      << '\n';
  out << "pos " << (model.cfg.use_pos ? 1 : 0) << '\n';
  out << "stress "
      << (model.cfg.stress == StressMode::kMerged
              ? "merged"
              : model.cfg.stress == StressMode::kSeparate ? "separate"
                                                          : "none")
      << '\n';
  out << "convention " << to_string(model.stress_conv) << '\n';
  out << "alphabet " << model.alphabet << '\n';
  out << "vowels";
  for (const auto& v : model.vowels) out << ' ' << v;
  out << '\n';
  for (const auto& [g, tree] : model.trees) {
    out << "tree " << g << ' ';
    write_tree(*tree, model.symbols, out);
    out << '\n';
  }
  for (const auto& [g, tree] : model.stress_trees) {
    out << "stress_tree " << g << ' ';
    write_tree(*tree, model.symbols, out);
    out << '\n';
  }
  out << "end\n";
}

Model deserialize_model(std::istream& in) {
  std::string line;
  check_data(static_cast<bool>(std::getline(in, line)), "empty model file");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  check_data(line == "ltskit-model 1",
             "not a model file (bad magic line): " + line);

  Model model;
  bool saw_end = false;
  std::map<std::string, std::string> scalars;
  std::vector<std::tuple<char, std::string, std::size_t, bool>> tree_lines;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::istringstream fields(line);
    std::string key;
    fields >> key;
    if (key == "end") {
      saw_end = true;
      break;
    }
    if (key == "tree" || key == "stress_tree") {
      std::string g;
      fields >> g;
      check_data(g.size() == 1, "model line " + std::to_string(line_no) +
                                    ": tree letter must be one character");
      std::string rest;
      std::getline(fields, rest);
      tree_lines.emplace_back(g[0], rest, line_no, key == "stress_tree");
      continue;
    }
    std::string value;
    std::getline(fields, value);
    if (!value.empty() && value.front() == ' ') value.erase(0, 1);
    check_data(!scalars.count(key),
               "model line " + std::to_string(line_no) + ": duplicate " + key);
    scalars[key] = value;
  }
  check_data(saw_end, "model file truncated (missing `end`)");

  auto require = [&scalars](const char* key) -> const std::string& {
    auto it = scalars.find(key);
    check_data(it != scalars.end(),
               std::string("model: missing `") + key + "` line");
    return it->second;
  };
  model.cfg.window = parse_int(require("window"), "window");
  model.cfg.feedback = parse_int(require("feedback"), "feedback");
  const std::string& dir = require("direction");
  check_data(dir == "ltr" || dir == "rtl", "model: bad direction: " + dir);
  model.cfg.direction =
      dir == "ltr" ? Direction::kLeftToRight : Direction::kRightToLeft;
  const std::string& pos = require("pos");
  check_data(pos == "0" || pos == "1", "model: bad pos flag: " + pos);
  model.cfg.use_pos = pos == "1";
  const std::string& stress = require("stress");
  if (stress == "merged")
    model.cfg.stress = StressMode::kMerged;
  else if (stress == "separate")
    model.cfg.stress = StressMode::kSeparate;
  else if (stress == "none")
    model.cfg.stress = StressMode::kNone;
  else
    throw DataError("model: bad stress mode: " + stress);
  auto conv = stress_convention_from(require("convention"));
  check_data(conv.has_value(), "model: bad stress convention");
  model.stress_conv = *conv;
  model.cfg.validate();

  model.alphabet = require("alphabet");
  check_data(!model.alphabet.empty(), "model: empty alphabet");
  check_data(std::is_sorted(model.alphabet.begin(), model.alphabet.end()),
             "model: alphabet must be sorted");
  {
    std::istringstream vs(require("vowels"));
    std::string v;
    while (vs >> v) model.vowels.insert(v);
  }

  for (const auto& [g, text, tline, is_stress] : tree_lines) {
    check_data(model.alphabet.find(g) != std::string::npos,
               "model line " + std::to_string(tline) +
                   ": tree letter not in alphabet");
    TokenCursor cur(text, tline);
    auto tree = read_tree(cur, model.symbols, model.cfg.attr_count());
    check_data(cur.done(), "model line " + std::to_string(tline) +
                               ": trailing tokens after tree");
    auto& forest = is_stress ? model.stress_trees : model.trees;
    check_data(!forest.count(g), "model line " + std::to_string(tline) +
                                     ": duplicate tree for letter");
    forest[g] = std::move(tree);
  }
  check_data(!model.trees.empty(), "model: no trees");
  check_data(
      model.stress_trees.empty() || model.cfg.stress == StressMode::kSeparate,
      "model: stress trees outside separate mode");
  return model;
}

void save_model(const Model& model, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  check_data(static_cast<bool>(out), "cannot write file: " + path);
  serialize_model(model, out);
  check_data(static_cast<bool>(out.flush()), "write failed: " + path);
}

Model load_model(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  check_data(static_cast<bool>(in), "cannot read file: " + path);
  return deserialize_model(in);
}

}  // namespace lts
