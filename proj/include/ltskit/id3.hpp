#ifndef LTSKIT_ID3_HPP_
#define LTSKIT_ID3_HPP_

#include <cstdint>
#include <iosfwd>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "ltskit/features.hpp"

namespace lts {

// Multiway ID3 node. Leaves carry an output symbol; internal nodes test one
// attribute, hold one child per attribute value seen in their training
// subset, and store the subset's modal target as the default returned for
// unseen values.
struct TreeNode {
  bool leaf = true;
  Sym value = -1;        // leaf output
  int attr = -1;         // internal: attribute index tested
  Sym default_value = -1;
  // Sorted by the child symbol's string form (deterministic serialization).
  std::vector<std::pair<Sym, std::unique_ptr<TreeNode>>> children;
};

struct TrainConfig {
  double min_gain = 0.0;            // grow while gain exceeds this
  std::optional<int> max_depth;     // compression knob; nullopt = unbounded
};

// Entropy reduction of the target distribution when splitting on `attr`,
// in bits. Information gain is recomputed on each recursively split subset.
double info_gain(std::span<const FeatureVector> vectors, int attr);

// Top-down induction over categorical vectors. Splits on the max-gain
// attribute (ties to the lowest index); stops on a pure subset, exhausted
// attributes, gain <= min_gain (for min_gain > 0), or the depth cap. With
// min_gain == 0 an impure node still splits on a zero-gain attribute when
// one partitions the subset, so consistent data is always driven to purity.
std::unique_ptr<TreeNode> train_tree(std::span<const FeatureVector> vectors,
                                     const TrainConfig& tc,
                                     const SymbolTable& symbols);

// Walk children by attribute value; unseen values fall back to the nearest
// default. Total over the whole attribute domain.
Sym predict(const TreeNode& node, std::span<const Sym> attrs);

// size(leaf) = 1; size(internal) = 1 + sum over children (1 + size(child)).
std::uint64_t tree_size(const TreeNode& node);

// --- trained model --------------------------------------------------------

// A per-focus-letter forest plus everything needed to transcribe: feature
// configuration, symbol interning, alphabet and inventory snapshots.
struct Model {
  FeatureConfig cfg;
  StressConvention stress_conv = StressConvention::kAsterisk;
  SymbolTable symbols;
  std::string alphabet;                    // sorted, unique letters
  std::set<std::string> vowels;            // bases that may carry stress
  std::map<char, std::unique_ptr<TreeNode>> trees;
  std::map<char, std::unique_ptr<TreeNode>> stress_trees;  // kSeparate only

  std::uint64_t size() const;         // total over both forests
  std::uint64_t phone_size() const;
  std::uint64_t stress_size() const;
};

// Train one tree per focus letter over the aligned corpus (plus the stress
// forest when cfg.stress == kSeparate). `threads` = 0 picks the hardware
// default; results are independent of the thread count.
Model train_model(std::span<const LexiconEntry> entries,
                  std::span<const Alignment> alignments,
                  const FeatureConfig& cfg, const TrainConfig& tc,
                  StressConvention conv, int threads = 0);

// Versioned, deterministic UTF-8 text; lossless round trip.
void serialize_model(const Model& model, std::ostream& out);
Model deserialize_model(std::istream& in);
void save_model(const Model& model, const std::string& path);
Model load_model(const std::string& path);

}  // namespace lts

#endif  // LTSKIT_ID3_HPP_
