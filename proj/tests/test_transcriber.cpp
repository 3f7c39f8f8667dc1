#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "ltskit/error.hpp"
#include "ltskit/transcriber.hpp"
#include "testutil.hpp"

using namespace lts;

namespace {

std::unique_ptr<TreeNode> leaf(Sym value) {
  auto n = std::make_unique<TreeNode>();
  n->value = value;
  return n;
}

// A model whose only tree keys on the feedback attribute: the word "aaa"
// transcribes as X, Y, Z only if every position really sees the symbol
// produced just before it.
Model rig_feedback_model(Direction dir) {
  Model m;
  m.cfg.window = 0;
  m.cfg.feedback = 1;
  m.cfg.direction = dir;
  m.alphabet = "a";
  m.symbols.intern("a");
  Sym X = m.symbols.intern("X");
  Sym Y = m.symbols.intern("Y");
  Sym Z = m.symbols.intern("Z");

  auto root = std::make_unique<TreeNode>();
  root->leaf = false;
  root->attr = 1;  // [focus, feedback] -> the feedback slot
  root->default_value = X;
  root->children.emplace_back(SymbolTable::kPad, leaf(X));
  root->children.emplace_back(X, leaf(Y));
  root->children.emplace_back(Y, leaf(Z));
  m.trees['a'] = std::move(root);
  return m;
}

}  // namespace

TEST_CASE("transcription feeds live predictions back in visit order") {
  SUBCASE("left to right") {
    auto m = rig_feedback_model(Direction::kLeftToRight);
    auto t = transcribe(m, "aaa");
    CHECK(t.raw == std::vector<std::string>{"X", "Y", "Z"});
    CHECK(t.phones == t.raw);
  }
  SUBCASE("right to left") {
    auto m = rig_feedback_model(Direction::kRightToLeft);
    auto t = transcribe(m, "aaa");
    // Chain starts at the right edge now.
    CHECK(t.raw == std::vector<std::string>{"Z", "Y", "X"});
  }
}

TEST_CASE("training-set replay reproduces the aligned outputs") {
  std::vector<LexiconEntry> entries{
      {"example", "", {"IH", "G", "Z", "AE*", "M", "P", "L"}}};
  std::vector<Alignment> alignments(1);
  alignments[0].out = {"IH", "G_Z", "AE*", "M", "P", "L", "-"};

  FeatureConfig cfg;  // window 3, merged
  auto model = train_model(entries, alignments, cfg, TrainConfig{},
                           StressConvention::kAsterisk);
  auto t = transcribe(model, "example");
  CHECK(t.raw == alignments[0].out);
  CHECK(t.phones ==
        std::vector<std::string>{"IH", "G", "Z", "AE*", "M", "P", "L"});
}

TEST_CASE("replay holds with feedback when windows are unambiguous") {
  // Each letter occurs in exactly one word, so the letter window pins down
  // the position and the live feedback must match teacher forcing.
  std::vector<LexiconEntry> entries{{"ab", "", {"P0"}},
                                    {"cd", "", {"P1", "P2"}},
                                    {"ef", "", {"P3"}},
                                    {"gh", "", {"P0", "P1"}}};
  auto em = em_train(entries);
  FeatureConfig cfg;
  cfg.window = 2;
  cfg.feedback = 2;
  auto model = train_model(entries, em.alignments, cfg, TrainConfig{},
                           StressConvention::kAsterisk);
  for (std::size_t i = 0; i < entries.size(); ++i) {
    auto t = transcribe(model, entries[i].word);
    CHECK(t.raw == em.alignments[i].out);
    CHECK(t.phones == entries[i].phones);
  }
}

TEST_CASE("epsilons vanish and pseudo-phones split in the phone output") {
  Model m;
  m.cfg.window = 0;
  m.alphabet = "aex";
  m.symbols.intern("a");
  m.symbols.intern("e");
  m.symbols.intern("x");
  m.trees['a'] = leaf(m.symbols.intern("EY*"));
  m.trees['x'] = leaf(m.symbols.intern("K_S"));
  m.trees['e'] = leaf(SymbolTable::kEps);

  auto t = transcribe(m, "axe");
  CHECK(t.raw == std::vector<std::string>{"EY*", "K_S", "-"});
  CHECK(t.phones == std::vector<std::string>{"EY*", "K", "S"});
}

TEST_CASE("unknown grapheme policy: fail or skip with epsilon") {
  Model m;
  m.cfg.window = 0;
  m.alphabet = "a";
  m.symbols.intern("a");
  m.trees['a'] = leaf(m.symbols.intern("AH"));

  CHECK_THROWS_AS(transcribe(m, "aq"), DataError);

  TranscribeOptions skip;
  skip.unknown = UnknownLetterPolicy::kSkipEpsilon;
  auto t = transcribe(m, "aq", "", skip);
  CHECK(t.raw == std::vector<std::string>{"AH", "-"});
  CHECK(t.phones == std::vector<std::string>{"AH"});

  CHECK_THROWS_AS(transcribe(m, ""), DataError);
  Model hollow;
  CHECK_THROWS_AS(transcribe(hollow, "a"), DataError);
}

TEST_CASE("separate stress trees mark vowel outputs in place") {
  Model m;
  m.cfg.window = 0;
  m.cfg.stress = StressMode::kSeparate;
  m.stress_conv = StressConvention::kAsterisk;
  m.alphabet = "abu";
  m.symbols.intern("a");
  m.symbols.intern("b");
  m.symbols.intern("u");
  m.vowels = {"AE", "UW"};

  m.trees['b'] = leaf(m.symbols.intern("B"));
  m.trees['a'] = leaf(m.symbols.intern("AE"));
  m.trees['u'] = leaf(m.symbols.intern("Y_UW"));
  Sym star = m.symbols.intern("*");
  Sym none = m.symbols.intern(kNoStressMarker);
  m.stress_trees['a'] = leaf(star);
  m.stress_trees['b'] = leaf(star);  // queried never: B is no vowel
  m.stress_trees['u'] = leaf(none);

  auto t = transcribe(m, "ba");
  CHECK(t.raw == std::vector<std::string>{"B", "AE*"});
  CHECK(t.phones == std::vector<std::string>{"B", "AE*"});

  // "none" leaves the phone unmarked; pseudo vowels take the marker on
  // their vowel part.
  auto u = transcribe(m, "bu");
  CHECK(u.raw == std::vector<std::string>{"B", "Y_UW"});

  m.stress_trees['u'] = leaf(star);
  auto v = transcribe(m, "bu");
  CHECK(v.raw == std::vector<std::string>{"B", "Y_UW*"});
  CHECK(v.phones == std::vector<std::string>{"B", "Y", "UW*"});
}

TEST_CASE("pos attribute routes predictions") {
  Model m;
  m.cfg.window = 0;
  m.cfg.use_pos = true;
  m.alphabet = "a";
  m.symbols.intern("a");
  Sym n = m.symbols.intern("n");
  Sym v = m.symbols.intern("v");
  Sym X = m.symbols.intern("X");
  Sym Y = m.symbols.intern("Y");

  auto root = std::make_unique<TreeNode>();
  root->leaf = false;
  root->attr = 1;  // [focus, pos]
  root->default_value = X;
  root->children.emplace_back(n, leaf(X));
  root->children.emplace_back(v, leaf(Y));
  m.trees['a'] = std::move(root);

  CHECK(transcribe(m, "a", "n").phones == std::vector<std::string>{"X"});
  CHECK(transcribe(m, "a", "v").phones == std::vector<std::string>{"Y"});
  CHECK(transcribe(m, "a", "").phones == std::vector<std::string>{"X"});
  CHECK(transcribe(m, "a", "adj").phones == std::vector<std::string>{"X"});
}

TEST_CASE("transcribe_batch preserves order and aggregates errors") {
  Model m;
  m.cfg.window = 0;
  m.alphabet = "ab";
  m.symbols.intern("a");
  m.symbols.intern("b");
  m.trees['a'] = leaf(m.symbols.intern("AH"));
  m.trees['b'] = leaf(m.symbols.intern("B"));

  std::vector<LexiconEntry> entries{{"ab", "", {"AH", "B"}},
                                    {"aq", "", {"AH"}},
                                    {"ba", "", {"B", "AH"}}};
  auto batch = transcribe_batch(m, entries);
  REQUIRE(batch.items.size() == 3);
  REQUIRE(batch.errors.size() == 1);
  CHECK(batch.errors[0].index == 1);
  CHECK(batch.items[1].phones.empty());
  CHECK(batch.items[0].phones == std::vector<std::string>{"AH", "B"});
  CHECK(batch.items[2].phones == std::vector<std::string>{"B", "AH"});

  std::ostringstream out;
  write_predictions_tsv(entries, batch, out);
  CHECK(out.str() == "ab\t\tAH B\naq\t\t\nba\t\tB AH\n");
}

TEST_CASE("batches are deterministic across thread counts") {
  testutil::Rng rng(89);
  auto corpus = testutil::random_corpus(rng, 30, 6);
  auto em = em_train(corpus);
  FeatureConfig cfg;
  cfg.feedback = 3;
  auto model = train_model(corpus, em.alignments, cfg, TrainConfig{},
                           StressConvention::kAsterisk);
  auto b1 = transcribe_batch(model, corpus, 1);
  auto b4 = transcribe_batch(model, corpus, 4);
  std::ostringstream o1, o4;
  write_predictions_tsv(corpus, b1, o1);
  write_predictions_tsv(corpus, b4, o4);
  CHECK(o1.str() == o4.str());
}

TEST_CASE("a reloaded model transcribes identically") {
  testutil::Rng rng(97);
  auto corpus = testutil::random_corpus(rng, 25, 6);
  auto em = em_train(corpus);
  FeatureConfig cfg;
  cfg.window = 2;
  cfg.feedback = 1;
  auto model = train_model(corpus, em.alignments, cfg, TrainConfig{},
                           StressConvention::kAsterisk);

  std::ostringstream s;
  serialize_model(model, s);
  std::istringstream in(s.str());
  auto back = deserialize_model(in);

  for (const auto& e : corpus) {
    auto t1 = transcribe(model, e.word);
    auto t2 = transcribe(back, e.word);
    CHECK(t1.raw == t2.raw);
    CHECK(t1.phones == t2.phones);
  }
}
