#include <sstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "ltskit/error.hpp"
#include "ltskit/features.hpp"

using namespace lts;

namespace {

constexpr StressConvention kAst = StressConvention::kAsterisk;

std::string name_of(const SymbolTable& t, Sym s) {
  if (s == SymbolTable::kPad) return "#";
  if (s == kUnseenSym) return "?";
  return t.name(s);
}

std::vector<std::string> names_of(const SymbolTable& t,
                                  const std::vector<Sym>& syms) {
  std::vector<std::string> out;
  for (Sym s : syms) out.push_back(name_of(t, s));
  return out;
}

}  // namespace

TEST_CASE("feature config arity and validation") {
  FeatureConfig cfg;
  CHECK(cfg.attr_count() == 7);  // window 3, no feedback, no pos
  cfg.feedback = 3;
  CHECK(cfg.attr_count() == 10);
  cfg.use_pos = true;
  CHECK(cfg.attr_count() == 11);
  cfg.window = 1;
  CHECK(cfg.attr_count() == 7);

  FeatureConfig ok;
  CHECK_THROWS_AS(
      FeatureExtractor(ok, kAst, static_cast<SymbolTable*>(nullptr)),
      InternalError);
  SymbolTable t;
  FeatureConfig bad;
  bad.window = 33;
  CHECK_THROWS_AS(FeatureExtractor(bad, kAst, &t), DataError);
  bad.window = 3;
  bad.feedback = -1;
  CHECK_THROWS_AS(FeatureExtractor(bad, kAst, &t), DataError);
}

TEST_CASE("visit order follows the direction") {
  SymbolTable t;
  FeatureConfig ltr;
  FeatureExtractor fe(ltr, kAst, &t);
  CHECK(fe.visit_order(3) == std::vector<std::size_t>{0, 1, 2});

  FeatureConfig rtl;
  rtl.direction = Direction::kRightToLeft;
  FeatureExtractor fr(rtl, kAst, &t);
  CHECK(fr.visit_order(3) == std::vector<std::size_t>{2, 1, 0});
}

TEST_CASE("window-3 vectors match the classic dump layout") {
  SymbolTable t;
  FeatureConfig cfg;  // window 3, merged
  FeatureExtractor fe(cfg, kAst, &t);

  LexiconEntry e{"example", "", {"IH", "G", "Z", "AE*", "M", "P", "L"}};
  std::vector<std::string> aligned = {"IH", "G_Z", "AE*", "M", "P", "L", "-"};
  auto vectors = fe.training_vectors(e, aligned);
  REQUIRE(vectors.size() == 7);

  std::ostringstream out;
  dump_vectors(vectors, t, out);
  std::istringstream lines(out.str());
  std::string line;
  std::getline(lines, line);
  CHECK(line == "- - - e x a m -> IH");
  std::getline(lines, line);
  CHECK(line == "- - e x a m p -> G_Z");
  std::getline(lines, line);
  CHECK(line == "- e x a m p l -> AE*");
  std::getline(lines, line);
  CHECK(line == "e x a m p l e -> M");
  std::getline(lines, line);
  CHECK(line == "x a m p l e - -> P");
  std::getline(lines, line);
  CHECK(line == "a m p l e - - -> L");
  std::getline(lines, line);
  CHECK(line == "m p l e - - - -> -");
}

TEST_CASE("single letter word is all padding") {
  SymbolTable t;
  FeatureExtractor fe(FeatureConfig{}, kAst, &t);
  auto vectors = fe.training_vectors({"a", "", {"AH"}}, {"AH"});
  REQUIRE(vectors.size() == 1);
  CHECK(names_of(t, vectors[0].attrs) ==
        std::vector<std::string>{"#", "#", "#", "a", "#", "#", "#"});
  CHECK(t.name(vectors[0].target) == "AH");
}

TEST_CASE("feedback windows: nearest visited positions, surface order") {
  LexiconEntry e{"abc", "", {"X", "Y", "Z"}};
  std::vector<std::string> aligned = {"X", "Y", "Z"};

  FeatureConfig cfg;
  cfg.window = 0;
  cfg.feedback = 2;

  SUBCASE("left to right") {
    SymbolTable t;
    FeatureExtractor fe(cfg, kAst, &t);
    auto v = fe.training_vectors(e, aligned);
    // Visit order 0,1,2; feedback = positions [p-2, p) in surface order.
    CHECK(names_of(t, v[0].attrs) == std::vector<std::string>{"a", "#", "#"});
    CHECK(names_of(t, v[1].attrs) == std::vector<std::string>{"b", "#", "X"});
    CHECK(names_of(t, v[2].attrs) == std::vector<std::string>{"c", "X", "Y"});
  }

  SUBCASE("right to left") {
    cfg.direction = Direction::kRightToLeft;
    SymbolTable t;
    FeatureExtractor fe(cfg, kAst, &t);
    auto v = fe.training_vectors(e, aligned);
    // Visit order 2,1,0; feedback = positions (p, p+2] in surface order.
    CHECK(names_of(t, v[0].attrs) == std::vector<std::string>{"c", "#", "#"});
    CHECK(names_of(t, v[1].attrs) == std::vector<std::string>{"b", "Z", "#"});
    CHECK(names_of(t, v[2].attrs) == std::vector<std::string>{"a", "Y", "Z"});
  }
}

TEST_CASE("stress modes transform targets and feedback") {
  LexiconEntry e{"ma", "", {"M", "AE*"}};
  std::vector<std::string> aligned = {"M", "AE*"};

  FeatureConfig cfg;
  cfg.window = 0;
  cfg.feedback = 1;

  SUBCASE("merged keeps markers everywhere") {
    SymbolTable t;
    FeatureExtractor fe(cfg, kAst, &t);
    auto v = fe.training_vectors(e, aligned);
    CHECK(t.name(v[1].target) == "AE*");
    CHECK(names_of(t, v[1].attrs) == std::vector<std::string>{"a", "M"});
  }

  SUBCASE("separate strips targets and feedback; stress vectors carry markers") {
    cfg.stress = StressMode::kSeparate;
    SymbolTable t;
    FeatureExtractor fe(cfg, kAst, &t);
    auto v = fe.training_vectors(e, aligned);
    CHECK(t.name(v[1].target) == "AE");

    auto s = fe.stress_training_vectors(e, aligned);
    CHECK(t.name(s[0].target) == kNoStressMarker);
    CHECK(t.name(s[1].target) == "*");
    // Same attributes in both vector sets.
    CHECK(v[0].attrs == s[0].attrs);
    CHECK(v[1].attrs == s[1].attrs);
  }

  SUBCASE("none strips targets") {
    cfg.stress = StressMode::kNone;
    SymbolTable t;
    FeatureExtractor fe(cfg, kAst, &t);
    auto v = fe.training_vectors(e, aligned);
    CHECK(t.name(v[1].target) == "AE");
  }

  SUBCASE("feedback strips pseudo stress too") {
    cfg.stress = StressMode::kSeparate;
    SymbolTable t;
    FeatureExtractor fe(cfg, kAst, &t);
    std::vector<std::string> fused = {"Y_UW*", "M"};
    auto v = fe.training_vectors({"um", "", {"Y", "UW*", "M"}}, fused);
    CHECK(names_of(t, v[1].attrs) == std::vector<std::string>{"m", "Y_UW"});
  }
}

TEST_CASE("direction changes visits, never window contents") {
  LexiconEntry e{"abcd", "", {"W", "X", "Y", "Z"}};
  std::vector<std::string> aligned = {"W", "X", "Y", "Z"};

  FeatureConfig ltr;  // window 3, no feedback
  FeatureConfig rtl = ltr;
  rtl.direction = Direction::kRightToLeft;

  SymbolTable t1, t2;
  auto vl = FeatureExtractor(ltr, kAst, &t1).training_vectors(e, aligned);
  auto vr = FeatureExtractor(rtl, kAst, &t2).training_vectors(e, aligned);
  REQUIRE(vl.size() == vr.size());
  // vl is emitted 0..3, vr is emitted 3..0; compare per surface position.
  for (std::size_t p = 0; p < 4; ++p) {
    const auto& a = vl[p];
    const auto& b = vr[vr.size() - 1 - p];
    CHECK(names_of(t1, a.attrs) == names_of(t2, b.attrs));
    CHECK(name_of(t1, a.target) == name_of(t2, b.target));
  }
}

TEST_CASE("pos attribute rides at the end") {
  FeatureConfig cfg;
  cfg.window = 0;
  cfg.use_pos = true;
  SymbolTable t;
  FeatureExtractor fe(cfg, kAst, &t);
  auto with = fe.training_vectors({"a", "n", {"AH"}}, {"AH"});
  CHECK(names_of(t, with[0].attrs) == std::vector<std::string>{"a", "n"});
  auto without = fe.training_vectors({"a", "", {"AH"}}, {"AH"});
  CHECK(names_of(t, without[0].attrs) == std::vector<std::string>{"a", "#"});
}

TEST_CASE("prediction vectors replay teacher-forced training vectors") {
  LexiconEntry e{"abcd", "", {"W", "X", "Y", "Z"}};
  std::vector<std::string> aligned = {"W", "X", "-", "Z"};

  for (auto dir : {Direction::kLeftToRight, Direction::kRightToLeft}) {
    FeatureConfig cfg;
    cfg.window = 2;
    cfg.feedback = 2;
    cfg.direction = dir;
    SymbolTable t;
    FeatureExtractor fe(cfg, kAst, &t);
    auto trained = fe.training_vectors(e, aligned);

    auto order = fe.visit_order(e.word.size());
    std::vector<std::string> produced;
    for (std::size_t k = 0; k < order.size(); ++k) {
      auto pv = fe.prediction_vector(e.word, order[k], produced, e.pos);
      CHECK(pv.attrs == trained[k].attrs);  // perfect-oracle replay
      produced.push_back(aligned[order[k]]);
    }
  }
}

TEST_CASE("prediction vector rejects out-of-order positions") {
  SymbolTable t;
  FeatureConfig cfg;
  FeatureExtractor fe(cfg, kAst, &t);
  std::vector<std::string> none;
  CHECK_THROWS_AS(fe.prediction_vector("abc", 3, none, ""), DataError);
  CHECK_THROWS_AS(fe.prediction_vector("abc", 1, none, ""), DataError);
  std::vector<std::string> two = {"X", "Y"};
  CHECK_THROWS_AS(fe.prediction_vector("abc", 1, two, ""), DataError);
  std::vector<std::string> full = {"X", "Y", "Z"};
  CHECK_THROWS_AS(fe.prediction_vector("abc", 0, full, ""), DataError);
}

TEST_CASE("vector_at guards unfilled in-range feedback slots") {
  SymbolTable t;
  FeatureConfig cfg;
  cfg.window = 0;
  cfg.feedback = 1;
  FeatureExtractor fe(cfg, kAst, &t);
  std::vector<std::string> holes = {"", "", ""};
  CHECK_THROWS_AS(fe.vector_at("abc", 1, holes, ""), InternalError);
}

TEST_CASE("read-only extractor maps unknown strings to kUnseenSym") {
  SymbolTable trained;
  FeatureConfig cfg;
  cfg.window = 1;
  FeatureExtractor intern_fe(cfg, kAst, &trained);
  intern_fe.training_vectors({"ab", "", {"X", "Y"}}, {"X", "Y"});

  const SymbolTable& frozen = trained;
  FeatureExtractor ro(cfg, kAst, &frozen);
  Sym before = trained.size();

  // Known letters resolve to the same ids as in training.
  std::vector<std::string> outs(2);
  auto v = ro.vector_at("ab", 0, outs, "");
  CHECK(v.attrs == intern_fe.vector_at("ab", 0, outs, "").attrs);

  // Unknown letters become kUnseenSym instead of growing the table.
  auto u = ro.vector_at("zq", 0, std::vector<std::string>(2), "");
  CHECK(u.attrs[1] == kUnseenSym);
  CHECK(trained.size() == before);
}
