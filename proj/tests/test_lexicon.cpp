#include <algorithm>
#include <cmath>
#include <sstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "ltskit/error.hpp"
#include "ltskit/lexicon.hpp"

using namespace lts;

namespace {

bool has_reject(const ParseResult& r, const std::string& reason_part) {
  return std::any_of(r.rejects.begin(), r.rejects.end(),
                     [&](const RejectLine& l) {
                       return l.reason.find(reason_part) != std::string::npos;
                     });
}

}  // namespace

TEST_CASE("cmu format: comments, case folding, variants, rejects") {
  const std::string text =
      ";;; a header comment\n"
      "CLOSE  K L OW1 S\n"
      "CLOSE(2)  K L OW1 Z\n"
      "O'CLOCK  AH0 K L AA1 K\n"
      "3D  TH R IY1 D IY2\n"
      "BAD  B QX D\n"
      "WRONGSTRESS  K1 AE1 T\n"
      "\n"
      "EXEMPLARY  IH0 G Z EH1 M P L ER0 IY0\n";

  auto r = parse_lexicon_text(text, LexFormat::kCmu);
  REQUIRE(r.entries.size() == 4);
  CHECK(r.entries[0].word == "close");
  CHECK(r.entries[0].phones ==
        std::vector<std::string>{"K", "L", "OW1", "S"});
  CHECK(r.entries[1].word == "close");  // variant kept by default
  CHECK(r.entries[2].word == "o'clock");
  CHECK(r.entries[3].word == "exemplary");
  CHECK(r.entries[3].phones ==
        std::vector<std::string>{"IH0", "G", "Z", "EH1", "M", "P", "L", "ER0",
                                 "IY0"});

  CHECK(r.rejects.size() == 3);
  CHECK(has_reject(r, "invalid grapheme"));     // 3d
  CHECK(has_reject(r, "unknown phone"));        // QX
  CHECK(has_reject(r, "stress on non-vowel"));  // K1
  for (const auto& rej : r.rejects) CHECK(rej.line_no > 0);

  CHECK(r.inventory.stress == StressConvention::kCmuDigits);
  CHECK_FALSE(r.inventory.open);

  ParseOptions drop;
  drop.drop_variants = true;
  auto r2 = parse_lexicon_text(text, LexFormat::kCmu, drop);
  CHECK(r2.entries.size() == 3);  // CLOSE(2) gone
}

TEST_CASE("tab formats: field count, comments, star stress") {
  const std::string text =
      "# comment line\n"
      "project\tn\tP R AA* JH EH K T\n"
      "project\tv\tP R AH JH EH* K T\n"
      "oneword only\n"
      "alpha\tn\tAE* L F AH\n";

  auto r = parse_lexicon_text(text, LexFormat::kOaldLike);
  REQUIRE(r.entries.size() == 3);
  CHECK(r.entries[0].pos == "n");
  CHECK(r.entries[1].pos == "v");
  CHECK(r.rejects.size() == 1);
  CHECK(has_reject(r, "word<TAB>pos<TAB>phones"));
  CHECK(r.inventory.stress == StressConvention::kAsterisk);

  // Open inventory learns vowels from marked phones.
  CHECK(r.inventory.vowels.count("AA"));
  CHECK(r.inventory.vowels.count("EH"));
  CHECK_FALSE(r.inventory.vowels.count("P"));
}

TEST_CASE("generic tsv sniffs the stress convention") {
  auto digits = parse_lexicon_text("cat\t\tK AE1 T\n", LexFormat::kGenericTsv);
  CHECK(digits.inventory.stress == StressConvention::kCmuDigits);

  auto stars = parse_lexicon_text("cat\t\tK AE* T\n", LexFormat::kGenericTsv);
  CHECK(stars.inventory.stress == StressConvention::kAsterisk);

  // No marker at all: defaults to asterisk.
  auto plain = parse_lexicon_text("cat\t\tK AE T\n", LexFormat::kGenericTsv);
  CHECK(plain.inventory.stress == StressConvention::kAsterisk);
}

TEST_CASE("parse failures raise DataError") {
  CHECK_THROWS_AS(parse_lexicon_text("", LexFormat::kCmu), DataError);
  CHECK_THROWS_AS(parse_lexicon_text(";;; only comments\n", LexFormat::kCmu),
                  DataError);
  CHECK_THROWS_AS(parse_lexicon("/nonexistent/lexicon", LexFormat::kCmu),
                  DataError);
}

TEST_CASE("round trip: parse -> generic tsv -> parse is the identity") {
  const std::string text =
      "close\tv\tK L OW1 Z\n"
      "a\t\tAH0\n"
      "cat\tn\tK AE1 T\n";
  auto r1 = parse_lexicon_text(text, LexFormat::kGenericTsv);
  std::ostringstream out;
  write_generic_tsv(r1.entries, out);
  auto r2 = parse_lexicon_text(out.str(), LexFormat::kGenericTsv);
  REQUIRE(r1.entries.size() == r2.entries.size());
  for (std::size_t i = 0; i < r1.entries.size(); ++i) {
    CHECK(r1.entries[i].word == r2.entries[i].word);
    CHECK(r1.entries[i].pos == r2.entries[i].pos);
    CHECK(r1.entries[i].phones == r2.entries[i].phones);
  }
}

TEST_CASE("pseudo-phone config parsing") {
  auto set = PseudoSet::parse(
      "# english extras\n"
      "K_S = K S\n"
      "Y_UW = Y UW  # fused u\n");
  REQUIRE(set.defs.size() == 2);
  CHECK(set.defs[0].name == "K_S");
  CHECK(set.match("K", "S") != nullptr);
  CHECK(set.match("S", "K") == nullptr);

  CHECK_THROWS_AS(PseudoSet::parse("KS = K S\n"), DataError);
  CHECK_THROWS_AS(PseudoSet::parse("K_S = K\n"), DataError);

  auto d = PseudoSet::defaults();
  CHECK(d.match("K", "S"));
  CHECK(d.match("G", "Z"));
  CHECK(d.match("W", "A"));
}

TEST_CASE("merge_pseudo_phones fires only while phones outnumber letters") {
  const auto set = PseudoSet::defaults();
  const auto conv = StressConvention::kCmuDigits;

  // "ax" [EY1, K, S]: one merge needed and only (K,S) is mergeable.
  auto m = merge_pseudo_phones({"ax", "", {"EY1", "K", "S"}}, set, conv);
  CHECK(m.alignable);
  CHECK(m.entry.phones == std::vector<std::string>{"EY1", "K_S"});

  // Already one-to-one: no merge even though the pair is present.
  auto same = merge_pseudo_phones({"box", "", {"B", "K", "S"}}, set, conv);
  CHECK(same.alignable);
  CHECK(same.entry.phones == std::vector<std::string>{"B", "K", "S"});

  // Stress-insensitive matching fuses the rendered, stress-carrying forms.
  PseudoSet wa;
  wa.defs = {{"W_AA", {"W", "AA"}}};
  auto one = merge_pseudo_phones({"oi", "", {"W", "AA1", "Z"}}, wa, conv);
  CHECK(one.alignable);
  CHECK(one.entry.phones == std::vector<std::string>{"W_AA1", "Z"});

  // Leftmost pair merges first.
  PseudoSet ks;
  ks.defs = {{"K_S", {"K", "S"}}};
  auto lm = merge_pseudo_phones({"xx", "", {"K", "S", "K", "S"}}, ks, conv);
  CHECK(lm.alignable);
  CHECK(lm.entry.phones == std::vector<std::string>{"K_S", "K_S"});

  // No applicable merge: flagged unalignable, not an error.
  auto un = merge_pseudo_phones({"ab", "", {"P", "T", "K"}}, set, conv);
  CHECK_FALSE(un.alignable);
  CHECK(un.entry.phones.size() == 3);

  // A merged symbol never merges again.
  PseudoSet chain;
  chain.defs = {{"K_S", {"K", "S"}}, {"S_T", {"S", "T"}}};
  auto ch = merge_pseudo_phones({"xt", "", {"K", "S", "T"}}, chain, conv);
  CHECK(ch.alignable);
  CHECK(ch.entry.phones == std::vector<std::string>{"K_S", "T"});
}

TEST_CASE("split_every_nth partitions deterministically") {
  auto spec = split_every_nth(10, 10, 9);
  CHECK(spec.train.size() == 9);
  CHECK(spec.test == std::vector<std::size_t>{9});

  auto s7 = split_every_nth(7, 10, 3);
  CHECK(s7.test == std::vector<std::size_t>{3});
  CHECK(s7.train.size() == 6);

  auto big = split_every_nth(63399, 10, 0);
  CHECK(big.test.size() == 6340);
  CHECK(big.train.size() + big.test.size() == 63399);

  // Partition: no overlap, all indices covered, sizes within 1 of 1/n.
  for (std::size_t off = 0; off < 4; ++off) {
    auto s = split_every_nth(23, 4, off);
    std::vector<char> seen(23, 0);
    for (auto i : s.train) seen[i] += 1;
    for (auto i : s.test) seen[i] += 1;
    CHECK(std::all_of(seen.begin(), seen.end(),
                      [](char c) { return c == 1; }));
    const double ideal = 23.0 / 4.0;
    CHECK(std::abs(static_cast<double>(s.test.size()) - ideal) <= 1.0);
  }

  CHECK_THROWS_AS(split_every_nth(5, 1, 0), DataError);
  CHECK_THROWS_AS(split_every_nth(5, 4, 4), DataError);
}

TEST_CASE("postprocess_output strips epsilon and splits pseudo-phones") {
  CHECK(postprocess_output({"IH", "G_Z", "EH*", "M", "P", "L", "ER", "-",
                            "IY"}) ==
        std::vector<std::string>{"IH", "G", "Z", "EH*", "M", "P", "L", "ER",
                                 "IY"});
  CHECK(postprocess_output({"-"}) == std::vector<std::string>{});
  CHECK(postprocess_output({"K_S"}) == std::vector<std::string>{"K", "S"});
  // Stress survives on the fused vowel part.
  CHECK(postprocess_output({"Y_UW1", "-", "T"}) ==
        std::vector<std::string>{"Y", "UW1", "T"});
}

TEST_CASE("rejects report serializes as line/reason/raw tsv") {
  std::ostringstream out;
  write_rejects_tsv({{7, "unknown phone: QX", "BAD  B QX D"}}, out);
  CHECK(out.str() == "7\tunknown phone: QX\tBAD  B QX D\n");
}
