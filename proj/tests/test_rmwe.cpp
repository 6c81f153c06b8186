#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <string>
#include <vector>

#include "morphtag/errors.hpp"
#include "morphtag/rmwe.hpp"
#include "support.hpp"

using namespace morphtag;

namespace {

Sentence sent(const std::vector<std::string>& words) {
  Sentence sentence;
  for (const std::string& w : words) sentence.tokens.push_back(Token{{w}});
  return sentence;
}

AffixList manipuri_affixes() {
  AffixList lists;
  lists.prefixes = {"ই", "চ"};
  lists.suffixes = {"দা", "সি"};
  return lists;
}

Dictionary small_dict() {
  return Dictionary::parse(
      "মরিক\t1\n"
      "যুম\t2\n"
      "থকসি\t3\n"
      "চথোক\t4\n"
      "চসিন\t5\n"
      "ইমুন\t6\n"
      "পামবা\ttiger\n"
      "কে\ttiger\n"
      "লৈ\tflower,exist\n"
      "#MIMIC\n"
      "কৱক\tকৱক\n");
}

}  // namespace

TEST_CASE("dictionary parsing") {
  const Dictionary dict = Dictionary::parse(
      "# header comment\n"
      "abc\ts1,s2\n"
      "abc\ts3\n"
      "bare\n"
      "#MIMIC\n"
      "x\ty\n");
  CHECK(dict.entry_count() == 2);
  CHECK(dict.contains("abc"));
  CHECK(dict.contains("bare"));
  CHECK_FALSE(dict.contains("x"));  // pair section is separate
  REQUIRE(dict.senses("abc") != nullptr);
  CHECK(*dict.senses("abc") == std::set<std::string>{"s1", "s2", "s3"});
  CHECK(dict.senses("bare")->empty());
  CHECK(dict.senses("missing") == nullptr);
  CHECK(dict.is_onomatopoeic_pair("x", "y"));
  CHECK_FALSE(dict.is_onomatopoeic_pair("y", "x"));
  CHECK(dict.pair_count() == 1);
}

TEST_CASE("kind names") {
  CHECK(std::string(to_string(RmweKind::Complete)) == "complete");
  CHECK(std::string(to_string(RmweKind::Partial)) == "partial");
  CHECK(std::string(to_string(RmweKind::Echo)) == "echo");
  CHECK(std::string(to_string(RmweKind::Mimic)) == "mimic");
  CHECK(std::string(to_string(RmweKind::Double)) == "double");
  CHECK(std::string(to_string(RmweKind::Semantic)) == "semantic");
}

TEST_CASE("classification on Manipuri examples") {
  const AffixList affixes = manipuri_affixes();
  const Dictionary dict = small_dict();

  SUBCASE("identical pair is a complete repetition") {
    const auto spans = identify_rmwe(sent({"মরিক", "মরিক"}), affixes, dict);
    REQUIRE(spans.size() == 1);
    CHECK(spans[0] == RmweSpan{0, 1, RmweKind::Complete});
  }
  SUBCASE("base plus suffixed base is also complete") {
    const auto spans = identify_rmwe(sent({"যুম", "যুমদা"}), affixes, dict);
    REQUIRE(spans.size() == 1);
    CHECK(spans[0] == RmweSpan{0, 1, RmweKind::Complete});
  }
  SUBCASE("shared prefix gives a partial repetition") {
    const auto spans = identify_rmwe(sent({"চথোক", "চসিন"}), affixes, dict);
    REQUIRE(spans.size() == 1);
    CHECK(spans[0] == RmweSpan{0, 1, RmweKind::Partial});
  }
  SUBCASE("shared suffix with an unattested second word is an echo") {
    const auto spans = identify_rmwe(sent({"থকসি", "খাসি"}), affixes, dict);
    REQUIRE(spans.size() == 1);
    CHECK(spans[0] == RmweSpan{0, 1, RmweKind::Echo});
  }
  SUBCASE("twice-repeated word continued by its stem is a double form") {
    const auto spans =
        identify_rmwe(sent({"ইমুন", "ইমুন", "মুনবা"}), affixes, dict);
    REQUIRE(spans.size() == 1);
    CHECK(spans[0] == RmweSpan{0, 2, RmweKind::Double});
  }
  SUBCASE("sense overlap gives a semantic pair") {
    const auto spans = identify_semantic(sent({"পামবা", "কে"}), dict);
    REQUIRE(spans.size() == 1);
    CHECK(spans[0] == RmweSpan{0, 1, RmweKind::Semantic});
  }
}

TEST_CASE("identical-pair precedence: double, then mimic, then complete") {
  AffixList affixes;
  affixes.suffixes = {"ak"};  // "kwak" minus "ak" leaves the stem "kw"
  Dictionary dict;
  dict.add_entry("filler", {});  // non-empty lexicon
  dict.add_onomatopoeic_pair("kwak", "kwak");

  // Pure pair: mimic beats complete.
  auto spans = identify_rmwe(sent({"kwak", "kwak"}), affixes, dict);
  REQUIRE(spans.size() == 1);
  CHECK(spans[0].kind == RmweKind::Mimic);

  // Same pair followed by the bare stem: double beats mimic.
  spans = identify_rmwe(sent({"kwak", "kwak", "kwabird"}), affixes, dict);
  REQUIRE(spans.size() == 1);
  CHECK(spans[0] == RmweSpan{0, 2, RmweKind::Double});

  // Without the mimic listing the pure pair falls through to complete.
  Dictionary plain;
  plain.add_entry("filler", {});
  spans = identify_rmwe(sent({"kwak", "kwak"}), affixes, plain);
  REQUIRE(spans.size() == 1);
  CHECK(spans[0].kind == RmweKind::Complete);
}

TEST_CASE("double form via suffix residue") {
  AffixList affixes;
  affixes.suffixes = {"শোক"};
  const Dictionary dict;
  const auto spans =
      identify_rmwe(sent({"ঙাশোক", "ঙাশোক", "ঙাবা"}), affixes, dict);
  REQUIRE(spans.size() == 1);
  CHECK(spans[0] == RmweSpan{0, 2, RmweKind::Double});
}

TEST_CASE("double form requires a usable residue") {
  AffixList affixes;
  affixes.suffixes = {"ak"};  // "kwak" minus "ak" = "kw"
  const Dictionary dict;
  // Third word does not continue the residue: falls back to a two-token span.
  const auto spans = identify_rmwe(sent({"kwak", "kwak", "zzz"}), affixes, dict);
  REQUIRE(spans.size() == 1);
  CHECK(spans[0] == RmweSpan{0, 1, RmweKind::Complete});
}

TEST_CASE("echo requires a non-empty lexicon and an unattested echo word") {
  AffixList affixes;
  affixes.suffixes = {"si"};
  Dictionary empty;
  CHECK(identify_rmwe(sent({"thoksi", "khasi"}), affixes, empty).empty());

  Dictionary dict;
  dict.add_entry("thoksi", {});
  auto spans = identify_rmwe(sent({"thoksi", "khasi"}), affixes, dict);
  REQUIRE(spans.size() == 1);
  CHECK(spans[0].kind == RmweKind::Echo);

  // Once the second word is attested it is no longer an echo.
  dict.add_entry("khasi", {});
  CHECK(identify_rmwe(sent({"thoksi", "khasi"}), affixes, dict).empty());
}

TEST_CASE("partial via an affix bridging the pair") {
  AffixList affixes;
  affixes.suffixes = {"ron"};
  const Dictionary dict;
  // "ron" ends the first word and begins the second.
  const auto spans = identify_rmwe(sent({"maron", "ronba"}), affixes, dict);
  REQUIRE(spans.size() == 1);
  CHECK(spans[0].kind == RmweKind::Partial);
  // The affix must be proper on both sides.
  CHECK(identify_rmwe(sent({"ron", "ronba"}), affixes, dict).empty());
  CHECK(identify_rmwe(sent({"maron", "ron"}), affixes, dict).empty());
}

TEST_CASE("greedy scan jumps past matched spans") {
  const AffixList affixes;
  const Dictionary dict;
  // Three identical tokens: only the first two pair up.
  auto spans = identify_rmwe(sent({"x", "x", "x"}), affixes, dict);
  REQUIRE(spans.size() == 1);
  CHECK(spans[0] == RmweSpan{0, 1, RmweKind::Complete});
  // Four pair up twice.
  spans = identify_rmwe(sent({"x", "x", "x", "x"}), affixes, dict);
  REQUIRE(spans.size() == 2);
  CHECK(spans[1] == RmweSpan{2, 3, RmweKind::Complete});
}

TEST_CASE("semantic pass requires distinct attested surfaces") {
  Dictionary dict;
  dict.add_entry("a", {"s"});
  dict.add_entry("b", {"s"});
  dict.add_entry("c", {"t"});
  CHECK(identify_semantic(sent({"a", "b"}), dict).size() == 1);
  CHECK(identify_semantic(sent({"a", "a"}), dict).empty());   // identical
  CHECK(identify_semantic(sent({"a", "c"}), dict).empty());   // disjoint senses
  CHECK(identify_semantic(sent({"a", "zz"}), dict).empty());  // unattested
}

TEST_CASE("identify_all keeps semantic spans off covered tokens") {
  AffixList affixes;
  Dictionary dict;
  dict.add_entry("x", {"s"});
  dict.add_entry("y", {"s"});
  // "x x" is a complete repetition; the semantic pass must not pair the
  // second x with y. y z is nothing.
  const auto spans = identify_all(sent({"x", "x", "y", "z"}), affixes, dict);
  REQUIRE(spans.size() == 1);
  CHECK(spans[0].kind == RmweKind::Complete);

  // With a free pair to the right, both passes contribute, sorted by start.
  const auto both = identify_all(sent({"w", "w", "x", "y"}), affixes, dict);
  REQUIRE(both.size() == 2);
  CHECK(both[0] == RmweSpan{0, 1, RmweKind::Complete});
  CHECK(both[1] == RmweSpan{2, 3, RmweKind::Semantic});
}

TEST_CASE("bio encoding") {
  const Sentence s = sent({"a", "b", "c", "d"});
  CHECK(to_bio(s, {}) == std::vector<std::string>{"O", "O", "O", "O"});
  CHECK(to_bio(s, {RmweSpan{1, 2, RmweKind::Echo}}) ==
        std::vector<std::string>{"O", "B-RMWE", "I-RMWE", "O"});
  CHECK(to_bio(s, {RmweSpan{0, 2, RmweKind::Double}, RmweSpan{3, 3}}) ==
        std::vector<std::string>{"B-RMWE", "I-RMWE", "I-RMWE", "B-RMWE"});
  CHECK_THROWS_AS(to_bio(s, {RmweSpan{2, 4}}), OverlapError);
  CHECK_THROWS_AS(to_bio(s, {RmweSpan{0, 1}, RmweSpan{1, 2}}), OverlapError);
}

TEST_CASE("bio decoding") {
  using Spans = std::vector<std::pair<std::size_t, std::size_t>>;
  CHECK(spans_from_bio({"O", "O"}) == Spans{});
  CHECK(spans_from_bio({"B-RMWE", "I-RMWE", "O"}) == Spans{{0, 1}});
  // Adjacent spans keep their boundary.
  CHECK(spans_from_bio({"B-RMWE", "I-RMWE", "B-RMWE", "I-RMWE"}) ==
        Spans{{0, 1}, {2, 3}});
  // A dangling I opens a fresh span.
  CHECK(spans_from_bio({"O", "I-RMWE", "I-RMWE"}) == Spans{{1, 2}});
}

TEST_CASE("bio round trip on random span sets") {
  testsupport::Rng rng(99);
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t n =
        static_cast<std::size_t>(testsupport::uniform_int(rng, 1, 20));
    Sentence s;
    for (std::size_t i = 0; i < n; ++i) s.tokens.push_back(Token{{"w"}});
    // Build a random set of disjoint spans left to right.
    std::vector<RmweSpan> spans;
    std::size_t pos = 0;
    while (pos + 1 < n) {
      if (testsupport::uniform_int(rng, 0, 2) == 0) {
        const std::size_t len =
            static_cast<std::size_t>(testsupport::uniform_int(rng, 2, 3));
        const std::size_t end = std::min(n - 1, pos + len - 1);
        spans.push_back(RmweSpan{pos, end, RmweKind::Complete});
        pos = end + 1;
      } else {
        ++pos;
      }
    }
    const std::vector<std::string> bio = to_bio(s, spans);
    // No dangling I: every I-RMWE follows a B-RMWE or I-RMWE.
    for (std::size_t t = 0; t < bio.size(); ++t) {
      if (bio[t] == "I-RMWE") {
        REQUIRE(t > 0);
        CHECK(bio[t - 1] != "O");
      }
    }
    // Decode inverts encode.
    const auto decoded = spans_from_bio(bio);
    REQUIRE(decoded.size() == spans.size());
    for (std::size_t k = 0; k < spans.size(); ++k) {
      CHECK(decoded[k].first == spans[k].start);
      CHECK(decoded[k].second == spans[k].end);
    }
  }
}

TEST_CASE("corpus-level bio labels") {
  const AffixList affixes = manipuri_affixes();
  const Dictionary dict = small_dict();
  Corpus corpus;
  corpus.column_count = 1;
  corpus.sentences = {sent({"মরিক", "মরিক", "লৈ"}), sent({"অমা"})};
  const auto labels = rmwe_bio_labels(corpus, affixes, dict);
  REQUIRE(labels.size() == 2);
  CHECK(labels[0] == std::vector<std::string>{"B-RMWE", "I-RMWE", "O"});
  CHECK(labels[1] == std::vector<std::string>{"O"});
}
