#include <cmath>
#include <filesystem>
#include <random>

#include "doctest.h"

#include "actrec/common/error.h"
#include "actrec/common/text_io.h"
#include "actrec/corpus/lexicon.h"
#include "actrec/corpus/script_corpus.h"
#include "actrec/corpus/tokenize.h"
#include "actrec/corpus/vocab.h"
#include "actrec/corpus/weights.h"

using namespace actrec::corpus;
namespace fs = std::filesystem;

namespace {

TokenList toks(std::initializer_list<const char*> words) { return TokenList(words.begin(), words.end()); }

// Independent count for single-token labels.
std::size_t naive_count(const std::string& word, const TokenList& doc) {
  return static_cast<std::size_t>(std::count(doc.begin(), doc.end(), word));
}

}  // namespace

TEST_CASE("tokenize_document normalizes case, punctuation and hyphens") {
  CHECK(tokenize_document("Wash the cucumber.") == toks({"wash", "the", "cucumber"}));
  CHECK(tokenize_document("cutting-board") == toks({"cutting", "board"}));
  CHECK(tokenize_document("").empty());
  CHECK(tokenize_document("  (Peel) it!  Don't stop; ok?") == toks({"peel", "it", "dont", "stop", "ok"}));
  CHECK(tokenize_document("a--b - c") == toks({"a", "b", "c"}));
}

TEST_CASE("vocab normalizes labels and rejects duplicates") {
  AttributeVocab v;
  v.add("Cutting-Board", AttributeKind::kObject);
  v.add("cut  apart", AttributeKind::kActivity);
  CHECK(v[0].label == "cutting board");
  CHECK(v[1].label == "cut apart");
  CHECK(v.find("cutting   board") == 0);
  CHECK(v.find("knife") == -1);
  CHECK_THROWS_AS(v.add("cutting board", AttributeKind::kActivity), actrec::ValidationError);
  CHECK(v.label_tokens(1) == toks({"cut", "apart"}));
}

TEST_CASE("match_count literal and synonym examples") {
  SynonymLexicon lex;
  lex.add("wash", PartOfSpeech::kVerb, {"rinse"});
  CHECK(match_count(toks({"cucumber"}), AttributeKind::kObject,
                    toks({"wash", "the", "cucumber", "peel", "the", "cucumber"}), lex, MatchMode::kLiteral) == 2);
  CHECK(match_count(toks({"cut", "apart"}), AttributeKind::kActivity, toks({"cut", "apart", "the", "bun"}), lex,
                    MatchMode::kLiteral) == 1);
  CHECK(match_count(toks({"wash"}), AttributeKind::kActivity, toks({"rinse", "then", "wash"}), lex,
                    MatchMode::kSynonym) == 2);
  // Literal mode ignores the lexicon.
  CHECK(match_count(toks({"wash"}), AttributeKind::kActivity, toks({"rinse", "then", "wash"}), lex,
                    MatchMode::kLiteral) == 1);
}

TEST_CASE("synonym matching respects part of speech and absent headwords") {
  SynonymLexicon lex;
  lex.add("wash", PartOfSpeech::kNoun, {"rinse"});
  // Noun synonyms never apply to an activity label.
  CHECK(match_count(toks({"wash"}), AttributeKind::kActivity, toks({"rinse", "wash"}), lex,
                    MatchMode::kSynonym) == 1);
  // Unknown headword degrades to literal.
  CHECK(match_count(toks({"peel"}), AttributeKind::kActivity, toks({"peel", "peel"}), lex,
                    MatchMode::kSynonym) == 2);
}

TEST_CASE("overlapping n-gram occurrences are counted once per token position") {
  SynonymLexicon lex;
  lex.add("b", PartOfSpeech::kNoun, {"b x b", "x"});
  // "b x b" spans all three positions; the best disjoint cover uses b, x, b.
  CHECK(match_count(toks({"b"}), AttributeKind::kObject, toks({"b", "x", "b"}), lex, MatchMode::kSynonym) == 3);
  CHECK(match_count(toks({"a", "a"}), AttributeKind::kObject, toks({"a", "a", "a"}), lex, MatchMode::kLiteral) == 1);
}

TEST_CASE("match_count properties on random token lists") {
  std::mt19937 rng(7);
  const std::vector<std::string> alphabet{"a", "b", "c", "d"};
  SynonymLexicon lex;
  lex.add("a b", PartOfSpeech::kVerb, {"c", "b a", "d d"});
  lex.add("c", PartOfSpeech::kVerb, {"a b c"});
  std::uniform_int_distribution<int> pick(0, 3), len(0, 30);
  for (int trial = 0; trial < 500; ++trial) {
    TokenList doc;
    for (int k = len(rng); k > 0; --k) doc.push_back(alphabet[pick(rng)]);
    for (const auto& label : {toks({"a", "b"}), toks({"c"})}) {
      std::size_t lit = match_count(label, AttributeKind::kActivity, doc, lex, MatchMode::kLiteral);
      std::size_t syn = match_count(label, AttributeKind::kActivity, doc, lex, MatchMode::kSynonym);
      CHECK(lit <= syn);
      TokenList longer = doc;
      longer.push_back(alphabet[pick(rng)]);
      CHECK(match_count(label, AttributeKind::kActivity, longer, lex, MatchMode::kLiteral) >= lit);
      CHECK(match_count(label, AttributeKind::kActivity, longer, lex, MatchMode::kSynonym) >= syn);
    }
  }
}

TEST_CASE("build_documents concatenates in sequence order") {
  ScriptCorpus corpus;
  corpus.add_sequence("z", {"a b", "c"});
  corpus.add_sequence("z", {"d"});
  corpus.add_sequence("y", {"only step"});
  auto docs = build_documents(corpus);
  CHECK(docs.at("z") == toks({"a", "b", "c", "d"}));
  CHECK(docs.at("y") == toks({"only", "step"}));

  ScriptCorpus two;
  two.add_sequence("q", {"s1 x", "s2 y"});
  two.add_sequence("q", {"s3", "s4"});
  CHECK(build_documents(two).at("q") == toks({"s1", "x", "s2", "y", "s3", "s4"}));
}

TEST_CASE("script corpus rejects empty sequences and round-trips through disk") {
  ScriptCorpus corpus;
  CHECK_THROWS_AS(corpus.add_sequence("z", {"", "  ", "..."}), actrec::ValidationError);
  corpus.add_sequence("preparing cucumber", {"Wash the cucumber.", "", "Peel the cucumber"});
  corpus.add_sequence("preparing cucumber", {"get a cutting-board"});
  auto dir = fs::temp_directory_path() / "actrec_corpus_test";
  fs::remove_all(dir);
  corpus.save(dir);
  auto loaded = ScriptCorpus::load(dir);
  CHECK(build_documents(loaded) == build_documents(corpus));
  CHECK(loaded.num_sequences() == 2);
  fs::remove_all(dir);
}

TEST_CASE("freq weights match a brute-force count on a 3x2 corpus") {
  AttributeVocab vocab;
  vocab.add("cucumber", AttributeKind::kObject);
  vocab.add("peel", AttributeKind::kActivity);
  DocumentSet docs{{"c1", toks({"peel", "the", "cucumber", "cucumber"})},
                   {"c2", toks({"wash", "cucumber"})},
                   {"c3", toks({"peel", "peel", "peel", "carrot"})}};
  auto w = freq_weights(docs, vocab, SynonymLexicon{}, MatchMode::kLiteral);
  REQUIRE(w.rows() == 3);
  long z = 0;
  for (const auto& [id, doc] : docs) {
    CHECK(w.row_labels[z] == id);
    CHECK(w.values(z, 0) == naive_count("cucumber", doc));
    CHECK(w.values(z, 1) == naive_count("peel", doc));
    ++z;
  }
  AttributeVocab single;
  single.add("knife", AttributeKind::kObject);
  CHECK(freq_weights(docs, single, SynonymLexicon{}, MatchMode::kLiteral).values.sum() == 0.0);
}

TEST_CASE("tf*idf follows freq * ln(|D|/df)") {
  AttributeVocab vocab;
  vocab.add("cucumber", AttributeKind::kObject);
  vocab.add("the", AttributeKind::kObject);
  vocab.add("knife", AttributeKind::kObject);
  DocumentSet docs{{"d1", toks({"cucumber", "the", "cucumber", "cucumber", "cucumber"})},
                   {"d2", toks({"cucumber", "the"})},
                   {"d3", toks({"the", "bread"})}};
  auto w = tfidf_weights(docs, vocab, SynonymLexicon{}, MatchMode::kLiteral);
  CHECK(std::abs(w.values(0, 0) - 4.0 * std::log(1.5)) < 1e-12);
  CHECK(std::abs(w.values(0, 0) - 1.6219) < 1e-4);
  CHECK(w.values(1, 0) == doctest::Approx(std::log(1.5)).epsilon(1e-14));
  CHECK(w.values(2, 0) == 0.0);
  CHECK(w.values.col(1).isZero(0.0));  // present everywhere: idf = 0
  CHECK(w.values.col(2).isZero(0.0));  // present nowhere: guard
}

TEST_CASE("tf*idf properties") {
  std::mt19937 rng(11);
  const std::vector<std::string> words{"a", "b", "c", "d", "e"};
  AttributeVocab vocab;
  for (const auto& w : words) vocab.add(w, AttributeKind::kObject);
  std::uniform_int_distribution<int> pick(0, 4), len(1, 20), ndocs(1, 5), scale(2, 4);
  for (int trial = 0; trial < 200; ++trial) {
    DocumentSet docs;
    int nd = ndocs(rng);
    for (int d = 0; d < nd; ++d) {
      TokenList doc;
      for (int k = len(rng); k > 0; --k) doc.push_back(words[pick(rng)]);
      docs["d" + std::to_string(d)] = doc;
    }
    auto freq = freq_weights(docs, vocab, SynonymLexicon{}, MatchMode::kLiteral);
    auto tfidf = tfidf_weights(docs, vocab, SynonymLexicon{}, MatchMode::kLiteral);
    CHECK(((freq.values.array() == 0.0) <= (tfidf.values.array() == 0.0)).all());
    if (nd == 1) CHECK(tfidf.values.isZero(0.0));

    // Repeating a document c times scales its frequencies by c.
    int c = scale(rng);
    DocumentSet scaled = docs;
    TokenList rep;
    for (int k = 0; k < c; ++k) rep.insert(rep.end(), docs["d0"].begin(), docs["d0"].end());
    scaled["d0"] = rep;
    auto tfidf2 = tfidf_weights(scaled, vocab, SynonymLexicon{}, MatchMode::kLiteral);
    CHECK((tfidf2.values.row(0) - c * tfidf.values.row(0)).cwiseAbs().maxCoeff() < 1e-12);
    auto n1 = normalize_l1(tfidf), n2 = normalize_l1(tfidf2);
    CHECK((n1.values - n2.values).cwiseAbs().maxCoeff() < 1e-12);
  }
}

TEST_CASE("normalize_l1 and binarize_weights") {
  WeightMatrix w;
  w.values.resize(3, 3);
  w.values << 2, 0, 3, 0, 0, 0, 0, 0, 7;
  w.row_labels = {"a", "b", "c"};
  w.col_labels = {"x", "y", "z"};
  auto n = normalize_l1(w);
  CHECK(n.normalized);
  CHECK(n.values(0, 0) == doctest::Approx(0.4));
  CHECK(n.values(0, 2) == doctest::Approx(0.6));
  CHECK(n.values.row(1).isZero(0.0));
  CHECK(n.empty_row_ids() == std::vector<std::string>{"b"});
  auto again = normalize_l1(n);
  CHECK((again.values - n.values).cwiseAbs().maxCoeff() < 1e-15);

  auto b = binarize_weights(n);
  CHECK(b.values(0, 0) == 0.5);
  CHECK(b.values(0, 2) == 0.5);
  CHECK(b.values(2, 2) == 1.0);
  CHECK(b.empty_row_ids() == std::vector<std::string>{"b"});
  CHECK(binarize_weights(b).values == b.values);

  WeightMatrix u;
  u.values = Eigen::MatrixXd::Ones(1, 4);
  u.row_labels = {"u"};
  u.col_labels = {"1", "2", "3", "4"};
  CHECK(normalize_l1(u).values.isApprox(Eigen::MatrixXd::Constant(1, 4, 0.25)));

  WeightMatrix bad = u;
  bad.values(0, 1) = -1;
  CHECK_THROWS_AS(normalize_l1(bad), actrec::ValidationError);
}

TEST_CASE("weight CSV uses nine significant digits") {
  WeightMatrix w;
  w.values.resize(1, 2);
  w.values << 1.0 / 3.0, 0.0;
  w.row_labels = {"making tea"};
  w.col_labels = {"pour", "kettle"};
  auto path = fs::temp_directory_path() / "actrec_w.csv";
  w.save_csv(path);
  auto lines = actrec::io::read_lines(path);
  CHECK(lines[0] == "composite,pour,kettle");
  CHECK(lines[1] == "making tea,0.333333333,0");
  auto back = WeightMatrix::load_csv(path);
  CHECK(back.values(0, 0) == doctest::Approx(1.0 / 3.0).epsilon(1e-9));
  fs::remove(path);
}

TEST_CASE("lexicon file format") {
  auto path = fs::temp_directory_path() / "actrec_lex.tsv";
  actrec::io::write_file(path, "wash\tverb\trinse,clean,rinse\nboard\tnoun\tcutting board\n");
  auto lex = SynonymLexicon::load(path);
  CHECK(lex.synonyms("wash", PartOfSpeech::kVerb) == std::vector<std::string>{"rinse", "clean"});
  CHECK(lex.synonyms("board", PartOfSpeech::kNoun) == std::vector<std::string>{"cutting board"});
  CHECK(lex.synonyms("board", PartOfSpeech::kVerb).empty());
  actrec::io::write_file(path, "wash\tverb\trinse\nwash\tverb\tclean\n");
  CHECK_THROWS_AS(SynonymLexicon::load(path), actrec::ValidationError);
  fs::remove(path);
}
