#include <doctest.h>

#include <random>
#include <sstream>

#include "forge/tokeval.hpp"

using namespace forge;

namespace {

const ModelShape kSmallModelShape{28, 1536, 4096, 49152, std::nullopt};

ReferenceTokenizer subword_tokenizer() {
    // single letters as fallback plus common syllables and words
    std::vector<std::string> pieces;
    for (char c = 'a'; c <= 'z'; ++c) pieces.push_back(std::string(1, c));
    for (const char* p : {"á", "â", "ã", "ç", "é", "ê", "í", "ó", "ô", "õ", "ú", ".", ",", "!",
                          "?", ";", ":"}) {
        pieces.push_back(p);
    }
    for (const char* p : {"de",  "ra",  "es",  "os",  "as",  "do",  "da",  "en",  "que", "ção",
                          "com", "para", "uma", "não", "mais", "ões", "mente", "tra", "pre",
                          "casa", "tempo", "cidade", "pessoa", "trabalho", "governo", "ano",
                          "dia", "vida", "parte", "grupo", "mundo", "caso", "lugar"}) {
        pieces.push_back(p);
    }
    return ReferenceTokenizer::from_pieces(pieces);
}

std::vector<std::string> synthetic_portuguese_corpus(std::size_t target_words) {
    static const std::vector<std::string> words = {
        "casa",     "tempo",    "cidade",   "pessoa",  "trabalho", "governo", "ano",
        "vida",     "parte",    "grupo",    "mundo",   "caso",     "lugar",   "que",
        "para",     "uma",      "não",      "mais",    "formação", "presente", "madeira",
        "estrada",  "prédio",   "janela",   "caderno", "história", "região",  "música",
        "problema", "resultado"};
    std::mt19937_64 rng(2024);
    std::uniform_int_distribution<std::size_t> pick(0, words.size() - 1);
    std::vector<std::string> docs;
    std::size_t produced = 0;
    while (produced < target_words) {
        std::ostringstream text;
        const std::size_t in_doc = std::min<std::size_t>(200, target_words - produced);
        for (std::size_t w = 0; w < in_doc; ++w) {
            if (w) text << ' ';
            text << words[pick(rng)];
            if (w % 13 == 12) text << '.';
        }
        produced += in_doc;
        docs.push_back(text.str());
    }
    return docs;
}

class OneTokenPerWord : public TokenizerAdapter {
  public:
    std::vector<TokenId> encode(std::string_view text) const override {
        std::vector<TokenId> out;
        bool in_word = false;
        for (const char c : text) {
            const bool ws = c == ' ' || c == '\t' || c == '\n';
            if (!ws && !in_word) out.push_back(1);
            in_word = !ws;
        }
        return out;
    }
    std::size_t vocab_size() const override { return 2; }
    std::uint64_t fingerprint() const override { return 1; }
};

}  // namespace

TEST_CASE("one token per word: fertility 1, pcw 0") {
    const std::vector<std::string> corpus = {"três palavras aqui", "mais duas"};
    const auto report = evaluate_tokenizer_serial(corpus, OneTokenPerWord{});
    CHECK(report.word_count == 5);
    CHECK(report.fertility() == doctest::Approx(1.0));
    CHECK(report.pcw() == doctest::Approx(0.0));
}

TEST_CASE("two words at 1 and 3 tokens: fertility 2, pcw 0.5") {
    // "de" is one piece; "xyzk" falls back to characters
    const auto tok = ReferenceTokenizer::from_pieces({"de", "x", "y", "zk"});
    const std::vector<std::string> corpus = {"de xyzk"};
    const auto report = evaluate_tokenizer_serial(corpus, tok);
    CHECK(report.word_count == 2);
    CHECK(report.token_count == 4);
    CHECK(report.fertility() == doctest::Approx(2.0));
    CHECK(report.pcw() == doctest::Approx(0.5));
}

TEST_CASE("600k-word corpus matches an independent per-word recount") {
    const auto corpus = synthetic_portuguese_corpus(600000);
    const auto tok = subword_tokenizer();
    const auto report = evaluate_tokenizer(corpus, tok);
    CHECK(report.word_count == 600000);

    // oracle: naive recount, word by word
    std::int64_t words = 0, tokens = 0;
    for (const auto& text : corpus) {
        std::istringstream in(text);
        std::string word;
        while (in >> word) {
            ++words;
            tokens += static_cast<std::int64_t>(tok.encode(word).size());
        }
    }
    const double oracle_fertility = static_cast<double>(tokens) / static_cast<double>(words);
    CHECK(report.word_count == words);
    CHECK(report.fertility() == doctest::Approx(oracle_fertility).epsilon(0.01 / oracle_fertility));
    CHECK(report.fertility() >= 1.0);  // greedy reference tokenizer never merges across words
    CHECK(report.pcw() <= 1.0);
}

TEST_CASE("empty corpus and empty encode") {
    CHECK_THROWS_AS(evaluate_tokenizer_serial({}, OneTokenPerWord{}), std::invalid_argument);
    const std::vector<std::string> blank = {"   ", "\n"};
    CHECK_THROWS_AS(evaluate_tokenizer_serial(blank, OneTokenPerWord{}), std::invalid_argument);
    CHECK(subword_tokenizer().encode("").empty());
}

TEST_CASE("training cost reproduces the published table rows within 1%") {
    // 0.6B-class shape on 500 base units of 1e9 words
    const double compact_cost = training_cost(kSmallModelShape, 5e11, 1.51);
    CHECK(compact_cost == doctest::Approx(7.26e21).epsilon(0.01));

    ModelShape large_vocab = kSmallModelShape;
    large_vocab.vocab = 151669;
    const double large_vocab_cost = training_cost(large_vocab, 5e11, 1.93);
    CHECK(large_vocab_cost == doctest::Approx(1.02e22).epsilon(0.01));
}

TEST_CASE("training cost hand-evaluated micro case is exact") {
    const ModelShape tiny{1, 16, 8, 32, std::nullopt};
    CHECK(training_cost(tiny, 1000.0, 1.0) == doctest::Approx(29696000.0).epsilon(1e-12));
    CHECK(per_token_training_cost(tiny) == doctest::Approx(29696.0).epsilon(1e-12));
}

TEST_CASE("training cost is linear and monotone in shape") {
    const double base = training_cost(kSmallModelShape, 1e9, 1.5);
    CHECK(training_cost(kSmallModelShape, 2e9, 1.5) == doctest::Approx(2.0 * base));
    CHECK(training_cost(kSmallModelShape, 1e9, 3.0) == doctest::Approx(2.0 * base));
    for (const auto& bigger :
         {ModelShape{29, 1536, 4096, 49152, std::nullopt}, ModelShape{28, 2048, 4096, 49152, std::nullopt},
          ModelShape{28, 1536, 8192, 49152, std::nullopt}, ModelShape{28, 1536, 4096, 65536, std::nullopt}}) {
        CHECK(training_cost(bigger, 1e9, 1.5) > base);
    }
    CHECK_THROWS_AS(training_cost({0, 1, 1, 1, std::nullopt}, 1.0, 1.0), std::domain_error);
}

TEST_CASE("compare_tokenizers reproduces the published savings") {
    TokenizerReport compact;
    compact.word_count = 600000;
    compact.token_count = 906000;  // fertility 1.51
    compact.char_count = 2609280;
    compact.vocab_size = 49152;
    TokenizerReport large_vocab;
    large_vocab.word_count = 600000;
    large_vocab.token_count = 1158000;  // fertility 1.93
    large_vocab.char_count = 2609280;
    large_vocab.vocab_size = 151669;

    const std::vector<std::pair<std::string, TokenizerReport>> reports = {{"compact", compact},
                                                                          {"large-vocab", large_vocab}};
    const auto rows = compare_tokenizers(reports, kSmallModelShape, 5e11);
    REQUIRE(rows.size() == 2);
    CHECK(rows[0].name == "compact");  // lowest fertility first
    const double s = savings(rows[0], rows[1]);
    CHECK(s == doctest::Approx(0.2876).epsilon(0.005));
    CHECK(std::lround(s * 100.0) == 29);
    CHECK(rows[0].savings_vs_most_expensive == doctest::Approx(s));
    CHECK(rows[1].savings_vs_most_expensive == doctest::Approx(0.0));
}

TEST_CASE("identical reports have zero savings; fertility ratio drives cost") {
    TokenizerReport a;
    a.word_count = 100;
    a.token_count = 200;  // fertility 2
    a.vocab_size = 1000;
    TokenizerReport b = a;
    b.token_count = 100;  // fertility 1

    const std::vector<std::pair<std::string, TokenizerReport>> same = {{"x", a}, {"y", a}};
    const auto rows_same = compare_tokenizers(same, kSmallModelShape, 1e6);
    CHECK(savings(rows_same[0], rows_same[1]) == doctest::Approx(0.0));

    const std::vector<std::pair<std::string, TokenizerReport>> mixed = {{"slow", a}, {"fast", b}};
    const auto rows = compare_tokenizers(mixed, kSmallModelShape, 1e6);
    CHECK(rows[0].name == "fast");
    CHECK(rows[1].cost_flops / rows[0].cost_flops == doctest::Approx(2.0));
}

TEST_CASE("ranking is invariant to corpus scaling") {
    std::mt19937_64 rng(5);
    std::vector<std::pair<std::string, TokenizerReport>> reports;
    for (int i = 0; i < 4; ++i) {
        TokenizerReport r;
        r.word_count = 1000 + static_cast<std::int64_t>(rng() % 1000);
        r.token_count = r.word_count + static_cast<std::int64_t>(rng() % (2 * r.word_count));
        r.char_count = 5 * r.word_count;
        r.vocab_size = 30000 + rng() % 100000;
        reports.emplace_back("tok" + std::to_string(i), r);
    }
    auto scaled = reports;
    for (auto& [name, r] : scaled) {
        r.word_count *= 7;
        r.token_count *= 7;
        r.char_count *= 7;
        r.continued_word_count *= 7;
    }
    const auto rows_a = compare_tokenizers(reports, kSmallModelShape, 1e9);
    const auto rows_b = compare_tokenizers(scaled, kSmallModelShape, 1e9);
    for (std::size_t i = 0; i < rows_a.size(); ++i) CHECK(rows_a[i].name == rows_b[i].name);
}

TEST_CASE("duplicate names are rejected") {
    TokenizerReport r;
    r.word_count = 10;
    r.token_count = 15;
    r.vocab_size = 100;
    const std::vector<std::pair<std::string, TokenizerReport>> dup = {{"x", r}, {"x", r}};
    CHECK_THROWS_AS(compare_tokenizers(dup, kSmallModelShape, 1e6), std::invalid_argument);
}

TEST_CASE("report merging sums counts") {
    const auto tok = subword_tokenizer();
    const auto corpus = synthetic_portuguese_corpus(5000);
    const std::vector<std::string> first(corpus.begin(), corpus.begin() + 10);
    const std::vector<std::string> rest(corpus.begin() + 10, corpus.end());
    auto merged = *evaluate_chunk(first, tok);
    merged += *evaluate_chunk(rest, tok);
    const auto whole = evaluate_tokenizer_serial(corpus, tok);
    CHECK(merged.word_count == whole.word_count);
    CHECK(merged.token_count == whole.token_count);
    CHECK(merged.char_count == whole.char_count);
    CHECK(merged.continued_word_count == whole.continued_word_count);
}
