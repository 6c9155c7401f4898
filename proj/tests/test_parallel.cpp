#include <doctest.h>

#include <random>
#include <sstream>

#include "forge/decontam.hpp"
#include "forge/dedup.hpp"
#include "forge/filtering.hpp"
#include "forge/tokeval.hpp"

using namespace forge;

namespace {

std::vector<Document> mixed_corpus(std::size_t count) {
    const std::vector<std::string> vocab = {"tempo", "casa", "livro", "cidade", "escola",
                                            "que",   "para", "com",  "uma",   "sobre"};
    std::mt19937_64 rng(77);
    std::uniform_int_distribution<std::size_t> pick(0, vocab.size() - 1);
    std::uniform_int_distribution<int> len(10, 60);
    std::vector<Document> docs(count);
    for (std::size_t i = 0; i < count; ++i) {
        std::ostringstream text;
        const int words = len(rng);
        for (int w = 0; w < words; ++w) {
            if (w) text << ' ';
            text << vocab[pick(rng)];
        }
        docs[i].id = "d" + std::to_string(i);
        docs[i].text = text.str();
    }
    return docs;
}

}  // namespace

TEST_CASE("parallel minhash signatures equal the serial reference") {
    const auto docs = mixed_corpus(300);
    const MinHashParams params;
    const auto serial = compute_signatures_serial(docs, params);
    for (const int threads : {1, 2, 4, 8}) {
        CHECK(compute_signatures(docs, params, threads) == serial);
    }
}

TEST_CASE("parallel quality verdicts equal the serial reference") {
    const auto docs = mixed_corpus(300);
    FilterConfig cfg;
    cfg.stop_words = {"que", "para", "com", "uma", "sobre"};
    const auto serial = batch_quality_verdicts_serial(docs, cfg);
    for (const int threads : {1, 3, 7}) {
        const auto parallel = batch_quality_verdicts(docs, cfg, threads);
        REQUIRE(parallel.size() == serial.size());
        for (std::size_t i = 0; i < serial.size(); ++i) {
            CHECK(parallel[i].passed == serial[i].passed);
            CHECK(parallel[i].rule == serial[i].rule);
            CHECK(parallel[i].measurements == serial[i].measurements);
        }
    }
}

TEST_CASE("parallel contamination checks equal the serial reference") {
    const auto docs = mixed_corpus(200);
    std::vector<std::string> pieces = {"tempo", "casa", "livro", "cidade", "escola",
                                       "que",   "para", "com",  "uma",   "sobre"};
    for (char c = 'a'; c <= 'z'; ++c) pieces.push_back(std::string(1, c));
    const auto tok = ReferenceTokenizer::from_pieces(pieces);
    std::vector<std::string> bench;
    for (int i = 0; i < 20; ++i) bench.push_back(docs[static_cast<std::size_t>(i)].text);
    const auto index = build_index(bench, tok, 8, 16);
    const auto serial = check_batch_serial(docs, index, tok, MatchMode::kApproximate);
    for (const int threads : {2, 5}) {
        const auto parallel = check_batch(docs, index, tok, MatchMode::kApproximate, threads);
        REQUIRE(parallel.size() == serial.size());
        for (std::size_t i = 0; i < serial.size(); ++i) {
            CHECK(parallel[i].contaminated == serial[i].contaminated);
            CHECK(parallel[i].longest_match_len == serial[i].longest_match_len);
            CHECK(parallel[i].matched_span == serial[i].matched_span);
        }
    }
}

TEST_CASE("parallel tokenizer evaluation equals the serial reference") {
    const auto docs = mixed_corpus(400);
    std::vector<std::string> corpus;
    corpus.reserve(docs.size());
    for (const auto& d : docs) corpus.push_back(d.text);
    std::vector<std::string> pieces;
    for (char c = 'a'; c <= 'z'; ++c) pieces.push_back(std::string(1, c));
    pieces.insert(pieces.end(), {"tem", "po", "ca", "sa", "que"});
    const auto tok = ReferenceTokenizer::from_pieces(pieces);
    const auto serial = evaluate_tokenizer_serial(corpus, tok);
    for (const int threads : {2, 4}) {
        const auto parallel = evaluate_tokenizer(corpus, tok, threads);
        CHECK(parallel.word_count == serial.word_count);
        CHECK(parallel.token_count == serial.token_count);
        CHECK(parallel.char_count == serial.char_count);
        CHECK(parallel.continued_word_count == serial.continued_word_count);
    }
}
