// Micro-benchmark comparing the serial reference kernels against their
// OpenMP counterparts on synthetic corpora: MinHash signatures, quality
// verdicts, contamination checks and tokenizer evaluation.
//
//   bench_kernels [doc_count] [threads]

#include <omp.h>

#include <chrono>
#include <cstdlib>
#include <iomanip>
#include <iostream>
#include <random>
#include <sstream>
#include <vector>

#include "forge/decontam.hpp"
#include "forge/dedup.hpp"
#include "forge/filtering.hpp"
#include "forge/tokenizer.hpp"
#include "forge/tokeval.hpp"

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

std::vector<forge::Document> synthetic_corpus(std::size_t count, std::mt19937_64& rng) {
    const std::vector<std::string> vocab = {
        "tempo", "casa",  "livro",  "cidade", "escola", "trabalho", "pessoa", "mundo",
        "dia",   "noite", "palavra", "texto",  "dado",   "modelo",   "rede",   "sinal",
        "que",   "para",  "com",    "uma",    "sobre",  "entre",    "quando", "porque"};
    std::uniform_int_distribution<std::size_t> pick(0, vocab.size() - 1);
    std::uniform_int_distribution<int> len(80, 240);
    std::vector<forge::Document> docs(count);
    for (std::size_t i = 0; i < count; ++i) {
        std::ostringstream text;
        const int words = len(rng);
        for (int w = 0; w < words; ++w) {
            if (w) text << ' ';
            text << vocab[pick(rng)];
            if (w % 12 == 11) text << '.';
        }
        docs[i].id = "doc-" + std::to_string(i);
        docs[i].text = text.str();
    }
    return docs;
}

void report(const std::string& kernel, double serial_s, double parallel_s, int threads) {
    std::cout << std::left << std::setw(24) << kernel << std::right << std::fixed
              << std::setprecision(3) << std::setw(10) << serial_s << " s" << std::setw(10)
              << parallel_s << " s" << std::setw(9) << std::setprecision(2)
              << (parallel_s > 0 ? serial_s / parallel_s : 0.0) << "x  (" << threads
              << " threads)\n";
}

}  // namespace

int main(int argc, char** argv) {
    const std::size_t count = argc > 1 ? std::strtoull(argv[1], nullptr, 10) : 4000;
    const int threads = argc > 2 ? std::atoi(argv[2]) : omp_get_max_threads();

    std::mt19937_64 rng(42);
    const auto docs = synthetic_corpus(count, rng);
    std::cout << "documents: " << count << "\n\n";
    std::cout << std::left << std::setw(24) << "kernel" << std::right << std::setw(12) << "serial"
              << std::setw(12) << "parallel" << std::setw(12) << "speedup\n";

    {
        forge::MinHashParams params;
        auto t0 = Clock::now();
        const auto serial = forge::compute_signatures_serial(docs, params);
        const double ts = seconds_since(t0);
        t0 = Clock::now();
        const auto parallel = forge::compute_signatures(docs, params, threads);
        const double tp = seconds_since(t0);
        if (serial != parallel) {
            std::cerr << "FATAL: minhash kernels disagree\n";
            return 1;
        }
        report("minhash_signatures", ts, tp, threads);
    }

    {
        forge::FilterConfig cfg;
        cfg.stop_words = {"que", "para", "com", "uma", "sobre"};
        auto t0 = Clock::now();
        const auto serial = forge::batch_quality_verdicts_serial(docs, cfg);
        const double ts = seconds_since(t0);
        t0 = Clock::now();
        const auto parallel = forge::batch_quality_verdicts(docs, cfg, threads);
        const double tp = seconds_since(t0);
        for (std::size_t i = 0; i < serial.size(); ++i) {
            if (serial[i].passed != parallel[i].passed || serial[i].rule != parallel[i].rule) {
                std::cerr << "FATAL: filter kernels disagree\n";
                return 1;
            }
        }
        report("quality_verdicts", ts, tp, threads);
    }

    {
        std::vector<std::string> pieces;
        for (char a = 'a'; a <= 'z'; ++a) pieces.push_back(std::string(1, a));
        pieces.insert(pieces.end(), {"tempo", "casa", "livro", "cidade", "escola", "que", "para",
                                     "com", ".", ","});
        const auto tokenizer = forge::ReferenceTokenizer::from_pieces(pieces);
        std::vector<std::string> bench_texts;
        for (int i = 0; i < 50; ++i) {
            bench_texts.push_back(docs[static_cast<std::size_t>(i)].text.substr(0, 200));
        }
        const auto index = forge::build_index(bench_texts, tokenizer, 8, 16);
        auto t0 = Clock::now();
        const auto serial =
            forge::check_batch_serial(docs, index, tokenizer, forge::MatchMode::kApproximate);
        const double ts = seconds_since(t0);
        t0 = Clock::now();
        const auto parallel =
            forge::check_batch(docs, index, tokenizer, forge::MatchMode::kApproximate, threads);
        const double tp = seconds_since(t0);
        for (std::size_t i = 0; i < serial.size(); ++i) {
            if (serial[i].contaminated != parallel[i].contaminated) {
                std::cerr << "FATAL: decontam kernels disagree\n";
                return 1;
            }
        }
        report("contamination_checks", ts, tp, threads);
    }

    {
        std::vector<std::string> pieces;
        for (char a = 'a'; a <= 'z'; ++a) pieces.push_back(std::string(1, a));
        pieces.insert(pieces.end(), {"tem", "po", "ca", "sa", "li", "vro", "es", "cola", "que"});
        const auto tokenizer = forge::ReferenceTokenizer::from_pieces(pieces);
        std::vector<std::string> corpus;
        corpus.reserve(docs.size());
        for (const auto& d : docs) corpus.push_back(d.text);
        auto t0 = Clock::now();
        const auto serial = forge::evaluate_tokenizer_serial(corpus, tokenizer);
        const double ts = seconds_since(t0);
        t0 = Clock::now();
        const auto parallel = forge::evaluate_tokenizer(corpus, tokenizer, threads);
        const double tp = seconds_since(t0);
        if (serial.word_count != parallel.word_count ||
            serial.token_count != parallel.token_count) {
            std::cerr << "FATAL: tokeval kernels disagree\n";
            return 1;
        }
        report("tokenizer_eval", ts, tp, threads);
    }

    return 0;
}
