#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace forge {

// Per-document quality annotations. Scores are produced upstream (learned
// annotators); this library only consumes them.
struct DocumentScores {
    std::optional<int> edu_int_score;            // 1..5
    std::optional<int> toxicity_score;           // 1..5
    std::optional<double> language_confidence;   // [0,1]

    bool operator==(const DocumentScores&) const = default;
};

// One corpus record. Immutable after parse by convention; transforms return
// new documents.
struct Document {
    std::string id;
    std::string text;
    std::string source;
    std::optional<std::int64_t> token_count;
    DocumentScores scores;

    bool operator==(const Document&) const = default;
};

struct CorpusStats {
    std::int64_t document_count = 0;
    std::int64_t total_tokens = 0;
    std::int64_t educational_tokens = 0;
    std::int64_t excluded_count = 0;

    CorpusStats& operator+=(const CorpusStats& o) {
        document_count += o.document_count;
        total_tokens += o.total_tokens;
        educational_tokens += o.educational_tokens;
        excluded_count += o.excluded_count;
        return *this;
    }
    friend CorpusStats operator+(CorpusStats a, const CorpusStats& b) { return a += b; }
    bool operator==(const CorpusStats&) const = default;
};

// Counts tokens, educational tokens (edu_int_score >= edu_threshold) and
// excluded documents (toxicity_score > toxicity_threshold). Documents
// without the relevant fields count toward totals only.
CorpusStats corpus_stats(std::span<const Document> docs, int edu_threshold,
                         int toxicity_threshold = 3);

}  // namespace forge
