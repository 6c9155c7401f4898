#pragma once

#include <cstddef>
#include <cstdint>
#include <istream>
#include <memory>
#include <optional>
#include <ostream>
#include <span>
#include <stdexcept>
#include <string>
#include <unordered_set>
#include <vector>

#include "forge/document.hpp"

namespace forge {

// Maps the canonical field names onto whatever a given dump calls them.
struct SchemaMap {
    std::string id = "id";
    std::string text = "text";
    std::string source = "source";
    std::string token_count = "token_count";
    std::string edu_int_score = "edu_int_score";
    std::string toxicity_score = "toxicity_score";
    std::string language_confidence = "language_confidence";
};

struct LineError {
    std::size_t line = 0;  // 1-based physical line number
    std::string message;
};

// Thrown when the per-line error count exceeds the configured cap.
class TooManyErrors : public std::runtime_error {
  public:
    explicit TooManyErrors(std::size_t cap)
        : std::runtime_error("aborting after " + std::to_string(cap) + " malformed lines") {}
};

class FatalIoError : public std::runtime_error {
  public:
    FatalIoError(const std::string& what, std::uint64_t partial_count)
        : std::runtime_error(what + " (records written so far: " + std::to_string(partial_count) + ")"),
          partial_count_(partial_count) {}
    std::uint64_t partial_count() const { return partial_count_; }

  private:
    std::uint64_t partial_count_;
};

// Opens a file for reading; gzip input is detected by its magic bytes and
// decompressed transparently.
std::unique_ptr<std::istream> open_input(const std::string& path);

// Test/CLI helper for producing gzip fixtures.
std::string gzip_compress(std::string_view data);

// Streaming JSONL reader. Malformed lines are collected (with their line
// number) and skipped; after `error_cap` collected errors the reader aborts
// with TooManyErrors.
class DocumentReader {
  public:
    explicit DocumentReader(std::unique_ptr<std::istream> in, SchemaMap schema = {},
                            std::size_t error_cap = 1000);
    DocumentReader(std::istream& in, SchemaMap schema = {}, std::size_t error_cap = 1000);

    static DocumentReader open(const std::string& path, SchemaMap schema = {},
                               std::size_t error_cap = 1000);

    std::optional<Document> next();
    std::vector<Document> read_all();

    const std::vector<LineError>& errors() const { return errors_; }
    std::size_t lines_read() const { return line_; }

  private:
    std::unique_ptr<std::istream> owned_;
    std::istream* in_;
    SchemaMap schema_;
    std::size_t error_cap_;
    std::size_t line_ = 0;
    std::vector<LineError> errors_;
    std::unordered_set<std::uint64_t> seen_id_hashes_;
};

// Eager convenience wrapper over DocumentReader.
std::vector<Document> read_documents(std::istream& in, const SchemaMap& schema = {},
                                     std::vector<LineError>* errors = nullptr,
                                     std::size_t error_cap = 1000);

// Writes one JSON object per line; returns the record count. Embedded
// newlines are escaped by JSON encoding, so a record is always one physical
// line. Sink failures raise FatalIoError carrying the partial count.
std::uint64_t write_documents(std::span<const Document> docs, std::ostream& out,
                              const SchemaMap& schema = {});

std::string document_to_json_line(const Document& doc, const SchemaMap& schema = {});
Document document_from_json_line(const std::string& line, const SchemaMap& schema = {});

}  // namespace forge
