#include "forge/jsonl.hpp"

#include <zlib.h>

#include <array>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "forge/hash.hpp"

namespace forge {
namespace {

using nlohmann::json;

// streambuf that inflates a gzip (or zlib) byte stream pulled from an
// underlying istream.
class GzipInputBuf : public std::streambuf {
  public:
    explicit GzipInputBuf(std::unique_ptr<std::istream> src) : src_(std::move(src)) {
        stream_.zalloc = Z_NULL;
        stream_.zfree = Z_NULL;
        stream_.opaque = Z_NULL;
        stream_.avail_in = 0;
        stream_.next_in = Z_NULL;
        if (inflateInit2(&stream_, 15 + 32) != Z_OK) {  // +32: auto gzip/zlib header
            throw std::runtime_error("inflateInit2 failed");
        }
    }
    ~GzipInputBuf() override { inflateEnd(&stream_); }

  protected:
    int_type underflow() override {
        if (gptr() < egptr()) return traits_type::to_int_type(*gptr());
        if (finished_) return traits_type::eof();

        stream_.next_out = reinterpret_cast<Bytef*>(out_.data());
        stream_.avail_out = static_cast<uInt>(out_.size());
        while (stream_.avail_out == out_.size()) {
            if (stream_.avail_in == 0) {
                src_->read(in_.data(), static_cast<std::streamsize>(in_.size()));
                const auto got = src_->gcount();
                if (got <= 0) {
                    if (!stream_done_) throw std::runtime_error("truncated gzip stream");
                    finished_ = true;
                    return traits_type::eof();
                }
                stream_.next_in = reinterpret_cast<Bytef*>(in_.data());
                stream_.avail_in = static_cast<uInt>(got);
            }
            const int rc = inflate(&stream_, Z_NO_FLUSH);
            if (rc == Z_STREAM_END) {
                stream_done_ = true;
                // support concatenated gzip members
                if (stream_.avail_in > 0 || src_->peek() != EOF) {
                    if (inflateReset2(&stream_, 15 + 32) != Z_OK) {
                        throw std::runtime_error("inflateReset2 failed");
                    }
                    stream_done_ = false;
                }
                if (stream_.avail_out == out_.size() && stream_done_) {
                    finished_ = true;
                    return traits_type::eof();
                }
                if (stream_.avail_out != out_.size()) break;
            } else if (rc != Z_OK) {
                throw std::runtime_error("gzip decompression error");
            }
        }
        const auto produced = out_.size() - stream_.avail_out;
        if (produced == 0) {
            finished_ = true;
            return traits_type::eof();
        }
        setg(out_.data(), out_.data(), out_.data() + produced);
        return traits_type::to_int_type(*gptr());
    }

  private:
    std::unique_ptr<std::istream> src_;
    z_stream stream_{};
    std::array<char, 1 << 14> in_{};
    std::array<char, 1 << 15> out_{};
    bool finished_ = false;
    bool stream_done_ = true;  // true before the first byte and after each member
};

class GzipIstream : public std::istream {
  public:
    explicit GzipIstream(std::unique_ptr<std::istream> src)
        : std::istream(nullptr), buf_(std::move(src)) {
        rdbuf(&buf_);
    }

  private:
    GzipInputBuf buf_;
};

json scores_to_json(const Document& doc, const SchemaMap& schema, json& j) {
    if (doc.scores.edu_int_score) j[schema.edu_int_score] = *doc.scores.edu_int_score;
    if (doc.scores.toxicity_score) j[schema.toxicity_score] = *doc.scores.toxicity_score;
    if (doc.scores.language_confidence) {
        j[schema.language_confidence] = *doc.scores.language_confidence;
    }
    return j;
}

Document parse_document(const json& j, const SchemaMap& schema) {
    Document doc;
    if (!j.is_object()) throw std::runtime_error("record is not a JSON object");
    if (!j.contains(schema.id)) throw std::runtime_error("missing required field '" + schema.id + "'");
    if (!j.contains(schema.text)) {
        throw std::runtime_error("missing required field '" + schema.text + "'");
    }
    doc.id = j.at(schema.id).get<std::string>();
    if (doc.id.empty()) throw std::runtime_error("empty id");
    doc.text = j.at(schema.text).get<std::string>();
    if (j.contains(schema.source) && !j.at(schema.source).is_null()) {
        doc.source = j.at(schema.source).get<std::string>();
    }
    if (j.contains(schema.token_count) && !j.at(schema.token_count).is_null()) {
        const auto tc = j.at(schema.token_count).get<std::int64_t>();
        if (tc < 0) throw std::runtime_error("negative token_count");
        doc.token_count = tc;
    }
    if (j.contains(schema.edu_int_score) && !j.at(schema.edu_int_score).is_null()) {
        doc.scores.edu_int_score = j.at(schema.edu_int_score).get<int>();
    }
    if (j.contains(schema.toxicity_score) && !j.at(schema.toxicity_score).is_null()) {
        doc.scores.toxicity_score = j.at(schema.toxicity_score).get<int>();
    }
    if (j.contains(schema.language_confidence) && !j.at(schema.language_confidence).is_null()) {
        doc.scores.language_confidence = j.at(schema.language_confidence).get<double>();
    }
    return doc;
}

}  // namespace

std::unique_ptr<std::istream> open_input(const std::string& path) {
    auto file = std::make_unique<std::ifstream>(path, std::ios::binary);
    if (!*file) throw std::runtime_error("cannot open input file: " + path);
    const int b0 = file->get();
    const int b1 = file->get();
    file->clear();
    file->seekg(0);
    if (b0 == 0x1f && b1 == 0x8b) {
        return std::make_unique<GzipIstream>(std::move(file));
    }
    return file;
}

std::string gzip_compress(std::string_view data) {
    z_stream strm{};
    if (deflateInit2(&strm, Z_DEFAULT_COMPRESSION, Z_DEFLATED, 15 + 16, 8,
                     Z_DEFAULT_STRATEGY) != Z_OK) {
        throw std::runtime_error("deflateInit2 failed");
    }
    std::string out;
    std::array<char, 1 << 14> buf;
    strm.next_in = reinterpret_cast<Bytef*>(const_cast<char*>(data.data()));
    strm.avail_in = static_cast<uInt>(data.size());
    int rc = Z_OK;
    do {
        strm.next_out = reinterpret_cast<Bytef*>(buf.data());
        strm.avail_out = static_cast<uInt>(buf.size());
        rc = deflate(&strm, Z_FINISH);
        out.append(buf.data(), buf.size() - strm.avail_out);
    } while (rc == Z_OK);
    deflateEnd(&strm);
    if (rc != Z_STREAM_END) throw std::runtime_error("gzip compression error");
    return out;
}

DocumentReader::DocumentReader(std::unique_ptr<std::istream> in, SchemaMap schema,
                               std::size_t error_cap)
    : owned_(std::move(in)), in_(owned_.get()), schema_(std::move(schema)), error_cap_(error_cap) {}

DocumentReader::DocumentReader(std::istream& in, SchemaMap schema, std::size_t error_cap)
    : in_(&in), schema_(std::move(schema)), error_cap_(error_cap) {}

DocumentReader DocumentReader::open(const std::string& path, SchemaMap schema,
                                    std::size_t error_cap) {
    return DocumentReader(open_input(path), std::move(schema), error_cap);
}

std::optional<Document> DocumentReader::next() {
    std::string line;
    while (std::getline(*in_, line)) {
        ++line_;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        try {
            const json j = json::parse(line);
            Document doc = parse_document(j, schema_);
            if (!seen_id_hashes_.insert(hash_bytes(doc.id, 0x1d)).second) {
                throw std::runtime_error("duplicate id '" + doc.id + "'");
            }
            return doc;
        } catch (const std::exception& e) {
            errors_.push_back({line_, e.what()});
            if (errors_.size() >= error_cap_) throw TooManyErrors(error_cap_);
        }
    }
    return std::nullopt;
}

std::vector<Document> DocumentReader::read_all() {
    std::vector<Document> docs;
    while (auto doc = next()) docs.push_back(std::move(*doc));
    return docs;
}

std::vector<Document> read_documents(std::istream& in, const SchemaMap& schema,
                                     std::vector<LineError>* errors, std::size_t error_cap) {
    DocumentReader reader(in, schema, error_cap);
    auto docs = reader.read_all();
    if (errors) *errors = reader.errors();
    return docs;
}

std::string document_to_json_line(const Document& doc, const SchemaMap& schema) {
    json j;
    j[schema.id] = doc.id;
    j[schema.text] = doc.text;
    if (!doc.source.empty()) j[schema.source] = doc.source;
    if (doc.token_count) j[schema.token_count] = *doc.token_count;
    scores_to_json(doc, schema, j);
    return j.dump();
}

Document document_from_json_line(const std::string& line, const SchemaMap& schema) {
    return parse_document(json::parse(line), schema);
}

std::uint64_t write_documents(std::span<const Document> docs, std::ostream& out,
                              const SchemaMap& schema) {
    std::uint64_t written = 0;
    for (const auto& doc : docs) {
        out << document_to_json_line(doc, schema) << '\n';
        if (!out) throw FatalIoError("write failed", written);
        ++written;
    }
    out.flush();
    if (!out) throw FatalIoError("flush failed", written);
    return written;
}

CorpusStats corpus_stats(std::span<const Document> docs, int edu_threshold,
                         int toxicity_threshold) {
    CorpusStats stats;
    for (const auto& doc : docs) {
        ++stats.document_count;
        const std::int64_t tokens = doc.token_count.value_or(0);
        stats.total_tokens += tokens;
        if (doc.scores.edu_int_score && *doc.scores.edu_int_score >= edu_threshold) {
            stats.educational_tokens += tokens;
        }
        if (doc.scores.toxicity_score && *doc.scores.toxicity_score > toxicity_threshold) {
            ++stats.excluded_count;
        }
    }
    return stats;
}

}  // namespace forge
