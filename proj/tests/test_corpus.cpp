#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "forge/jsonl.hpp"

using namespace forge;

namespace {

Document make_doc(std::string id, std::string text) {
    Document d;
    d.id = std::move(id);
    d.text = std::move(text);
    return d;
}

// generator for the round-trip property: ids, unicode text with embedded
// newlines/quotes/control chars, optional fields
Document random_doc(std::mt19937_64& rng, int i) {
    static const std::vector<std::string> snippets = {
        "olá mundo", "linha\ncom\nquebras", "aspas \"duplas\" e 'simples'",
        "açúcar çãõé", "tab\tseparado", "emoji ✓ π", "back\\slash", "",
        "controle \x01\x02", "  espaços  "};
    std::uniform_int_distribution<std::size_t> pick(0, snippets.size() - 1);
    std::uniform_int_distribution<int> coin(0, 1);
    std::uniform_int_distribution<int> score(1, 5);
    Document d;
    d.id = "doc-" + std::to_string(i);
    d.text = snippets[pick(rng)] + " " + snippets[pick(rng)];
    if (coin(rng)) d.source = "src" + std::to_string(i % 3);
    if (coin(rng)) d.token_count = std::uniform_int_distribution<std::int64_t>(0, 500)(rng);
    if (coin(rng)) d.scores.edu_int_score = score(rng);
    if (coin(rng)) d.scores.toxicity_score = score(rng);
    if (coin(rng)) d.scores.language_confidence = 0.5;
    return d;
}

}  // namespace

TEST_CASE("read_documents maps fields directly") {
    std::istringstream in(R"({"id":"a","text":"olá"})" "\n");
    const auto docs = read_documents(in);
    REQUIRE(docs.size() == 1);
    CHECK(docs[0].id == "a");
    CHECK(docs[0].text == "olá");
}

TEST_CASE("empty stream yields an empty sequence") {
    std::istringstream in("");
    CHECK(read_documents(in).empty());
}

TEST_CASE("malformed line is surfaced with its line number") {
    std::istringstream in(
        "{\"id\":\"a\",\"text\":\"1\"}\n"
        "{\"id\":\"b\",\"text\":\"2\"}\n"
        "{\"id\":\"c\",\"text\":\"3\"}\n"
        "{not json at all\n");
    std::vector<LineError> errors;
    const auto docs = read_documents(in, {}, &errors);
    CHECK(docs.size() == 3);
    REQUIRE(errors.size() == 1);
    CHECK(errors[0].line == 4);
}

TEST_CASE("missing required fields are per-line errors") {
    std::istringstream in(
        "{\"text\":\"sem id\"}\n"
        "{\"id\":\"x\"}\n"
        "{\"id\":\"ok\",\"text\":\"t\"}\n");
    std::vector<LineError> errors;
    const auto docs = read_documents(in, {}, &errors);
    CHECK(docs.size() == 1);
    CHECK(errors.size() == 2);
    CHECK(errors[0].line == 1);
    CHECK(errors[1].line == 2);
}

TEST_CASE("duplicate ids are per-line errors") {
    std::istringstream in(
        "{\"id\":\"a\",\"text\":\"1\"}\n"
        "{\"id\":\"a\",\"text\":\"2\"}\n"
        "{\"id\":\"b\",\"text\":\"3\"}\n");
    std::vector<LineError> errors;
    const auto docs = read_documents(in, {}, &errors);
    CHECK(docs.size() == 2);
    REQUIRE(errors.size() == 1);
    CHECK(errors[0].line == 2);
}

TEST_CASE("error cap aborts the stream") {
    std::ostringstream data;
    for (int i = 0; i < 20; ++i) data << "broken line\n";
    std::istringstream in(data.str());
    DocumentReader reader(in, {}, 10);
    CHECK_THROWS_AS(reader.read_all(), TooManyErrors);
    CHECK(reader.errors().size() == 10);
}

TEST_CASE("schema map renames fields") {
    SchemaMap schema;
    schema.id = "doc_id";
    schema.text = "content";
    schema.edu_int_score = "edu";
    std::istringstream in(R"({"doc_id":"a","content":"t","edu":4})" "\n");
    const auto docs = read_documents(in, schema);
    REQUIRE(docs.size() == 1);
    CHECK(docs[0].scores.edu_int_score == 4);
}

TEST_CASE("write_documents: zero documents, zero lines") {
    std::ostringstream out;
    CHECK(write_documents({}, out) == 0);
    CHECK(out.str().empty());
}

TEST_CASE("two documents round-trip field-for-field") {
    std::vector<Document> docs;
    docs.push_back(make_doc("a", "primeiro"));
    auto d = make_doc("b", "segundo");
    d.token_count = 42;
    d.scores.edu_int_score = 5;
    docs.push_back(d);

    std::ostringstream out;
    CHECK(write_documents(docs, out) == 2);
    std::istringstream in(out.str());
    CHECK(read_documents(in) == docs);
}

TEST_CASE("embedded newline stays one physical line") {
    const std::vector<Document> docs = {make_doc("a", "linha um\nlinha dois")};
    std::ostringstream out;
    write_documents(docs, out);
    const std::string text = out.str();
    CHECK(std::count(text.begin(), text.end(), '\n') == 1);
    std::istringstream in(text);
    CHECK(read_documents(in) == docs);
}

TEST_CASE("property: read after write is the identity") {
    std::mt19937_64 rng(7);
    std::vector<Document> docs;
    for (int i = 0; i < 200; ++i) docs.push_back(random_doc(rng, i));
    std::ostringstream out;
    CHECK(write_documents(docs, out) == docs.size());
    std::istringstream in(out.str());
    CHECK(read_documents(in) == docs);
}

TEST_CASE("gzip input is accepted transparently") {
    std::vector<Document> docs = {make_doc("a", "compactado"), make_doc("b", "também")};
    std::ostringstream out;
    write_documents(docs, out);
    const auto path = std::filesystem::temp_directory_path() / "forge_gzip_test.jsonl.gz";
    {
        std::ofstream f(path, std::ios::binary);
        const std::string gz = gzip_compress(out.str());
        f.write(gz.data(), static_cast<std::streamsize>(gz.size()));
    }
    auto reader = DocumentReader::open(path.string());
    CHECK(reader.read_all() == docs);
    std::filesystem::remove(path);
}

TEST_CASE("sink failure reports the partial count") {
    std::vector<Document> docs = {make_doc("a", "um"), make_doc("b", "dois")};
    std::ostringstream out;
    out.setstate(std::ios::badbit);
    CHECK_THROWS_AS(write_documents(docs, out), FatalIoError);
    try {
        write_documents(docs, out);
    } catch (const FatalIoError& e) {
        CHECK(e.partial_count() == 0);
    }
}

TEST_CASE("concatenated gzip members decode as one stream") {
    std::vector<Document> first = {make_doc("a", "parte um")};
    std::vector<Document> second = {make_doc("b", "parte dois")};
    std::ostringstream one, two;
    write_documents(first, one);
    write_documents(second, two);
    const auto path = std::filesystem::temp_directory_path() / "forge_gzip_multi.jsonl.gz";
    {
        std::ofstream f(path, std::ios::binary);
        const auto g1 = gzip_compress(one.str());
        const auto g2 = gzip_compress(two.str());
        f.write(g1.data(), static_cast<std::streamsize>(g1.size()));
        f.write(g2.data(), static_cast<std::streamsize>(g2.size()));
    }
    auto reader = DocumentReader::open(path.string());
    const auto docs = reader.read_all();
    REQUIRE(docs.size() == 2);
    CHECK(docs[0].id == "a");
    CHECK(docs[1].id == "b");
    std::filesystem::remove(path);
}

TEST_CASE("corpus_stats sums educational tokens at the threshold") {
    Document a = make_doc("a", "");
    a.token_count = 100;
    a.scores.edu_int_score = 4;
    Document b = make_doc("b", "");
    b.token_count = 100;
    b.scores.edu_int_score = 2;
    const std::vector<Document> docs = {a, b};
    const auto stats = corpus_stats(docs, 3);
    CHECK(stats.total_tokens == 200);
    CHECK(stats.educational_tokens == 100);
    CHECK(stats.document_count == 2);
}

TEST_CASE("corpus_stats on an empty corpus is all zero") {
    CHECK(corpus_stats({}, 3) == CorpusStats{});
}

TEST_CASE("corpus_stats saturates when every document is educational") {
    std::vector<Document> docs;
    for (int i = 0; i < 5; ++i) {
        auto d = make_doc("d" + std::to_string(i), "");
        d.token_count = 10 * (i + 1);
        d.scores.edu_int_score = 5;
        docs.push_back(d);
    }
    const auto stats = corpus_stats(docs, 3);
    CHECK(stats.educational_tokens == stats.total_tokens);
}

TEST_CASE("property: corpus_stats is additive and fraction stays in [0,1]") {
    std::mt19937_64 rng(11);
    std::vector<Document> a, b;
    for (int i = 0; i < 60; ++i) a.push_back(random_doc(rng, i));
    for (int i = 60; i < 150; ++i) b.push_back(random_doc(rng, i));
    std::vector<Document> both = a;
    both.insert(both.end(), b.begin(), b.end());
    for (int threshold = 1; threshold <= 5; ++threshold) {
        const auto sa = corpus_stats(a, threshold);
        const auto sb = corpus_stats(b, threshold);
        const auto sboth = corpus_stats(both, threshold);
        CHECK(sboth == sa + sb);
        CHECK(sboth.educational_tokens <= sboth.total_tokens);
        if (sboth.total_tokens > 0) {
            const double fraction = static_cast<double>(sboth.educational_tokens) /
                                    static_cast<double>(sboth.total_tokens);
            CHECK(fraction >= 0.0);
            CHECK(fraction <= 1.0);
        }
    }
}
