#include "forge/dedup.hpp"

#include <omp.h>

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>
#include <numeric>
#include <stdexcept>
#include <unordered_map>
#include <unordered_set>

#include "forge/hash.hpp"
#include "forge/utf8.hpp"

namespace forge {
namespace {

constexpr char kCacheMagic[8] = {'F', 'R', 'G', 'S', 'I', 'G', '0', '1'};

// Union-find over document indexes; final components do not depend on the
// order unions are applied.
class UnionFind {
  public:
    explicit UnionFind(std::size_t n) : parent_(n) {
        std::iota(parent_.begin(), parent_.end(), 0);
    }
    std::size_t find(std::size_t x) {
        while (parent_[x] != x) {
            parent_[x] = parent_[parent_[x]];
            x = parent_[x];
        }
        return x;
    }
    void unite(std::size_t a, std::size_t b) {
        a = find(a);
        b = find(b);
        if (a == b) return;
        if (a > b) std::swap(a, b);  // keep the smallest index as root
        parent_[b] = a;
    }

  private:
    std::vector<std::size_t> parent_;
};

std::string group_value(const Document& doc, const std::string& key) {
    if (key == "source") return doc.source;
    if (key == "id") return doc.id;
    throw std::invalid_argument("unsupported group key '" + key +
                                "' (supported: source, id)");
}

DedupResult finalize(std::vector<Document> docs, UnionFind& uf) {
    const std::size_t n = docs.size();
    std::unordered_map<std::size_t, std::vector<std::size_t>> components;
    for (std::size_t i = 0; i < n; ++i) components[uf.find(i)].push_back(i);

    DedupResult result;
    std::vector<bool> keep(n, false);
    std::vector<std::size_t> roots;
    roots.reserve(components.size());
    for (const auto& [root, members] : components) roots.push_back(root);
    std::sort(roots.begin(), roots.end());
    for (const std::size_t root : roots) {
        const auto& members = components[root];
        keep[members.front()] = true;  // members are in stream order; root is smallest
        if (members.size() >= 2) {
            std::vector<std::string> ids;
            ids.reserve(members.size());
            for (const std::size_t m : members) ids.push_back(docs[m].id);
            result.clusters.push_back(std::move(ids));
        }
    }
    for (std::size_t i = 0; i < n; ++i) {
        if (keep[i]) {
            result.kept.push_back(std::move(docs[i]));
        } else {
            result.removed.push_back(std::move(docs[i]));
        }
    }
    return result;
}

}  // namespace

void MinHashParams::validate() const {
    if (buckets < 1 || hashes_per_bucket < 1 || ngram_size < 1) {
        throw std::invalid_argument("MinHash parameters must all be >= 1");
    }
}

std::vector<std::uint64_t> word_shingles(std::string_view text, int ngram_size,
                                         std::uint64_t seed) {
    // lowercase (ASCII) and split on whitespace
    std::string lowered;
    lowered.reserve(text.size());
    for (const char c : text) {
        lowered.push_back(c >= 'A' && c <= 'Z' ? static_cast<char>(c - 'A' + 'a') : c);
    }
    std::vector<std::string_view> words;
    {
        const std::string_view s = lowered;
        std::size_t pos = 0, start = 0;
        bool in_word = false;
        while (pos < s.size()) {
            const std::size_t cp_start = pos;
            const char32_t cp = utf8::next(s, pos);
            if (utf8::is_whitespace(cp)) {
                if (in_word) {
                    words.push_back(s.substr(start, cp_start - start));
                    in_word = false;
                }
            } else if (!in_word) {
                in_word = true;
                start = cp_start;
            }
        }
        if (in_word) words.push_back(s.substr(start));
    }

    std::vector<std::uint64_t> shingles;
    const auto n = static_cast<std::size_t>(ngram_size);
    if (words.size() < n) {
        // too short: the whole (lowercased, trimmed) text is one shingle
        std::string joined;
        for (std::size_t i = 0; i < words.size(); ++i) {
            if (i) joined.push_back('\x1f');
            joined.append(words[i]);
        }
        shingles.push_back(hash_bytes(joined, seed));
        return shingles;
    }
    shingles.reserve(words.size() - n + 1);
    std::string joined;
    for (std::size_t i = 0; i + n <= words.size(); ++i) {
        joined.clear();
        for (std::size_t k = 0; k < n; ++k) {
            if (k) joined.push_back('\x1f');
            joined.append(words[i + k]);
        }
        shingles.push_back(hash_bytes(joined, seed));
    }
    std::sort(shingles.begin(), shingles.end());
    shingles.erase(std::unique(shingles.begin(), shingles.end()), shingles.end());
    return shingles;
}

Signature signature_from_shingles(std::span<const std::uint64_t> shingles,
                                  const MinHashParams& params) {
    params.validate();
    const int h = params.num_hashes();
    Signature sig;
    sig.values.assign(static_cast<std::size_t>(h), UINT64_MAX);
    // component family: each index mixes the base seed into its own seed
    for (int i = 0; i < h; ++i) {
        const std::uint64_t component_seed = hash_u64(static_cast<std::uint64_t>(i),
                                                      params.hash_seed);
        std::uint64_t best = UINT64_MAX;
        for (const std::uint64_t shingle : shingles) {
            best = std::min(best, hash_u64(shingle, component_seed));
        }
        sig.values[static_cast<std::size_t>(i)] = best;
    }
    return sig;
}

Signature minhash_signature(std::string_view text, const MinHashParams& params) {
    return signature_from_shingles(word_shingles(text, params.ngram_size, params.hash_seed),
                                   params);
}

std::vector<Signature> compute_signatures_serial(std::span<const Document> docs,
                                                 const MinHashParams& params) {
    std::vector<Signature> sigs(docs.size());
    for (std::size_t i = 0; i < docs.size(); ++i) {
        sigs[i] = minhash_signature(docs[i].text, params);
    }
    return sigs;
}

std::vector<Signature> compute_signatures(std::span<const Document> docs,
                                          const MinHashParams& params, int threads) {
    std::vector<Signature> sigs(docs.size());
    const int nthreads = threads > 0 ? threads : omp_get_max_threads();
#pragma omp parallel for schedule(dynamic, 32) num_threads(nthreads)
    for (std::int64_t i = 0; i < static_cast<std::int64_t>(docs.size()); ++i) {
        sigs[static_cast<std::size_t>(i)] = minhash_signature(docs[i].text, params);
    }
    return sigs;
}

std::string whitespace_normalizer(std::string_view text) {
    std::string out;
    out.reserve(text.size());
    bool pending_space = false;
    std::size_t pos = 0;
    while (pos < text.size()) {
        const std::size_t cp_start = pos;
        const char32_t cp = utf8::next(text, pos);
        if (utf8::is_whitespace(cp)) {
            pending_space = !out.empty();
        } else {
            if (pending_space) out.push_back(' ');
            pending_space = false;
            out.append(text.substr(cp_start, pos - cp_start));
        }
    }
    return out;
}

DedupResult exact_dedup(std::vector<Document> docs,
                        const std::function<std::string(std::string_view)>& normalizer) {
    UnionFind uf(docs.size());
    std::unordered_map<std::uint64_t, std::size_t> first_seen;
    for (std::size_t i = 0; i < docs.size(); ++i) {
        const std::uint64_t h = normalizer ? hash_bytes(normalizer(docs[i].text), 17)
                                           : hash_bytes(docs[i].text, 17);
        const auto [it, inserted] = first_seen.emplace(h, i);
        if (!inserted) uf.unite(it->second, i);
    }
    return finalize(std::move(docs), uf);
}

double exact_jaccard(std::span<const std::uint64_t> a, std::span<const std::uint64_t> b) {
    // inputs are sorted and deduplicated
    std::size_t ia = 0, ib = 0, both = 0;
    while (ia < a.size() && ib < b.size()) {
        if (a[ia] == b[ib]) {
            ++both;
            ++ia;
            ++ib;
        } else if (a[ia] < b[ib]) {
            ++ia;
        } else {
            ++ib;
        }
    }
    const std::size_t either = a.size() + b.size() - both;
    return either == 0 ? 0.0 : static_cast<double>(both) / static_cast<double>(either);
}

DedupResult minhash_dedup(std::vector<Document> docs, const MinHashParams& params,
                          const DedupScope& scope, int threads,
                          std::span<const Signature> precomputed,
                          std::optional<double> verify_jaccard) {
    params.validate();
    if (scope.mode == DedupScope::Mode::kPerGroup) {
        if (scope.group_key.empty()) {
            throw std::invalid_argument("per_group scope requires a group_key");
        }
        for (const auto& doc : docs) {
            if (group_value(doc, scope.group_key).empty()) {
                throw std::invalid_argument("document '" + doc.id + "' is missing group key '" +
                                            scope.group_key + "'");
            }
        }
    }

    std::vector<Signature> computed;
    std::span<const Signature> sigs = precomputed;
    if (sigs.empty()) {
        computed = compute_signatures(docs, params, threads);
        sigs = computed;
    } else if (sigs.size() != docs.size()) {
        throw std::invalid_argument("precomputed signature count does not match document count");
    }

    std::vector<std::vector<std::uint64_t>> shingles;
    if (verify_jaccard) {
        shingles.resize(docs.size());
        const int nthreads = threads > 0 ? threads : omp_get_max_threads();
#pragma omp parallel for schedule(dynamic, 32) num_threads(nthreads)
        for (std::int64_t i = 0; i < static_cast<std::int64_t>(docs.size()); ++i) {
            shingles[static_cast<std::size_t>(i)] =
                word_shingles(docs[static_cast<std::size_t>(i)].text, params.ngram_size,
                              params.hash_seed);
        }
    }

    // Insertion runs in stream order, so clusters do not depend on the
    // signature worker count. Without verification a bin key only needs its
    // first member; with verification every member is kept so later arrivals
    // can be checked against each of them.
    UnionFind uf(docs.size());
    const int r = params.hashes_per_bucket;
    std::unordered_map<std::uint64_t, std::vector<std::size_t>> bins;
    bins.reserve(docs.size() * static_cast<std::size_t>(params.buckets));
    for (std::size_t i = 0; i < docs.size(); ++i) {
        std::uint64_t group_hash = 0;
        if (scope.mode == DedupScope::Mode::kPerGroup) {
            group_hash = hash_bytes(group_value(docs[i], scope.group_key), 0x9e37);
        }
        for (int b = 0; b < params.buckets; ++b) {
            const auto* band = sigs[i].values.data() + static_cast<std::size_t>(b) * r;
            const std::uint64_t band_seed = hash_u64(static_cast<std::uint64_t>(b), group_hash);
            std::uint64_t key = xxhash64(band, sizeof(std::uint64_t) * static_cast<std::size_t>(r),
                                         band_seed);
            auto& members = bins[key];
            if (!verify_jaccard) {
                if (!members.empty()) {
                    uf.unite(members.front(), i);
                } else {
                    members.push_back(i);
                }
                continue;
            }
            for (const std::size_t j : members) {
                if (exact_jaccard(shingles[j], shingles[i]) >= *verify_jaccard) {
                    uf.unite(j, i);
                    break;
                }
            }
            members.push_back(i);
        }
    }
    return finalize(std::move(docs), uf);
}

double detection_probability(double jaccard, const MinHashParams& params) {
    params.validate();
    if (jaccard < 0.0 || jaccard > 1.0) {
        throw std::domain_error("jaccard similarity must be in [0,1]");
    }
    const double per_bucket = std::pow(jaccard, params.hashes_per_bucket);
    return 1.0 - std::pow(1.0 - per_bucket, params.buckets);
}

void save_signature_cache(const std::string& path, const MinHashParams& params,
                          std::span<const std::string> ids, std::span<const Signature> sigs) {
    if (ids.size() != sigs.size()) {
        throw std::invalid_argument("id and signature counts differ");
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open signature cache for writing: " + path);
    auto put_u64 = [&](std::uint64_t v) { out.write(reinterpret_cast<const char*>(&v), 8); };
    out.write(kCacheMagic, sizeof(kCacheMagic));
    put_u64(static_cast<std::uint64_t>(params.buckets));
    put_u64(static_cast<std::uint64_t>(params.hashes_per_bucket));
    put_u64(static_cast<std::uint64_t>(params.ngram_size));
    put_u64(params.hash_seed);
    put_u64(ids.size());
    for (std::size_t i = 0; i < ids.size(); ++i) {
        put_u64(ids[i].size());
        out.write(ids[i].data(), static_cast<std::streamsize>(ids[i].size()));
        for (const std::uint64_t v : sigs[i].values) put_u64(v);
    }
    if (!out) throw std::runtime_error("failed writing signature cache: " + path);
}

std::pair<MinHashParams, std::vector<std::pair<std::string, Signature>>> load_signature_cache(
    const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open signature cache: " + path);
    char magic[sizeof(kCacheMagic)];
    in.read(magic, sizeof(magic));
    if (!in || std::memcmp(magic, kCacheMagic, sizeof(magic)) != 0) {
        throw std::runtime_error("bad signature cache header: " + path);
    }
    auto get_u64 = [&]() {
        std::uint64_t v;
        in.read(reinterpret_cast<char*>(&v), 8);
        if (!in) throw std::runtime_error("truncated signature cache: " + path);
        return v;
    };
    MinHashParams params;
    params.buckets = static_cast<int>(get_u64());
    params.hashes_per_bucket = static_cast<int>(get_u64());
    params.ngram_size = static_cast<int>(get_u64());
    params.hash_seed = get_u64();
    params.validate();
    const std::uint64_t count = get_u64();
    std::vector<std::pair<std::string, Signature>> records;
    records.reserve(count);
    const auto sig_len = static_cast<std::size_t>(params.num_hashes());
    for (std::uint64_t i = 0; i < count; ++i) {
        const std::uint64_t id_len = get_u64();
        std::string id(id_len, '\0');
        in.read(id.data(), static_cast<std::streamsize>(id_len));
        Signature sig;
        sig.values.resize(sig_len);
        for (std::size_t k = 0; k < sig_len; ++k) sig.values[k] = get_u64();
        if (!in) throw std::runtime_error("truncated signature cache: " + path);
        records.emplace_back(std::move(id), std::move(sig));
    }
    return {params, std::move(records)};
}

}  // namespace forge
