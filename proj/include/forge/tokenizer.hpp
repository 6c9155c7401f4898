#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace forge {

using TokenId = std::int32_t;

// Black-box tokenizer interface. Implementations must be deterministic and
// encode the empty string to an empty sequence.
class TokenizerAdapter {
  public:
    virtual ~TokenizerAdapter() = default;

    virtual std::vector<TokenId> encode(std::string_view text) const = 0;
    virtual std::size_t vocab_size() const = 0;

    // Surface form of a token when the implementation knows it; empty
    // otherwise. Used for punctuation classification in token space.
    virtual std::string piece(TokenId /*id*/) const { return {}; }

    virtual bool is_punctuation(TokenId id) const;

    // Stable identifier of the token space; indexes built with one tokenizer
    // refuse queries from another.
    virtual std::uint64_t fingerprint() const = 0;
};

// Deterministic tokenizer over a fixed vocabulary file (one piece per line):
// text is split on whitespace and each word is encoded by greedy
// longest-match against the vocabulary. Characters not covered by any piece
// map to a shared unknown token. Never merges across whitespace.
class ReferenceTokenizer : public TokenizerAdapter {
  public:
    static ReferenceTokenizer from_file(const std::string& path);
    static ReferenceTokenizer from_pieces(std::vector<std::string> pieces);

    std::vector<TokenId> encode(std::string_view text) const override;
    std::size_t vocab_size() const override { return pieces_.size() + 1; }  // +unk
    std::string piece(TokenId id) const override;
    std::uint64_t fingerprint() const override { return fingerprint_; }

    TokenId unk_id() const { return static_cast<TokenId>(pieces_.size()); }

  private:
    ReferenceTokenizer() = default;

    struct StringHash {
        using is_transparent = void;
        std::size_t operator()(std::string_view s) const {
            return std::hash<std::string_view>{}(s);
        }
    };

    std::vector<std::string> pieces_;
    std::unordered_map<std::string, TokenId, StringHash, std::equal_to<>> lookup_;
    std::size_t max_piece_bytes_ = 0;
    std::uint64_t fingerprint_ = 0;

    void encode_word(std::string_view word, std::vector<TokenId>& out) const;
};

}  // namespace forge
