#include "forge/tokenizer.hpp"

#include <algorithm>
#include <fstream>
#include <stdexcept>

#include "forge/hash.hpp"
#include "forge/utf8.hpp"

namespace forge {

bool TokenizerAdapter::is_punctuation(TokenId id) const {
    const std::string p = piece(id);
    if (p.empty()) return false;
    std::size_t pos = 0;
    while (pos < p.size()) {
        if (!utf8::is_punctuation(utf8::next(p, pos))) return false;
    }
    return true;
}

ReferenceTokenizer ReferenceTokenizer::from_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open vocabulary file: " + path);
    std::vector<std::string> pieces;
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (!line.empty()) pieces.push_back(line);
    }
    return from_pieces(std::move(pieces));
}

ReferenceTokenizer ReferenceTokenizer::from_pieces(std::vector<std::string> pieces) {
    if (pieces.empty()) throw std::invalid_argument("empty vocabulary");
    std::sort(pieces.begin(), pieces.end());
    pieces.erase(std::unique(pieces.begin(), pieces.end()), pieces.end());

    ReferenceTokenizer tok;
    tok.pieces_ = std::move(pieces);
    std::uint64_t fp = hash_u64(tok.pieces_.size(), 0x746f6b);
    for (std::size_t i = 0; i < tok.pieces_.size(); ++i) {
        tok.lookup_.emplace(tok.pieces_[i], static_cast<TokenId>(i));
        tok.max_piece_bytes_ = std::max(tok.max_piece_bytes_, tok.pieces_[i].size());
        fp = hash_bytes(tok.pieces_[i], fp);
    }
    tok.fingerprint_ = fp;
    return tok;
}

std::string ReferenceTokenizer::piece(TokenId id) const {
    if (id < 0 || static_cast<std::size_t>(id) > pieces_.size()) return {};
    if (id == unk_id()) return "<unk>";
    return pieces_[static_cast<std::size_t>(id)];
}

void ReferenceTokenizer::encode_word(std::string_view word, std::vector<TokenId>& out) const {
    std::size_t pos = 0;
    while (pos < word.size()) {
        const std::size_t limit = std::min(max_piece_bytes_, word.size() - pos);
        TokenId matched = -1;
        std::size_t matched_len = 0;
        for (std::size_t len = limit; len >= 1; --len) {
            auto it = lookup_.find(word.substr(pos, len));
            if (it != lookup_.end()) {
                matched = it->second;
                matched_len = len;
                break;
            }
        }
        if (matched >= 0) {
            out.push_back(matched);
            pos += matched_len;
        } else {
            out.push_back(unk_id());
            utf8::next(word, pos);  // skip one codepoint
        }
    }
}

std::vector<TokenId> ReferenceTokenizer::encode(std::string_view text) const {
    std::vector<TokenId> out;
    std::size_t pos = 0;
    std::size_t word_start = 0;
    bool in_word = false;
    while (pos < text.size()) {
        const std::size_t cp_start = pos;
        const char32_t cp = utf8::next(text, pos);
        if (utf8::is_whitespace(cp)) {
            if (in_word) {
                encode_word(text.substr(word_start, cp_start - word_start), out);
                in_word = false;
            }
        } else if (!in_word) {
            in_word = true;
            word_start = cp_start;
        }
    }
    if (in_word) encode_word(text.substr(word_start), out);
    return out;
}

}  // namespace forge
