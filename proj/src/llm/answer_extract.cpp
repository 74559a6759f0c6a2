#include "mqcic/llm/answer_extract.hpp"

#include <cctype>
#include <cstring>
#include <optional>

namespace mqcic::llm {

namespace {

bool word_char(char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
}

bool ascii_word_at(const std::string& text, std::size_t i, const char* word) {
    const std::size_t n = std::strlen(word);
    if (i + n > text.size()) return false;
    for (std::size_t k = 0; k < n; ++k) {
        if (std::tolower(static_cast<unsigned char>(text[i + k])) != word[k]) return false;
    }
    if (i > 0 && word_char(text[i - 1])) return false;
    if (i + n < text.size() && word_char(text[i + n])) return false;
    return true;
}

bool bytes_at(const std::string& text, std::size_t i, const char* bytes) {
    const std::size_t n = std::strlen(bytes);
    return i + n <= text.size() && text.compare(i, n, bytes) == 0;
}

// Standalone digit: not part of an identifier, a larger number or a decimal.
bool digit_marker_at(const std::string& text, std::size_t i) {
    if (i > 0) {
        const char p = text[i - 1];
        if (word_char(p)) return false;
        if (p == '.' && i >= 2 && std::isdigit(static_cast<unsigned char>(text[i - 2]))) return false;
    }
    if (i + 1 < text.size()) {
        const char nxt = text[i + 1];
        if (word_char(nxt)) return false;
        if (nxt == '.' && i + 2 < text.size() &&
            std::isdigit(static_cast<unsigned char>(text[i + 2])))
            return false;
    }
    return true;
}

struct Marker {
    std::size_t pos;
    int value;  // 1 true, 0 false
};

std::optional<Marker> scan(const std::string& text, bool with_digits) {
    std::optional<Marker> last;
    std::size_t i = 0;
    while (i < text.size()) {
        // CJK first, longest match: 不是 = negation, 是否 = "whether" (not a
        // marker), then the bare 是/否 verdict characters.
        if (bytes_at(text, i, "\xE4\xB8\x8D\xE6\x98\xAF")) {  // 不是
            last = Marker{i, 0};
            i += 6;
            continue;
        }
        if (bytes_at(text, i, "\xE6\x98\xAF\xE5\x90\xA6")) {  // 是否
            i += 6;
            continue;
        }
        if (bytes_at(text, i, "\xE6\x98\xAF")) {  // 是
            last = Marker{i, 1};
            i += 3;
            continue;
        }
        if (bytes_at(text, i, "\xE5\x90\xA6")) {  // 否
            last = Marker{i, 0};
            i += 3;
            continue;
        }
        if (ascii_word_at(text, i, "true") || ascii_word_at(text, i, "yes")) {
            last = Marker{i, 1};
        } else if (ascii_word_at(text, i, "correct")) {
            last = Marker{i, 1};
            i += 7;
            continue;
        } else if (ascii_word_at(text, i, "false")) {
            last = Marker{i, 0};
            i += 5;
            continue;
        } else if (ascii_word_at(text, i, "no")) {
            last = Marker{i, 0};
        } else if (with_digits && (text[i] == '0' || text[i] == '1') && digit_marker_at(text, i)) {
            last = Marker{i, text[i] - '0'};
        }
        ++i;
    }
    return last;
}

}  // namespace

TruthValue extract_final_truth(const std::string& text) {
    const auto m = scan(text, /*with_digits=*/false);
    if (!m) return TruthValue::Unknown;
    return m->value == 1 ? TruthValue::True : TruthValue::False;
}

std::optional<TruthMarker> find_last_truth_marker(const std::string& text) {
    const auto m = scan(text, /*with_digits=*/false);
    if (!m) return std::nullopt;
    return TruthMarker{m->value == 1 ? TruthValue::True : TruthValue::False, m->pos};
}

std::optional<int> extract_binary_judgment(const std::string& text) {
    const auto m = scan(text, /*with_digits=*/true);
    if (!m) return std::nullopt;
    return m->value;
}

}  // namespace mqcic::llm
