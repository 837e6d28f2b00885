#pragma once

#include "hoi/common.hpp"

#include <cctype>
#include <string>
#include <utility>
#include <vector>

namespace hoi {

namespace detail {

inline bool is_alpha(char c) { return std::isalpha(static_cast<unsigned char>(c)) != 0; }
inline bool is_digit(char c) { return std::isdigit(static_cast<unsigned char>(c)) != 0; }
inline bool is_space(char c) { return std::isspace(static_cast<unsigned char>(c)) != 0; }

inline std::string trim(std::string_view s) {
    std::size_t b = 0, e = s.size();
    while (b < e && is_space(s[b])) ++b;
    while (e > b && is_space(s[e - 1])) --e;
    return std::string(s.substr(b, e - b));
}

/// Length of a metre unit token at `pos` ("m", "meter(s)", "metre(s)")
/// that is not followed by another letter; 0 if none.
inline std::size_t metre_unit_length(std::string_view s, std::size_t pos) {
    for (std::string_view unit : {"meters", "metres", "meter", "metre", "m"}) {
        if (s.substr(pos, unit.size()) != unit) continue;
        const std::size_t end = pos + unit.size();
        if (end < s.size() && is_alpha(s[end])) continue;
        return unit.size();
    }
    return 0;
}

}  // namespace detail

/// First "<decimal> m" in a completion, e.g. " 0.85m" or "about 0.75 m tall".
/// The number is digits with an optional fractional part; blanks may sit
/// between number and unit.
inline double parse_size_response(std::string_view text) {
    for (std::size_t i = 0; i < text.size(); ++i) {
        if (!detail::is_digit(text[i]) || (i > 0 && (detail::is_digit(text[i - 1]) || text[i - 1] == '.'))) continue;
        std::size_t j = i;
        while (j < text.size() && detail::is_digit(text[j])) ++j;
        if (j + 1 < text.size() && text[j] == '.' && detail::is_digit(text[j + 1])) {
            ++j;
            while (j < text.size() && detail::is_digit(text[j])) ++j;
        }
        std::size_t k = j;
        while (k < text.size() && (text[k] == ' ' || text[k] == '\t')) ++k;
        if (k < text.size() && detail::metre_unit_length(text, k) > 0)
            return std::stod(std::string(text.substr(i, j - i)));
    }
    fail(ErrorKind::ParseError, "no length in metres in completion: \"" + std::string(text) + "\"");
}

struct ContactPair {
    std::string object_part;
    std::string body_part;
    bool operator==(const ContactPair&) const = default;
};

/// Splits a contact completion into "objectpart/bodypart" pairs in order.
/// Parsing stops at the first blank line or at the next few-shot header
/// ("Action:" / "Object:"), which models tend to continue with. Tokens
/// without a single '/' are ignored.
inline std::vector<ContactPair> parse_contact_response(std::string_view text) {
    std::string body;
    std::size_t start = 0;
    while (start <= text.size()) {
        std::size_t end = text.find('\n', start);
        if (end == std::string_view::npos) end = text.size();
        const std::string line = detail::trim(text.substr(start, end - start));
        if (line.rfind("Action:", 0) == 0 || line.rfind("Object:", 0) == 0) break;
        if (line.empty() && !body.empty()) break;
        if (!line.empty()) body += line;
        if (!body.empty()) body += '\n';
        start = end + 1;
    }
    std::vector<ContactPair> pairs;
    std::size_t tok = 0;
    for (std::size_t i = 0; i <= body.size(); ++i) {
        if (i < body.size() && body[i] != ',' && body[i] != '\n') continue;
        std::string token = detail::trim(std::string_view(body).substr(tok, i - tok));
        tok = i + 1;
        while (!token.empty() && (token.back() == '.' || token.back() == ';')) token.pop_back();
        const auto slash = token.find('/');
        if (slash == std::string::npos || token.find('/', slash + 1) != std::string::npos) continue;
        ContactPair p{detail::trim(std::string_view(token).substr(0, slash)),
                         detail::trim(std::string_view(token).substr(slash + 1))};
        if (p.object_part.empty() || p.body_part.empty()) continue;
        pairs.push_back(std::move(p));
    }
    if (pairs.empty()) fail(ErrorKind::ParseError, "no contact pairs in completion: \"" + std::string(text) + "\"");
    return pairs;
}

}  // namespace hoi
