#include "rankweight/textprep.hpp"

#include <unicode/uchar.h>
#include <unicode/utf8.h>

#include <algorithm>
#include <numeric>

namespace rankweight {

namespace {

enum class CharKind { Space, Punct, Digit, Other };

struct Unit {
  CharKind kind;
  UChar32 cp;
};

CharKind classify(UChar32 c) {
  if (c >= '0' && c <= '9') return CharKind::Digit;
  if (u_isUWhiteSpace(c) || u_charType(c) == U_CONTROL_CHAR) return CharKind::Space;
  const auto mask = U_GET_GC_MASK(c);
  if (mask & (U_GC_P_MASK | U_GC_S_MASK)) return CharKind::Punct;
  return CharKind::Other;
}

std::vector<Unit> decode(std::string_view raw) {
  std::vector<Unit> units;
  units.reserve(raw.size());
  const auto* s = reinterpret_cast<const uint8_t*>(raw.data());
  const auto length = static_cast<int32_t>(raw.size());
  int32_t i = 0;
  while (i < length) {
    UChar32 c = 0;
    U8_NEXT(s, i, length, c);
    if (c < 0) continue;  // invalid byte sequence
    units.push_back({classify(c), c});
  }
  return units;
}

void append_utf8(std::string& out, UChar32 c) {
  char buf[U8_MAX_LENGTH];
  int32_t n = 0;
  U8_APPEND_UNSAFE(buf, n, c);
  out.append(buf, static_cast<std::size_t>(n));
}

std::vector<std::string> split_spaces(const std::string& s) {
  std::vector<std::string> out;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && s[i] == ' ') ++i;
    std::size_t j = s.find(' ', i);
    if (j == std::string::npos) j = s.size();
    if (j > i) out.emplace_back(s.substr(i, j - i));
    i = j;
  }
  return out;
}

bool starts_with_ci(std::string_view s, std::string_view prefix) {
  if (s.size() < prefix.size()) return false;
  for (std::size_t i = 0; i < prefix.size(); ++i) {
    char c = s[i];
    if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
    if (c != prefix[i]) return false;
  }
  return true;
}

}  // namespace

NormalizedText normalize(std::string_view raw) {
  const auto units = decode(raw);
  std::string flat;
  flat.reserve(raw.size());
  std::size_t i = 0;
  while (i < units.size()) {
    const auto kind = units[i].kind;
    if (kind == CharKind::Space) {
      flat.push_back(' ');
      ++i;
    } else if (kind == CharKind::Digit) {
      while (i < units.size() && units[i].kind == CharKind::Digit) ++i;
      flat.push_back('0');
    } else if (kind == CharKind::Punct) {
      std::size_t j = i;
      while (j < units.size() && units[j].kind == CharKind::Punct) ++j;
      const bool digit_before = i > 0 && units[i - 1].kind == CharKind::Digit;
      const bool digit_after = j < units.size() && units[j].kind == CharKind::Digit;
      if (digit_before || digit_after) flat.push_back(' ');
      i = j;
    } else {
      append_utf8(flat, u_tolower(units[i].cp));
      ++i;
    }
  }
  return NormalizedText{split_spaces(flat)};
}

TweetTokens normalize_tweet(std::string_view raw) {
  TweetTokens out;
  std::size_t i = 0;
  while (i < raw.size()) {
    while (i < raw.size() && (raw[i] == ' ' || raw[i] == '\t' || raw[i] == '\n' ||
                              raw[i] == '\r')) {
      ++i;
    }
    std::size_t j = i;
    while (j < raw.size() && raw[j] != ' ' && raw[j] != '\t' && raw[j] != '\n' &&
           raw[j] != '\r') {
      ++j;
    }
    if (j == i) break;
    std::string_view piece = raw.substr(i, j - i);
    i = j;
    if (starts_with_ci(piece, "http://") || starts_with_ci(piece, "https://") ||
        starts_with_ci(piece, "www.") || piece.front() == '@') {
      continue;
    }
    const bool hashtag = piece.front() == '#';
    auto normalized = normalize(hashtag ? piece.substr(1) : piece).tokens;
    for (auto& token : normalized) {
      if (hashtag) {
        out.hashtags.push_back(token);
      } else {
        out.words.push_back(token);
      }
      out.tokens.push_back(std::move(token));
      out.is_hashtag.push_back(hashtag);
    }
  }
  return out;
}

SortedText sort_by_idf(const NormalizedText& text, const IdfTable& idf) {
  const std::size_t n = text.size();
  std::vector<double> values(n);
  for (std::size_t k = 0; k < n; ++k) values[k] = idf.idf_or_unseen(text.tokens[k]);
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return values[a] > values[b]; });
  SortedText sorted;
  sorted.tokens.reserve(n);
  sorted.idf.reserve(n);
  for (auto k : order) {
    sorted.tokens.push_back(text.tokens[k]);
    sorted.idf.push_back(values[k]);
  }
  sorted.source_positions = std::move(order);
  return sorted;
}

std::string join(const std::vector<std::string>& tokens, char sep) {
  std::string out;
  for (std::size_t k = 0; k < tokens.size(); ++k) {
    if (k) out.push_back(sep);
    out += tokens[k];
  }
  return out;
}

}  // namespace rankweight
