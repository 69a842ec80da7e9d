#pragma once

// Word canonicalisation and grapheme utilities, backed by ICU.

#include <memory>
#include <string>
#include <string_view>

#include <unicode/brkiter.h>
#include <unicode/uchar.h>
#include <unicode/unistr.h>
#include <unicode/utf8.h>

namespace pg {

namespace detail {

inline std::string fold_case(std::string_view utf8) {
  icu::UnicodeString u = icu::UnicodeString::fromUTF8(icu::StringPiece(utf8.data(), static_cast<int32_t>(utf8.size())));
  u.foldCase(U_FOLD_CASE_DEFAULT);
  std::string out;
  u.toUTF8String(out);
  return out;
}

inline icu::BreakIterator& grapheme_iterator() {
  thread_local std::unique_ptr<icu::BreakIterator> it = [] {
    UErrorCode status = U_ZERO_ERROR;
    std::unique_ptr<icu::BreakIterator> bi(icu::BreakIterator::createCharacterInstance(icu::Locale::getRoot(), status));
    if (U_FAILURE(status) || !bi) throw std::runtime_error("ICU character break iterator unavailable");
    return bi;
  }();
  return *it;
}

}  // namespace detail

/// Case-folds, trims and collapses internal whitespace runs to one ASCII
/// space. Ill-formed UTF-8 is replaced with U+FFFD, so the function is total
/// and idempotent.
inline std::string normalize_word(std::string_view raw) {
  const std::string folded = detail::fold_case(raw);
  std::string out;
  out.reserve(folded.size());
  bool pending_space = false;
  int32_t i = 0;
  const auto* s = reinterpret_cast<const uint8_t*>(folded.data());
  const auto n = static_cast<int32_t>(folded.size());
  while (i < n) {
    const int32_t start = i;
    UChar32 c;
    U8_NEXT(s, i, n, c);
    if (c >= 0 && u_isUWhiteSpace(c)) {
      pending_space = !out.empty();
      continue;
    }
    if (pending_space) {
      out.push_back(' ');
      pending_space = false;
    }
    if (c < 0) {
      out.append("\xEF\xBF\xBD");
    } else {
      out.append(folded, static_cast<std::size_t>(start), static_cast<std::size_t>(i - start));
    }
  }
  return out;
}

/// Number of extended grapheme clusters in a UTF-8 string.
inline std::size_t grapheme_count(std::string_view utf8) {
  if (utf8.empty()) return 0;
  const icu::UnicodeString u = icu::UnicodeString::fromUTF8(icu::StringPiece(utf8.data(), static_cast<int32_t>(utf8.size())));
  auto& it = detail::grapheme_iterator();
  it.setText(u);
  std::size_t count = 0;
  for (int32_t p = it.first(); (p = it.next()) != icu::BreakIterator::DONE;) ++count;
  return count;
}

/// First extended grapheme cluster of a UTF-8 string (empty for empty input).
inline std::string first_grapheme(std::string_view utf8) {
  if (utf8.empty()) return {};
  const icu::UnicodeString u = icu::UnicodeString::fromUTF8(icu::StringPiece(utf8.data(), static_cast<int32_t>(utf8.size())));
  auto& it = detail::grapheme_iterator();
  it.setText(u);
  it.first();
  const int32_t end = it.next();
  std::string out;
  u.tempSubStringBetween(0, end == icu::BreakIterator::DONE ? u.length() : end).toUTF8String(out);
  return out;
}

/// Keeps at most `max` leading grapheme clusters.
inline std::string truncate_graphemes(std::string_view utf8, std::size_t max) {
  if (utf8.empty()) return {};
  const icu::UnicodeString u = icu::UnicodeString::fromUTF8(icu::StringPiece(utf8.data(), static_cast<int32_t>(utf8.size())));
  auto& it = detail::grapheme_iterator();
  it.setText(u);
  int32_t end = it.first();
  for (std::size_t n = 0; n < max; ++n) {
    const int32_t next = it.next();
    if (next == icu::BreakIterator::DONE) break;
    end = next;
  }
  std::string out;
  u.tempSubStringBetween(0, end).toUTF8String(out);
  return out;
}

inline bool starts_with_letter(std::string_view normalized, std::string_view letter) {
  if (normalized.empty() || letter.empty()) return false;
  return detail::fold_case(first_grapheme(normalized)) == detail::fold_case(letter);
}

inline bool is_single_grapheme(std::string_view utf8) { return grapheme_count(utf8) == 1; }

}  // namespace pg
