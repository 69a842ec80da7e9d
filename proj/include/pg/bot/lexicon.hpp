#pragma once

// Newline-delimited `word<TAB>category[<TAB>gloss]` lexicon. The optional gloss
// completes "it ..." in template arguments ("denotes a purplish hue").

#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "pg/core/error.hpp"
#include "pg/core/text.hpp"

namespace pg::bot {

struct LexiconEntry {
  std::string word;
  std::string category;
  std::string gloss;
  std::string normalized_word;
  std::string normalized_category;
};

class Lexicon {
 public:
  Lexicon() = default;

  /// Blank lines and lines starting with '#' are skipped. Lines without a tab
  /// are rejected with their line number.
  static Lexicon parse(const std::string& text) {
    Lexicon lex;
    std::istringstream in(text);
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
      ++line_no;
      if (!line.empty() && line.back() == '\r') line.pop_back();
      if (normalize_word(line).empty() || line.front() == '#') continue;
      const auto tab = line.find('\t');
      if (tab == std::string::npos)
        throw std::invalid_argument("lexicon line " + std::to_string(line_no) + ": expected word<TAB>category");
      LexiconEntry e;
      e.word = line.substr(0, tab);
      std::string rest = line.substr(tab + 1);
      const auto tab2 = rest.find('\t');
      e.category = rest.substr(0, tab2);
      if (tab2 != std::string::npos) e.gloss = rest.substr(tab2 + 1);
      e.normalized_word = normalize_word(e.word);
      e.normalized_category = normalize_word(e.category);
      if (e.normalized_word.empty() || e.normalized_category.empty())
        throw std::invalid_argument("lexicon line " + std::to_string(line_no) + ": blank word or category");
      lex.entries_.push_back(std::move(e));
    }
    return lex;
  }

  static Lexicon load(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::invalid_argument("cannot open lexicon " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return parse(ss.str());
  }

  const std::vector<LexiconEntry>& entries() const { return entries_; }
  std::size_t size() const { return entries_.size(); }

  /// Words listed under `category` that start with `letter`, in file order.
  std::vector<const LexiconEntry*> candidates(const std::string& category, const std::string& letter) const {
    const std::string cat = normalize_word(category);
    std::vector<const LexiconEntry*> out;
    for (const auto& e : entries_)
      if (e.normalized_category == cat && starts_with_letter(e.normalized_word, letter)) out.push_back(&e);
    return out;
  }

  /// Words under any other category that start with `letter`, in file order.
  std::vector<const LexiconEntry*> stretch_candidates(const std::string& category, const std::string& letter) const {
    const std::string cat = normalize_word(category);
    std::vector<const LexiconEntry*> out;
    for (const auto& e : entries_)
      if (e.normalized_category != cat && starts_with_letter(e.normalized_word, letter)) out.push_back(&e);
    return out;
  }

  const LexiconEntry* find(const std::string& word, const std::string& category) const {
    const std::string w = normalize_word(word), cat = normalize_word(category);
    for (const auto& e : entries_)
      if (e.normalized_word == w && e.normalized_category == cat) return &e;
    return nullptr;
  }

  bool contains(const std::string& word, const std::string& category) const { return find(word, category) != nullptr; }

 private:
  std::vector<LexiconEntry> entries_;
};

}  // namespace pg::bot
