#pragma once

#include <string>
#include <unordered_map>
#include <vector>

#include "greenmark/types.hpp"

namespace greenmark {

// Token files are newline-delimited integers.
TokenSeq read_tokens(const std::string& path);
void write_tokens(const TokenSeq& seq, const std::string& path);

// Corpus files: blank lines separate sequences; absent blank lines yield
// a single sequence.
std::vector<TokenSeq> read_corpus(const std::string& path);

// Word <-> id table for demo corpora. File format: one word per line,
// line number = id.
class Vocabulary {
 public:
  Vocabulary() = default;

  Token id_of(const std::string& word) const;      // -1 if unknown
  Token intern(const std::string& word);           // adds if missing
  const std::string& word_of(Token id) const;
  std::int32_t size() const { return static_cast<std::int32_t>(words_.size()); }

  static Vocabulary load(const std::string& path);
  void save(const std::string& path) const;

 private:
  std::vector<std::string> words_;
  std::unordered_map<std::string, Token> index_;
};

// Whitespace tokenizer: maps each word to its id, interning unseen words
// when grow == true and rejecting them otherwise.
TokenSeq tokenize_whitespace(const std::string& text, Vocabulary& vocab, bool grow);

}  // namespace greenmark
