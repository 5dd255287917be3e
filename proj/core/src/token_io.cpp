#include "greenmark/token_io.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

namespace greenmark {

namespace {

std::ifstream open_in(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open file: " + path);
  return in;
}

Token parse_token(const std::string& line, const std::string& path) {
  std::size_t pos = 0;
  long v;
  try {
    v = std::stol(line, &pos);
  } catch (const std::exception&) {
    throw std::runtime_error("malformed token line in " + path + ": '" + line + "'");
  }
  while (pos < line.size() && (line[pos] == ' ' || line[pos] == '\r' || line[pos] == '\t')) ++pos;
  if (pos != line.size())
    throw std::runtime_error("malformed token line in " + path + ": '" + line + "'");
  return static_cast<Token>(v);
}

}  // namespace

TokenSeq read_tokens(const std::string& path) {
  std::ifstream in = open_in(path);
  TokenSeq seq;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line == "\r") continue;
    seq.push_back(parse_token(line, path));
  }
  return seq;
}

void write_tokens(const TokenSeq& seq, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open file for writing: " + path);
  for (Token t : seq) out << t << '\n';
  if (!out) throw std::runtime_error("write failed: " + path);
}

std::vector<TokenSeq> read_corpus(const std::string& path) {
  std::ifstream in = open_in(path);
  std::vector<TokenSeq> corpus(1);
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line == "\r") {
      if (!corpus.back().empty()) corpus.emplace_back();
      continue;
    }
    corpus.back().push_back(parse_token(line, path));
  }
  if (corpus.back().empty()) corpus.pop_back();
  return corpus;
}

Token Vocabulary::id_of(const std::string& word) const {
  auto it = index_.find(word);
  return it == index_.end() ? -1 : it->second;
}

Token Vocabulary::intern(const std::string& word) {
  auto it = index_.find(word);
  if (it != index_.end()) return it->second;
  const Token id = static_cast<Token>(words_.size());
  words_.push_back(word);
  index_.emplace(word, id);
  return id;
}

const std::string& Vocabulary::word_of(Token id) const {
  if (id < 0 || id >= size()) throw std::invalid_argument("token id out of vocabulary range");
  return words_[static_cast<std::size_t>(id)];
}

Vocabulary Vocabulary::load(const std::string& path) {
  std::ifstream in = open_in(path);
  Vocabulary vocab;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    vocab.intern(line);
  }
  return vocab;
}

void Vocabulary::save(const std::string& path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open file for writing: " + path);
  for (const std::string& w : words_) out << w << '\n';
  if (!out) throw std::runtime_error("write failed: " + path);
}

TokenSeq tokenize_whitespace(const std::string& text, Vocabulary& vocab, bool grow) {
  TokenSeq seq;
  std::istringstream in(text);
  std::string word;
  while (in >> word) {
    Token id = grow ? vocab.intern(word) : vocab.id_of(word);
    if (id < 0) throw std::runtime_error("word not in vocabulary: " + word);
    seq.push_back(id);
  }
  return seq;
}

}  // namespace greenmark
