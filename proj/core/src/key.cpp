#include "greenmark/key.hpp"

#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace greenmark {

std::string scheme_name(Scheme s) {
  switch (s) {
    case Scheme::FixedSplit: return "fixed-split";
    case Scheme::BigramHash: return "bigram-hash";
  }
  throw std::logic_error("unknown scheme");
}

Scheme scheme_from_name(const std::string& name) {
  if (name == "fixed-split" || name == "fixed") return Scheme::FixedSplit;
  if (name == "bigram-hash" || name == "bigram") return Scheme::BigramHash;
  throw std::invalid_argument("unknown scheme name: " + name);
}

std::int32_t green_size(double gamma, std::int32_t vocab_size) {
  return static_cast<std::int32_t>(std::floor(gamma * vocab_size));
}

double effective_gamma(const WatermarkKey& key) {
  if (key.vocab_size >= 10000) return key.gamma;
  return static_cast<double>(green_size(key.gamma, key.vocab_size)) / key.vocab_size;
}

namespace {

void validate_params(double gamma, double delta, std::int32_t vocab_size) {
  if (!(gamma > 0.0 && gamma < 1.0)) throw std::invalid_argument("gamma must lie in (0, 1)");
  if (!(delta >= 0.0) || !std::isfinite(delta))
    throw std::invalid_argument("delta must be finite and >= 0");
  if (vocab_size < 2) throw std::invalid_argument("vocab_size must be >= 2");
  if (green_size(gamma, vocab_size) < 1)
    throw std::invalid_argument("gamma too small: floor(gamma * vocab_size) is empty");
}

std::string to_hex(const std::array<std::uint64_t, 4>& seed) {
  static const char* digits = "0123456789abcdef";
  std::string out;
  out.reserve(64);
  for (std::uint64_t w : seed)
    for (int shift = 60; shift >= 0; shift -= 4) out.push_back(digits[(w >> shift) & 0xf]);
  return out;
}

std::array<std::uint64_t, 4> from_hex(const std::string& hex) {
  if (hex.size() != 64) throw std::invalid_argument("seed must be 64 hex chars");
  std::array<std::uint64_t, 4> seed{};
  for (int i = 0; i < 64; ++i) {
    char c = hex[static_cast<std::size_t>(i)];
    std::uint64_t v;
    if (c >= '0' && c <= '9') v = static_cast<std::uint64_t>(c - '0');
    else if (c >= 'a' && c <= 'f') v = static_cast<std::uint64_t>(c - 'a' + 10);
    else if (c >= 'A' && c <= 'F') v = static_cast<std::uint64_t>(c - 'A' + 10);
    else throw std::invalid_argument("seed contains a non-hex character");
    seed[static_cast<std::size_t>(i / 16)] = (seed[static_cast<std::size_t>(i / 16)] << 4) | v;
  }
  return seed;
}

}  // namespace

std::string WatermarkKey::seed_hex() const { return to_hex(seed); }

WatermarkKey keygen(double gamma, double delta, Scheme scheme, std::int32_t vocab_size,
                    Rng& entropy) {
  validate_params(gamma, delta, vocab_size);
  WatermarkKey key;
  for (auto& w : key.seed) w = entropy.next_u64();
  key.gamma = gamma;
  key.delta = delta;
  key.scheme = scheme;
  key.vocab_size = vocab_size;
  return key;
}

std::string key_to_json(const WatermarkKey& key) {
  nlohmann::json j;
  j["scheme"] = scheme_name(key.scheme);
  j["vocab_size"] = key.vocab_size;
  j["gamma"] = key.gamma;
  j["delta"] = key.delta;
  j["seed"] = key.seed_hex();
  return j.dump(2) + "\n";
}

WatermarkKey key_from_json(const std::string& text) {
  nlohmann::json j = nlohmann::json::parse(text);
  WatermarkKey key;
  key.scheme = scheme_from_name(j.at("scheme").get<std::string>());
  key.vocab_size = j.at("vocab_size").get<std::int32_t>();
  key.gamma = j.at("gamma").get<double>();
  key.delta = j.at("delta").get<double>();
  key.seed = from_hex(j.at("seed").get<std::string>());
  validate_params(key.gamma, key.delta, key.vocab_size);
  return key;
}

void save_key(const WatermarkKey& key, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open key file for writing: " + path);
  out << key_to_json(key);
}

WatermarkKey load_key(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open key file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return key_from_json(buf.str());
}

}  // namespace greenmark
