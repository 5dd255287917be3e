// greenmark command line: key management, watermarked generation,
// detection, certification, attacks, bound verification and experiment
// sweeps over token files. All subcommands are deterministic given their
// seeds; timing goes to stderr so reruns are byte-identical.

#include <cmath>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <random>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "greenmark/attack.hpp"
#include "greenmark/certify.hpp"
#include "greenmark/detect.hpp"
#include "greenmark/divergence.hpp"
#include "greenmark/harness.hpp"
#include "greenmark/key.hpp"
#include "greenmark/model.hpp"
#include "greenmark/partition.hpp"
#include "greenmark/sampling.hpp"
#include "greenmark/token_io.hpp"
#include "greenmark/version.hpp"

namespace {

using namespace greenmark;

std::vector<double> parse_alpha_list(const std::string& text) {
  std::vector<double> out;
  std::size_t start = 0;
  while (start <= text.size()) {
    const std::size_t pos = text.find(',', start);
    const std::string item = text.substr(start, pos == std::string::npos ? pos : pos - start);
    if (!item.empty()) {
      if (item == "inf" || item == "Inf") out.push_back(std::numeric_limits<double>::infinity());
      else out.push_back(std::stod(item));
    }
    if (pos == std::string::npos) break;
    start = pos + 1;
  }
  if (out.empty()) throw CLI::ValidationError("alphas", "empty alpha list");
  return out;
}

EditMix parse_mix(const std::string& text) {
  EditMix mix{0, 0, 0};
  std::size_t start = 0;
  while (start < text.size()) {
    const std::size_t pos = text.find(',', start);
    const std::string item =
        text.substr(start, pos == std::string::npos ? std::string::npos : pos - start);
    const std::size_t colon = item.find(':');
    if (colon == std::string::npos) throw CLI::ValidationError("mix", "expected op:weight");
    const std::string op = item.substr(0, colon);
    const double w = std::stod(item.substr(colon + 1));
    if (op == "ins") mix.p_ins = w;
    else if (op == "del") mix.p_del = w;
    else if (op == "rep") mix.p_rep = w;
    else throw CLI::ValidationError("mix", "unknown op: " + op);
    if (pos == std::string::npos) break;
    start = pos + 1;
  }
  return mix;
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  out << text;
  if (!out) throw std::runtime_error("write failed: " + path);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"fixed green/red-list watermarking toolkit for token streams"};
  app.set_version_flag("--version", std::string(kVersion));
  app.require_subcommand(1);

  // keygen ------------------------------------------------------------------
  auto* keygen_cmd = app.add_subcommand("keygen", "create a watermark key file");
  double kg_gamma = 0.5, kg_delta = 2.0;
  std::string kg_scheme = "fixed-split", kg_out;
  std::int32_t kg_vocab = 1000;
  std::uint64_t kg_seed = 0;
  keygen_cmd->add_option("--gamma", kg_gamma, "green fraction in (0,1)");
  keygen_cmd->add_option("--delta", kg_delta, "logit bonus >= 0");
  keygen_cmd->add_option("--scheme", kg_scheme, "fixed-split | bigram-hash");
  keygen_cmd->add_option("--vocab", kg_vocab, "vocabulary size")->required();
  auto* kg_seed_opt = keygen_cmd->add_option("--seed", kg_seed, "seed (omit for random key)");
  keygen_cmd->add_option("--out", kg_out, "key file path")->required();

  // generate ----------------------------------------------------------------
  auto* gen_cmd = app.add_subcommand("generate", "sample a (watermarked) token sequence");
  std::string g_model, g_key, g_decoding = "multinomial", g_out, g_prompt;
  int g_n = 200;
  std::uint64_t g_seed = 0;
  gen_cmd->add_option("--model", g_model, "model spec, e.g. uniform:1000")->required();
  gen_cmd->add_option("--key", g_key, "key file (omit for un-watermarked)");
  gen_cmd->add_option("--n", g_n, "tokens to generate")->required();
  gen_cmd->add_option("--decoding", g_decoding, "multinomial | greedy | topp:P");
  gen_cmd->add_option("--seed", g_seed, "sampler seed")->required();
  gen_cmd->add_option("--prompt", g_prompt, "prompt token file");
  gen_cmd->add_option("--out", g_out, "output token file")->required();

  // detect ------------------------------------------------------------------
  auto* det_cmd = app.add_subcommand("detect", "score a suspect token sequence");
  std::string d_key, d_in, d_report;
  double d_tau = kDefaultTau, d_alpha = 0;
  auto* d_tau_opt = det_cmd->add_option("--tau", d_tau, "fixed z threshold");
  auto* d_alpha_opt =
      det_cmd->add_option("--alpha", d_alpha, "false-positive level for the adaptive threshold");
  d_tau_opt->excludes(d_alpha_opt);
  d_alpha_opt->excludes(d_tau_opt);
  det_cmd->add_option("--key", d_key, "key file")->required();
  det_cmd->add_option("--in", d_in, "suspect token file")->required();
  det_cmd->add_option("--report", d_report, "write the report JSON here");

  // certify -----------------------------------------------------------------
  auto* cert_cmd = app.add_subcommand("certify", "certified edit budget for a sequence");
  std::string c_key, c_in, c_out;
  double c_tau = kDefaultTau;
  cert_cmd->add_option("--key", c_key, "key file")->required();
  cert_cmd->add_option("--in", c_in, "token file")->required();
  cert_cmd->add_option("--tau", c_tau, "detection threshold")->required();
  cert_cmd->add_option("--out", c_out, "write the certificate JSON here");

  // attack ------------------------------------------------------------------
  auto* att_cmd = app.add_subcommand("attack", "apply a bounded-edit adversary");
  std::string a_in, a_out, a_mix = "rep:1", a_key;
  std::int32_t a_eta = 0, a_vocab = 0;
  std::uint64_t a_seed = 0;
  bool a_greenaware = false;
  att_cmd->add_option("--in", a_in, "input token file")->required();
  att_cmd->add_option("--eta", a_eta, "edit budget")->required();
  att_cmd->add_option("--mix", a_mix, "ins:I,del:D,rep:R weights");
  att_cmd->add_flag("--greenaware", a_greenaware, "replace green tokens with red ones");
  att_cmd->add_option("--key", a_key, "key file (green-aware attack, also supplies vocab)");
  att_cmd->add_option("--vocab", a_vocab, "vocabulary size (when no key is given)");
  att_cmd->add_option("--seed", a_seed, "adversary seed")->required();
  att_cmd->add_option("--out", a_out, "output token file")->required();

  // quality-check -----------------------------------------------------------
  auto* q_cmd = app.add_subcommand("quality-check",
                                   "randomized check of the per-step divergence bounds");
  double q_delta = 2.0, q_gamma = 0.5;
  std::int32_t q_vocab = 100;
  int q_trials = 1000, q_horizon = 200;
  std::string q_alphas = "0.5,1,2,10,inf", q_report;
  std::uint64_t q_seed = 1;
  q_cmd->add_option("--delta", q_delta, "watermark strength")->required();
  q_cmd->add_option("--gamma", q_gamma, "green fraction")->required();
  q_cmd->add_option("--vocab", q_vocab, "vocabulary size")->required();
  q_cmd->add_option("--trials", q_trials, "random (p, G) pairs")->required();
  q_cmd->add_option("--alphas", q_alphas, "divergence orders, e.g. 0.5,1,2,10,inf");
  q_cmd->add_option("--seed", q_seed, "trial seed");
  q_cmd->add_option("--horizon", q_horizon, "sequence length for composition budgets");
  q_cmd->add_option("--report", q_report, "write the worst-case report JSON here");

  // evaluate ----------------------------------------------------------------
  auto* e_cmd = app.add_subcommand("evaluate", "run an experiment config");
  std::string e_config;
  e_cmd->add_option("--config", e_config, "experiment config JSON")->required();

  // tokenize ----------------------------------------------------------------
  auto* t_cmd = app.add_subcommand("tokenize", "whitespace-tokenize text to token ids");
  std::string t_text, t_vocab, t_out;
  bool t_grow = false;
  t_cmd->add_option("--text", t_text, "input text file")->required();
  t_cmd->add_option("--vocab", t_vocab, "vocabulary file")->required();
  t_cmd->add_flag("--grow", t_grow, "intern unseen words and rewrite the vocabulary");
  t_cmd->add_option("--out", t_out, "output token file")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (*keygen_cmd) {
      std::uint64_t s = kg_seed;
      if (kg_seed_opt->count() == 0) {
        std::random_device rd;
        s = (static_cast<std::uint64_t>(rd()) << 32) ^ rd();
      }
      Rng entropy(s);
      const WatermarkKey key =
          keygen(kg_gamma, kg_delta, scheme_from_name(kg_scheme), kg_vocab, entropy);
      save_key(key, kg_out);
      std::cerr << "key written to " << kg_out << "\n";
    } else if (*gen_cmd) {
      const ModelPtr model = model_from_spec(g_model);
      GenerationConfig config;
      config.horizon = g_n;
      config.decoding = Decoding::parse(g_decoding);
      config.seed = g_seed;
      TokenSeq prompt;
      if (!g_prompt.empty()) prompt = read_tokens(g_prompt);
      TokenSeq out;
      if (g_key.empty()) {
        out = generate(*model, prompt, config);
      } else {
        const WatermarkKey key = load_key(g_key);
        out = generate(*model, prompt, &key, config);
      }
      write_tokens(out, g_out);
      std::cerr << g_n << " tokens written to " << g_out << "\n";
    } else if (*det_cmd) {
      const WatermarkKey key = load_key(d_key);
      const TokenSeq seq = read_tokens(d_in);
      double tau = d_tau;
      if (d_alpha_opt->count() > 0)
        tau = adaptive_threshold(diversity_stats(seq), effective_gamma(key), d_alpha);
      const DetectionReport report = key.scheme == Scheme::FixedSplit
                                         ? detect(seq, key, tau)
                                         : detect_bigram(seq, key, tau);
      const std::string text = report.to_json();
      if (!d_report.empty()) write_text(d_report, text);
      std::cout << text;
    } else if (*cert_cmd) {
      const WatermarkKey key = load_key(c_key);
      const TokenSeq seq = read_tokens(c_in);
      const DetectionReport report = key.scheme == Scheme::FixedSplit
                                         ? detect(seq, key, c_tau)
                                         : detect_bigram(seq, key, c_tau);
      const RobustnessCertificate cert =
          certified_edit_budget(report.z, report.n, effective_gamma(key), c_tau, key.scheme);
      const std::string text = cert.to_json();
      if (!c_out.empty()) write_text(c_out, text);
      std::cout << text;
    } else if (*att_cmd) {
      const TokenSeq seq = read_tokens(a_in);
      Rng rng(a_seed);
      TokenSeq out;
      if (a_greenaware) {
        if (a_key.empty()) throw std::runtime_error("--greenaware needs --key");
        const WatermarkKey key = load_key(a_key);
        out = greenaware_attack(seq, partition(key), a_eta, key.vocab_size, rng);
      } else {
        std::int32_t vocab = a_vocab;
        if (!a_key.empty()) vocab = load_key(a_key).vocab_size;
        if (vocab <= 0) throw std::runtime_error("attack needs --vocab or --key");
        out = random_edit_attack(seq, a_eta, parse_mix(a_mix), vocab, rng);
      }
      write_tokens(out, a_out);
      if (out.empty()) std::cerr << "warning: attacked sequence is empty\n";
      std::cerr << "attacked tokens written to " << a_out << "\n";
    } else if (*q_cmd) {
      const std::vector<double> alphas = parse_alpha_list(q_alphas);
      Rng rng(q_seed);
      WatermarkKey key_template;  // partitions drawn per trial
      key_template.gamma = q_gamma;
      key_template.delta = q_delta;
      key_template.scheme = Scheme::FixedSplit;
      key_template.vocab_size = q_vocab;

      QualityCheckReport worst;
      bool all_pass = true;
      long violations = 0;
      for (int trial = 0; trial < q_trials; ++trial) {
        Rng entropy(mix64(q_seed + 0x9e3779b97f4a7c15ULL * (trial + 1)));
        const WatermarkKey key =
            keygen(q_gamma, q_delta, Scheme::FixedSplit, q_vocab, entropy);
        const GreenList green = partition(key);

        LogitVector logits(static_cast<std::size_t>(q_vocab));
        const double scale = 0.5 + 5.0 * rng.next_unit();
        for (double& l : logits) l = scale * rng.next_normal();
        const ProbVector p = softmax(logits);

        const QualityCheckReport r = verify_quality_bound(p, green, q_delta, alphas, q_horizon);
        if (!r.pass) ++violations;
        all_pass = all_pass && r.pass;
        if (trial == 0) {
          worst = r;
        } else {
          if (r.tv - r.tv_bound > worst.tv - worst.tv_bound) {
            worst.tv = r.tv;
            worst.tv_bound = r.tv_bound;
          }
          for (std::size_t i = 0; i < worst.alphas.size(); ++i)
            if (r.alphas[i].margin < worst.alphas[i].margin) worst.alphas[i] = r.alphas[i];
        }
      }
      worst.pass = all_pass;

      char line[160];
      for (const AlphaMargin& m : worst.alphas) {
        std::snprintf(line, sizeof line,
                      "alpha=%-4g worst_divergence=%.12g bound=%.12g margin=%.12g\n", m.alpha,
                      m.divergence, m.bound, m.margin);
        std::cout << line;
      }
      std::snprintf(line, sizeof line, "tv    worst=%.12g bound=%.12g margin=%.12g\n", worst.tv,
                    worst.tv_bound, worst.tv_bound - worst.tv);
      std::cout << line;
      std::cout << (all_pass ? "PASS" : "FAIL") << " (" << q_trials << " trials, " << violations
                << " violations)\n";
      if (!q_report.empty()) write_text(q_report, worst.to_json());
      if (!all_pass) return 1;
    } else if (*e_cmd) {
      const ExperimentConfig config = ExperimentConfig::load(e_config);
      const EvalReport report = run_experiment(config);
      if (config.out_path.empty()) {
        std::cout << report.to_json();
      } else {
        emit_report(report, config.out_path);
      }
      for (const BoundCheck& c : report.checks)
        std::cout << (c.pass ? "[ok]   " : "[FAIL] ") << c.name << " observed="
                  << c.observed << " bound=" << c.bound << " trials=" << c.trials << "\n";
      std::cerr << "runtime: " << report.runtime_seconds << " s\n";
      for (const BoundCheck& c : report.checks)
        if (!c.pass) return 1;
    } else if (*t_cmd) {
      std::ifstream in(t_text, std::ios::binary);
      if (!in) throw std::runtime_error("cannot open text file: " + t_text);
      std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
      Vocabulary vocab;
      std::ifstream probe(t_vocab);
      if (probe.good()) vocab = Vocabulary::load(t_vocab);
      const TokenSeq seq = tokenize_whitespace(text, vocab, t_grow);
      if (t_grow) vocab.save(t_vocab);
      write_tokens(seq, t_out);
      std::cerr << seq.size() << " tokens written to " << t_out << "\n";
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
