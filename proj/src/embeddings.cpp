/*
 * Copyright 2026 The textclf Authors.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "textclf/embeddings.hpp"

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <thread>

#include "json.hpp"
#include "textclf/error.hpp"
#include "textclf/hash.hpp"
#include "textclf/nn/checkpoint.hpp"
#include "textclf/serialize.hpp"
#include "textclf/utf8.hpp"

namespace textclf {

std::string to_string(EmbeddingKind kind) {
  switch (kind) {
    case EmbeddingKind::kSgns: return "sgns";
    case EmbeddingKind::kGlove: return "glove";
    case EmbeddingKind::kSubword: return "subword";
  }
  return "unknown";
}

EmbeddingKind parse_embedding_kind(std::string_view name) {
  if (name == "sgns") return EmbeddingKind::kSgns;
  if (name == "glove") return EmbeddingKind::kGlove;
  if (name == "subword") return EmbeddingKind::kSubword;
  throw ConfigError("unknown embedding kind '" + std::string(name) + "'");
}

OovStrategy parse_oov_strategy(std::string_view name) {
  if (name == "error") return OovStrategy::kError;
  if (name == "uniform") return OovStrategy::kUniform;
  if (name == "random_invocab") return OovStrategy::kRandomInVocab;
  if (name == "subword") return OovStrategy::kSubword;
  throw ConfigError("unknown OOV strategy '" + std::string(name) + "'");
}

void TrainSpec::validate() const {
  if (dim < 1) throw ContractViolation("TrainSpec: dim must be >= 1");
  if (window < 1) throw ContractViolation("TrainSpec: window must be >= 1");
  if (negatives < 1) throw ContractViolation("TrainSpec: negatives must be >= 1");
  if (epochs < 0) throw ContractViolation("TrainSpec: epochs must be >= 0");
  if (nmin < 1 || nmin > nmax) throw ContractViolation("TrainSpec: need 1 <= nmin <= nmax");
  if (bucket_count < 1) throw ContractViolation("TrainSpec: bucket_count must be >= 1");
  if (threads < 1) throw ContractViolation("TrainSpec: threads must be >= 1");
}

bool EmbeddingModel::all_finite() const {
  auto finite = [](const std::vector<float>& v) {
    return std::all_of(v.begin(), v.end(), [](float x) { return std::isfinite(x); });
  };
  return finite(input) && finite(output) && finite(buckets) && finite(input_bias) &&
         finite(output_bias);
}

// ---------------------------------------------------------------------------

NegativeSampler::NegativeSampler(std::span<const std::int64_t> freq, double power)
    : prob_(freq.size(), 0.0), cdf_(freq.size(), 0.0), power_(power) {
  double total = 0.0;
  for (std::size_t id = 1; id < freq.size(); ++id) {
    if (freq[id] < 0) throw ContractViolation("negative sampler: negative frequency");
    if (freq[id] > 0) {
      prob_[id] = std::pow(static_cast<double>(freq[id]), power);
      total += prob_[id];
      ++support_;
    }
  }
  if (total <= 0.0) throw DataError("negative sampler: all frequencies are zero");
  double acc = 0.0;
  for (std::size_t id = 0; id < prob_.size(); ++id) {
    prob_[id] /= total;
    acc += prob_[id];
    cdf_[id] = acc;
  }
}

double NegativeSampler::probability(int id) const {
  if (id < 0 || static_cast<std::size_t>(id) >= prob_.size()) return 0.0;
  return prob_[static_cast<std::size_t>(id)];
}

int NegativeSampler::sample(Rng& rng) const {
  const double u = rng.uniform() * cdf_.back();
  auto it = std::upper_bound(cdf_.begin(), cdf_.end(), u);
  if (it == cdf_.end()) --it;
  auto id = static_cast<std::size_t>(it - cdf_.begin());
  while (prob_[id] == 0.0) --id;  // u landed on a zero-width step's right edge
  return static_cast<int>(id);
}

int NegativeSampler::sample_excluding(Rng& rng, int exclude) const {
  if (support_ == 1 && probability(exclude) > 0.0) {
    throw ContractViolation("negative sampler: cannot exclude the only id in the support");
  }
  int id;
  do {
    id = sample(rng);
  } while (id == exclude);
  return id;
}

NegativeSampler build_negative_sampler(std::span<const std::int64_t> frequencies_by_id,
                                       double power) {
  return NegativeSampler(frequencies_by_id, power);
}

// ---------------------------------------------------------------------------

namespace {

template <bool Atomic>
float load(const float& x) {
  if constexpr (Atomic) {
    return std::atomic_ref<float>(const_cast<float&>(x)).load(std::memory_order_relaxed);
  } else {
    return x;
  }
}

template <bool Atomic>
void add(float& x, float delta) {
  if constexpr (Atomic) {
    std::atomic_ref<float>(x).fetch_add(delta, std::memory_order_relaxed);
  } else {
    x += delta;
  }
}

template <bool Atomic>
void gather(std::span<const float> row, std::vector<float>& out) {
  out.resize(row.size());
  for (std::size_t i = 0; i < row.size(); ++i) out[i] = load<Atomic>(row[i]);
}

// Mean of bucket rows. Shared by compose_subword and training.
template <bool Atomic>
void mean_of_buckets(const EmbeddingModel& m, std::span<const std::uint32_t> buckets,
                     std::vector<float>& out) {
  out.assign(m.dim, 0.0f);
  for (std::uint32_t b : buckets) {
    const auto row = m.bucket_row(b);
    for (std::size_t i = 0; i < m.dim; ++i) out[i] += load<Atomic>(row[i]);
  }
  const float inv = 1.0f / static_cast<float>(buckets.size());
  for (float& v : out) v *= inv;
}

struct Scratch {
  std::vector<float> center, context, d_center, d_context;
  std::vector<std::vector<float>> negs, d_negs;
};

void check_pair_ids(const EmbeddingModel& m, int center, int context,
                    std::span<const int> negs) {
  const auto valid = [&](int id) {
    return id >= 1 && static_cast<std::size_t>(id) <= m.vocab.size();
  };
  if (!valid(center) || !valid(context)) {
    throw ContractViolation("pair step: id out of range");
  }
  for (int n : negs) {
    if (!valid(n)) throw ContractViolation("pair step: negative id out of range");
    if (n == context) throw ContractViolation("pair step: negative id equals context id");
  }
}

// Shared body of the SGNS and subword steps. `center_buckets` empty selects
// the plain word row as the center.
template <bool Atomic>
double pair_update(EmbeddingModel& m, int center_id,
                   std::span<const std::uint32_t> center_buckets, int context_id,
                   std::span<const int> negs, float lr, Scratch& s) {
  if (center_buckets.empty()) {
    gather<Atomic>(m.input_row(center_id), s.center);
  } else {
    mean_of_buckets<Atomic>(m, center_buckets, s.center);
  }
  gather<Atomic>(m.output_row(context_id), s.context);
  s.negs.resize(negs.size());
  s.d_negs.resize(negs.size());
  std::vector<std::span<const float>> neg_views;
  std::vector<std::span<float>> dneg_views;
  for (std::size_t n = 0; n < negs.size(); ++n) {
    gather<Atomic>(m.output_row(negs[n]), s.negs[n]);
    s.d_negs[n].assign(m.dim, 0.0f);
    neg_views.emplace_back(s.negs[n]);
    dneg_views.emplace_back(s.d_negs[n]);
  }
  s.d_center.assign(m.dim, 0.0f);
  s.d_context.assign(m.dim, 0.0f);
  const float loss = sgns_pair_loss<float>(s.center, s.context, neg_views, s.d_center,
                                           s.d_context, dneg_views);

  if (center_buckets.empty()) {
    auto row = m.input_row(center_id);
    for (std::size_t i = 0; i < m.dim; ++i) add<Atomic>(row[i], -lr * s.d_center[i]);
  } else {
    const float share = lr / static_cast<float>(center_buckets.size());
    for (std::uint32_t b : center_buckets) {
      auto row = m.bucket_row(b);
      for (std::size_t i = 0; i < m.dim; ++i) add<Atomic>(row[i], -share * s.d_center[i]);
    }
  }
  auto ctx = m.output_row(context_id);
  for (std::size_t i = 0; i < m.dim; ++i) add<Atomic>(ctx[i], -lr * s.d_context[i]);
  for (std::size_t n = 0; n < negs.size(); ++n) {
    auto row = m.output_row(negs[n]);
    for (std::size_t i = 0; i < m.dim; ++i) add<Atomic>(row[i], -lr * s.d_negs[n][i]);
  }
  return loss;
}

std::vector<std::vector<int>> encode_all(std::span<const TokenizedDocument> docs,
                                         const Vocabulary& vocab) {
  std::vector<std::vector<int>> out;
  out.reserve(docs.size());
  for (const TokenizedDocument& d : docs) {
    std::vector<int> ids;
    for (const std::string& t : d.tokens) {
      if (auto id = vocab.id(t)) ids.push_back(*id);
    }
    out.push_back(std::move(ids));
  }
  return out;
}

void materialize_subword_rows(EmbeddingModel& m,
                              const std::vector<std::vector<std::uint32_t>>& grams) {
  std::vector<float> composed;
  for (std::size_t id = 1; id < m.rows(); ++id) {
    mean_of_buckets<false>(m, grams[id], composed);
    std::copy(composed.begin(), composed.end(), m.input_row(static_cast<int>(id)).begin());
  }
}

std::vector<std::vector<std::uint32_t>> vocab_ngrams(const EmbeddingModel& m) {
  std::vector<std::vector<std::uint32_t>> grams(m.rows());
  for (std::size_t id = 1; id < m.rows(); ++id) {
    grams[id] = subword_ngrams(m.vocab.token(static_cast<int>(id)), m.nmin, m.nmax,
                               m.bucket_count);
  }
  return grams;
}

struct EpochTotals {
  double loss = 0.0;
  std::size_t pairs = 0;
};

// Runs one epoch over docs[first], docs[first + stride], ...
template <bool Atomic>
EpochTotals skipgram_pass(EmbeddingModel& m, const std::vector<std::vector<int>>& docs,
                          std::size_t first, std::size_t stride,
                          const std::vector<std::vector<std::uint32_t>>* grams,
                          const NegativeSampler& sampler, const TrainSpec& spec, Rng& rng) {
  EpochTotals totals;
  Scratch scratch;
  std::vector<int> negs(static_cast<std::size_t>(spec.negatives));
  const float lr = static_cast<float>(spec.learning_rate);
  for (std::size_t d = first; d < docs.size(); d += stride) {
    const std::vector<int>& ids = docs[d];
    const auto n = static_cast<std::ptrdiff_t>(ids.size());
    for (std::ptrdiff_t pos = 0; pos < n; ++pos) {
      // Effective window drawn uniformly from 1..window per center.
      const auto b = static_cast<std::ptrdiff_t>(1 + rng.below(static_cast<std::uint64_t>(spec.window)));
      const int center = ids[static_cast<std::size_t>(pos)];
      for (std::ptrdiff_t j = std::max<std::ptrdiff_t>(0, pos - b);
           j <= std::min(n - 1, pos + b); ++j) {
        if (j == pos) continue;
        const int context = ids[static_cast<std::size_t>(j)];
        for (int& neg : negs) neg = sampler.sample_excluding(rng, context);
        const std::span<const std::uint32_t> cb =
            grams ? std::span<const std::uint32_t>((*grams)[static_cast<std::size_t>(center)])
                  : std::span<const std::uint32_t>();
        totals.loss += pair_update<Atomic>(m, center, cb, context, negs, lr, scratch);
        ++totals.pairs;
      }
    }
  }
  return totals;
}

EmbeddingModel train_skipgram(std::span<const TokenizedDocument> docs, const Vocabulary& vocab,
                              const TrainSpec& spec, EmbeddingKind kind) {
  spec.validate();
  if (vocab.size() < 2) {
    throw DataError("skip-gram training needs at least 2 vocabulary entries");
  }
  const auto encoded = encode_all(docs, vocab);
  const bool any_pair = std::any_of(encoded.begin(), encoded.end(),
                                    [](const std::vector<int>& d) { return d.size() >= 2; });
  if (!any_pair) throw DataError("empty corpus: no (center, context) pairs");

  EmbeddingModel m = init_embedding_model(kind, vocab, spec);
  const auto freqs = vocab.corpus_frequencies();
  const NegativeSampler sampler(freqs, spec.sampler_power);
  std::vector<std::vector<std::uint32_t>> grams;
  if (kind == EmbeddingKind::kSubword) grams = vocab_ngrams(m);
  const auto* gram_ptr = kind == EmbeddingKind::kSubword ? &grams : nullptr;

  for (int epoch = 0; epoch < spec.epochs; ++epoch) {
    EpochTotals totals;
    if (spec.threads <= 1) {
      Rng rng(mix_seed(spec.seed, static_cast<std::uint64_t>(epoch)));
      totals = skipgram_pass<false>(m, encoded, 0, 1, gram_ptr, sampler, spec, rng);
    } else {
      const auto t = static_cast<std::size_t>(spec.threads);
      std::vector<EpochTotals> parts(t);
      std::vector<std::thread> workers;
      for (std::size_t w = 0; w < t; ++w) {
        workers.emplace_back([&, w] {
          Rng rng(mix_seed(spec.seed, static_cast<std::uint64_t>(epoch) * t + w));
          parts[w] = skipgram_pass<true>(m, encoded, w, t, gram_ptr, sampler, spec, rng);
        });
      }
      for (auto& th : workers) th.join();
      for (const auto& p : parts) {
        totals.loss += p.loss;
        totals.pairs += p.pairs;
      }
    }
    m.epoch_loss.push_back(totals.pairs ? totals.loss / static_cast<double>(totals.pairs) : 0.0);
  }
  if (kind == EmbeddingKind::kSubword) materialize_subword_rows(m, grams);
  if (!m.all_finite()) throw NumericError("skip-gram training produced non-finite vectors");
  return m;
}

}  // namespace

EmbeddingModel init_embedding_model(EmbeddingKind kind, const Vocabulary& vocab,
                                    const TrainSpec& spec) {
  spec.validate();
  EmbeddingModel m;
  m.kind = kind;
  m.dim = spec.dim;
  m.vocab = vocab;
  m.seed = spec.seed;
  m.nmin = spec.nmin;
  m.nmax = spec.nmax;
  const std::size_t rows = vocab.size() + 1;
  m.input.assign(rows * m.dim, 0.0f);
  m.output.assign(rows * m.dim, 0.0f);
  Rng rng(mix_seed(spec.seed, 0xE11B));
  const double a = 0.5 / static_cast<double>(m.dim);
  for (std::size_t i = m.dim; i < m.input.size(); ++i) {
    m.input[i] = static_cast<float>(rng.uniform(-a, a));
  }
  if (kind == EmbeddingKind::kGlove) {
    for (std::size_t i = m.dim; i < m.output.size(); ++i) {
      m.output[i] = static_cast<float>(rng.uniform(-a, a));
    }
    m.input_bias.assign(rows, 0.0f);
    m.output_bias.assign(rows, 0.0f);
  }
  if (kind == EmbeddingKind::kSubword) {
    m.bucket_count = spec.bucket_count;
    m.buckets.resize(std::size_t{spec.bucket_count} * m.dim);
    const double b = 1.0 / static_cast<double>(m.dim);
    for (float& v : m.buckets) v = static_cast<float>(rng.uniform(-b, b));
    materialize_subword_rows(m, vocab_ngrams(m));
  }
  return m;
}

double sgns_pair_step(int center_id, int context_id, std::span<const int> negative_ids,
                      EmbeddingModel& model, double lr) {
  check_pair_ids(model, center_id, context_id, negative_ids);
  Scratch s;
  return pair_update<false>(model, center_id, {}, context_id, negative_ids,
                            static_cast<float>(lr), s);
}

double subword_pair_step(int center_id, int context_id, std::span<const int> negative_ids,
                         EmbeddingModel& model, double lr) {
  if (model.kind != EmbeddingKind::kSubword) {
    throw ContractViolation("subword_pair_step on a non-subword model");
  }
  check_pair_ids(model, center_id, context_id, negative_ids);
  const auto grams = subword_ngrams(model.vocab.token(center_id), model.nmin, model.nmax,
                                    model.bucket_count);
  Scratch s;
  const double loss = pair_update<false>(model, center_id, grams, context_id, negative_ids,
                                         static_cast<float>(lr), s);
  std::vector<float> composed;
  mean_of_buckets<false>(model, grams, composed);
  std::copy(composed.begin(), composed.end(), model.input_row(center_id).begin());
  return loss;
}

EmbeddingModel train_sgns(std::span<const TokenizedDocument> docs, const Vocabulary& vocab,
                          const TrainSpec& spec) {
  return train_skipgram(docs, vocab, spec, EmbeddingKind::kSgns);
}

EmbeddingModel train_subword_sgns(std::span<const TokenizedDocument> docs,
                                  const Vocabulary& vocab, const TrainSpec& spec) {
  return train_skipgram(docs, vocab, spec, EmbeddingKind::kSubword);
}

// ---------------------------------------------------------------------------

CooccurrenceTable build_cooccurrence(const std::vector<std::vector<int>>& docs, int window,
                                     std::size_t vocab_size) {
  if (window < 1) throw ContractViolation("build_cooccurrence: window must be >= 1");
  CooccurrenceTable table;
  table.vocab_size = vocab_size;
  table.window = window;
  for (const std::vector<int>& ids : docs) {
    const auto n = static_cast<std::ptrdiff_t>(ids.size());
    for (std::ptrdiff_t pos = 0; pos < n; ++pos) {
      const int center = ids[static_cast<std::size_t>(pos)];
      if (center == Vocabulary::kPadId) continue;
      for (std::ptrdiff_t j = std::max<std::ptrdiff_t>(0, pos - window);
           j <= std::min(n - 1, pos + window); ++j) {
        const int context = ids[static_cast<std::size_t>(j)];
        if (j == pos || context == Vocabulary::kPadId) continue;
        table.counts[{center, context}] += 1.0;
      }
    }
  }
  return table;
}

CooccurrenceTable build_cooccurrence(std::span<const TokenizedDocument> docs,
                                     const Vocabulary& vocab, int window) {
  return build_cooccurrence(encode_all(docs, vocab), window, vocab.size());
}

double glove_loss(const EmbeddingModel& m, const CooccurrenceTable& cooc, const TrainSpec& spec) {
  double total = 0.0;
  for (const auto& [key, count] : cooc.counts) {
    const auto w = m.input_row(key.first);
    const auto wc = m.output_row(key.second);
    std::vector<double> a(w.begin(), w.end()), b(wc.begin(), wc.end());
    total += glove_pair_loss<double>(a, b, m.input_bias[static_cast<std::size_t>(key.first)],
                                     m.output_bias[static_cast<std::size_t>(key.second)], count,
                                     spec.glove_x_max, spec.glove_alpha, {}, {}, nullptr,
                                     nullptr);
  }
  return total;
}

EmbeddingModel train_glove(const CooccurrenceTable& cooc, const Vocabulary& vocab,
                           const TrainSpec& spec, const EmbeddingModel* init) {
  spec.validate();
  if (cooc.counts.empty()) throw DataError("train_glove: co-occurrence table is empty");
  for (const auto& [key, count] : cooc.counts) {
    if (!(count > 0.0)) {
      throw DataError("train_glove: nonpositive count for pair (" + std::to_string(key.first) +
                      ", " + std::to_string(key.second) + ")");
    }
    if (key.first < 1 || key.second < 1 ||
        static_cast<std::size_t>(std::max(key.first, key.second)) > vocab.size()) {
      throw ContractViolation("train_glove: pair id outside the vocabulary");
    }
  }
  EmbeddingModel m = init ? *init : init_embedding_model(EmbeddingKind::kGlove, vocab, spec);
  if (m.kind != EmbeddingKind::kGlove || m.rows() != vocab.size() + 1 ||
      m.input_bias.size() != m.rows()) {
    throw ContractViolation("train_glove: initial model does not match the vocabulary");
  }
  std::vector<std::pair<std::pair<int, int>, double>> pairs(cooc.counts.begin(),
                                                            cooc.counts.end());
  // Per-parameter AdaGrad accumulators.
  std::vector<float> acc_in(m.input.size(), 0.0f), acc_out(m.output.size(), 0.0f),
      acc_bin(m.rows(), 0.0f), acc_bout(m.rows(), 0.0f);
  const float lr = static_cast<float>(spec.learning_rate);
  constexpr float kEps = 1e-8f;
  auto adagrad = [&](float& p, float& acc, float g) {
    if (g == 0.0f) return;
    acc += g * g;
    p -= lr * g / (std::sqrt(acc) + kEps);
  };
  std::vector<float> dw(m.dim), dwc(m.dim);
  std::vector<std::size_t> order(pairs.size());
  for (int epoch = 0; epoch < spec.epochs; ++epoch) {
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    Rng rng(mix_seed(spec.seed, static_cast<std::uint64_t>(epoch)));
    rng.shuffle(order.begin(), order.end());
    for (std::size_t idx : order) {
      const auto [i, j] = pairs[idx].first;
      const auto ui = static_cast<std::size_t>(i), uj = static_cast<std::size_t>(j);
      std::fill(dw.begin(), dw.end(), 0.0f);
      std::fill(dwc.begin(), dwc.end(), 0.0f);
      float db = 0.0f, dbc = 0.0f;
      auto w = m.input_row(i);
      auto wc = m.output_row(j);
      glove_pair_loss<float>(w, wc, m.input_bias[ui], m.output_bias[uj], pairs[idx].second,
                             spec.glove_x_max, spec.glove_alpha, dw, dwc, &db, &dbc);
      for (std::size_t k = 0; k < m.dim; ++k) {
        adagrad(w[k], acc_in[ui * m.dim + k], dw[k]);
        adagrad(wc[k], acc_out[uj * m.dim + k], dwc[k]);
      }
      adagrad(m.input_bias[ui], acc_bin[ui], db);
      adagrad(m.output_bias[uj], acc_bout[uj], dbc);
    }
    m.epoch_loss.push_back(glove_loss(m, cooc, spec));
  }
  if (!m.all_finite()) throw NumericError("GloVe training produced non-finite vectors");
  return m;
}

// ---------------------------------------------------------------------------

std::vector<std::string> subword_strings(std::string_view word, int nmin, int nmax) {
  if (word.empty()) throw ContractViolation("subword_ngrams: word must be non-empty");
  std::u32string wrapped = U"<" + utf8::decode(word) + U">";
  const auto len = static_cast<int>(wrapped.size());
  std::vector<std::string> out;
  for (int start = 0; start < len; ++start) {
    for (int n = nmin; n <= nmax && start + n <= len; ++n) {
      if (start == 0 && n == len) continue;  // the whole word is appended last
      out.push_back(utf8::encode(std::u32string_view(wrapped).substr(
          static_cast<std::size_t>(start), static_cast<std::size_t>(n))));
    }
  }
  out.push_back(utf8::encode(wrapped));
  return out;
}

std::vector<std::uint32_t> subword_ngrams(std::string_view word, int nmin, int nmax,
                                          std::uint32_t bucket_count) {
  if (bucket_count == 0) throw ContractViolation("subword_ngrams: bucket_count must be >= 1");
  std::vector<std::uint32_t> out;
  for (const std::string& g : subword_strings(word, nmin, nmax)) {
    out.push_back(fnv1a32(g) % bucket_count);
  }
  return out;
}

std::vector<float> compose_subword(const EmbeddingModel& model,
                                   std::span<const std::uint32_t> buckets) {
  std::vector<float> out;
  mean_of_buckets<false>(model, buckets, out);
  return out;
}

// ---------------------------------------------------------------------------

std::vector<float> word_vector(const EmbeddingModel& model, std::string_view word,
                               OovStrategy strategy) {
  if (strategy == OovStrategy::kSubword && model.kind != EmbeddingKind::kSubword) {
    throw ContractViolation("subword OOV strategy requires a subword model");
  }
  if (auto id = model.vocab.id(word)) {
    const auto row = model.input_row(*id);
    return {row.begin(), row.end()};
  }
  const std::uint64_t word_seed = mix_seed(model.seed, fnv1a64(word));
  switch (strategy) {
    case OovStrategy::kError:
      throw LookupError("word '" + std::string(word) + "' is not in the vocabulary");
    case OovStrategy::kUniform: {
      Rng rng(word_seed);
      const double a = 0.5 / static_cast<double>(model.dim);
      std::vector<float> v(model.dim);
      for (float& x : v) x = static_cast<float>(-a + 2.0 * a * rng.uniform_open());
      return v;
    }
    case OovStrategy::kRandomInVocab: {
      if (model.vocab.empty()) throw LookupError("random_invocab on an empty vocabulary");
      Rng rng(word_seed);
      const int id = 1 + static_cast<int>(rng.below(model.vocab.size()));
      const auto row = model.input_row(id);
      return {row.begin(), row.end()};
    }
    case OovStrategy::kSubword:
      return compose_subword(model,
                             subword_ngrams(word, model.nmin, model.nmax, model.bucket_count));
  }
  throw ContractViolation("unknown OOV strategy");
}

double cosine(std::span<const float> a, std::span<const float> b) {
  double dot = 0, na = 0, nb = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    dot += static_cast<double>(a[i]) * b[i];
    na += static_cast<double>(a[i]) * a[i];
    nb += static_cast<double>(b[i]) * b[i];
  }
  if (na == 0.0 || nb == 0.0) return 0.0;
  return dot / (std::sqrt(na) * std::sqrt(nb));
}

std::vector<Neighbor> nearest_neighbors(const EmbeddingModel& model, std::string_view word,
                                        std::size_t k, OovStrategy strategy) {
  if (k < 1) throw ContractViolation("nearest_neighbors: k must be >= 1");
  const std::vector<float> query = word_vector(model, word, strategy);
  const bool query_zero = std::all_of(query.begin(), query.end(), [](float v) { return v == 0.0f; });
  std::vector<Neighbor> all;
  for (std::size_t id = 1; id < model.rows(); ++id) {
    const std::string& w = model.vocab.token(static_cast<int>(id));
    if (w == word) continue;
    const auto row = model.input_row(static_cast<int>(id));
    const bool row_zero = std::all_of(row.begin(), row.end(), [](float v) { return v == 0.0f; });
    Neighbor n{w, 0.0, !(query_zero || row_zero)};
    if (n.defined) n.cosine = cosine(query, row);
    all.push_back(std::move(n));
  }
  std::sort(all.begin(), all.end(), [](const Neighbor& a, const Neighbor& b) {
    if (a.defined != b.defined) return a.defined;
    if (a.defined && a.cosine != b.cosine) return a.cosine > b.cosine;
    return a.word < b.word;
  });
  if (all.size() > k) all.resize(k);
  return all;
}

// ---------------------------------------------------------------------------

void write_vectors(const std::filesystem::path& path, const EmbeddingModel& model) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path.string());
  out << model.vocab.size() << ' ' << model.dim << '\n';
  char buf[32];
  for (std::size_t id = 1; id < model.rows(); ++id) {
    out << model.vocab.token(static_cast<int>(id));
    for (float v : model.input_row(static_cast<int>(id))) {
      std::snprintf(buf, sizeof(buf), " %.9g", static_cast<double>(v));
      out << buf;
    }
    out << '\n';
  }
  if (!out) throw IoError("failed writing " + path.string());
}

EmbeddingModel read_vectors(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read " + path.string());
  std::size_t count = 0, dim = 0;
  std::string header;
  std::getline(in, header);
  std::istringstream hs(header);
  if (!(hs >> count >> dim) || dim == 0) {
    throw IoError(path.string() + ": malformed vector file header");
  }
  std::vector<std::string> words;
  std::vector<float> rows(dim, 0.0f);  // pad row
  bool saw_pad = false;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::istringstream ls(line);
    std::string word;
    ls >> word;
    std::vector<float> v;
    float x;
    while (ls >> x) v.push_back(x);
    if (v.size() != dim) {
      throw IoError(path.string() + ": word '" + word + "' has " + std::to_string(v.size()) +
                    " components, expected " + std::to_string(dim));
    }
    if (word == "<pad>") {
      saw_pad = true;
      continue;
    }
    words.push_back(word);
    rows.insert(rows.end(), v.begin(), v.end());
  }
  if (words.size() + (saw_pad ? 1 : 0) != count && words.size() != count) {
    throw IoError(path.string() + ": header declares " + std::to_string(count) + " words, found " +
                  std::to_string(words.size()));
  }
  EmbeddingModel m;
  m.kind = EmbeddingKind::kSgns;
  m.dim = dim;
  const std::size_t n = words.size();
  m.vocab = Vocabulary(std::move(words), std::vector<std::int64_t>(n, 1),
                       std::vector<std::int64_t>(n, 1));
  m.input = std::move(rows);
  m.output.assign(m.input.size(), 0.0f);
  return m;
}

void save_embedding_model(const std::filesystem::path& stem, const EmbeddingModel& m) {
  std::vector<nn::NamedTensor> tensors{{"input", {m.rows(), m.dim}, m.input},
                                       {"output", {m.rows(), m.dim}, m.output}};
  if (!m.buckets.empty()) tensors.push_back({"buckets", {m.bucket_count, m.dim}, m.buckets});
  if (!m.input_bias.empty()) {
    tensors.push_back({"input_bias", {m.rows()}, m.input_bias});
    tensors.push_back({"output_bias", {m.rows()}, m.output_bias});
  }
  std::filesystem::path bin = stem, json_path = stem;
  bin += ".bin";
  json_path += ".json";
  nn::write_checkpoint(bin, tensors);
  nlohmann::json j = nn::checkpoint_manifest(tensors);
  j["kind"] = to_string(m.kind);
  j["dim"] = m.dim;
  j["nmin"] = m.nmin;
  j["nmax"] = m.nmax;
  j["bucket_count"] = m.bucket_count;
  j["seed"] = m.seed;
  j["epoch_loss"] = m.epoch_loss;
  j["vocabulary"] = vocabulary_to_json(m.vocab);
  write_json_file(json_path, j);
}

EmbeddingModel load_embedding_model(const std::filesystem::path& stem) {
  std::filesystem::path bin = stem, json_path = stem;
  bin += ".bin";
  json_path += ".json";
  const nlohmann::json j = read_json_file(json_path);
  const auto tensors = nn::read_checkpoint(bin);
  EmbeddingModel m;
  m.kind = parse_embedding_kind(j.at("kind").get<std::string>());
  m.dim = j.at("dim").get<std::size_t>();
  m.nmin = j.at("nmin").get<int>();
  m.nmax = j.at("nmax").get<int>();
  m.bucket_count = j.at("bucket_count").get<std::uint32_t>();
  m.seed = j.at("seed").get<std::uint64_t>();
  m.epoch_loss = j.at("epoch_loss").get<std::vector<double>>();
  m.vocab = vocabulary_from_json(j.at("vocabulary"));
  m.input = nn::find_tensor(tensors, "input").values;
  m.output = nn::find_tensor(tensors, "output").values;
  if (m.kind == EmbeddingKind::kSubword) m.buckets = nn::find_tensor(tensors, "buckets").values;
  if (m.kind == EmbeddingKind::kGlove) {
    m.input_bias = nn::find_tensor(tensors, "input_bias").values;
    m.output_bias = nn::find_tensor(tensors, "output_bias").values;
  }
  if (m.input.size() != m.rows() * m.dim) {
    throw IoError(bin.string() + ": input table does not match the vocabulary");
  }
  return m;
}

}  // namespace textclf
