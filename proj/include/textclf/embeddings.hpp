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

#ifndef TEXTCLF_EMBEDDINGS_HPP_
#define TEXTCLF_EMBEDDINGS_HPP_

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "textclf/corpus.hpp"
#include "textclf/document.hpp"
#include "textclf/nn/ops.hpp"
#include "textclf/rng.hpp"

namespace textclf {

enum class EmbeddingKind { kSgns, kGlove, kSubword };

std::string to_string(EmbeddingKind kind);
EmbeddingKind parse_embedding_kind(std::string_view name);

struct TrainSpec {
  std::size_t dim = 300;
  int window = 5;
  int negatives = 10;
  int epochs = 5;
  double learning_rate = 0.025;
  std::uint64_t seed = 1;
  int nmin = 3;
  int nmax = 6;
  std::uint32_t bucket_count = 1u << 16;
  double sampler_power = 0.75;
  // GloVe weighting f(x) = min(1, (x / x_max)^alpha).
  double glove_x_max = 100.0;
  double glove_alpha = 0.75;
  // > 1 enables asynchronous (lock-free, non-deterministic) updates.
  int threads = 1;

  // Throws ContractViolation on an invalid combination.
  void validate() const;
};

// Dense vector tables. Row 0 of the id-indexed tables is the pad row and is
// kept at zero. For the subword kind, `input` holds the composed vector of
// every vocabulary word (materialized after training) and `buckets` the
// trainable n-gram rows.
struct EmbeddingModel {
  EmbeddingKind kind = EmbeddingKind::kSgns;
  std::size_t dim = 0;
  Vocabulary vocab;
  std::vector<float> input;   // (V + 1) x dim
  std::vector<float> output;  // (V + 1) x dim
  std::vector<float> input_bias;   // GloVe only, V + 1
  std::vector<float> output_bias;  // GloVe only, V + 1
  std::vector<float> buckets;      // subword only, bucket_count x dim
  int nmin = 3;
  int nmax = 6;
  std::uint32_t bucket_count = 0;
  std::uint64_t seed = 0;
  std::vector<double> epoch_loss;

  std::size_t rows() const { return vocab.size() + 1; }
  std::span<float> input_row(int id) { return {input.data() + static_cast<std::size_t>(id) * dim, dim}; }
  std::span<const float> input_row(int id) const {
    return {input.data() + static_cast<std::size_t>(id) * dim, dim};
  }
  std::span<float> output_row(int id) { return {output.data() + static_cast<std::size_t>(id) * dim, dim}; }
  std::span<const float> output_row(int id) const {
    return {output.data() + static_cast<std::size_t>(id) * dim, dim};
  }
  std::span<float> bucket_row(std::uint32_t b) { return {buckets.data() + std::size_t{b} * dim, dim}; }
  std::span<const float> bucket_row(std::uint32_t b) const {
    return {buckets.data() + std::size_t{b} * dim, dim};
  }

  bool all_finite() const;
};

// ---------------------------------------------------------------------------
// Negative sampling distribution P(i) proportional to freq(i)^power over
// ids 1..V (index 0, the pad id, is never drawn).

class NegativeSampler {
 public:
  NegativeSampler(std::span<const std::int64_t> frequencies_by_id, double power);

  double probability(int id) const;
  int sample(Rng& rng) const;
  // Redraws until the result differs from `exclude`; throws
  // ContractViolation when `exclude` is the only id in the support.
  int sample_excluding(Rng& rng, int exclude) const;
  double power() const { return power_; }
  std::size_t support_size() const { return support_; }

 private:
  std::vector<double> prob_;  // by id
  std::vector<double> cdf_;   // by id
  double power_;
  std::size_t support_ = 0;
};

NegativeSampler build_negative_sampler(std::span<const std::int64_t> frequencies_by_id,
                                       double power = 0.75);

// ---------------------------------------------------------------------------
// Per-pair objectives over gathered row copies, float or double. Gradients
// are accumulated (+=) into the output spans.

// Negated negative-sampling objective for one (center, context) pair:
//   -log sig(u_o . v) - sum_i log sig(-u_i . v)
template <typename T>
T sgns_pair_loss(std::span<const T> center, std::span<const T> context,
                 const std::vector<std::span<const T>>& negatives,
                 std::span<T> d_center, std::span<T> d_context,
                 const std::vector<std::span<T>>& d_negatives) {
  const std::size_t dim = center.size();
  auto dot = [dim](std::span<const T> a, std::span<const T> b) {
    T s = 0;
    for (std::size_t i = 0; i < dim; ++i) s += a[i] * b[i];
    return s;
  };
  const T s_pos = dot(context, center);
  T loss = -nn::log_sigmoid(s_pos);
  const T g_pos = nn::sigmoid(s_pos) - T(1);  // d loss / d s_pos
  for (std::size_t i = 0; i < dim; ++i) {
    d_center[i] += g_pos * context[i];
    d_context[i] += g_pos * center[i];
  }
  for (std::size_t n = 0; n < negatives.size(); ++n) {
    const T s_neg = dot(negatives[n], center);
    loss -= nn::log_sigmoid(-s_neg);
    const T g_neg = nn::sigmoid(s_neg);
    for (std::size_t i = 0; i < dim; ++i) {
      d_center[i] += g_neg * negatives[n][i];
      d_negatives[n][i] += g_neg * center[i];
    }
  }
  return loss;
}

// f(X) (w . w~ + b + b~ - ln X)^2
template <typename T>
T glove_pair_loss(std::span<const T> w, std::span<const T> w_ctx, T b, T b_ctx, double count,
                  double x_max, double alpha, std::span<T> d_w, std::span<T> d_w_ctx,
                  T* d_b, T* d_b_ctx) {
  T dot = 0;
  for (std::size_t i = 0; i < w.size(); ++i) dot += w[i] * w_ctx[i];
  const T weight = static_cast<T>(count >= x_max ? 1.0 : std::pow(count / x_max, alpha));
  const T diff = dot + b + b_ctx - static_cast<T>(std::log(count));
  const T g = T(2) * weight * diff;
  if (!d_w.empty()) {
    for (std::size_t i = 0; i < w.size(); ++i) {
      d_w[i] += g * w_ctx[i];
      d_w_ctx[i] += g * w[i];
    }
  }
  if (d_b) *d_b += g;
  if (d_b_ctx) *d_b_ctx += g;
  return weight * diff * diff;
}

// ---------------------------------------------------------------------------
// Skip-gram with negative sampling.

// Allocates tables sized for `vocab` and initializes them per `kind`:
// input rows U(-0.5/dim, 0.5/dim) (pad row zero), output rows zero, subword
// buckets U(-1/dim, 1/dim).
EmbeddingModel init_embedding_model(EmbeddingKind kind, const Vocabulary& vocab,
                                    const TrainSpec& spec);

// One SGD step on a single pair; returns the pair loss before the update.
double sgns_pair_step(int center_id, int context_id, std::span<const int> negative_ids,
                      EmbeddingModel& model, double lr);

EmbeddingModel train_sgns(std::span<const TokenizedDocument> docs, const Vocabulary& vocab,
                          const TrainSpec& spec);

// ---------------------------------------------------------------------------
// GloVe.

struct CooccurrenceTable {
  std::size_t vocab_size = 0;  // ids run 1..vocab_size
  int window = 0;
  bool symmetric = true;
  std::map<std::pair<int, int>, double> counts;
};

// Unweighted: every context within +-window of a center adds 1.
CooccurrenceTable build_cooccurrence(const std::vector<std::vector<int>>& docs,
                                     int window, std::size_t vocab_size);
CooccurrenceTable build_cooccurrence(std::span<const TokenizedDocument> docs,
                                     const Vocabulary& vocab, int window);

// Full weighted least-squares objective over the table.
double glove_loss(const EmbeddingModel& model, const CooccurrenceTable& cooc,
                  const TrainSpec& spec);

// Per-pair AdaGrad on the GloVe objective. `vocab` supplies the id space.
// When `init` is given, training starts from it instead of a fresh model.
EmbeddingModel train_glove(const CooccurrenceTable& cooc, const Vocabulary& vocab,
                           const TrainSpec& spec, const EmbeddingModel* init = nullptr);

// ---------------------------------------------------------------------------
// Subword (character n-gram) skip-gram.

// Buckets for every n-gram (nmin..nmax code points) of "<word>" in order,
// followed by the bucket of the whole wrapped word. An n-gram equal to the
// whole wrapped word is emitted only once, as the final entry.
std::vector<std::uint32_t> subword_ngrams(std::string_view word, int nmin, int nmax,
                                          std::uint32_t bucket_count);
// The n-gram strings themselves, same order as subword_ngrams.
std::vector<std::string> subword_strings(std::string_view word, int nmin, int nmax);

// Mean of the given bucket rows.
std::vector<float> compose_subword(const EmbeddingModel& model,
                                   std::span<const std::uint32_t> buckets);

double subword_pair_step(int center_id, int context_id, std::span<const int> negative_ids,
                         EmbeddingModel& model, double lr);

EmbeddingModel train_subword_sgns(std::span<const TokenizedDocument> docs,
                                  const Vocabulary& vocab, const TrainSpec& spec);

// ---------------------------------------------------------------------------
// Queries.

enum class OovStrategy { kError, kUniform, kRandomInVocab, kSubword };

OovStrategy parse_oov_strategy(std::string_view name);

std::vector<float> word_vector(const EmbeddingModel& model, std::string_view word,
                               OovStrategy strategy = OovStrategy::kError);

struct Neighbor {
  std::string word;
  double cosine = 0.0;
  bool defined = true;  // false when either vector is zero
};

// Query word excluded; descending cosine with bytewise ties; undefined
// cosines last. k beyond V - 1 truncates.
std::vector<Neighbor> nearest_neighbors(const EmbeddingModel& model, std::string_view word,
                                        std::size_t k,
                                        OovStrategy strategy = OovStrategy::kError);

double cosine(std::span<const float> a, std::span<const float> b);

// Text vector file: "V dim" header, then "word v1 ... v_dim" per word.
void write_vectors(const std::filesystem::path& path, const EmbeddingModel& model);
// Skips a "<pad>" row if present. The result is an sgns-kind lookup model.
EmbeddingModel read_vectors(const std::filesystem::path& path);

// Full model: checkpoint container (<stem>.bin) plus JSON manifest (<stem>.json).
void save_embedding_model(const std::filesystem::path& stem, const EmbeddingModel& model);
EmbeddingModel load_embedding_model(const std::filesystem::path& stem);

}  // namespace textclf

#endif  // TEXTCLF_EMBEDDINGS_HPP_
