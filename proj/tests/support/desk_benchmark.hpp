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

// The synthetic benchmark used by the end-to-end checks: three classes,
// 1000 documents, private class vocabularies with a shared pool that makes
// up 20% of every class's token mixture.

#ifndef TEXTCLF_TESTS_DESK_BENCHMARK_HPP_
#define TEXTCLF_TESTS_DESK_BENCHMARK_HPP_

#include "textclf/corpus.hpp"
#include "textclf/embeddings.hpp"
#include "textclf/model/mconv_lstm.hpp"

namespace textclf::testing {

inline SyntheticCorpusSpec desk_corpus_spec() {
  SyntheticCorpusSpec spec;
  spec.classes = 3;
  spec.total_docs = 1000;
  spec.vocab_per_class = 200;
  spec.shared_vocab = 50;  // 50 / (200 + 50) = 20% of draws
  spec.doc_len = 30;
  return spec;
}

// Reduced widths keep a 20-epoch run to seconds on one core.
inline MConvLstmConfig desk_model_config() {
  MConvLstmConfig cfg;
  cfg.seq_len = 32;
  cfg.emb_dim = 32;
  cfg.filters_per_channel = 16;
  cfg.lstm_units = 16;
  cfg.n_classes = 3;
  return cfg;
}

inline TrainSpec desk_sgns_spec() {
  TrainSpec spec;
  spec.dim = 32;
  spec.window = 5;
  spec.negatives = 5;
  spec.epochs = 5;
  spec.seed = 3;
  return spec;
}

}  // namespace textclf::testing

#endif  // TEXTCLF_TESTS_DESK_BENCHMARK_HPP_
