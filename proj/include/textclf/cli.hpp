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


#ifndef TEXTCLF_CLI_HPP_
#define TEXTCLF_CLI_HPP_

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <memory>
#include <string>
#include <vector>

#include "json.hpp"
#include "textclf/eval/validation.hpp"
#include "textclf/model/classifier.hpp"

namespace textclf {

// Everything needed to train one classifier kind; shared by `train` and the
// cross-validating `eval` mode.
struct ModelSettings {
  std::string kind = "logreg";  // mconv_lstm | fasttext | logreg | multinomial_nb | knn
  std::string task = "doc_classification";  // doc_classification | sentiment | hate_speech
  int epochs = 10;
  std::size_t batch_size = 128;
  double learning_rate = -1.0;  // < 0: per-kind default
  std::uint64_t seed = 1;
  int threads = 1;
  int min_df = 1;
  // mconv_lstm
  std::size_t seq_len = 0;  // 0: task default
  std::size_t emb_dim = 300;
  std::string kernels = "4,6,8";
  std::size_t filters = 100;
  std::size_t pool = 4;
  std::size_t lstm_units = 100;
  double dropout = 0.5;
  double noise = 0.1;
  bool freeze_embeddings = false;
  std::string oov = "uniform";
  std::string embeddings;  // stem of a saved embedding model; empty = random init
  // fasttext
  std::size_t ft_dim = 10;
  bool ft_bigrams = false;
  // baselines
  int knn_k = 5;
  int iterations = 300;

  nlohmann::json to_json() const;
};

Trainer make_trainer(const ModelSettings& settings);

// Writes model_info.json plus the kind's own files into `dir`.
std::vector<std::filesystem::path> save_classifier(const Classifier& model,
                                                   const std::filesystem::path& dir);
std::unique_ptr<Classifier> load_classifier(const std::filesystem::path& dir);

// args excludes the program name. Exit codes: 0 success, 1 usage error,
// 2 data, configuration or I/O error.
int run_command(const std::vector<std::string>& args, std::ostream& out, std::ostream& err,
                std::istream& in);
int run_command(int argc, const char* const* argv);

}  // namespace textclf

#endif  // TEXTCLF_CLI_HPP_
