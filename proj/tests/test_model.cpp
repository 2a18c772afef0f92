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

#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <map>
#include <memory>

#include "support/desk_benchmark.hpp"
#include "textclf/corpus.hpp"
#include "textclf/error.hpp"
#include "textclf/model/baselines.hpp"
#include "textclf/model/ensemble.hpp"
#include "textclf/model/fasttext.hpp"
#include "textclf/model/mconv_lstm.hpp"

namespace fs = std::filesystem;
using namespace textclf;

namespace {

MConvLstmConfig tiny_config(std::size_t classes = 2) {
  MConvLstmConfig cfg;
  cfg.seq_len = 12;
  cfg.emb_dim = 8;
  cfg.kernel_sizes = {2, 3};
  cfg.filters_per_channel = 4;
  cfg.pool = 2;
  cfg.lstm_units = 4;
  cfg.n_classes = classes;
  return cfg;
}

LabeledDataset two_class_data(int per_class = 40, std::uint64_t seed = 5) {
  SyntheticCorpusSpec spec;
  spec.classes = 2;
  spec.docs_per_class = per_class;
  spec.vocab_per_class = 20;
  spec.shared_vocab = 5;
  spec.doc_len = 10;
  return generate_synthetic_corpus(spec, seed);
}

TrainOptions quick_options(int epochs) {
  TrainOptions o;
  o.epochs = epochs;
  o.batch_size = 16;
  o.learning_rate = 0.05;
  o.seed = 3;
  return o;
}

double sum(const std::vector<double>& v) {
  double s = 0;
  for (double x : v) s += x;
  return s;
}

}  // namespace

TEST(MConvLstm, DefaultConfigShapes) {
  MConvLstmConfig cfg;
  cfg.n_classes = 3;
  const Vocabulary v({"a", "b"}, {1, 1}, {1, 1});
  const auto m = build_mconv_lstm(cfg, nullptr, v);
  const LayerShapes s = layer_shapes(m);
  ASSERT_EQ(s.conv_maps.size(), 3u);
  for (std::size_t c = 0; c < 3; ++c) {
    EXPECT_EQ(s.conv_maps[c], (nn::Shape{100, 100}));
    EXPECT_EQ(s.pooled_maps[c], (nn::Shape{25, 100}));
    EXPECT_EQ(s.channel_vectors[c], (nn::Shape{100}));
  }
  EXPECT_EQ(s.lstm_vector, (nn::Shape{100}));
  EXPECT_EQ(s.concat, (nn::Shape{400}));
  EXPECT_EQ(s.output, (nn::Shape{3}));
}

TEST(MConvLstm, ConfigValidationAndPretrainedDim) {
  MConvLstmConfig bad = tiny_config();
  bad.kernel_sizes.clear();
  const Vocabulary v({"a"}, {1}, {1});
  EXPECT_ANY_THROW(build_mconv_lstm(bad, nullptr, v));
  bad = tiny_config();
  bad.n_classes = 1;
  EXPECT_ANY_THROW(build_mconv_lstm(bad, nullptr, v));
  MConvLstmConfig pre = tiny_config();
  pre.embedding_init = EmbeddingInit::kPretrained;
  EmbeddingModel emb;
  emb.dim = 5;
  emb.vocab = v;
  emb.input.assign(10, 0.5f);
  EXPECT_THROW(build_mconv_lstm(pre, &emb, v), ConfigError);
  EXPECT_THROW(build_mconv_lstm(pre, nullptr, v), ConfigError);
}

TEST(MConvLstm, PretrainedRowsAreCopied) {
  const Vocabulary v({"a", "b"}, {2, 1}, {1, 1});
  EmbeddingModel emb;
  emb.dim = 8;
  emb.vocab = Vocabulary({"b"}, {1}, {1});
  emb.input.assign(8, 0.0f);
  for (int i = 0; i < 8; ++i) emb.input.push_back(static_cast<float>(i));
  emb.output.assign(emb.input.size(), 0.0f);
  MConvLstmConfig cfg = tiny_config();
  cfg.embedding_init = EmbeddingInit::kPretrained;
  const auto m = build_mconv_lstm(cfg, &emb, v);
  for (std::size_t e = 0; e < 8; ++e) {
    EXPECT_EQ(m.net.embedding.tensor.at(2, e), static_cast<float>(e));
    EXPECT_EQ(m.net.embedding.tensor.at(0, e), 0.0f);
  }
  EXPECT_EQ(m.embedding_provenance["oov_words"], 1);
}

TEST(MConvLstm, TrainingLowersLossAndIsDeterministic) {
  const auto data = two_class_data();
  const Vocabulary v = build_vocabulary(data.documents, 1);
  auto a = build_mconv_lstm(tiny_config(), nullptr, v, 7);
  const auto ha = train_model(a, data, data, quick_options(10));
  ASSERT_EQ(ha.train_loss.size(), 10u);
  EXPECT_EQ(ha.valid_loss.size(), 10u);
  EXPECT_EQ(ha.valid_macro_f1.size(), 10u);
  EXPECT_LT(ha.train_loss.back(), ha.train_loss.front());
  auto b = build_mconv_lstm(tiny_config(), nullptr, v, 7);
  const auto hb = train_model(b, data, data, quick_options(10));
  EXPECT_EQ(ha.train_loss, hb.train_loss);
  EXPECT_EQ(ha.valid_macro_f1, hb.valid_macro_f1);
  EXPECT_EQ(a.predict_proba(data.documents[0].tokens), b.predict_proba(data.documents[0].tokens));
}

TEST(MConvLstm, ZeroEpochsLeavesModelUnchanged) {
  const auto data = two_class_data(10);
  const Vocabulary v = build_vocabulary(data.documents, 1);
  auto m = build_mconv_lstm(tiny_config(), nullptr, v, 7);
  const auto before = m.predict_proba(data.documents[3].tokens);
  const auto h = train_model(m, data, data, quick_options(0));
  EXPECT_TRUE(h.train_loss.empty());
  EXPECT_TRUE(h.valid_loss.empty());
  EXPECT_EQ(m.predict_proba(data.documents[3].tokens), before);
}

TEST(MConvLstm, EmptyTrainingSetIsAnError) {
  const auto data = two_class_data(10);
  auto m = build_mconv_lstm(tiny_config(), nullptr, build_vocabulary(data.documents, 1));
  const LabeledDataset empty{{}, data.classes};
  EXPECT_THROW(train_model(m, empty, data, quick_options(1)), DataError);
}

TEST(MConvLstm, PredictionContract) {
  const auto data = two_class_data(10);
  const Vocabulary v = build_vocabulary(data.documents, 1);
  auto m = build_mconv_lstm(tiny_config(), nullptr, v, 2);
  for (const auto& d : data.documents) {
    const auto p = m.predict_proba(d.tokens);
    ASSERT_EQ(p.size(), 2u);
    for (double x : p) EXPECT_GE(x, 0.0);
    EXPECT_NEAR(sum(p), 1.0, 1e-6);
    EXPECT_EQ(m.predict_proba(d.tokens), p);
  }
  const std::vector<int> pads(12, 0);
  EXPECT_NEAR(sum(m.predict_ids(pads)), 1.0, 1e-6);
  const std::vector<int> short_doc(5, 1);
  EXPECT_THROW(m.predict_ids(short_doc), ShapeError);
  EXPECT_NEAR(sum(m.predict_proba({})), 1.0, 1e-6);
}

TEST(MConvLstm, PadRowStaysZeroAndFrozenEmbeddingsDoNotMove) {
  const auto data = two_class_data(20);
  const Vocabulary v = build_vocabulary(data.documents, 1);
  auto m = build_mconv_lstm(tiny_config(), nullptr, v, 4);
  train_model(m, data, data, quick_options(3));
  for (std::size_t e = 0; e < 8; ++e) EXPECT_EQ(m.net.embedding.tensor.at(0, e), 0.0f);

  MConvLstmConfig frozen = tiny_config();
  frozen.freeze_embeddings = true;
  auto f = build_mconv_lstm(frozen, nullptr, v, 4);
  const std::vector<float> before(f.net.embedding.tensor.values().begin(),
                                  f.net.embedding.tensor.values().end());
  const std::vector<float> head_before(f.net.head_w.tensor.values().begin(),
                                       f.net.head_w.tensor.values().end());
  train_model(f, data, data, quick_options(3));
  EXPECT_TRUE(std::equal(before.begin(), before.end(), f.net.embedding.tensor.values().begin()));
  EXPECT_FALSE(std::equal(head_before.begin(), head_before.end(), f.net.head_w.tensor.values().begin()));
}

TEST(MConvLstm, ParallelReplicasAreDeterministic) {
  const auto data = two_class_data(20);
  const Vocabulary v = build_vocabulary(data.documents, 1);
  TrainOptions o = quick_options(3);
  o.threads = 2;
  auto a = build_mconv_lstm(tiny_config(), nullptr, v, 9);
  auto b = build_mconv_lstm(tiny_config(), nullptr, v, 9);
  EXPECT_EQ(train_model(a, data, data, o).train_loss, train_model(b, data, data, o).train_loss);
}

TEST(MConvLstm, SaveLoadRoundTrip) {
  const fs::path dir = fs::temp_directory_path() / "textclf_model_rt";
  fs::create_directories(dir);
  const auto data = two_class_data(10);
  MConvLstmConfig cfg = tiny_config();
  cfg.lstm_peephole = true;
  auto m = build_mconv_lstm(cfg, nullptr, build_vocabulary(data.documents, 1), 6);
  train_model(m, data, data, quick_options(2));
  save_mconv_lstm(dir / "m", m);
  const auto back = load_mconv_lstm(dir / "m");
  EXPECT_EQ(back.class_names, m.class_names);
  EXPECT_EQ(back.net.cfg.to_json(), m.net.cfg.to_json());
  for (const auto& d : data.documents) EXPECT_EQ(back.predict_proba(d.tokens), m.predict_proba(d.tokens));
  fs::remove_all(dir);
}

TEST(Tfidf, HandCorpus) {
  TfidfConfig cfg;
  cfg.char_ngram_min = 0;
  const std::vector<TokenizedDocument> docs{
      {"1", {"a", "b"}, {}}, {"2", {"a", "c"}, {}}, {"3", {"a", "a", "b"}, {}}};
  const auto model = fit_tfidf(docs, cfg);
  EXPECT_EQ(model.features, (std::vector<std::string>{"w:a", "w:b", "w:c"}));
  EXPECT_EQ(model.idf[0], 1.0);
  const double idf_b = std::log(4.0 / 3.0) + 1, idf_c = std::log(2.0) + 1;
  EXPECT_NEAR(model.idf[1], idf_b, 1e-12);
  EXPECT_NEAR(model.idf[2], idf_c, 1e-12);
  const auto m = tfidf_features(docs, cfg);
  ASSERT_EQ(m.rows.size(), 3u);
  EXPECT_EQ(m.cols, 3u);
  const std::vector<std::vector<double>> raw{{1, idf_b, 0}, {1, 0, idf_c}, {2, idf_b, 0}};
  for (std::size_t r = 0; r < 3; ++r) {
    double norm = 0;
    for (double x : raw[r]) norm += x * x;
    norm = std::sqrt(norm);
    std::vector<double> dense(3, 0.0);
    for (const auto& [c, v] : m.rows[r].entries) dense[c] = v;
    for (std::size_t c = 0; c < 3; ++c) EXPECT_NEAR(dense[c], raw[r][c] / norm, 1e-12) << r << c;
  }
  const std::vector<TokenizedDocument> single{{"x", {"q"}, {}}, {"y", {"q", "r"}, {}}};
  const auto s = tfidf_features(single, cfg);
  ASSERT_EQ(s.rows[0].entries.size(), 1u);
  EXPECT_DOUBLE_EQ(s.rows[0].entries[0].second, 1.0);
}

TEST(Tfidf, CharacterNgramsAreCounted) {
  TfidfConfig cfg;
  cfg.char_ngram_min = 2;
  cfg.char_ngram_max = 2;
  cfg.word_unigrams = false;
  const auto f = raw_features({"ab", "b"}, cfg);
  const std::map<std::string, double> got(f.begin(), f.end());
  EXPECT_EQ(got, (std::map<std::string, double>{{"c:ab", 1}, {"c:b ", 1}, {"c: b", 1}}));
  const std::vector<TokenizedDocument> none;
  EXPECT_THROW(fit_tfidf(none, cfg), DataError);
}

namespace {

LabeledDataset labeled(const std::vector<std::pair<std::vector<std::string>, std::string>>& rows) {
  std::vector<TokenizedDocument> docs;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    docs.push_back({"d" + std::to_string(i), rows[i].first, rows[i].second});
  }
  return LabeledDataset::from_documents(std::move(docs));
}

}  // namespace

TEST(Baselines, LogRegSeparatesTwoPoints) {
  const auto data = labeled({{{"x"}, "neg"}, {{"y"}, "pos"}});
  TfidfConfig t;
  t.char_ngram_min = 0;
  const auto c = train_baseline_classifier(data, BaselineKind::kLogReg, t);
  EXPECT_GT(c.predict_proba({"x"})[0], 0.5);
  EXPECT_GT(c.predict_proba({"y"})[1], 0.5);
}

TEST(Baselines, SymmetricNaiveBayesIsUndecided) {
  const auto data = labeled({{{"x", "y"}, "a"}, {{"y", "x"}, "b"}});
  TfidfConfig t;
  t.char_ngram_min = 0;
  const auto c = train_baseline_classifier(data, BaselineKind::kMultinomialNb, t);
  const auto p = c.predict_proba({"x", "y"});
  EXPECT_NEAR(p[0], 0.5, 1e-12);
  EXPECT_NEAR(p[1], 0.5, 1e-12);
  double prior = 0;
  for (double lp : c.model.log_prior) prior += std::exp(lp);
  EXPECT_NEAR(prior, 1.0, 1e-12);
}

TEST(Baselines, NearestNeighborReturnsClosestLabel) {
  const auto data = labeled({{{"x", "x", "z"}, "a"}, {{"y", "w"}, "b"}, {{"y", "v"}, "c"}});
  TfidfConfig t;
  t.char_ngram_min = 0;
  BaselineOptions o;
  o.knn_k = 1;
  const auto c = train_baseline_classifier(data, BaselineKind::kKnn, t, o);
  EXPECT_EQ(c.predict_proba({"x"}), (std::vector<double>{1, 0, 0}));
  EXPECT_EQ(c.predict_proba({"w"}), (std::vector<double>{0, 1, 0}));
}

TEST(Baselines, SingleClassTrainingIsAnError) {
  const auto data = labeled({{{"x"}, "a"}, {{"y"}, "a"}});
  EXPECT_THROW(train_baseline_classifier(data, BaselineKind::kLogReg), DataError);
  EXPECT_THROW(train_baseline_classifier(data, BaselineKind::kMultinomialNb), DataError);
  EXPECT_EQ(parse_baseline_kind("multinomial_nb"), BaselineKind::kMultinomialNb);
  EXPECT_ANY_THROW(parse_baseline_kind("svm"));
}

TEST(Baselines, JsonRoundTripPreservesPredictions) {
  const auto data = two_class_data(15);
  for (auto kind : {BaselineKind::kLogReg, BaselineKind::kMultinomialNb, BaselineKind::kKnn}) {
    const auto c = train_baseline_classifier(data, kind);
    const auto back = BaselineClassifier::from_json(c.to_json());
    for (const auto& d : data.documents) EXPECT_EQ(back.predict_proba(d.tokens), c.predict_proba(d.tokens));
  }
}

TEST(FastText, ZeroHeadGivesLogClassCount) {
  SyntheticCorpusSpec spec;
  spec.classes = 4;
  spec.docs_per_class = 5;
  const auto data = generate_synthetic_corpus(spec, 1);
  const Vocabulary v = build_vocabulary(data.documents, 1);
  const auto m = init_fasttext(data, v, FastTextSpec{});
  EXPECT_NEAR(m.loss(data), std::log(4.0), 1e-6);
}

TEST(FastText, TwoClustersTrainToHighAccuracy) {
  const auto data = two_class_data(50, 8);
  const Vocabulary v = build_vocabulary(data.documents, 1);
  FastTextSpec spec;
  spec.epochs = 20;
  const auto m = fasttext_linear_classifier(data, v, spec);
  std::size_t correct = 0;
  for (std::size_t i = 0; i < data.size(); ++i) {
    const auto p = m.predict_proba(data.documents[i].tokens);
    if ((p[1] > p[0] ? 1 : 0) == data.label_of(i)) ++correct;
  }
  EXPECT_GE(static_cast<double>(correct) / data.size(), 0.95);
  ASSERT_EQ(m.epoch_loss.size(), 20u);
  EXPECT_LT(m.epoch_loss.back(), m.epoch_loss.front());
  const auto back = FastTextClassifier::from_json(m.to_json());
  EXPECT_EQ(back.predict_proba(data.documents[0].tokens), m.predict_proba(data.documents[0].tokens));
  spec.bigrams = true;
  spec.bigram_buckets = 64;
  EXPECT_EQ(fasttext_linear_classifier(data, v, spec).A.size(), (v.size() + 1 + 64) * spec.dim);
  const LabeledDataset empty{{}, data.classes};
  EXPECT_THROW(fasttext_linear_classifier(empty, v, spec), DataError);
}

namespace {

class FixedClassifier : public Classifier {
 public:
  FixedClassifier(std::vector<double> p, std::vector<std::string> classes)
      : p_(std::move(p)), classes_(std::move(classes)) {}
  std::vector<double> predict_proba(const std::vector<std::string>&) const override { return p_; }
  const std::vector<std::string>& classes() const override { return classes_; }
  std::string name() const override { return "fixed"; }

 private:
  std::vector<double> p_;
  std::vector<std::string> classes_;
};

}  // namespace

TEST(Ensemble, AveragingExamples) {
  const auto mean = ensemble_average({{0.2, 0.8}, {0.4, 0.6}, {0.6, 0.4}});
  EXPECT_NEAR(mean[0], 0.4, 1e-12);
  EXPECT_NEAR(mean[1], 0.6, 1e-12);
  EXPECT_EQ(ensemble_average({{0.3, 0.7}}), (std::vector<double>{0.3, 0.7}));
  EXPECT_EQ(ensemble_average({{0.3, 0.7}, {0.3, 0.7}}), (std::vector<double>{0.3, 0.7}));
  EXPECT_THROW(ensemble_average(std::vector<std::vector<double>>{}), ContractViolation);
}

TEST(Ensemble, ClassifierMembersAndTopK) {
  const std::vector<std::string> cls{"a", "b"};
  EnsembleClassifier e({std::make_shared<FixedClassifier>(std::vector<double>{0.2, 0.8}, cls),
                        std::make_shared<FixedClassifier>(std::vector<double>{0.6, 0.4}, cls)});
  const auto p = e.predict_proba({"t"});
  EXPECT_NEAR(p[0], 0.4, 1e-12);
  EXPECT_EQ(e.classes(), cls);
  EXPECT_THROW(EnsembleClassifier({}), ContractViolation);
  EXPECT_THROW(EnsembleClassifier({std::make_shared<FixedClassifier>(std::vector<double>{1, 0}, cls),
                                   std::make_shared<FixedClassifier>(std::vector<double>{1, 0},
                                                                     std::vector<std::string>{"x", "y"})}),
               ContractViolation);
  const std::vector<double> scores{0.5, 0.9, 0.7, 0.9, 0.1};
  EXPECT_EQ(select_top_k(scores), (std::vector<std::size_t>{1, 3, 2}));
  EXPECT_EQ(select_top_k(scores, 10).size(), 5u);
}
