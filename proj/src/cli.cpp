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

#include "textclf/cli.hpp"

#include <algorithm>
#include <iostream>
#include <set>
#include <sstream>

#include "CLI11.hpp"
#include "textclf/embeddings.hpp"
#include "textclf/error.hpp"
#include "textclf/hash.hpp"
#include "textclf/model/baselines.hpp"
#include "textclf/model/fasttext.hpp"
#include "textclf/model/mconv_lstm.hpp"
#include "textclf/serialize.hpp"
#include "textclf/text_pipeline.hpp"
#include "textclf/utf8.hpp"

namespace textclf {

namespace fs = std::filesystem;

nlohmann::json ModelSettings::to_json() const {
  return {{"kind", kind},         {"task", task},
          {"epochs", epochs},     {"batch_size", batch_size},
          {"learning_rate", learning_rate},
          {"seed", seed},         {"threads", threads},
          {"min_df", min_df},     {"seq_len", seq_len},
          {"emb_dim", emb_dim},   {"kernels", kernels},
          {"filters", filters},   {"pool", pool},
          {"lstm_units", lstm_units},
          {"dropout", dropout},   {"noise", noise},
          {"freeze_embeddings", freeze_embeddings},
          {"oov", oov},           {"embeddings", embeddings},
          {"ft_dim", ft_dim},     {"ft_bigrams", ft_bigrams},
          {"knn_k", knn_k},       {"iterations", iterations}};
}

namespace {

std::vector<std::size_t> parse_size_list(const std::string& text) {
  std::vector<std::size_t> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      const long v = std::stol(item, &used);
      if (used != item.size() || v <= 0) throw std::invalid_argument(item);
      out.push_back(static_cast<std::size_t>(v));
    } catch (const std::exception&) {
      throw ConfigError("expected a comma-separated list of positive integers, got '" + text + "'");
    }
  }
  if (out.empty()) throw ConfigError("empty list '" + text + "'");
  return out;
}

std::vector<double> parse_double_list(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw ConfigError("expected a comma-separated list of numbers, got '" + text + "'");
    }
  }
  return out;
}

MConvLstmConfig mconv_config(const ModelSettings& s, std::size_t n_classes) {
  MConvLstmConfig cfg;
  cfg.seq_len = s.seq_len ? s.seq_len : (s.task == "doc_classification" ? 300 : 100);
  cfg.emb_dim = s.emb_dim;
  cfg.kernel_sizes = parse_size_list(s.kernels);
  cfg.filters_per_channel = s.filters;
  cfg.pool = s.pool;
  cfg.lstm_units = s.lstm_units;
  cfg.dropout_rate = s.dropout;
  cfg.noise_sigma = s.noise;
  cfg.n_classes = n_classes;
  cfg.freeze_embeddings = s.freeze_embeddings;
  cfg.oov = parse_oov_strategy(s.oov);
  cfg.embedding_init = s.embeddings.empty() ? EmbeddingInit::kRandom : EmbeddingInit::kPretrained;
  // sentiment and hate speech are binary tasks scored on p(positive)
  cfg.loss = (s.task != "doc_classification" && n_classes == 2) ? nn::LossKind::kBinary
                                                                  : nn::LossKind::kCategorical;
  return cfg;
}

void check_settings(const ModelSettings& s) {
  static const std::set<std::string> kinds{"mconv_lstm", "fasttext", "logreg", "multinomial_nb",
                                           "knn"};
  static const std::set<std::string> tasks{"doc_classification", "sentiment", "hate_speech"};
  if (!kinds.count(s.kind)) throw ConfigError("unknown model kind '" + s.kind + "'");
  if (!tasks.count(s.task)) throw ConfigError("unknown task '" + s.task + "'");
  if (s.epochs < 0 || s.threads < 1 || s.min_df < 1 || s.batch_size == 0) {
    throw ConfigError("epochs >= 0, threads >= 1, min_df >= 1 and batch_size >= 1 required");
  }
}

}  // namespace

Trainer make_trainer(const ModelSettings& settings) {
  check_settings(settings);
  const ModelSettings s = settings;
  if (s.kind == "mconv_lstm") {
    std::shared_ptr<const EmbeddingModel> emb;
    if (!s.embeddings.empty()) {
      emb = std::make_shared<EmbeddingModel>(load_embedding_model(s.embeddings));
    }
    return [s, emb](const LabeledDataset& train, std::uint64_t seed) -> std::unique_ptr<Classifier> {
      const Vocabulary vocab = build_vocabulary(train.documents, s.min_df);
      const MConvLstmConfig cfg = mconv_config(s, train.classes.size());
      auto model = std::make_unique<MConvLstmModel>(build_mconv_lstm(cfg, emb.get(), vocab, seed));
      TrainOptions opts;
      opts.epochs = s.epochs;
      opts.batch_size = s.batch_size;
      opts.learning_rate = s.learning_rate < 0 ? 0.01 : s.learning_rate;
      opts.seed = seed;
      opts.threads = s.threads;
      const LabeledDataset none{{}, train.classes};
      train_model(*model, train, none, opts);
      return model;
    };
  }
  if (s.kind == "fasttext") {
    return [s](const LabeledDataset& train, std::uint64_t seed) -> std::unique_ptr<Classifier> {
      const Vocabulary vocab = build_vocabulary(train.documents, s.min_df);
      FastTextSpec spec;
      spec.dim = s.ft_dim;
      spec.epochs = s.epochs;
      spec.learning_rate = s.learning_rate < 0 ? 0.1 : s.learning_rate;
      spec.seed = seed;
      spec.bigrams = s.ft_bigrams;
      return std::make_unique<FastTextClassifier>(fasttext_linear_classifier(train, vocab, spec));
    };
  }
  const BaselineKind kind = parse_baseline_kind(s.kind);
  return [s, kind](const LabeledDataset& train, std::uint64_t) -> std::unique_ptr<Classifier> {
    BaselineOptions opts;
    opts.knn_k = s.knn_k;
    opts.iterations = s.iterations;
    if (s.learning_rate >= 0) opts.learning_rate = s.learning_rate;
    return std::make_unique<BaselineClassifier>(train_baseline_classifier(train, kind, {}, opts));
  };
}

std::vector<fs::path> save_classifier(const Classifier& model, const fs::path& dir) {
  fs::create_directories(dir);
  std::vector<fs::path> files;
  nlohmann::json info{{"classes", model.classes()}};
  if (const auto* m = dynamic_cast<const MConvLstmModel*>(&model)) {
    info["kind"] = "mconv_lstm";
    save_mconv_lstm(dir / "model", *m);
    files = {dir / "model.bin", dir / "model.json"};
  } else if (const auto* f = dynamic_cast<const FastTextClassifier*>(&model)) {
    info["kind"] = "fasttext";
    write_json_file(dir / "model.json", f->to_json());
    files = {dir / "model.json"};
  } else if (const auto* b = dynamic_cast<const BaselineClassifier*>(&model)) {
    info["kind"] = to_string(b->model.kind);
    write_json_file(dir / "model.json", b->to_json());
    files = {dir / "model.json"};
  } else {
    throw ContractViolation("save_classifier: unsupported model type " + model.name());
  }
  write_json_file(dir / "model_info.json", info);
  files.push_back(dir / "model_info.json");
  return files;
}

std::unique_ptr<Classifier> load_classifier(const fs::path& dir) {
  const nlohmann::json info = read_json_file(dir / "model_info.json");
  const std::string kind = info.value("kind", "");
  if (kind == "mconv_lstm") return std::make_unique<MConvLstmModel>(load_mconv_lstm(dir / "model"));
  if (kind == "fasttext") {
    return std::make_unique<FastTextClassifier>(
        FastTextClassifier::from_json(read_json_file(dir / "model.json")));
  }
  if (kind == "logreg" || kind == "multinomial_nb" || kind == "knn") {
    return std::make_unique<BaselineClassifier>(
        BaselineClassifier::from_json(read_json_file(dir / "model.json")));
  }
  throw IoError((dir / "model_info.json").string() + ": unknown model kind '" + kind + "'");
}

// ---------------------------------------------------------------------------

namespace {

struct Manifest {
  std::string command;
  nlohmann::json config = nlohmann::json::object();
  std::map<std::string, std::uint64_t> seeds;
  std::vector<fs::path> inputs;
  std::vector<fs::path> artifacts;
};

std::string file_hash(const fs::path& p) { return hex64(fnv1a64(read_text_file(p))); }

void write_manifest(const fs::path& dir, const Manifest& m) {
  nlohmann::json inputs = nlohmann::json::object(), artifacts = nlohmann::json::object();
  for (const fs::path& p : m.inputs) inputs[p.string()] = file_hash(p);
  for (const fs::path& p : m.artifacts) artifacts[p.filename().string()] = file_hash(p);
  nlohmann::json j{{"command", m.command},
                   {"config", m.config},
                   {"seeds", m.seeds},
                   {"inputs", inputs},
                   {"artifacts", artifacts},
                   {"format_version", 1}};
  fs::create_directories(dir);
  write_json_file(dir / "manifest.json", j);
}

LabeledDataset load_labeled(const fs::path& path) {
  return LabeledDataset::from_documents(read_tokenized_tsv(path));
}

// Gold file: "id<TAB>label" per non-empty line.
std::vector<std::pair<std::string, std::string>> read_gold(const fs::path& path) {
  std::vector<std::pair<std::string, std::string>> out;
  std::set<std::string> seen;
  for (const std::string& line : read_lines(path)) {
    const auto tab = line.find('\t');
    if (tab == std::string::npos) {
      throw DataError(path.string() + ": expected 'id<TAB>label', got '" + line + "'");
    }
    std::string id = line.substr(0, tab), label = line.substr(tab + 1);
    if (!seen.insert(id).second) throw DataError(path.string() + ": duplicate id '" + id + "'");
    out.emplace_back(std::move(id), std::move(label));
  }
  if (out.empty()) throw DataError(path.string() + ": no gold labels");
  return out;
}

EvalReport eval_gold_pred(const fs::path& gold_path, const fs::path& pred_path) {
  const auto gold = read_gold(gold_path);
  const nlohmann::json pj = read_json_file(pred_path);
  if (!pj.is_object() || !pj.contains("predictions") || !pj.at("predictions").is_object()) {
    throw DataError(pred_path.string() + ": expected an object with a 'predictions' map");
  }
  const auto& preds = pj.at("predictions");
  std::vector<std::string> classes;
  if (pj.contains("classes")) {
    classes = pj.at("classes").get<std::vector<std::string>>();
  } else {
    std::set<std::string> labels;
    for (const auto& [id, label] : gold) labels.insert(label);
    classes.assign(labels.begin(), labels.end());
  }
  auto index_of = [&](const std::string& label) {
    auto it = std::find(classes.begin(), classes.end(), label);
    if (it == classes.end()) throw DataError("unknown label '" + label + "'");
    return static_cast<int>(it - classes.begin());
  };
  std::vector<int> g;
  std::vector<std::vector<double>> probs;
  for (const auto& [id, label] : gold) {
    g.push_back(index_of(label));
    if (!preds.contains(id)) throw DataError("no prediction for document '" + id + "'");
    const auto& p = preds.at(id);
    std::vector<double> dist(classes.size(), 0.0);
    if (p.is_string()) {
      dist[static_cast<std::size_t>(index_of(p.get<std::string>()))] = 1.0;
    } else if (p.is_array()) {
      dist = p.get<std::vector<double>>();
    } else {
      throw DataError("prediction for '" + id + "' must be a label or a probability list");
    }
    probs.push_back(std::move(dist));
  }
  if (preds.size() != gold.size()) {
    for (const auto& [id, v] : preds.items()) {
      const bool known = std::any_of(gold.begin(), gold.end(),
                                     [&](const auto& gl) { return gl.first == id; });
      if (!known) throw DataError("prediction for unknown document '" + id + "'");
    }
  }
  return score_predictions(classes, g, probs);
}

std::string format_probs(const std::vector<double>& p) {
  std::string s;
  char buf[32];
  for (std::size_t i = 0; i < p.size(); ++i) {
    std::snprintf(buf, sizeof(buf), "%s%.6f", i ? "," : "", p[i]);
    s += buf;
  }
  return s;
}

// "--config file.json" values are spliced in right after the subcommand
// name; later explicit flags win.
std::vector<std::string> expand_config(const std::vector<std::string>& args) {
  std::string path;
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--config" && i + 1 < args.size()) path = args[i + 1];
    if (args[i].rfind("--config=", 0) == 0) path = args[i].substr(9);
  }
  if (path.empty() || args.empty()) return args;
  const nlohmann::json j = read_json_file(path);
  if (!j.is_object()) throw ConfigError(path + ": config must be a JSON object");
  std::vector<std::string> injected;
  for (const auto& [key, value] : j.items()) {
    std::string flag = "--" + key;
    std::replace(flag.begin(), flag.end(), '_', '-');
    if (value.is_boolean()) {
      if (value.get<bool>()) injected.push_back(flag);
    } else if (value.is_string()) {
      injected.push_back(flag);
      injected.push_back(value.get<std::string>());
    } else if (value.is_array()) {
      std::string joined;
      for (const auto& v : value) {
        if (!joined.empty()) joined += ",";
        joined += v.is_string() ? v.get<std::string>() : v.dump();
      }
      injected.push_back(flag);
      injected.push_back(joined);
    } else if (value.is_number()) {
      injected.push_back(flag);
      injected.push_back(value.dump());
    } else {
      throw ConfigError(path + ": unsupported value for '" + key + "'");
    }
  }
  std::vector<std::string> out{args.front()};
  out.insert(out.end(), injected.begin(), injected.end());
  out.insert(out.end(), args.begin() + 1, args.end());
  return out;
}

void add_model_options(CLI::App* cmd, ModelSettings& s) {
  cmd->add_option("--model", s.kind, "mconv_lstm | fasttext | logreg | multinomial_nb | knn");
  cmd->add_option("--task", s.task, "doc_classification | sentiment | hate_speech");
  cmd->add_option("--epochs", s.epochs);
  cmd->add_option("--batch-size", s.batch_size);
  cmd->add_option("--lr", s.learning_rate, "learning rate (kind default when omitted)");
  cmd->add_option("--seed", s.seed);
  cmd->add_option("--threads", s.threads);
  cmd->add_option("--min-df", s.min_df);
  cmd->add_option("--seq-len", s.seq_len);
  cmd->add_option("--emb-dim", s.emb_dim);
  cmd->add_option("--kernels", s.kernels, "comma-separated kernel sizes");
  cmd->add_option("--filters", s.filters);
  cmd->add_option("--pool", s.pool);
  cmd->add_option("--lstm-units", s.lstm_units);
  cmd->add_option("--dropout", s.dropout);
  cmd->add_option("--noise", s.noise);
  cmd->add_flag("--freeze-embeddings", s.freeze_embeddings);
  cmd->add_option("--oov", s.oov, "error | uniform | random_invocab | subword");
  cmd->add_option("--embeddings", s.embeddings, "saved embedding model stem");
  cmd->add_option("--ft-dim", s.ft_dim);
  cmd->add_flag("--ft-bigrams", s.ft_bigrams);
  cmd->add_option("--knn-k", s.knn_k);
  cmd->add_option("--iterations", s.iterations);
}

struct PreprocessArgs {
  std::string input, resources, out_dir;
  int min_df = 5;
  bool keep_markup = false, keep_specials = false, use_lemmas = false;
};

struct EmbedArgs {
  std::string data, kind = "sgns", out_dir;
  TrainSpec spec;
  int min_df = 1;
};

struct EvalArgs {
  std::string gold, pred, data, out_dir, fractions;
  int k = 5;
  ModelSettings model;
};

int run_parsed(CLI::App& app, CLI::App* pre, CLI::App* emb, CLI::App* train, CLI::App* eval,
               CLI::App* predict, CLI::App* report, PreprocessArgs& pa, EmbedArgs& ea,
               ModelSettings& ta, std::string& train_data, std::string& train_out, EvalArgs& va,
               std::string& model_dir, bool& raw_input, std::string& predict_out,
               std::string& report_in, std::string& report_out, std::ostream& out,
               std::istream& in) {
  (void)app;
  if (pre->parsed()) {
    PipelineConfig cfg = PipelineConfig::with_default_resources();
    if (!pa.resources.empty()) {
      const fs::path r = pa.resources;
      cfg.hashtag_lexicon_path = r / "hashtag_lexicon_bn.txt";
      cfg.suffix_rules_path = r / "stem_rules_bn.txt";
      cfg.lemma_rules_path = r / "lemma_rules_bn.txt";
      cfg.stopword_path = r / "stopwords_bn.txt";
    }
    cfg.strip_markup = !pa.keep_markup;
    cfg.remove_digits_and_specials = !pa.keep_specials;
    cfg.use_lemmas = pa.use_lemmas;
    cfg.min_doc_frequency = pa.min_df;
    if (pa.min_df < 1) throw ConfigError("min-df must be >= 1");
    const auto raw = read_raw_corpus(pa.input);
    const auto docs = prune_infrequent(apply_pipeline(raw, cfg), pa.min_df);
    const fs::path dir = pa.out_dir;
    fs::create_directories(dir);
    write_tokenized_tsv(dir / "tokens.tsv", docs);
    Manifest m{"preprocess",
               {{"input", pa.input},
                {"min_df", pa.min_df},
                {"strip_markup", cfg.strip_markup},
                {"remove_digits_and_specials", cfg.remove_digits_and_specials},
                {"use_lemmas", cfg.use_lemmas},
                {"resources", pa.resources}},
               {},
               {pa.input},
               {dir / "tokens.tsv"}};
    write_manifest(dir, m);
    out << "wrote " << docs.size() << " documents to " << (dir / "tokens.tsv").string() << "\n";
    return 0;
  }
  if (emb->parsed()) {
    const EmbeddingKind kind = parse_embedding_kind(ea.kind);
    const auto docs = read_tokenized_tsv(ea.data);
    const Vocabulary vocab = build_vocabulary(docs, ea.min_df);
    EmbeddingModel model;
    if (kind == EmbeddingKind::kSgns) {
      model = train_sgns(docs, vocab, ea.spec);
    } else if (kind == EmbeddingKind::kSubword) {
      model = train_subword_sgns(docs, vocab, ea.spec);
    } else {
      model = train_glove(build_cooccurrence(docs, vocab, ea.spec.window), vocab, ea.spec);
    }
    const fs::path dir = ea.out_dir;
    fs::create_directories(dir);
    save_embedding_model(dir / "embeddings", model);
    write_vectors(dir / "vectors.txt", model);
    Manifest m{"embed",
               {{"data", ea.data},
                {"kind", ea.kind},
                {"dim", ea.spec.dim},
                {"window", ea.spec.window},
                {"negatives", ea.spec.negatives},
                {"epochs", ea.spec.epochs},
                {"learning_rate", ea.spec.learning_rate},
                {"nmin", ea.spec.nmin},
                {"nmax", ea.spec.nmax},
                {"buckets", ea.spec.bucket_count},
                {"threads", ea.spec.threads},
                {"min_df", ea.min_df}},
               {{"seed", ea.spec.seed}},
               {ea.data},
               {dir / "embeddings.bin", dir / "embeddings.json", dir / "vectors.txt"}};
    write_manifest(dir, m);
    out << "trained " << to_string(kind) << " embeddings for " << vocab.size() << " words\n";
    return 0;
  }
  if (train->parsed()) {
    const LabeledDataset data = load_labeled(train_data);
    const auto model = make_trainer(ta)(data, ta.seed);
    const fs::path dir = train_out;
    auto files = save_classifier(*model, dir);
    std::vector<fs::path> inputs{train_data};
    if (!ta.embeddings.empty()) {
      inputs.push_back(fs::path(ta.embeddings + ".bin"));
      inputs.push_back(fs::path(ta.embeddings + ".json"));
    }
    nlohmann::json cfg = ta.to_json();
    cfg["data"] = train_data;
    write_manifest(dir, {"train", cfg, {{"seed", ta.seed}}, inputs, files});
    out << "trained " << model->name() << " on " << data.size() << " documents\n";
    return 0;
  }
  if (eval->parsed()) {
    const bool gold_mode = !va.gold.empty() || !va.pred.empty();
    if (gold_mode == !va.data.empty() || (gold_mode && (va.gold.empty() || va.pred.empty()))) {
      throw CLI::ValidationError("eval needs either --gold and --pred, or --data");
    }
    EvalReport report;
    Manifest m;
    m.command = "eval";
    if (gold_mode) {
      report = eval_gold_pred(va.gold, va.pred);
      report.config = {{"gold", va.gold}, {"pred", va.pred}};
      m.config = report.config;
      m.inputs = {va.gold, va.pred};
    } else {
      const LabeledDataset data = load_labeled(va.data);
      const Trainer trainer = make_trainer(va.model);
      report = cross_validate(trainer, data, va.k, va.model.seed);
      if (!va.fractions.empty()) {
        const auto fr = parse_double_list(va.fractions);
        report.learning_curve = learning_curve(trainer, data, fr, va.model.seed);
      }
      nlohmann::json cfg = va.model.to_json();
      cfg["k"] = va.k;
      cfg["data"] = va.data;
      cfg["fractions"] = va.fractions;
      report.config = cfg;
      report.seeds = {{"seed", va.model.seed}};
      m.config = cfg;
      m.seeds = report.seeds;
      m.inputs = {va.data};
    }
    m.artifacts = write_report(report, va.out_dir);
    write_manifest(va.out_dir, m);
    out << "macro-F1 " << (report.prf ? report.prf->f1 : 0.0) << " on " << report.n_eval
        << " documents; report in " << va.out_dir << "\n";
    return 0;
  }
  if (predict->parsed()) {
    const auto model = load_classifier(model_dir);
    std::optional<TextPipeline> pipeline;
    if (raw_input) pipeline.emplace(PipelineConfig::with_default_resources());
    std::string line;
    std::size_t n = 0;
    while (std::getline(in, line)) {
      if (!line.empty() && line.back() == '\r') line.pop_back();
      std::vector<std::string> tokens;
      if (pipeline) {
        tokens = pipeline->apply(RawDocument{"stdin" + std::to_string(n), line, std::nullopt}).tokens;
      } else {
        if (!utf8::is_valid(line)) throw DataError("input line " + std::to_string(n + 1) + " is not valid UTF-8");
        tokens = tokenize(line);
      }
      const auto p = model->predict_proba(tokens);
      out << model->classes()[static_cast<std::size_t>(argmax(p))] << "\t" << format_probs(p) << "\n";
      ++n;
    }
    if (!predict_out.empty()) {
      write_manifest(predict_out, {"predict",
                                   {{"model", model_dir}, {"raw", raw_input}, {"lines", n}},
                                   {},
                                   {fs::path(model_dir) / "model_info.json"},
                                   {}});
    }
    return 0;
  }
  if (report->parsed()) {
    const EvalReport r = read_report(report_in);
    if (r.prf) {
      out << "macro P " << r.prf->precision << "  R " << r.prf->recall << "  F1 " << r.prf->f1
          << "  (" << r.eval_split << ", n=" << r.n_eval << ")\n";
    }
    for (const auto& [name, s] : r.cv_metrics) {
      out << "cv " << name << " " << s.mean << " +- " << s.std << "\n";
    }
    if (r.mcc) out << "mcc " << *r.mcc << "\n";
    if (r.macro_auc) out << "macro auc " << *r.macro_auc << "\n";
    if (!report_out.empty()) {
      Manifest m{"report", {{"in", report_in}}, r.seeds, {fs::path(report_in) / "report.json"}, {}};
      m.artifacts = write_report(r, report_out);
      write_manifest(report_out, m);
    }
    return 0;
  }
  return 1;
}

}  // namespace

int run_command(const std::vector<std::string>& raw_args, std::ostream& out, std::ostream& err,
                std::istream& in) {
  CLI::App app{"textclf: Bengali text classification workbench", "textclf"};
  app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
  app.require_subcommand(1);
  std::string config_path;

  PreprocessArgs pa;
  auto* pre = app.add_subcommand("preprocess", "normalize a raw corpus into tokens");
  pre->add_option("--input", pa.input, "raw corpus, 'label<TAB>text' or 'text' per line")->required();
  pre->add_option("--out-dir", pa.out_dir)->required();
  pre->add_option("--resources", pa.resources, "directory with lexicon, rules and stopwords");
  pre->add_option("--min-df", pa.min_df);
  pre->add_flag("--keep-markup", pa.keep_markup);
  pre->add_flag("--keep-specials", pa.keep_specials);
  pre->add_flag("--use-lemmas", pa.use_lemmas);

  EmbedArgs ea;
  ea.spec.dim = 100;
  auto* emb = app.add_subcommand("embed", "train word embeddings");
  emb->add_option("--data", ea.data, "tokenized TSV")->required();
  emb->add_option("--out-dir", ea.out_dir)->required();
  emb->add_option("--kind", ea.kind, "sgns | glove | subword");
  emb->add_option("--dim", ea.spec.dim);
  emb->add_option("--window", ea.spec.window);
  emb->add_option("--negatives", ea.spec.negatives);
  emb->add_option("--epochs", ea.spec.epochs);
  emb->add_option("--lr", ea.spec.learning_rate);
  emb->add_option("--seed", ea.spec.seed);
  emb->add_option("--nmin", ea.spec.nmin);
  emb->add_option("--nmax", ea.spec.nmax);
  emb->add_option("--buckets", ea.spec.bucket_count);
  emb->add_option("--threads", ea.spec.threads);
  emb->add_option("--min-df", ea.min_df);

  ModelSettings ta;
  std::string train_data, train_out;
  auto* train = app.add_subcommand("train", "train a classifier");
  train->add_option("--data", train_data, "tokenized TSV")->required();
  train->add_option("--out-dir", train_out)->required();
  add_model_options(train, ta);

  EvalArgs va;
  auto* eval = app.add_subcommand("eval", "score predictions or cross-validate a model kind");
  eval->add_option("--gold", va.gold, "'id<TAB>label' per line");
  eval->add_option("--pred", va.pred, "JSON predictions");
  eval->add_option("--data", va.data, "tokenized TSV for cross-validation");
  eval->add_option("--k", va.k, "CV folds");
  eval->add_option("--fractions", va.fractions, "learning-curve fractions, comma-separated");
  eval->add_option("--out-dir", va.out_dir)->required();
  add_model_options(eval, va.model);

  std::string model_dir, predict_out;
  bool raw_input = false;
  auto* predict = app.add_subcommand("predict", "classify documents read from stdin");
  predict->add_option("--model", model_dir, "directory written by train")->required();
  predict->add_flag("--raw", raw_input, "run the text pipeline on each line");
  predict->add_option("--out-dir", predict_out, "where to write the run manifest");

  std::string report_in, report_out;
  auto* report = app.add_subcommand("report", "summarize a report directory");
  report->add_option("--in", report_in, "directory holding report.json")->required();
  report->add_option("--out-dir", report_out, "re-emit report files here");

  for (CLI::App* sub : {pre, emb, train, eval, predict, report}) {
    sub->add_option("--config", config_path, "JSON file of option values");
  }

  try {
    std::vector<std::string> args = expand_config(raw_args);
    std::reverse(args.begin(), args.end());
    app.parse(args);
    return run_parsed(app, pre, emb, train, eval, predict, report, pa, ea, ta, train_data,
                      train_out, va, model_dir, raw_input, predict_out, report_in, report_out,
                      out, in);
  } catch (const CLI::Success& e) {
    app.exit(e, out, err);
    return 0;
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return 1;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }
}

int run_command(int argc, const char* const* argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return run_command(args, std::cout, std::cerr, std::cin);
}

}  // namespace textclf
