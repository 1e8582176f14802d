// SPDX-License-Identifier: Apache-2.0
// gaetool: train, score and verify gated auto-encoders from the command line.
//
// Every command prints `key=value` lines. The resolved configuration comes
// first (`config.<name>=...`) so that a run can be repeated from its output.
//
// Exit codes: 0 ok, 1 verification failure, 2 configuration error,
// 3 data error, 4 training divergence.

#include "gae/archive.hpp"
#include "gae/data_io.hpp"
#include "gae/errors.hpp"
#include "gae/pipelines.hpp"
#include "gae/verify.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace {

using namespace gae;

enum Exit { kOk = 0, kVerifyFailed = 1, kConfig = 2, kData = 3, kDiverged = 4 };

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string fmt_result(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.9g", v);
  return buf;
}

void emit(const std::string& key, const std::string& value) {
  std::cout << key << '=' << value << '\n';
}

// Registers options on a subcommand and remembers how to echo their final values.
class Options {
 public:
  explicit Options(CLI::App* app) : app_(app) {}

  template <class T>
  CLI::Option* add(const std::string& name, T& target, const std::string& help) {
    CLI::Option* opt = app_->add_option("--" + name, target, help)->capture_default_str();
    echo_.emplace_back(name, [&target] { return to_text(target); });
    return opt;
  }

  CLI::Option* flag(const std::string& name, bool& target, const std::string& help) {
    CLI::Option* opt = app_->add_flag("--" + name, target, help);
    echo_.emplace_back(name, [&target] { return std::string(target ? "true" : "false"); });
    return opt;
  }

  void echo() const {
    for (const auto& [name, get] : echo_) emit("config." + name, get());
  }

 private:
  static std::string to_text(const std::string& s) { return s; }
  static std::string to_text(double v) { return fmt(v); }
  template <class T>
  static std::string to_text(const T& v) {
    return std::to_string(v);
  }

  CLI::App* app_;
  std::vector<std::pair<std::string, std::function<std::string()>>> echo_;
};

// Optimizer flags shared by every training command.
struct OptimizerFlags {
  int epochs = 50;
  double lr = 0.01;
  double momentum = 0.9;
  double decay = 0.0;
  double corruption = 0.0;
  std::string corruption_kind = "masking";
  int batch = 32;
  std::uint64_t seed = 0;

  void add(Options& o) {
    o.add("epochs", epochs, "training epochs")->check(CLI::PositiveNumber);
    o.add("lr", lr, "learning rate")->check(CLI::NonNegativeNumber);
    o.add("momentum", momentum, "momentum in [0,1)")->check(CLI::Range(0.0, 1.0));
    o.add("decay", decay, "weight decay")->check(CLI::NonNegativeNumber);
    o.add("corruption", corruption, "masking probability or gaussian noise std")
        ->check(CLI::NonNegativeNumber);
    o.add("corruption-kind", corruption_kind, "none, masking or gaussian")
        ->check(CLI::IsMember({"none", "masking", "gaussian"}));
    o.add("batch", batch, "mini-batch size")->check(CLI::PositiveNumber);
    o.add("seed", seed, "random seed");
  }

  TrainConfig config() const {
    TrainConfig c;
    c.epochs = epochs;
    c.learning_rate = lr;
    c.momentum = momentum;
    c.weight_decay = decay;
    c.corruption_level = corruption;
    c.corruption = corruption > 0 ? parse_corruption(corruption_kind) : Corruption::none;
    c.batch_size = batch;
    c.seed = seed;
    c.validate();
    return c;
  }
};

void print_losses(const TrainReport& r) {
  emit("initial_train_loss", fmt_result(r.initial_train_loss));
  emit("final_train_loss", fmt_result(r.train_loss.empty() ? r.initial_train_loss : r.train_loss.back()));
}

// Adds the feature standardization used at training time so a loaded model
// can be applied to raw data.
void attach_standardization(ModelArchive& a, const Vector& mean, const Vector& sd) {
  auto tensor = [](const std::string& name, const Vector& v) {
    return Tensor{name, v.size(), 1, std::vector<double>(v.data(), v.data() + v.size())};
  };
  a.tensors.push_back(tensor("input.mean", mean));
  a.tensors.push_back(tensor("input.std", sd));
}

Vector tensor_vector(const ModelArchive& a, const std::string& name) {
  const Tensor& t = a.tensor(name);
  return Eigen::Map<const Vector>(t.data.data(), static_cast<Index>(t.data.size()));
}

// ---------------------------------------------------------------- synth

struct SynthCmd {
  std::string kind = "covariance";
  std::string out;
  Index n = 2000;
  Index dim = 16;
  int classes = 2;
  Index rank = 2;
  Index labels = 8;
  double strength = 0.9;
  Index group = 2;
  double noise = 1.0;
  std::uint64_t seed = 0;

  void add(CLI::App* sub, Options& o) {
    o.add("kind", kind, "covariance (class data) or labels (multilabel data)")
        ->check(CLI::IsMember({"covariance", "labels"}));
    o.add("out", out, "output dataset path")->required();
    o.add("n", n, "examples per class (covariance) or in total (labels)")->check(CLI::NonNegativeNumber);
    o.add("dim", dim, "feature dimension")->check(CLI::PositiveNumber);
    o.add("classes", classes, "number of classes")->check(CLI::PositiveNumber);
    o.add("rank", rank, "rank of each class's correlation factor")->check(CLI::PositiveNumber);
    o.add("labels", labels, "number of labels")->check(CLI::PositiveNumber);
    o.add("strength", strength, "label correlation strength in [0,1]")->check(CLI::Range(0.0, 1.0));
    o.add("group", group, "labels per latent factor")->check(CLI::PositiveNumber);
    o.add("noise", noise, "feature noise std")->check(CLI::NonNegativeNumber);
    o.add("seed", seed, "random seed");
    (void)sub;
  }

  int run(const Options& o) const {
    o.echo();
    LabeledDataset ds;
    if (kind == "covariance") {
      ds = synth_covariance_classes({n, dim, classes, rank, seed}).data;
    } else {
      ds = synth_correlated_labels({n, dim, labels, strength, group, noise, seed});
    }
    save_dataset(ds, out);
    emit("examples", std::to_string(ds.size()));
    emit("dataset", out);
    return kOk;
  }
};

// ---------------------------------------------------------------- train

struct TrainCmd {
  std::string data;
  std::string kind = "cov-gae";
  std::string out;
  std::string activation = "sigmoid";
  std::string mode = "symmetric";
  Index hidden = 32;
  Index factors = 32;
  Index mapping = 32;
  int threads = 1;
  OptimizerFlags opt;

  void add(Options& o) {
    o.add("data", data, "training dataset")->required();
    o.add("kind", kind, "mean, gae, cov-gae or mc")->check(CLI::IsMember({"mean", "gae", "cov-gae", "mc"}));
    o.add("out", out, "archive path (optional)");
    o.add("activation", activation, "mapping-unit activation for --kind gae");
    o.add("mode", mode, "loss for --kind gae: conditional or symmetric");
    o.add("hidden", hidden, "hidden units of the mean auto-encoder")->check(CLI::PositiveNumber);
    o.add("factors", factors, "factors of the gated model")->check(CLI::PositiveNumber);
    o.add("mapping", mapping, "mapping units of the gated model")->check(CLI::PositiveNumber);
    o.add("threads", threads, "worker threads")->check(CLI::PositiveNumber);
    opt.add(o);
  }

  int run(const Options& o) const {
    const TrainConfig base = opt.config();
    const Activation act = parse_activation(activation);
    const LossMode loss = parse_loss_mode(mode);
    o.echo();
    const LabeledDataset ds = load_dataset(data);
    if (ds.size() == 0) throw InputError("dataset '" + data + "' is empty");
    emit("examples", std::to_string(ds.size()));
    const Index d = ds.dim();

    ModelArchive archive;
    if (kind == "mean") {
      const auto r = train_mean_ae(ds.features, base, init_mean_ae(d, hidden, base.seed), nullptr, print_progress);
      print_losses(r.report);
      archive = to_archive(r.params);
    } else if (kind == "cov-gae" || kind == "mc") {
      TrainConfig run = base;
      run.mode = LossMode::symmetric;
      run.tie_factors = true;
      const auto cov = train_gae(ds.features, ds.features, run,
                                 init_gae(d, d, factors, mapping, Activation::sigmoid, base.seed, true),
                                 std::nullopt, print_progress);
      print_losses(cov.report);
      if (kind == "mc") {
        const auto mean = train_mean_ae(ds.features, base, init_mean_ae(d, hidden, base.seed), nullptr, print_progress);
        print_losses(mean.report);
        archive = to_archive(mean.params, cov.params);
      } else {
        archive = to_archive(cov.params, true);
      }
    } else {
      if (ds.kind != LabelKind::multilabel) {
        throw UsageError("--kind gae pairs features with label vectors; it needs a multilabel dataset");
      }
      TrainConfig run = base;
      run.mode = loss;
      const auto r = train_gae(ds.features, ds.labels, run,
                               init_gae(d, ds.labels.cols(), factors, mapping, act, base.seed),
                               std::nullopt, print_progress);
      print_losses(r.report);
      archive = to_archive(r.params);
    }
    const std::string bytes = serialize_archive(archive);
    emit("archive_fnv1a64", [&] {
      char buf[20];
      std::snprintf(buf, sizeof buf, "%016llx",
                    static_cast<unsigned long long>(
                        fnv1a64(reinterpret_cast<const unsigned char*>(bytes.data()), bytes.size())));
      return std::string(buf);
    }());
    if (!out.empty()) {
      save_archive(archive, out);
      emit("archive", out);
    }
    return kOk;
  }
};

// ---------------------------------------------------------------- verify

struct VerifyCmd {
  int seeds = 100;
  std::uint64_t seed = 0;
  bool break_ties = false;

  void add(Options& o) {
    o.add("seeds", seeds, "random models per suite")->check(CLI::PositiveNumber);
    o.add("seed", seed, "first model seed");
    o.flag("break-tie-weights", break_ties, "debug: perturb the decoder copy in the symmetry suite");
  }

  int run(const Options& o) const {
    o.echo();
    VerifyConfig cfg;
    cfg.seeds = seeds;
    cfg.base_seed = seed;
    cfg.break_tie_weights = break_ties;
    bool ok = true;
    for (const SuiteResult& r : run_verification(cfg)) {
      std::cout << "suite=" << r.name << " residual=" << fmt_result(r.value)
                << (r.lower_bound ? " must_exceed=" : " tolerance=") << fmt_result(r.tolerance)
                << " status=" << (r.passed ? "pass" : "fail") << '\n';
      ok = ok && r.passed;
    }
    emit("verify", ok ? "pass" : "fail");
    return ok ? kOk : kVerifyFailed;
  }
};

// ---------------------------------------------------------------- classify

struct ClassifyCmd {
  std::string data;
  std::string test;
  std::string model;
  std::string out;
  std::string kind = "mc";
  double test_fraction = 0.2;
  Index hidden = 32;
  Index factors = 32;
  Index mapping = 32;
  int threads = 1;
  int calibration_epochs = 500;
  double calibration_lr = 1.0;
  OptimizerFlags opt;

  void add(Options& o) {
    o.add("data", data, "class-labelled dataset")->required();
    o.add("test", test, "separate test set; otherwise a seeded split of --data");
    o.add("model", model, "evaluate this ensemble archive instead of training");
    o.add("out", out, "write the ensemble selected by --kind");
    o.add("kind", kind, "ensemble to save: mean, cov-gae or mc")->check(CLI::IsMember({"mean", "cov-gae", "mc"}));
    o.add("test-fraction", test_fraction, "held-out fraction when --test is absent")->check(CLI::Range(0.0, 1.0));
    o.add("hidden", hidden, "mean auto-encoder hidden units")->check(CLI::PositiveNumber);
    o.add("factors", factors, "covariance model factors")->check(CLI::PositiveNumber);
    o.add("mapping", mapping, "covariance model mapping units")->check(CLI::PositiveNumber);
    o.add("threads", threads, "worker threads")->check(CLI::PositiveNumber);
    o.add("calibration-epochs", calibration_epochs, "bias calibration steps")->check(CLI::NonNegativeNumber);
    o.add("calibration-lr", calibration_lr, "bias calibration step size")->check(CLI::PositiveNumber);
    opt.epochs = 100;
    opt.corruption = 0.3;
    opt.add(o);
  }

  int run(const Options& o) const {
    ClassifyRunConfig cfg;
    cfg.mean_hidden = hidden;
    cfg.factors = factors;
    cfg.mapping = mapping;
    cfg.train = opt.config();
    cfg.threads = threads;
    cfg.calibration.epochs = calibration_epochs;
    cfg.calibration.learning_rate = calibration_lr;
    cfg.calibration.seed = opt.seed;
    o.echo();

    LabeledDataset train = load_dataset(data);
    if (train.kind != LabelKind::classes) throw InputError("classify needs class labels");
    LabeledDataset held_out;
    if (!test.empty()) {
      held_out = load_dataset(test, {train.dim(), LabelKind::classes, std::nullopt});
    } else {
      const auto fold = split_folds(train.size(), 1, {1.0 - test_fraction, 0.0, test_fraction}, opt.seed).front();
      held_out = train.subset(fold.test);
      train = train.subset(fold.train);
    }
    emit("train_examples", std::to_string(train.size()));
    emit("test_examples", std::to_string(held_out.size()));

    if (!model.empty()) {
      const ClassifierEnsemble ens = ensemble_from_archive(load_archive(model));
      emit("error", fmt_result(evaluate_error(ens, held_out.features, held_out.classes)));
      return kOk;
    }
    const ClassifyResult r = run_classification(train, held_out, cfg);
    emit("aes_error", fmt_result(r.aes_error));
    emit("caes_error", fmt_result(r.caes_error));
    emit("mcaes_error", fmt_result(r.mcaes_error));
    if (!out.empty()) {
      const ClassifierEnsemble& pick = kind == "mean" ? r.aes : (kind == "cov-gae" ? r.caes : r.mcaes);
      save_archive(to_archive(pick), out);
      emit("archive", out);
    }
    return kOk;
  }
};

// ---------------------------------------------------------------- multilabel

struct MultilabelCmd {
  std::string data;
  std::string model;
  std::string out;
  std::string variant = "y2";
  int fold = 0;
  int folds = 10;
  Index hidden = 16;
  Index factors = 16;
  Index mapping = 16;
  int mlp_epochs = 30;
  double mlp_lr = 0.1;
  double noise = 0.1;
  int max_iter = 100;
  std::string select_max_iter;
  double step = 0.1;
  double tol = 1e-6;
  int threads = 1;
  bool print_predictions = false;
  OptimizerFlags opt;

  void add(Options& o) {
    o.add("data", data, "multilabel dataset")->required();
    o.add("model", model, "use this structured archive instead of training");
    o.add("out", out, "write the trained MLP and label model");
    o.add("variant", variant, "xy or y2")->check(CLI::IsMember({"xy", "y2"}));
    o.add("fold", fold, "which fold of the seeded 80/10/10 split to run")->check(CLI::NonNegativeNumber);
    o.add("folds", folds, "number of folds")->check(CLI::PositiveNumber);
    o.add("hidden", hidden, "MLP hidden units")->check(CLI::PositiveNumber);
    o.add("factors", factors, "label model factors")->check(CLI::PositiveNumber);
    o.add("mapping", mapping, "label model mapping units")->check(CLI::PositiveNumber);
    o.add("mlp-epochs", mlp_epochs, "MLP training epochs")->check(CLI::PositiveNumber);
    o.add("mlp-lr", mlp_lr, "MLP learning rate")->check(CLI::NonNegativeNumber);
    o.add("noise", noise, "gaussian noise std on y while training the xy model")->check(CLI::NonNegativeNumber);
    o.add("max-iter", max_iter, "refinement iterations")->check(CLI::NonNegativeNumber);
    o.add("select-max-iter", select_max_iter, "comma list; pick max-iter by validation error");
    o.add("step", step, "refinement step size")->check(CLI::NonNegativeNumber);
    o.add("tol", tol, "stop when the score changes by at most this")->check(CLI::PositiveNumber);
    o.add("threads", threads, "worker threads")->check(CLI::PositiveNumber);
    o.flag("print-predictions", print_predictions, "print refined label probabilities per test example");
    // These flags drive the label model; the label-only variant needs denoising.
    opt.epochs = 30;
    opt.corruption = 0.2;
    opt.corruption_kind = "gaussian";
    opt.add(o);
  }

  std::vector<int> candidates() const {
    std::vector<int> out_list;
    std::string item;
    for (const char ch : select_max_iter + ",") {
      if (ch != ',') {
        item += ch;
        continue;
      }
      if (item.empty()) continue;
      try {
        std::size_t used = 0;
        const int v = std::stoi(item, &used);
        if (used != item.size() || v < 0) throw std::invalid_argument(item);
        out_list.push_back(v);
      } catch (const std::exception&) {
        throw UsageError("--select-max-iter: bad entry '" + item + "'");
      }
      item.clear();
    }
    return out_list;
  }

  int run(const Options& o) const {
    MultilabelRunConfig cfg;
    cfg.mlp_hidden = hidden;
    cfg.mlp_train = opt.config();
    cfg.mlp_train.epochs = mlp_epochs;
    cfg.mlp_train.learning_rate = mlp_lr;
    cfg.mlp_train.corruption = Corruption::none;
    cfg.mlp_train.corruption_level = 0.0;
    cfg.factors = factors;
    cfg.mapping = mapping;
    cfg.gae_train = opt.config();
    cfg.refine.variant = parse_label_variant(variant);
    cfg.refine.step = step;
    cfg.refine.tol = tol;
    cfg.refine.max_iter = max_iter;
    cfg.refine.train_noise_std = noise;
    cfg.refine.validate();
    cfg.max_iter_candidates = candidates();
    cfg.threads = threads;
    if (fold >= folds) throw UsageError("--fold must be below --folds");
    o.echo();

    const LabeledDataset ds = load_dataset(data);
    if (ds.kind != LabelKind::multilabel) throw InputError("multilabel needs binary label vectors");
    const Fold split = split_folds(ds.size(), folds, {0.8, 0.1, 0.1}, opt.seed)[static_cast<std::size_t>(fold)];
    const LabeledDataset train = ds.subset(split.train);
    const LabeledDataset val = ds.subset(split.val);
    const LabeledDataset test = ds.subset(split.test);
    emit("train_examples", std::to_string(train.size()));
    emit("test_examples", std::to_string(test.size()));

    MlpParams mlp;
    GaeParams g;
    Vector mean, sd;
    LabelOptConfig refine = cfg.refine;
    if (!model.empty()) {
      const ModelArchive a = load_archive(model);
      const StructuredModel m = structured_from_archive(a);
      mlp = m.mlp;
      g = m.gae;
      refine.variant = m.variant;
      mean = tensor_vector(a, "input.mean");
      sd = tensor_vector(a, "input.std");
    } else {
      const MultilabelResult r = run_multilabel(train, val, test, cfg);
      mlp = r.mlp;
      g = r.gae;
      mean = r.feature_mean;
      sd = r.feature_std;
      refine.max_iter = r.max_iter;
    }
    emit("max_iter_used", std::to_string(refine.max_iter));
    const RowMatrix tx = apply_standardization(test.features, mean, sd);
    const RowMatrix p0 = mlp_forward_batch(mlp, tx);
    const RowMatrix p1 = predict_structured(mlp, g, tx, refine, threads);
    emit("mlp_error", fmt_result(multilabel_error(p0, test.labels)));
    emit("refined_error", fmt_result(multilabel_error(p1, test.labels)));
    if (print_predictions) {
      for (Index i = 0; i < p1.rows(); ++i) {
        for (Index l = 0; l < p1.cols(); ++l) std::cout << (l ? " " : "") << fmt_result(p1(i, l));
        std::cout << '\n';
      }
    }
    if (!out.empty()) {
      ModelArchive a = to_archive(mlp, g, refine.variant);
      attach_standardization(a, mean, sd);
      save_archive(a, out);
      emit("archive", out);
    }
    return kOk;
  }
};

// `--config FILE` holds `key=value` lines for the chosen command. They are
// spliced in as `--key=value` right after the command name, and every option
// keeps its last value, so flags typed on the command line win.
std::vector<std::string> expand_config(std::vector<std::string> args, const CLI::App& app) {
  if (args.size() < 2) return args;
  const CLI::App* sub = nullptr;
  for (const CLI::App* s : app.get_subcommands([](const CLI::App*) { return true; })) {
    if (s->get_name() == args[1]) sub = s;
  }
  if (sub == nullptr) return args;

  std::vector<std::string> rest{args.begin(), args.begin() + 2};
  std::optional<std::string> path;
  for (std::size_t i = 2; i < args.size(); ++i) {
    if (args[i] == "--config") {
      if (i + 1 == args.size()) throw UsageError("--config needs a file name");
      path = args[++i];
    } else if (args[i].rfind("--config=", 0) == 0) {
      path = args[i].substr(9);
    } else {
      rest.push_back(args[i]);
    }
  }
  if (!path) return args;

  std::ifstream in(*path, std::ios::binary);
  if (!in) throw InputError("cannot open config file '" + *path + "'");
  std::ostringstream text;
  text << in.rdbuf();
  std::vector<std::string> injected;
  for (auto [key, value] : parse_key_values(text.str())) {
    std::replace(key.begin(), key.end(), '_', '-');
    if (key.rfind("--", 0) == 0) key.erase(0, 2);
    if (key == "config" || key == "help" || sub->get_option_no_throw("--" + key) == nullptr) {
      throw UsageError("config file '" + *path + "': unknown key '" + key + "' for " + sub->get_name());
    }
    injected.push_back("--" + key + "=" + value);
  }
  rest.insert(rest.begin() + 2, injected.begin(), injected.end());
  return rest;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Gated auto-encoder toolkit"};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all", "Show help for every command");
  app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);

  SynthCmd synth;
  TrainCmd train;
  VerifyCmd verify;
  ClassifyCmd classify;
  MultilabelCmd multilabel;

  struct Entry {
    CLI::App* sub;
    Options opts;
  };
  std::map<std::string, Entry> commands;
  auto add_command = [&](const std::string& name, const std::string& help) -> Entry& {
    CLI::App* sub = app.add_subcommand(name, help);
    sub->add_option("--config", "key=value file with defaults for this command (flags win)");
    return commands.emplace(name, Entry{sub, Options(sub)}).first->second;
  };

  Entry& e_synth = add_command("synth", "write a synthetic dataset");
  synth.add(e_synth.sub, e_synth.opts);
  Entry& e_train = add_command("train", "train one model and write an archive");
  train.add(e_train.opts);
  Entry& e_verify = add_command("verify", "run the numerical property suites");
  verify.add(e_verify.opts);
  Entry& e_classify = add_command("classify", "class-specific models with calibrated scoring");
  classify.add(e_classify.opts);
  Entry& e_multi = add_command("multilabel", "MLP prediction refined in label space");
  multilabel.add(e_multi.opts);

  std::vector<std::string> args;
  try {
    args = expand_config({argv, argv + argc}, app);
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kConfig;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kData;
  }
  std::vector<char*> cargs;
  for (std::string& a : args) cargs.push_back(a.data());

  try {
    app.parse(static_cast<int>(cargs.size()), cargs.data());
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kConfig;
  }

  try {
    if (e_synth.sub->parsed()) return synth.run(e_synth.opts);
    if (e_train.sub->parsed()) return train.run(e_train.opts);
    if (e_verify.sub->parsed()) return verify.run(e_verify.opts);
    if (e_classify.sub->parsed()) return classify.run(e_classify.opts);
    if (e_multi.sub->parsed()) return multilabel.run(e_multi.opts);
  } catch (const DivergenceError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kDiverged;
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kConfig;
  } catch (const CapabilityError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kConfig;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kData;
  }
  return kConfig;
}
