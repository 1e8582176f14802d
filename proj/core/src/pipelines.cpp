// SPDX-License-Identifier: Apache-2.0
#include "gae/pipelines.hpp"

#include "gae/errors.hpp"
#include "gae/parallel.hpp"
#include "gae/random.hpp"

#include <limits>

namespace gae {

namespace {

std::uint64_t class_seed(std::uint64_t seed, int k) {
  return mix64(seed ^ (0xC1A55ULL + static_cast<std::uint64_t>(k)));
}

}  // namespace

ClassModels train_class_models(const LabeledDataset& train, const ClassifyRunConfig& cfg,
                               bool want_mean, bool want_cov) {
  if (train.kind != LabelKind::classes) throw UsageError("classification needs class labels");
  if (train.num_outputs < 2) throw UsageError("classification needs at least two classes");
  const auto k = static_cast<std::size_t>(train.num_outputs);
  const Index d = train.dim();
  ClassModels out;
  if (want_mean) out.mean.resize(k);
  if (want_cov) out.cov.resize(k);

  // Each (class, family) pair is an independent job; results do not depend on
  // how jobs land on threads.
  const std::size_t families = (want_mean ? 1 : 0) + (want_cov ? 1 : 0);
  parallel_for(k * families, cfg.threads, [&](std::size_t job) {
    const int cls = static_cast<int>(job % k);
    const bool mean_job = want_mean && job < k;
    const RowMatrix xs = train.class_features(cls);
    if (xs.rows() == 0) throw InputError("class " + std::to_string(cls) + " has no examples");
    TrainConfig run = cfg.train;
    run.seed = class_seed(cfg.train.seed, cls);
    if (mean_job) {
      out.mean[static_cast<std::size_t>(cls)] =
          train_mean_ae(xs, run, init_mean_ae(d, cfg.mean_hidden, run.seed)).params;
    } else {
      run.mode = LossMode::symmetric;
      run.tie_factors = true;
      GaeParams init = init_gae(d, d, cfg.factors, cfg.mapping, Activation::sigmoid, run.seed, true);
      out.cov[static_cast<std::size_t>(cls)] = train_gae(xs, xs, run, std::move(init)).params;
    }
  });
  return out;
}

ClassifierEnsemble make_ensemble(const ClassModels& models, EnsembleKind kind) {
  const bool mean = kind != EnsembleKind::cov;
  const bool cov = kind != EnsembleKind::mean;
  if ((mean && models.mean.empty()) || (cov && models.cov.empty())) {
    throw UsageError("make_ensemble: requested model family was not trained");
  }
  const std::size_t k = mean ? models.mean.size() : models.cov.size();
  ClassifierEnsemble ens;
  for (std::size_t i = 0; i < k; ++i) {
    ClassMember m;
    if (mean) m.mean = models.mean[i];
    if (cov) m.cov = models.cov[i];
    ens.members.push_back(std::move(m));
  }
  ens.biases = Vector::Zero(static_cast<Index>(k));
  return ens;
}

ClassifyResult run_classification(const LabeledDataset& train, const LabeledDataset& test,
                                  const ClassifyRunConfig& cfg) {
  const ClassModels models = train_class_models(train, cfg, true, true);
  ClassifyResult r;
  r.aes = calibrate(make_ensemble(models, EnsembleKind::mean), train.features, train.classes,
                    cfg.calibration);
  r.caes = calibrate(make_ensemble(models, EnsembleKind::cov), train.features, train.classes,
                     cfg.calibration);
  r.mcaes = calibrate(make_ensemble(models, EnsembleKind::mean_cov), train.features,
                      train.classes, cfg.calibration);
  r.aes_error = evaluate_error(r.aes, test.features, test.classes);
  r.caes_error = evaluate_error(r.caes, test.features, test.classes);
  r.mcaes_error = evaluate_error(r.mcaes, test.features, test.classes);
  return r;
}

MultilabelResult run_multilabel(const LabeledDataset& train, const LabeledDataset& val,
                                const LabeledDataset& test, const MultilabelRunConfig& cfg) {
  if (train.kind != LabelKind::multilabel) throw UsageError("multilabel run needs binary labels");
  MultilabelResult r;
  const Standardization st = standardize(train);
  r.feature_mean = st.mean;
  r.feature_std = st.stddev;
  const RowMatrix& xs = st.data.features;

  r.mlp = mlp_train(xs, train.labels, cfg.mlp_train,
                    init_mlp(train.dim(), cfg.mlp_hidden, train.num_outputs, cfg.mlp_train.seed));
  r.gae = train_label_gae(xs, train.labels, cfg.refine.variant, cfg.factors, cfg.mapping,
                          cfg.gae_train, cfg.refine.train_noise_std)
              .params;

  LabelOptConfig refine = cfg.refine;
  if (!cfg.max_iter_candidates.empty()) {
    if (val.size() == 0) throw UsageError("max_iter selection needs validation data");
    const RowMatrix vx = apply_standardization(val.features, st.mean, st.stddev);
    double best = std::numeric_limits<double>::infinity();
    int best_iter = 0;
    for (const int it : cfg.max_iter_candidates) {
      refine.max_iter = it;
      const double err =
          multilabel_error(predict_structured(r.mlp, r.gae, vx, refine, cfg.threads), val.labels);
      if (err < best || (err == best && it < best_iter)) {
        best = err;
        best_iter = it;
      }
    }
    refine.max_iter = best_iter;
  }
  r.max_iter = refine.max_iter;

  const RowMatrix tx = apply_standardization(test.features, st.mean, st.stddev);
  r.mlp_error = multilabel_error(mlp_forward_batch(r.mlp, tx), test.labels);
  r.refined_error =
      multilabel_error(predict_structured(r.mlp, r.gae, tx, refine, cfg.threads), test.labels);
  return r;
}

}  // namespace gae
