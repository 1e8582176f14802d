// SPDX-License-Identifier: Apache-2.0
// Acceptance run: one PASS/FAIL line per criterion, nonzero exit if any fails.
//
//   acceptance [--quick]
//
// --quick shrinks the seed and fold counts so the whole run takes seconds;
// its verdicts are only indicative.

#include "gae/archive.hpp"
#include "gae/data_io.hpp"
#include "gae/pipelines.hpp"
#include "gae/verify.hpp"

#include <sys/wait.h>
#include <unistd.h>

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

namespace fs = std::filesystem;
using namespace gae;

namespace {

using Clock = std::chrono::steady_clock;

double since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

int failures = 0;

void report(int id, bool pass, const std::string& detail) {
  std::printf("criterion %d: %s %s\n", id, pass ? "PASS" : "FAIL", detail.c_str());
  std::fflush(stdout);
  if (!pass) ++failures;
}

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

const SuiteResult& suite(const std::vector<SuiteResult>& all, const std::string& name) {
  for (const auto& s : all) {
    if (s.name == name) return s;
  }
  std::fprintf(stderr, "missing suite %s\n", name.c_str());
  std::exit(2);
}

std::string describe(const SuiteResult& s) {
  return s.name + "=" + fmt("%.3g", s.value) + (s.lower_bound ? " (must exceed " : " (tol ") +
         fmt("%.0e", s.tolerance) + ")";
}

// ------------------------------------------------------------------ 1-5

void numerical_criteria(int seeds) {
  VerifyConfig cfg;
  cfg.seeds = seeds;
  const auto t0 = Clock::now();
  const std::vector<SuiteResult> all = run_verification(cfg);
  const double total = since(t0);

  const SuiteResult& grad = suite(all, "gradient_field");
  report(1, grad.passed && grad.seconds < 30.0,
         describe(grad) + " models=" + std::to_string(seeds) + " time=" + fmt("%.2fs", grad.seconds));

  const SuiteResult& poin = suite(all, "poincare");
  const SuiteResult& ctrl = suite(all, "poincare_untied_control");
  report(2, poin.passed && ctrl.passed, describe(poin) + " " + describe(ctrl));

  const SuiteResult& path = suite(all, "path_independence");
  report(3, path.passed, describe(path) + " steps=10000");

  const SuiteResult& fe = suite(all, "fcrbm_equivalence");
  const SuiteResult& fn = suite(all, "fcrbm_enumeration");
  report(4, fe.passed && fn.passed, describe(fe) + " " + describe(fn));

  const SuiteResult& ce = suite(all, "covrbm_equivalence");
  const SuiteResult& cn = suite(all, "covrbm_enumeration");
  const SuiteResult& me = suite(all, "mcrbm_equivalence");
  const SuiteResult& mn = suite(all, "mcrbm_enumeration");
  report(5, ce.passed && cn.passed && me.passed && mn.passed,
         describe(ce) + " " + describe(cn) + " " + describe(me) + " " + describe(mn) +
             " verify_total=" + fmt("%.2fs", total));
}

// ------------------------------------------------------------------ 6

void classification_criterion(int seeds) {
  const auto t0 = Clock::now();
  std::vector<double> caes, aes, mcaes;
  for (int s = 0; s < seeds; ++s) {
    const auto seed = static_cast<std::uint64_t>(s);
    const LabeledDataset all = synth_covariance_classes({2000, 16, 2, 2, seed}).data;
    const Fold f = split_folds(all.size(), 1, {0.8, 0.0, 0.2}, seed).front();

    ClassifyRunConfig cfg;
    cfg.train.epochs = 100;
    cfg.train.learning_rate = 0.01;
    cfg.train.momentum = 0.9;
    cfg.train.batch_size = 32;
    cfg.train.corruption = Corruption::masking;
    cfg.train.corruption_level = 0.3;
    cfg.train.seed = seed;
    cfg.calibration.seed = seed;
    const ClassifyResult r = run_classification(all.subset(f.train), all.subset(f.test), cfg);
    caes.push_back(r.caes_error);
    aes.push_back(r.aes_error);
    mcaes.push_back(r.mcaes_error);
    std::printf("  seed %d: caes=%.4f aes=%.4f mcaes=%.4f\n", s, r.caes_error, r.aes_error, r.mcaes_error);
    std::fflush(stdout);
  }
  const double secs = since(t0);
  const double c = median(caes);
  const double a = median(aes);
  report(6, c <= 0.10 && a >= 0.40 && secs < 300.0,
         "median caes_error=" + fmt("%.4f", c) + " (<= 0.10) median aes_error=" + fmt("%.4f", a) +
             " (>= 0.40) median mcaes_error=" + fmt("%.4f", median(mcaes)) + " seeds=" +
             std::to_string(seeds) + " time=" + fmt("%.1fs", secs));
}

// ------------------------------------------------------------------ 7

void multilabel_criterion(int folds) {
  const auto t0 = Clock::now();
  const LabeledDataset all = synth_correlated_labels({5000, 16, 8, 0.9, 2, 1.0, 0});
  const std::vector<Fold> split = split_folds(all.size(), 10, {0.8, 0.1, 0.1}, 0);

  std::vector<double> mlp_err, ref_err;
  int wins = 0;
  bool identity = true;
  for (int k = 0; k < folds; ++k) {
    const Fold& f = split[static_cast<std::size_t>(k)];
    MultilabelRunConfig cfg;
    cfg.mlp_train.epochs = 30;
    cfg.mlp_train.learning_rate = 0.1;
    cfg.mlp_train.seed = static_cast<std::uint64_t>(k);
    cfg.gae_train.epochs = 30;
    cfg.gae_train.learning_rate = 0.01;
    cfg.gae_train.corruption = Corruption::gaussian;
    cfg.gae_train.corruption_level = 0.2;
    cfg.gae_train.seed = static_cast<std::uint64_t>(k);
    cfg.refine.variant = LabelVariant::gae_y2;
    cfg.max_iter_candidates = {0, 1, 2, 3, 5, 10};
    const LabeledDataset test = all.subset(f.test);
    const MultilabelResult r = run_multilabel(all.subset(f.train), all.subset(f.val), test, cfg);
    mlp_err.push_back(r.mlp_error);
    ref_err.push_back(r.refined_error);
    if (r.refined_error < r.mlp_error) ++wins;

    // Zero refinement steps must hand back the MLP output untouched.
    LabelOptConfig none = cfg.refine;
    none.max_iter = 0;
    const RowMatrix tx = apply_standardization(test.features, r.feature_mean, r.feature_std);
    identity = identity && predict_structured(r.mlp, r.gae, tx, none) == mlp_forward_batch(r.mlp, tx);

    std::printf("  fold %d: mlp=%.4f refined=%.4f max_iter=%d\n", k, r.mlp_error, r.refined_error, r.max_iter);
    std::fflush(stdout);
  }
  const double m = median(mlp_err);
  const double rr = median(ref_err);
  const int need = (7 * folds + 9) / 10;
  report(7, rr <= m && wins >= need && identity,
         "median mlp_error=" + fmt("%.4f", m) + " median refined_error=" + fmt("%.4f", rr) +
             " strictly_better=" + std::to_string(wins) + "/" + std::to_string(folds) + " (need " +
             std::to_string(need) + ") max_iter0_identity=" + (identity ? "yes" : "no") +
             " time=" + fmt("%.1fs", since(t0)));
}

// ------------------------------------------------------------------ 8

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

struct CliRun {
  int code;
  std::string out;
};

CliRun run_tool(const fs::path& dir, const std::string& args) {
  const fs::path out = dir / "stdout.txt";
  const std::string cmd =
      "cd '" + dir.string() + "' && '" GAETOOL_PATH "' " + args + " >'" + out.string() + "' 2>/dev/null";
  const int status = std::system(cmd.c_str());
  return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, slurp(out)};
}

void determinism_criterion() {
  const fs::path dir = fs::temp_directory_path() / ("gae_acceptance_" + std::to_string(::getpid()));
  fs::create_directories(dir);
  const std::vector<std::pair<std::string, std::string>> commands = {
      {"synth --kind covariance --n 200 --dim 8 --seed 4 --out cls.txt", "cls.txt"},
      {"synth --kind labels --n 600 --dim 8 --labels 4 --seed 4 --out ml.txt", "ml.txt"},
      {"train --data cls.txt --kind mean --epochs 5 --hidden 6 --corruption 0.2 --out m.gae", "m.gae"},
      {"train --data cls.txt --kind cov-gae --epochs 5 --factors 6 --mapping 5 --corruption 0.3 --out c.gae", "c.gae"},
      {"train --data cls.txt --kind mc --epochs 5 --hidden 6 --factors 6 --mapping 5 --out mc.gae", "mc.gae"},
      {"train --data ml.txt --kind gae --activation relu --mode conditional --epochs 5 --factors 6 --mapping 5 "
       "--corruption 0.1 --corruption-kind gaussian --out g.gae",
       "g.gae"},
      {"classify --data cls.txt --epochs 5 --hidden 6 --factors 6 --mapping 5 --threads 2 --out e.gae", "e.gae"},
      {"multilabel --data ml.txt --epochs 5 --mlp-epochs 5 --select-max-iter 0,2,5 --threads 2 --out s.gae", "s.gae"},
      {"verify --seeds 2", ""},
  };

  int repeated = 0, archives = 0;
  std::string problem;
  for (const auto& [args, file] : commands) {
    const CliRun first = run_tool(dir, args);
    const std::string first_bytes = file.empty() ? "" : slurp(dir / file);
    const CliRun second = run_tool(dir, args);
    const std::string second_bytes = file.empty() ? "" : slurp(dir / file);
    if (first.code != 0 || second.code != 0 || first.out != second.out || first_bytes != second_bytes) {
      if (problem.empty()) problem = " first_mismatch='" + args + "'";
      continue;
    }
    ++repeated;
    if (file.size() > 4 && file.substr(file.size() - 4) == ".gae") {
      // Load, re-serialize and compare with the bytes on disk.
      const ModelArchive a = load_archive(dir / file);
      const bool exact = deserialize_archive(serialize_archive(a)) == a && serialize_archive(a) == first_bytes;
      if (exact) {
        ++archives;
      } else if (problem.empty()) {
        problem = " round_trip_mismatch=" + file;
      }
    }
  }
  std::error_code ec;
  fs::remove_all(dir, ec);
  const int expected_archives = 6;
  report(8, repeated == static_cast<int>(commands.size()) && archives == expected_archives,
         "identical_reruns=" + std::to_string(repeated) + "/" + std::to_string(commands.size()) +
             " exact_archive_round_trips=" + std::to_string(archives) + "/" +
             std::to_string(expected_archives) + problem);
}

}  // namespace

int main(int argc, char** argv) {
  const bool quick = argc > 1 && std::strcmp(argv[1], "--quick") == 0;
  numerical_criteria(quick ? 5 : 100);
  classification_criterion(quick ? 1 : 10);
  multilabel_criterion(quick ? 2 : 10);
  determinism_criterion();
  std::printf("summary: %d of 8 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
