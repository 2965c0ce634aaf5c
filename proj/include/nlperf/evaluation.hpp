#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "nlperf/gbrt.hpp"
#include "nlperf/record_store.hpp"
#include <json.hpp>

namespace nlperf {

double rmse(std::span<const double> predictions, std::span<const double> truths);

enum class PredictorKind { nlperf_sm, nlperf_mm, mean, lang_src, lang_tgt, lang_tsf, model_wise };

const char* to_string(PredictorKind kind);
PredictorKind predictor_kind_from_string(const std::string& s);

// Constant predictor: mean of the training scores.
class MeanBaseline {
public:
    static MeanBaseline fit(std::span<const ExperimentRecord> train);
    double predict(const ExperimentRecord&) const { return mean_; }
    double value() const { return mean_; }

private:
    double mean_ = 0.0;
};

// Mean of training scores sharing the test record's language in one role;
// falls back to the global training mean when no sharer exists.
class LangwiseBaseline {
public:
    static LangwiseBaseline fit(std::span<const ExperimentRecord> train, Role role);
    double predict(const ExperimentRecord& rec) const;

private:
    Role role_ = Role::source;
    double fallback_ = 0.0;
    std::map<std::string, double> group_mean_;
};

// Mean score of all other models on the identical dataset; falls back to the
// global training mean for unseen datasets.
class ModelwiseBaseline {
public:
    static ModelwiseBaseline fit(std::span<const ExperimentRecord> train);
    double predict(const ExperimentRecord& rec) const;

private:
    double fallback_ = 0.0;
    // dataset key -> (sum of scores, count) and per (dataset, model) sums.
    std::map<std::string, std::pair<double, std::size_t>> dataset_totals_;
    std::map<std::string, std::pair<double, std::size_t>> dataset_model_totals_;
};

struct EvalOptions {
    int k = 5;
    int runs = 10;
    std::uint64_t seed = 0;
    int jobs = 1;
    BoosterParams booster{};
    std::optional<FoldUnit> fold_unit;  // default: dataset for multi-model tasks
};

struct EvalReport {
    std::string task_id;
    PredictorKind kind = PredictorKind::mean;
    int k = 0;
    int num_runs = 0;
    std::vector<std::vector<double>> fold_rmse;  // [run][fold]
    double final_rmse = 0.0;

    nlohmann::json to_json() const;
};

// k-fold cross validation: per run, a fresh seeded partition; train on k-1
// folds, predict the held-out fold. On multi-model tasks each fold's RMSE is
// the mean of per-model RMSEs.
EvalReport kfold_evaluate(const RecordStore& store, PredictorKind kind, const EvalOptions& options);

// Grid of single predictions: each override map is applied to a copy of the
// base vector (overridden positions become present values).
std::vector<std::pair<std::map<std::string, double>, double>> sweep_feature(
    const BoostedModel& model, const FeatureVector& base,
    const std::vector<std::map<std::string, double>>& overrides);

}  // namespace nlperf
