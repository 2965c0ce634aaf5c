#include "nlperf/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>

#include "nlperf/util.hpp"

namespace nlperf {

double rmse(std::span<const double> predictions, std::span<const double> truths) {
    if (predictions.size() != truths.size()) throw std::invalid_argument("rmse: length mismatch");
    if (predictions.empty()) throw std::invalid_argument("rmse: empty input");
    double sum = 0.0;
    for (std::size_t i = 0; i < predictions.size(); ++i) {
        double d = predictions[i] - truths[i];
        sum += d * d;
    }
    return std::sqrt(sum / static_cast<double>(predictions.size()));
}

const char* to_string(PredictorKind kind) {
    switch (kind) {
        case PredictorKind::nlperf_sm: return "nlperf_sm";
        case PredictorKind::nlperf_mm: return "nlperf_mm";
        case PredictorKind::mean: return "mean";
        case PredictorKind::lang_src: return "lang_src";
        case PredictorKind::lang_tgt: return "lang_tgt";
        case PredictorKind::lang_tsf: return "lang_tsf";
        case PredictorKind::model_wise: return "model_wise";
    }
    return "?";
}

PredictorKind predictor_kind_from_string(const std::string& s) {
    for (PredictorKind kind :
         {PredictorKind::nlperf_sm, PredictorKind::nlperf_mm, PredictorKind::mean,
          PredictorKind::lang_src, PredictorKind::lang_tgt, PredictorKind::lang_tsf,
          PredictorKind::model_wise}) {
        if (s == to_string(kind)) return kind;
    }
    throw std::invalid_argument("unknown predictor kind: " + s);
}

namespace {

double require_score(const ExperimentRecord& rec) {
    if (!rec.score) throw std::invalid_argument("record without score: " + rec.record_key());
    return *rec.score;
}

}  // namespace

MeanBaseline MeanBaseline::fit(std::span<const ExperimentRecord> train) {
    if (train.empty()) throw std::invalid_argument("mean baseline: empty training set");
    MeanBaseline b;
    double sum = 0.0;
    for (const auto& rec : train) sum += require_score(rec);
    b.mean_ = sum / static_cast<double>(train.size());
    return b;
}

LangwiseBaseline LangwiseBaseline::fit(std::span<const ExperimentRecord> train, Role role) {
    if (train.empty()) throw std::invalid_argument("language-wise baseline: empty training set");
    LangwiseBaseline b;
    b.role_ = role;
    b.fallback_ = MeanBaseline::fit(train).value();
    std::map<std::string, std::pair<double, std::size_t>> totals;
    for (const auto& rec : train) {
        const auto& lang = rec.lang(role);
        if (!lang) throw std::invalid_argument("record lacks role required by language-wise baseline");
        auto& [sum, count] = totals[*lang];
        sum += require_score(rec);
        ++count;
    }
    for (const auto& [lang, total] : totals) {
        b.group_mean_[lang] = total.first / static_cast<double>(total.second);
    }
    return b;
}

double LangwiseBaseline::predict(const ExperimentRecord& rec) const {
    const auto& lang = rec.lang(role_);
    if (!lang) return fallback_;
    auto it = group_mean_.find(*lang);
    return it == group_mean_.end() ? fallback_ : it->second;
}

ModelwiseBaseline ModelwiseBaseline::fit(std::span<const ExperimentRecord> train) {
    if (train.empty()) throw std::invalid_argument("model-wise baseline: empty training set");
    ModelwiseBaseline b;
    b.fallback_ = MeanBaseline::fit(train).value();
    for (const auto& rec : train) {
        double s = require_score(rec);
        auto& ds = b.dataset_totals_[rec.dataset_key()];
        ds.first += s;
        ds.second += 1;
        auto& dm = b.dataset_model_totals_[rec.dataset_key() + "\x1f" + rec.model_id];
        dm.first += s;
        dm.second += 1;
    }
    return b;
}

double ModelwiseBaseline::predict(const ExperimentRecord& rec) const {
    auto ds = dataset_totals_.find(rec.dataset_key());
    if (ds == dataset_totals_.end()) return fallback_;
    double sum = ds->second.first;
    std::size_t count = ds->second.second;
    auto dm = dataset_model_totals_.find(rec.dataset_key() + "\x1f" + rec.model_id);
    if (dm != dataset_model_totals_.end()) {
        sum -= dm->second.first;
        count -= dm->second.second;
    }
    if (count == 0) return fallback_;
    return sum / static_cast<double>(count);
}

nlohmann::json EvalReport::to_json() const {
    nlohmann::json j;
    j["task_id"] = task_id;
    j["predictor_kind"] = to_string(kind);
    j["k"] = k;
    j["num_runs"] = num_runs;
    j["fold_rmse"] = fold_rmse;
    j["final_rmse"] = final_rmse;
    return j;
}

namespace {

std::vector<ExperimentRecord> slice(const RecordStore& store, const std::vector<std::size_t>& idx) {
    std::vector<ExperimentRecord> out;
    out.reserve(idx.size());
    for (std::size_t i : idx) out.push_back(store[i]);
    return out;
}

// RMSE of one evaluation fold: pooled for single-model tasks, mean of
// per-model RMSEs for multi-model tasks.
double fold_rmse_value(const TaskSchema& schema, const std::vector<ExperimentRecord>& test,
                       const std::vector<double>& preds) {
    std::vector<double> truths;
    truths.reserve(test.size());
    for (const auto& rec : test) truths.push_back(require_score(rec));
    if (!schema.multi_model) return rmse(preds, truths);

    std::set<std::string> models;
    for (const auto& rec : test) models.insert(rec.model_id);
    double total = 0.0;
    for (const auto& model : models) {
        std::vector<double> p, t;
        for (std::size_t i = 0; i < test.size(); ++i) {
            if (test[i].model_id == model) {
                p.push_back(preds[i]);
                t.push_back(truths[i]);
            }
        }
        total += rmse(p, t);
    }
    return total / static_cast<double>(models.size());
}

std::vector<double> predict_with_booster(const BoostedModel& model, const TaskSchema& schema,
                                         const std::vector<ExperimentRecord>& test,
                                         const std::vector<std::string>& known_models) {
    FeatureMatrix matrix = build_matrix(test, schema, known_models);
    std::vector<double> preds;
    preds.reserve(test.size());
    for (const auto& row : matrix.rows) preds.push_back(model.predict(row));
    return preds;
}

std::vector<double> evaluate_fold(const RecordStore& store, PredictorKind kind,
                                  const EvalOptions& options,
                                  const std::vector<ExperimentRecord>& train,
                                  const std::vector<ExperimentRecord>& test) {
    const TaskSchema& schema = store.schema();
    std::vector<double> preds(test.size(), 0.0);
    switch (kind) {
        case PredictorKind::mean: {
            MeanBaseline b = MeanBaseline::fit(train);
            for (std::size_t i = 0; i < test.size(); ++i) preds[i] = b.predict(test[i]);
            break;
        }
        case PredictorKind::lang_src:
        case PredictorKind::lang_tgt:
        case PredictorKind::lang_tsf: {
            Role role = kind == PredictorKind::lang_src   ? Role::source
                        : kind == PredictorKind::lang_tgt ? Role::target
                                                          : Role::transfer;
            LangwiseBaseline b = LangwiseBaseline::fit(train, role);
            for (std::size_t i = 0; i < test.size(); ++i) preds[i] = b.predict(test[i]);
            break;
        }
        case PredictorKind::model_wise: {
            ModelwiseBaseline b = ModelwiseBaseline::fit(train);
            for (std::size_t i = 0; i < test.size(); ++i) preds[i] = b.predict(test[i]);
            break;
        }
        case PredictorKind::nlperf_mm: {
            const std::vector<std::string> models = store.model_ids();
            FeatureMatrix matrix = build_matrix(train, schema, models);
            std::vector<double> targets;
            targets.reserve(train.size());
            for (const auto& rec : train) targets.push_back(require_score(rec));
            BoostedModel model = fit(matrix, targets, options.booster);
            preds = predict_with_booster(model, schema, test, models);
            break;
        }
        case PredictorKind::nlperf_sm: {
            std::set<std::string> models;
            for (const auto& rec : test) models.insert(rec.model_id);
            double train_mean = MeanBaseline::fit(train).value();
            for (const auto& model_id : models) {
                std::vector<ExperimentRecord> train_m, test_m;
                std::vector<std::size_t> test_pos;
                for (const auto& rec : train) {
                    if (rec.model_id == model_id) train_m.push_back(rec);
                }
                for (std::size_t i = 0; i < test.size(); ++i) {
                    if (test[i].model_id == model_id) {
                        test_m.push_back(test[i]);
                        test_pos.push_back(i);
                    }
                }
                if (train_m.empty()) {
                    // No training rows for this model in the fold; constant fallback.
                    for (std::size_t pos : test_pos) preds[pos] = train_mean;
                    continue;
                }
                FeatureMatrix matrix = build_matrix(train_m, schema);
                std::vector<double> targets;
                targets.reserve(train_m.size());
                for (const auto& rec : train_m) targets.push_back(require_score(rec));
                BoostedModel model = fit(matrix, targets, options.booster);
                std::vector<double> model_preds = predict_with_booster(model, schema, test_m, {});
                for (std::size_t j = 0; j < test_pos.size(); ++j) preds[test_pos[j]] = model_preds[j];
            }
            break;
        }
    }
    return preds;
}

}  // namespace

EvalReport kfold_evaluate(const RecordStore& store, PredictorKind kind, const EvalOptions& options) {
    const TaskSchema& schema = store.schema();
    if (store.empty()) throw std::invalid_argument("kfold_evaluate: empty record store");
    if (!store.all_scored()) throw std::invalid_argument("kfold_evaluate: store has unscored records");
    if (options.runs < 1) throw std::invalid_argument("kfold_evaluate: runs must be >= 1");

    const bool multi = schema.multi_model;
    if ((kind == PredictorKind::model_wise || kind == PredictorKind::nlperf_mm) && !multi) {
        throw std::invalid_argument(std::string(to_string(kind)) + " requires a multi-model task");
    }
    if (kind == PredictorKind::lang_src && !schema.has_role(Role::source)) {
        throw std::invalid_argument("lang_src requires a source role in the task schema");
    }
    if (kind == PredictorKind::lang_tgt && !schema.has_role(Role::target)) {
        throw std::invalid_argument("lang_tgt requires a target role in the task schema");
    }
    if (kind == PredictorKind::lang_tsf && !schema.has_role(Role::transfer)) {
        throw std::invalid_argument("lang_tsf requires a transfer role in the task schema");
    }

    const FoldUnit unit =
        options.fold_unit.value_or(multi ? FoldUnit::dataset : FoldUnit::record);

    EvalReport report;
    report.task_id = schema.task_id;
    report.kind = kind;
    report.k = options.k;
    report.num_runs = options.runs;
    report.fold_rmse.assign(static_cast<std::size_t>(options.runs), {});

    parallel_for(static_cast<std::size_t>(options.runs), options.jobs, [&](std::size_t run) {
        const std::uint64_t run_seed = options.seed ^ static_cast<std::uint64_t>(run);
        FoldAssignment folds = partition_kfold(store, options.k, run_seed, unit);
        std::vector<double> per_fold;
        per_fold.reserve(static_cast<std::size_t>(options.k));
        for (int fold = 0; fold < options.k; ++fold) {
            auto train = slice(store, folds.complement_indices(fold));
            auto test = slice(store, folds.fold_indices(fold));
            if (test.empty() || train.empty()) {
                throw std::runtime_error("kfold_evaluate: empty fold; reduce k");
            }
            std::vector<double> preds = evaluate_fold(store, kind, options, train, test);
            per_fold.push_back(fold_rmse_value(schema, test, preds));
        }
        report.fold_rmse[run] = std::move(per_fold);
    });

    double total = 0.0;
    for (const auto& per_fold : report.fold_rmse) {
        double run_sum = 0.0;
        for (double v : per_fold) run_sum += v;
        total += run_sum / static_cast<double>(per_fold.size());
    }
    report.final_rmse = total / static_cast<double>(report.fold_rmse.size());
    return report;
}

std::vector<std::pair<std::map<std::string, double>, double>> sweep_feature(
    const BoostedModel& model, const FeatureVector& base,
    const std::vector<std::map<std::string, double>>& overrides) {
    std::vector<std::pair<std::map<std::string, double>, double>> out;
    out.reserve(overrides.size());
    for (const auto& row : overrides) {
        FeatureVector fv = base;
        for (const auto& [name, value] : row) {
            auto it = std::find(model.feature_names.begin(), model.feature_names.end(), name);
            if (it == model.feature_names.end()) {
                throw std::invalid_argument("sweep_feature: unknown feature '" + name + "'");
            }
            auto idx = static_cast<std::size_t>(it - model.feature_names.begin());
            fv.values[idx] = value;
            fv.missing[idx] = false;
        }
        out.emplace_back(row, model.predict(fv));
    }
    return out;
}

}  // namespace nlperf
