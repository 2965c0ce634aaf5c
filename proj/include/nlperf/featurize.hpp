#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "nlperf/corpus_features.hpp"
#include "nlperf/lang_features.hpp"
#include "nlperf/record_store.hpp"

namespace nlperf {

// Schema-aligned numeric vector with an explicit missing-value mask. Masked
// positions carry NaN and no information.
struct FeatureVector {
    std::string schema_id;
    std::vector<double> values;
    std::vector<bool> missing;

    std::size_t size() const { return values.size(); }
};

// Align a record's stored feature values to the schema's ordered feature
// names; absent features become masked positions.
FeatureVector assemble(const ExperimentRecord& record, const TaskSchema& schema);

// One-hot indicator block over the registered model ids. Unknown ids encode
// as all zeros, which is the contract for not-yet-registered models.
std::vector<double> encode_model(const std::string& model_id,
                                 const std::vector<std::string>& known_models);

inline std::string model_feature_name(const std::string& model_id) { return "model_" + model_id; }

// Feature matrix for the predictor: optional model one-hot block first, then
// the schema-aligned features.
struct FeatureMatrix {
    std::vector<std::string> feature_names;
    std::vector<FeatureVector> rows;
};

FeatureMatrix build_matrix(const std::vector<ExperimentRecord>& records, const TaskSchema& schema,
                           const std::vector<std::string>& known_models = {});

// Everything cmd_features can derive for one experimental setting. Optional
// inputs that are absent simply produce no columns.
struct SettingInputs {
    std::optional<CorpusStats> source_stats;
    std::optional<CorpusStats> target_stats;
    std::optional<CorpusStats> transfer_stats;
    std::optional<TagStats> tag_stats;
    std::optional<ArcProportions> arcs;
    const DistanceTable* distances = nullptr;
    const SyntaxTable* syntax = nullptr;
    std::optional<std::string> source_lang;
    std::optional<std::string> target_lang;
    std::optional<std::string> transfer_lang;
};

// Compute the full named feature map derivable from the inputs, using the
// toolkit's column naming convention (src_ttr, tsf_word_overlap,
// dist_genetic, ...). Callers project the map onto a schema's feature list.
std::map<std::string, double> compute_setting_features(const SettingInputs& inputs);

}  // namespace nlperf
