#include "nlperf/featurize.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace nlperf {

FeatureVector assemble(const ExperimentRecord& record, const TaskSchema& schema) {
    if (record.task_id != schema.task_id) {
        throw std::invalid_argument("assemble: record task '" + record.task_id +
                                    "' does not match schema '" + schema.task_id + "'");
    }
    FeatureVector fv;
    fv.schema_id = schema.task_id;
    fv.values.reserve(schema.feature_names.size());
    fv.missing.reserve(schema.feature_names.size());
    for (const auto& name : schema.feature_names) {
        auto it = record.raw_features.find(name);
        if (it == record.raw_features.end()) {
            fv.values.push_back(std::numeric_limits<double>::quiet_NaN());
            fv.missing.push_back(true);
        } else {
            fv.values.push_back(it->second);
            fv.missing.push_back(false);
        }
    }
    return fv;
}

std::vector<double> encode_model(const std::string& model_id,
                                 const std::vector<std::string>& known_models) {
    std::vector<double> block(known_models.size(), 0.0);
    for (std::size_t i = 0; i < known_models.size(); ++i) {
        if (known_models[i] == model_id) {
            block[i] = 1.0;
            break;
        }
    }
    return block;
}

FeatureMatrix build_matrix(const std::vector<ExperimentRecord>& records, const TaskSchema& schema,
                           const std::vector<std::string>& known_models) {
    FeatureMatrix matrix;
    for (const auto& m : known_models) matrix.feature_names.push_back(model_feature_name(m));
    matrix.feature_names.insert(matrix.feature_names.end(), schema.feature_names.begin(),
                                schema.feature_names.end());
    matrix.rows.reserve(records.size());
    for (const auto& rec : records) {
        FeatureVector fv = assemble(rec, schema);
        if (!known_models.empty()) {
            std::vector<double> block = encode_model(rec.model_id, known_models);
            fv.values.insert(fv.values.begin(), block.begin(), block.end());
            fv.missing.insert(fv.missing.begin(), block.size(), false);
        }
        matrix.rows.push_back(std::move(fv));
    }
    return matrix;
}

namespace {

void add_side_stats(std::map<std::string, double>& out, const std::string& prefix,
                    const CorpusStats& stats) {
    out[prefix + "_word_vocab"] = static_cast<double>(stats.word_vocab.size());
    if (!stats.subword_vocab.empty()) {
        out[prefix + "_subword_vocab"] = static_cast<double>(stats.subword_vocab.size());
    }
    out[prefix + "_avg_sent_len"] = stats.avg_sentence_length;
    out[prefix + "_ttr"] = stats.ttr;
}

void add_pair_stats(std::map<std::string, double>& out, const std::string& prefix,
                    const CorpusStats& a, const CorpusStats& b) {
    out[prefix + "word_overlap"] = vocab_overlap(a.word_vocab, b.word_vocab);
    if (!a.subword_vocab.empty() && !b.subword_vocab.empty()) {
        out[prefix + "subword_overlap"] = vocab_overlap(a.subword_vocab, b.subword_vocab);
    }
    if (b.ttr > 0.0) out[prefix + "ttr_distance"] = ttr_distance(a.ttr, b.ttr);
}

void add_distances(std::map<std::string, double>& out, const std::string& prefix,
                   const DistanceTable& table, const std::string& l1, const std::string& l2) {
    for (DistanceKind kind : kAllDistanceKinds) {
        if (auto d = table.distance(l1, l2, kind)) {
            out[prefix + to_string(kind)] = *d;
        }
    }
}

void add_syntax(std::map<std::string, double>& out, const std::string& prefix,
                const SyntaxTable& table, const std::string& lang) {
    auto vec = table.syntax_vector(lang);
    for (std::size_t i = 0; i < vec.size(); ++i) {
        if (vec[i]) out[prefix + "_syntax_" + std::to_string(i)] = *vec[i];
    }
}

void add_arc(std::map<std::string, double>& out, const std::string& name,
             const std::optional<double>& before, const std::optional<double>& after) {
    if (before) out["arc_" + name + "_before"] = *before;
    if (after) out["arc_" + name + "_after"] = *after;
}

}  // namespace

std::map<std::string, double> compute_setting_features(const SettingInputs& in) {
    std::map<std::string, double> out;

    const bool transfer_mode = in.transfer_stats.has_value();

    if (transfer_mode) {
        // Source and transfer corpora are distinct datasets, so each side
        // carries its own size.
        if (in.source_stats) {
            out["src_dataset_size"] = static_cast<double>(in.source_stats->dataset_size);
        }
        out["tsf_dataset_size"] = static_cast<double>(in.transfer_stats->dataset_size);
    } else if (in.source_stats) {
        out["dataset_size"] = static_cast<double>(in.source_stats->dataset_size);
    } else if (in.target_stats) {
        out["dataset_size"] = static_cast<double>(in.target_stats->dataset_size);
    }

    if (in.source_stats) add_side_stats(out, "src", *in.source_stats);
    if (in.target_stats) add_side_stats(out, "tgt", *in.target_stats);
    if (in.transfer_stats) add_side_stats(out, "tsf", *in.transfer_stats);

    if (in.source_stats && in.target_stats && !transfer_mode) {
        add_pair_stats(out, "", *in.source_stats, *in.target_stats);
    }
    if (in.source_stats && in.transfer_stats) {
        add_pair_stats(out, "tsf_", *in.source_stats, *in.transfer_stats);
    }

    if (in.tag_stats) {
        out["single_tag_types"] = static_cast<double>(in.tag_stats->single_tag_types);
        out["fused_tag_types"] = static_cast<double>(in.tag_stats->fused_tag_types);
        out["avg_tags_per_word"] = in.tag_stats->avg_tags_per_word;
    }

    if (in.arcs) {
        add_arc(out, "subj", in.arcs->subject_before, in.arcs->subject_after);
        add_arc(out, "obj", in.arcs->object_before, in.arcs->object_after);
        add_arc(out, "obl", in.arcs->oblique_before, in.arcs->oblique_after);
        add_arc(out, "adj", in.arcs->adjective_before, in.arcs->adjective_after);
        add_arc(out, "num", in.arcs->numeral_before, in.arcs->numeral_after);
    }

    if (in.distances) {
        if (in.source_lang && in.transfer_lang) {
            add_distances(out, "dist_srctsf_", *in.distances, *in.source_lang, *in.transfer_lang);
        }
        if (in.source_lang && in.target_lang) {
            const char* prefix = in.transfer_lang ? "dist_srctgt_" : "dist_";
            add_distances(out, prefix, *in.distances, *in.source_lang, *in.target_lang);
        }
    }

    if (in.syntax) {
        if (in.source_lang) add_syntax(out, "src", *in.syntax, *in.source_lang);
        if (in.target_lang) add_syntax(out, "tgt", *in.syntax, *in.target_lang);
    }

    return out;
}

}  // namespace nlperf
