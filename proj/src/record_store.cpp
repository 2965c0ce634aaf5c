#include "nlperf/record_store.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <stdexcept>
#include <unordered_set>

#include "nlperf/csv.hpp"
#include "nlperf/util.hpp"
#include <json.hpp>

namespace nlperf {

const char* to_string(Role role) {
    switch (role) {
        case Role::source: return "source";
        case Role::target: return "target";
        case Role::transfer: return "transfer";
    }
    return "?";
}

Role role_from_string(const std::string& s) {
    if (s == "source") return Role::source;
    if (s == "target") return Role::target;
    if (s == "transfer") return Role::transfer;
    throw std::invalid_argument("unknown language role: " + s);
}

bool TaskSchema::has_role(Role role) const {
    return std::find(language_roles.begin(), language_roles.end(), role) != language_roles.end();
}

void TaskSchema::validate() const {
    if (task_id.empty()) throw std::invalid_argument("schema: task_id must be non-empty");
    if (metric_name != "BLEU" && metric_name != "accuracy" && metric_name != "F1") {
        throw std::invalid_argument("schema: unknown metric '" + metric_name + "'");
    }
    if (feature_names.empty()) throw std::invalid_argument("schema: feature_names must be non-empty");
    std::set<std::string> seen(feature_names.begin(), feature_names.end());
    if (seen.size() != feature_names.size()) {
        throw std::invalid_argument("schema: duplicate feature names");
    }
    std::set<Role> roles(language_roles.begin(), language_roles.end());
    if (roles.size() != language_roles.size()) {
        throw std::invalid_argument("schema: duplicate language roles");
    }
}

TaskSchema TaskSchema::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open schema " + path);
    nlohmann::json j = nlohmann::json::parse(in);
    TaskSchema schema;
    schema.task_id = j.at("task_id").get<std::string>();
    schema.metric_name = j.at("metric_name").get<std::string>();
    for (const auto& r : j.at("language_roles")) {
        schema.language_roles.push_back(role_from_string(r.get<std::string>()));
    }
    schema.feature_names = j.at("feature_names").get<std::vector<std::string>>();
    schema.multi_model = j.at("multi_model").get<bool>();
    schema.validate();
    return schema;
}

void TaskSchema::save(const std::string& path) const {
    nlohmann::json j;
    j["task_id"] = task_id;
    j["metric_name"] = metric_name;
    std::vector<std::string> roles;
    for (Role r : language_roles) roles.emplace_back(to_string(r));
    j["language_roles"] = roles;
    j["feature_names"] = feature_names;
    j["multi_model"] = multi_model;
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open " + path + " for writing");
    out << j.dump(2) << '\n';
}

const std::optional<std::string>& ExperimentRecord::lang(Role role) const {
    switch (role) {
        case Role::source: return source_lang;
        case Role::target: return target_lang;
        case Role::transfer: return transfer_lang;
    }
    return source_lang;
}

std::string ExperimentRecord::dataset_key() const {
    std::string key;
    if (source_lang) key += "src=" + *source_lang + "|";
    if (target_lang) key += "tgt=" + *target_lang + "|";
    if (transfer_lang) key += "tsf=" + *transfer_lang + "|";
    key += "ds=" + dataset_name.value_or("");
    return key;
}

std::string ExperimentRecord::record_key() const {
    return task_id + "|" + model_id + "|" + dataset_key();
}

std::vector<std::size_t> FoldAssignment::fold_sizes() const {
    std::vector<std::size_t> sizes(static_cast<std::size_t>(k), 0);
    for (int f : assignment) sizes[static_cast<std::size_t>(f)]++;
    return sizes;
}

std::vector<std::size_t> FoldAssignment::fold_indices(int fold) const {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < assignment.size(); ++i) {
        if (assignment[i] == fold) out.push_back(i);
    }
    return out;
}

std::vector<std::size_t> FoldAssignment::complement_indices(int fold) const {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < assignment.size(); ++i) {
        if (assignment[i] != fold) out.push_back(i);
    }
    return out;
}

namespace {

struct FixedColumns {
    std::size_t task, model, src, tgt, tsf, dataset, score;
};

constexpr const char* kFixedNames[] = {"task", "model", "src_lang", "tgt_lang", "tsf_lang", "dataset"};

void validate_record(const ExperimentRecord& rec, const TaskSchema& schema) {
    if (rec.task_id != schema.task_id) {
        throw std::runtime_error("record task '" + rec.task_id + "' does not match schema task '" +
                                 schema.task_id + "'");
    }
    for (Role role : {Role::source, Role::target, Role::transfer}) {
        bool required = schema.has_role(role);
        bool present = rec.lang(role).has_value();
        if (required && !present) {
            throw std::runtime_error(std::string("missing required role '") + to_string(role) +
                                     "' for record " + rec.dataset_key());
        }
        if (!required && present) {
            throw std::runtime_error(std::string("unknown language role column '") + to_string(role) +
                                     "' for schema " + schema.task_id);
        }
    }
    if (rec.score) {
        double s = *rec.score;
        if (!std::isfinite(s)) throw std::runtime_error("non-finite score for " + rec.record_key());
        if (schema.metric_name == "BLEU") {
            if (s < 0) throw std::runtime_error("negative BLEU score for " + rec.record_key());
        } else if (s < 0 || s > 100) {
            throw std::runtime_error(schema.metric_name + " score outside [0,100] for " + rec.record_key());
        }
    }
    for (const auto& [name, value] : rec.raw_features) {
        if (std::find(schema.feature_names.begin(), schema.feature_names.end(), name) ==
            schema.feature_names.end()) {
            throw std::runtime_error("feature column '" + name + "' not declared by schema " +
                                     schema.task_id);
        }
        if (!std::isfinite(value)) {
            throw std::runtime_error("non-finite feature '" + name + "' for " + rec.record_key());
        }
    }
}

}  // namespace

RecordStore::RecordStore(std::vector<ExperimentRecord> records, TaskSchema schema)
    : records_(std::move(records)), schema_(std::move(schema)) {
    schema_.validate();
    std::unordered_set<std::string> keys;
    for (const auto& rec : records_) {
        validate_record(rec, schema_);
        if (!keys.insert(rec.record_key()).second) {
            throw std::runtime_error("duplicate record key: " + rec.record_key());
        }
    }
}

RecordStore RecordStore::load(const std::string& path, const TaskSchema& schema) {
    CsvTable table = read_csv_file(path);

    FixedColumns cols{};
    std::size_t* slots[] = {&cols.task, &cols.model, &cols.src, &cols.tgt, &cols.tsf, &cols.dataset};
    for (std::size_t i = 0; i < 6; ++i) {
        auto idx = table.column(kFixedNames[i]);
        if (!idx) throw std::runtime_error(path + ": missing required column '" + kFixedNames[i] + "'");
        *slots[i] = *idx;
    }
    auto score_idx = table.column("score");
    if (!score_idx) throw std::runtime_error(path + ": missing required column 'score'");
    cols.score = *score_idx;

    std::vector<std::pair<std::size_t, std::string>> feature_cols;
    std::set<std::size_t> fixed = {cols.task, cols.model, cols.src, cols.tgt, cols.tsf, cols.dataset, cols.score};
    for (std::size_t i = 0; i < table.header.size(); ++i) {
        if (fixed.count(i)) continue;
        feature_cols.emplace_back(i, table.header[i]);
    }

    std::vector<ExperimentRecord> records;
    records.reserve(table.rows.size());
    for (const auto& row : table.rows) {
        ExperimentRecord rec;
        rec.task_id = row[cols.task];
        rec.model_id = row[cols.model];
        auto opt = [](const std::string& s) {
            return s.empty() ? std::optional<std::string>{} : std::optional<std::string>{s};
        };
        rec.source_lang = opt(row[cols.src]);
        rec.target_lang = opt(row[cols.tgt]);
        rec.transfer_lang = opt(row[cols.tsf]);
        rec.dataset_name = opt(row[cols.dataset]);
        for (const auto& [idx, name] : feature_cols) {
            if (row[idx].empty()) continue;
            rec.raw_features[name] = parse_double(row[idx], path + ": feature " + name);
        }
        if (!row[cols.score].empty()) {
            rec.score = parse_double(row[cols.score], path + ": score");
        }
        records.push_back(std::move(rec));
    }
    return RecordStore(std::move(records), schema);
}

std::string RecordStore::to_csv() const {
    CsvTable table;
    for (const char* name : kFixedNames) table.header.emplace_back(name);
    for (const auto& name : schema_.feature_names) table.header.push_back(name);
    table.header.emplace_back("score");
    for (const auto& rec : records_) {
        std::vector<std::string> row;
        row.push_back(rec.task_id);
        row.push_back(rec.model_id);
        row.push_back(rec.source_lang.value_or(""));
        row.push_back(rec.target_lang.value_or(""));
        row.push_back(rec.transfer_lang.value_or(""));
        row.push_back(rec.dataset_name.value_or(""));
        for (const auto& name : schema_.feature_names) {
            auto it = rec.raw_features.find(name);
            row.push_back(it == rec.raw_features.end() ? "" : format_double(it->second));
        }
        row.push_back(rec.score ? format_double(*rec.score) : "");
        table.rows.push_back(std::move(row));
    }
    return to_csv_string(table);
}

void RecordStore::save(const std::string& path) const {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open " + path + " for writing");
    out << to_csv();
}

RecordStore RecordStore::select(const std::function<bool(const ExperimentRecord&)>& pred) const {
    std::vector<ExperimentRecord> kept;
    for (const auto& rec : records_) {
        if (pred(rec)) kept.push_back(rec);
    }
    return RecordStore(std::move(kept), schema_);
}

std::vector<std::string> RecordStore::model_ids() const {
    std::set<std::string> ids;
    for (const auto& rec : records_) ids.insert(rec.model_id);
    return {ids.begin(), ids.end()};
}

std::vector<std::string> RecordStore::dataset_keys() const {
    std::set<std::string> keys;
    for (const auto& rec : records_) keys.insert(rec.dataset_key());
    return {keys.begin(), keys.end()};
}

bool RecordStore::all_scored() const {
    return std::all_of(records_.begin(), records_.end(),
                       [](const ExperimentRecord& r) { return r.score.has_value(); });
}

FoldAssignment partition_kfold(const RecordStore& store, int k, std::uint64_t seed) {
    return partition_kfold(store, k, seed,
                           store.schema().multi_model ? FoldUnit::dataset : FoldUnit::record);
}

FoldAssignment partition_kfold(const RecordStore& store, int k, std::uint64_t seed, FoldUnit unit) {
    std::vector<std::string> units;
    if (unit == FoldUnit::dataset) {
        units = store.dataset_keys();
    } else {
        units.reserve(store.size());
        for (const auto& rec : store.records()) units.push_back(rec.record_key());
        std::sort(units.begin(), units.end());
    }
    if (k < 2 || static_cast<std::size_t>(k) > units.size()) {
        throw std::invalid_argument("partition_kfold: k must be in [2, number of partition units]");
    }

    Rng rng(splitmix64(seed));
    rng.shuffle(units);
    std::map<std::string, int> unit_fold;
    for (std::size_t i = 0; i < units.size(); ++i) {
        unit_fold[units[i]] = static_cast<int>(i % static_cast<std::size_t>(k));
    }

    FoldAssignment folds;
    folds.k = k;
    folds.seed = seed;
    folds.assignment.reserve(store.size());
    for (const auto& rec : store.records()) {
        const std::string key = unit == FoldUnit::dataset ? rec.dataset_key() : rec.record_key();
        folds.assignment.push_back(unit_fold.at(key));
    }
    return folds;
}

}  // namespace nlperf
