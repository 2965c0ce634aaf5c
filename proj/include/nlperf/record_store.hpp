#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace nlperf {

enum class Role { source, target, transfer };

const char* to_string(Role role);
Role role_from_string(const std::string& s);

// Per-task declaration of language roles, metric, and the ordered feature
// columns every record of the task aligns to.
struct TaskSchema {
    std::string task_id;
    std::string metric_name;  // BLEU | accuracy | F1
    std::vector<Role> language_roles;
    std::vector<std::string> feature_names;
    bool multi_model = false;

    bool has_role(Role role) const;
    void validate() const;

    static TaskSchema load(const std::string& path);
    void save(const std::string& path) const;
};

// One completed experiment: languages, dataset, model, feature values, score.
// A missing score marks a row to be filled in by the predictor.
struct ExperimentRecord {
    std::string task_id;
    std::string model_id;
    std::optional<std::string> source_lang;
    std::optional<std::string> target_lang;
    std::optional<std::string> transfer_lang;
    std::optional<std::string> dataset_name;
    std::map<std::string, double> raw_features;  // absent key = missing value
    std::optional<double> score;

    const std::optional<std::string>& lang(Role role) const;

    // Dataset identity: present language roles plus the optional dataset name.
    std::string dataset_key() const;
    // Uniqueness key within a store: task, model, dataset identity.
    std::string record_key() const;
};

struct FoldAssignment {
    int k = 0;
    std::uint64_t seed = 0;
    std::vector<int> assignment;  // record index -> fold index in [0, k)

    std::vector<std::size_t> fold_sizes() const;
    std::vector<std::size_t> fold_indices(int fold) const;
    std::vector<std::size_t> complement_indices(int fold) const;
};

enum class FoldUnit { record, dataset };

class RecordStore {
public:
    RecordStore(std::vector<ExperimentRecord> records, TaskSchema schema);

    static RecordStore load(const std::string& path, const TaskSchema& schema);
    void save(const std::string& path) const;
    std::string to_csv() const;

    const TaskSchema& schema() const { return schema_; }
    const std::vector<ExperimentRecord>& records() const { return records_; }
    const ExperimentRecord& operator[](std::size_t i) const { return records_[i]; }
    std::size_t size() const { return records_.size(); }
    bool empty() const { return records_.empty(); }

    // Order-preserving filter.
    RecordStore select(const std::function<bool(const ExperimentRecord&)>& pred) const;

    // Sorted distinct model ids / dataset keys.
    std::vector<std::string> model_ids() const;
    std::vector<std::string> dataset_keys() const;

    bool all_scored() const;

private:
    std::vector<ExperimentRecord> records_;
    TaskSchema schema_;
};

// Seeded Fisher-Yates permutation of the partition units (after a canonical
// sort by key) followed by round-robin fold assignment. For multi-model tasks
// the default unit is the dataset, so all models' records for one dataset land
// in the same fold.
FoldAssignment partition_kfold(const RecordStore& store, int k, std::uint64_t seed);
FoldAssignment partition_kfold(const RecordStore& store, int k, std::uint64_t seed, FoldUnit unit);

}  // namespace nlperf
