#pragma once

#include <array>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace nlperf {

enum class DistanceKind { geographic, genetic, inventory, syntactic, phonological, featural };

constexpr std::array<DistanceKind, 6> kAllDistanceKinds = {
    DistanceKind::geographic, DistanceKind::genetic,      DistanceKind::inventory,
    DistanceKind::syntactic,  DistanceKind::phonological, DistanceKind::featural};

const char* to_string(DistanceKind kind);

// Pairwise typological language distances, ingested from a CSV export of a
// URIEL-style database. Symmetric with zero self-distance; all values in [0,1].
class DistanceTable {
public:
    static DistanceTable load(const std::string& path);
    static DistanceTable from_csv_text(const std::string& text);

    // Stored value for the pair, either order. Identical languages are at
    // distance 0. Unknown pairs yield missing, not an error: the predictor
    // downstream handles missing values natively.
    std::optional<double> distance(const std::string& l1, const std::string& l2,
                                   DistanceKind kind) const;

    std::size_t pair_count() const { return entries_.size(); }
    bool has_pair(const std::string& l1, const std::string& l2) const;

private:
    // Keyed by (min(l1,l2), max(l1,l2)).
    std::map<std::pair<std::string, std::string>, std::array<double, 6>> entries_;
};

// Fixed-length binary typological feature vectors per language.
class SyntaxTable {
public:
    static SyntaxTable load(const std::string& path);
    static SyntaxTable from_csv_text(const std::string& text);

    std::size_t width() const { return width_; }
    bool has(const std::string& lang) const { return vectors_.count(lang) > 0; }

    // Unknown language yields an all-missing vector of the table's width.
    std::vector<std::optional<double>> syntax_vector(const std::string& lang) const;

private:
    std::size_t width_ = 0;
    std::map<std::string, std::vector<std::optional<double>>> vectors_;
};

}  // namespace nlperf
