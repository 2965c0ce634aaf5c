#include "nlperf/lang_features.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "nlperf/csv.hpp"

namespace nlperf {

const char* to_string(DistanceKind kind) {
    switch (kind) {
        case DistanceKind::geographic: return "geographic";
        case DistanceKind::genetic: return "genetic";
        case DistanceKind::inventory: return "inventory";
        case DistanceKind::syntactic: return "syntactic";
        case DistanceKind::phonological: return "phonological";
        case DistanceKind::featural: return "featural";
    }
    return "?";
}

DistanceTable DistanceTable::from_csv_text(const std::string& text) {
    std::istringstream in(text);
    CsvTable table = read_csv(in, "<distance table>");

    const std::vector<std::string> expected = {"lang_a",    "lang_b",    "geographic",   "genetic",
                                               "inventory", "syntactic", "phonological", "featural"};
    if (table.header != expected) {
        throw std::runtime_error("distance table header must be " +
                                 std::string("lang_a,lang_b,geographic,genetic,inventory,syntactic,"
                                             "phonological,featural"));
    }

    DistanceTable out;
    for (const auto& row : table.rows) {
        std::pair<std::string, std::string> key = std::minmax(row[0], row[1]);
        std::array<double, 6> values{};
        for (std::size_t i = 0; i < 6; ++i) {
            double v = parse_double(row[i + 2], "distance " + row[0] + "," + row[1]);
            if (!(v >= 0.0 && v <= 1.0)) {
                throw std::runtime_error("distance value out of [0,1] for pair " + row[0] + "," +
                                         row[1] + ": " + row[i + 2]);
            }
            values[i] = v;
        }
        if (row[0] == row[1]) {
            for (double v : values) {
                if (v != 0.0) {
                    throw std::runtime_error("self-distance must be 0 for language " + row[0]);
                }
            }
        }
        auto [it, inserted] = out.entries_.emplace(key, values);
        if (!inserted && it->second != values) {
            throw std::runtime_error("asymmetric duplicate pair " + row[0] + "," + row[1]);
        }
    }
    return out;
}

DistanceTable DistanceTable::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return from_csv_text(buf.str());
}

std::optional<double> DistanceTable::distance(const std::string& l1, const std::string& l2,
                                              DistanceKind kind) const {
    if (l1 == l2) return 0.0;
    auto it = entries_.find(std::minmax(l1, l2));
    if (it == entries_.end()) return std::nullopt;
    return it->second[static_cast<std::size_t>(kind)];
}

bool DistanceTable::has_pair(const std::string& l1, const std::string& l2) const {
    return entries_.count(std::minmax(l1, l2)) > 0;
}

SyntaxTable SyntaxTable::from_csv_text(const std::string& text) {
    std::istringstream in(text);
    CsvTable table = read_csv(in, "<syntax table>");
    if (table.header.empty() || table.header[0] != "lang") {
        throw std::runtime_error("syntax table header must start with 'lang'");
    }
    SyntaxTable out;
    out.width_ = table.header.size() - 1;
    if (out.width_ == 0) throw std::runtime_error("syntax table has no feature columns");
    for (const auto& row : table.rows) {
        std::vector<std::optional<double>> vec;
        vec.reserve(out.width_);
        for (std::size_t i = 1; i < row.size(); ++i) {
            if (row[i].empty()) {
                vec.emplace_back(std::nullopt);
            } else {
                vec.emplace_back(parse_double(row[i], "syntax feature for " + row[0]));
            }
        }
        if (!out.vectors_.emplace(row[0], std::move(vec)).second) {
            throw std::runtime_error("duplicate syntax row for language " + row[0]);
        }
    }
    return out;
}

SyntaxTable SyntaxTable::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return from_csv_text(buf.str());
}

std::vector<std::optional<double>> SyntaxTable::syntax_vector(const std::string& lang) const {
    auto it = vectors_.find(lang);
    if (it != vectors_.end()) return it->second;
    return std::vector<std::optional<double>>(width_, std::nullopt);
}

}  // namespace nlperf
