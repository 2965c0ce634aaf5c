#include "nlperf/corpus_features.hpp"

#include <algorithm>
#include <istream>
#include <sstream>
#include <stdexcept>
#include <vector>

namespace nlperf {

namespace {

bool is_space(char c) { return c == ' ' || c == '\t' || c == '\v' || c == '\f' || c == '\r' || c == '\n'; }

std::vector<std::string> tokenize(const std::string& line) {
    std::vector<std::string> tokens;
    std::string cur;
    for (char c : line) {
        if (is_space(c)) {
            if (!cur.empty()) {
                tokens.push_back(cur);
                cur.clear();
            }
        } else {
            cur.push_back(c);
        }
    }
    if (!cur.empty()) tokens.push_back(cur);
    return tokens;
}

void scan_text(std::istream& in, std::size_t& sentences, std::size_t& tokens,
               std::unordered_set<std::string>& vocab) {
    std::string line;
    while (std::getline(in, line)) {
        auto toks = tokenize(line);
        if (toks.empty()) continue;
        ++sentences;
        tokens += toks.size();
        for (auto& t : toks) vocab.insert(std::move(t));
    }
}

}  // namespace

CorpusStats compute_corpus_stats(std::istream& corpus) {
    CorpusStats stats;
    scan_text(corpus, stats.dataset_size, stats.word_tokens, stats.word_vocab);
    if (stats.dataset_size == 0) throw std::runtime_error("empty corpus");
    stats.avg_sentence_length =
        static_cast<double>(stats.word_tokens) / static_cast<double>(stats.dataset_size);
    stats.ttr = static_cast<double>(stats.word_vocab.size()) / static_cast<double>(stats.word_tokens);
    return stats;
}

CorpusStats compute_corpus_stats(std::istream& corpus, std::istream& subword_corpus) {
    CorpusStats stats = compute_corpus_stats(corpus);
    std::size_t subword_sentences = 0;
    scan_text(subword_corpus, subword_sentences, stats.subword_tokens, stats.subword_vocab);
    if (subword_sentences == 0) throw std::runtime_error("empty subword corpus");
    return stats;
}

double vocab_overlap(const std::unordered_set<std::string>& t1,
                     const std::unordered_set<std::string>& t2) {
    if (t1.empty() || t2.empty()) throw std::invalid_argument("vocab_overlap: empty vocabulary");
    const auto& small = t1.size() <= t2.size() ? t1 : t2;
    const auto& large = t1.size() <= t2.size() ? t2 : t1;
    std::size_t common = 0;
    for (const auto& t : small) {
        if (large.count(t)) ++common;
    }
    return static_cast<double>(common) / static_cast<double>(t1.size() + t2.size());
}

double ttr_distance(double ttr1, double ttr2) {
    if (!(ttr2 > 0.0)) throw std::invalid_argument("ttr_distance: second TTR must be positive");
    double r = 1.0 - ttr1 / ttr2;
    return r * r;
}

TagStats compute_tag_stats(std::istream& tagged) {
    std::unordered_set<std::string> singles;
    std::unordered_set<std::string> fused;
    std::size_t tokens = 0;
    std::size_t components = 0;

    std::string line;
    std::size_t lineno = 0;
    while (std::getline(tagged, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;  // sentence boundary
        auto tab = line.find('\t');
        if (tab == std::string::npos || tab + 1 >= line.size()) {
            throw std::runtime_error("untagged token at line " + std::to_string(lineno));
        }
        std::string bundle = line.substr(tab + 1);
        std::vector<std::string> parts;
        std::string cur;
        for (char c : bundle) {
            if (c == ';') {
                if (!cur.empty()) parts.push_back(cur);
                cur.clear();
            } else {
                cur.push_back(c);
            }
        }
        if (!cur.empty()) parts.push_back(cur);
        if (parts.empty()) {
            throw std::runtime_error("untagged token at line " + std::to_string(lineno));
        }
        ++tokens;
        components += parts.size();
        for (const auto& p : parts) singles.insert(p);
        std::sort(parts.begin(), parts.end());
        std::string canonical;
        for (std::size_t i = 0; i < parts.size(); ++i) {
            if (i) canonical += ';';
            canonical += parts[i];
        }
        fused.insert(canonical);
    }
    if (tokens == 0) throw std::runtime_error("empty tagged corpus");

    TagStats stats;
    stats.single_tag_types = singles.size();
    stats.fused_tag_types = fused.size();
    stats.avg_tags_per_word = static_cast<double>(components) / static_cast<double>(tokens);
    return stats;
}

namespace {

struct ArcCounter {
    std::size_t before = 0;
    std::size_t after = 0;

    void count(int dep, int head) {
        if (dep < head)
            ++before;
        else
            ++after;
    }

    void fill(std::optional<double>& before_out, std::optional<double>& after_out) const {
        std::size_t total = before + after;
        if (total == 0) return;
        before_out = static_cast<double>(before) / static_cast<double>(total);
        after_out = static_cast<double>(after) / static_cast<double>(total);
    }
};

std::string deprel_class(const std::string& deprel) {
    auto colon = deprel.find(':');
    return colon == std::string::npos ? deprel : deprel.substr(0, colon);
}

}  // namespace

ArcProportions compute_arc_proportions(std::istream& conllu) {
    struct Token {
        int id;
        std::string upos;
        int head;
        std::string rel;
    };

    ArcCounter subj, obj, obl, adj, num;

    std::vector<Token> sentence;
    auto flush = [&]() {
        for (const auto& tok : sentence) {
            if (tok.head < 0 || static_cast<std::size_t>(tok.head) > sentence.size()) {
                throw std::runtime_error("head index out of range: " + std::to_string(tok.head));
            }
            if (tok.head == 0) continue;  // root arc has no direction
            if (tok.rel == "nsubj") {
                subj.count(tok.id, tok.head);
            } else if (tok.rel == "obj") {
                obj.count(tok.id, tok.head);
            } else if (tok.rel == "obl") {
                obl.count(tok.id, tok.head);
            } else if (tok.rel == "amod") {
                // Adjective order is a noun-phrase property; skip non-noun heads.
                const Token& head = sentence[static_cast<std::size_t>(tok.head - 1)];
                if (head.upos == "NOUN" || head.upos == "PROPN") adj.count(tok.id, tok.head);
            } else if (tok.rel == "nummod") {
                num.count(tok.id, tok.head);
            }
        }
        sentence.clear();
    };

    std::string line;
    std::size_t lineno = 0;
    while (std::getline(conllu, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) {
            flush();
            continue;
        }
        if (line[0] == '#') continue;
        std::vector<std::string> cols;
        std::string cur;
        for (char c : line) {
            if (c == '\t') {
                cols.push_back(cur);
                cur.clear();
            } else {
                cur.push_back(c);
            }
        }
        cols.push_back(cur);
        if (cols.size() < 8) {
            throw std::runtime_error("malformed CoNLL-U row at line " + std::to_string(lineno));
        }
        const std::string& id = cols[0];
        // Multiword ranges (1-2) and empty nodes (1.1) carry no basic arc.
        if (id.find('-') != std::string::npos || id.find('.') != std::string::npos) continue;

        Token tok;
        try {
            tok.id = std::stoi(id);
            std::size_t consumed = 0;
            tok.head = std::stoi(cols[6], &consumed);
            if (consumed != cols[6].size()) throw std::invalid_argument("trailing");
        } catch (const std::exception&) {
            throw std::runtime_error("non-integer ID/HEAD at line " + std::to_string(lineno));
        }
        tok.upos = cols[3];
        tok.rel = deprel_class(cols[7]);
        sentence.push_back(std::move(tok));
    }
    flush();

    ArcProportions props;
    subj.fill(props.subject_before, props.subject_after);
    obj.fill(props.object_before, props.object_after);
    obl.fill(props.oblique_before, props.oblique_after);
    adj.fill(props.adjective_before, props.adjective_after);
    num.fill(props.numeral_before, props.numeral_after);
    return props;
}

}  // namespace nlperf
