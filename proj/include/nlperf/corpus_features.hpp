#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <string>
#include <unordered_set>

namespace nlperf {

// Counts over a pre-tokenized corpus (one sentence per line, space-separated
// tokens). Subword fields are filled only when a subword-level file of the
// same corpus is supplied.
struct CorpusStats {
    std::size_t dataset_size = 0;  // sentences
    std::unordered_set<std::string> word_vocab;
    std::unordered_set<std::string> subword_vocab;
    std::size_t word_tokens = 0;
    std::size_t subword_tokens = 0;
    double avg_sentence_length = 0.0;  // word tokens per sentence
    double ttr = 0.0;                  // |word types| / word tokens
};

CorpusStats compute_corpus_stats(std::istream& corpus);
CorpusStats compute_corpus_stats(std::istream& corpus, std::istream& subword_corpus);

// |T1 ∩ T2| / (|T1| + |T2|), in [0, 0.5]. Both sets must be non-empty.
double vocab_overlap(const std::unordered_set<std::string>& t1,
                     const std::unordered_set<std::string>& t2);

// (1 - ttr1/ttr2)^2. Directional; ttr2 must be positive.
double ttr_distance(double ttr1, double ttr2);

// Morphological tag statistics over a tagged corpus: one token per line as
// token<TAB>tag1;tag2;..., blank line between sentences. A fused type is the
// full bundle after a canonical sort of its components.
struct TagStats {
    std::size_t single_tag_types = 0;
    std::size_t fused_tag_types = 0;
    double avg_tags_per_word = 0.0;
};

TagStats compute_tag_stats(std::istream& tagged);

// Word-order proportions over a CoNLL-U treebank: for each relation class the
// share of arcs whose dependent precedes (resp. follows) its head. Classes
// with no arcs yield missing values.
struct ArcProportions {
    std::optional<double> subject_before, subject_after;
    std::optional<double> object_before, object_after;
    std::optional<double> oblique_before, oblique_after;
    std::optional<double> adjective_before, adjective_after;
    std::optional<double> numeral_before, numeral_after;
};

ArcProportions compute_arc_proportions(std::istream& conllu);

}  // namespace nlperf
