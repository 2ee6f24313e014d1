#pragma once

#include <map>
#include <set>
#include <string>
#include <unordered_map>
#include <vector>

#include "expertrank/corpus.hpp"

namespace expertrank {

struct TaggedToken {
    std::string surface;  // original spelling
    std::string lemma;    // lowercase; plural nouns reduced to singular
    std::string pos;      // NN, NNS, NNP, JJ, VB, VBD, VBG, VBN, VBZ, RB, OTHER
    // True when punctuation, a removed stopword, or a sentence boundary sits
    // between this token and the previous kept one. Phrases never span a break.
    bool follows_break = false;
};

// One noun phrase: its lemmas in order. The canonical key (lemmas joined by a
// single space) identifies the topic in the vocabulary and in every matrix.
struct TopicPhrase {
    std::vector<std::string> lemmas;
    std::string key() const;
};

std::vector<std::string> split_topic_key(const std::string& key);

// POS-sequence pattern element: a set of alternative tags plus a quantifier
// ('1' exactly one, '?' at most one, '*' any number, '+' at least one).
struct PatternElement {
    std::vector<std::string> tags;
    char quant = '1';
};

// Parses the pattern mini-language, e.g. "(JJ)* (NN|NNS|NNP)+". Elements are
// separated by spaces; alternatives by '|' inside parentheses. The final
// element must be noun-only (subset of NN/NNS/NNP) and required (quant 1 or +),
// so every extracted phrase ends in a noun.
std::vector<PatternElement> parse_pattern(const std::string& pattern);

enum class TaggerMode { builtin, pretagged };

struct ExtractionConfig {
    int max_len = 3;
    std::string pattern = "(JJ)* (NN|NNS|NNP)+";
    TaggerMode tagger = TaggerMode::builtin;
    std::string pretagged_path;                  // used when tagger == pretagged
    std::set<std::string> stopwords;             // lowercase, sorted
    std::map<std::string, std::string> lexicon;  // lowercase word -> POS tag

    // Config with the shipped stopword list and tagger lexicon filled in.
    static ExtractionConfig defaults();
};

// Shipped data, embedded so the binary needs no install path. data/stopwords.txt
// and data/lexicon.tsv mirror these byte for byte (enforced by a test).
const char* embedded_stopwords();
const char* embedded_lexicon();
std::set<std::string> parse_stopwords(const std::string& text);
std::map<std::string, std::string> parse_lexicon(const std::string& text);

std::vector<std::string> split_sentences(const std::string& text);

// Tokenize one sentence, drop stopwords, assign POS and lemma. Hyphenated
// words stay single tokens; bytes >= 0x80 are treated as word characters.
std::vector<TaggedToken> tag(const std::string& sentence, const ExtractionConfig& config);

struct ExtractedTerms {
    std::vector<std::string> tokens;   // every lemma, with multiplicity
    std::vector<TopicPhrase> topics;   // phrases matching the pattern, with multiplicity
};

// Chunk a tagged stream into topic phrases. Matching is greedy and never
// crosses a break. A chunk longer than max_len contributes only its
// tail-anchored sub-phrase of length max_len (the head is dropped).
ExtractedTerms extract_topics(const std::vector<TaggedToken>& tagged,
                              const ExtractionConfig& config);

struct ExtractionResult {
    std::vector<std::string> token_vocab;              // sorted, deduplicated
    std::vector<std::string> topic_vocab;              // sorted topic keys
    std::vector<std::vector<std::string>> doc_tokens;  // per document, multiplicity kept
    std::vector<std::vector<std::string>> doc_topics;  // per document, topic keys

    int token_index(const std::string& lemma) const;  // -1 when unknown
    int topic_index(const std::string& key) const;    // -1 when unknown
    void rebuild_lookup();  // refresh lookups after direct member edits

private:
    std::unordered_map<std::string, int> token_lookup_;
    std::unordered_map<std::string, int> topic_lookup_;
};

ExtractionResult extract_corpus(const Corpus& corpus, const ExtractionConfig& config);

// Pretagged input: `#DOC <id>` headers, one `surface<TAB>pos<TAB>lemma` line
// per token, blank line = sentence break. Returns per-document streams with
// stopwords removed and breaks marked.
std::vector<std::vector<TaggedToken>> parse_pretagged(const std::string& file_text,
                                                      const Corpus& corpus,
                                                      const ExtractionConfig& config);

} // namespace expertrank
