#include "expertrank/extractor.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <limits>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include "expertrank/errors.hpp"

namespace expertrank {

namespace {

bool is_word_byte(unsigned char c) {
    return std::isalnum(c) != 0 || c >= 0x80;
}

std::string lowercase(const std::string& s) {
    std::string out;
    out.reserve(s.size());
    for (unsigned char c : s) out += static_cast<char>(c < 0x80 ? std::tolower(c) : c);
    return out;
}

bool ends_with(const std::string& s, const char* suffix) {
    std::string_view v(suffix);
    return s.size() >= v.size() && s.compare(s.size() - v.size(), v.size(), v) == 0;
}

bool all_digits(const std::string& s) {
    return !s.empty() &&
           std::all_of(s.begin(), s.end(),
                       [](unsigned char c) { return std::isdigit(c) != 0; });
}

// Plural-noun reduction: a small irregulars table plus ordered suffix rules.
// Applied only to NNS tokens.
const std::unordered_map<std::string, std::string>& irregular_plurals() {
    static const std::unordered_map<std::string, std::string> table = {
        {"analyses", "analysis"}, {"children", "child"},   {"criteria", "criterion"},
        {"feet", "foot"},         {"hypotheses", "hypothesis"}, {"indices", "index"},
        {"matrices", "matrix"},   {"men", "man"},           {"people", "person"},
        {"phenomena", "phenomenon"}, {"teeth", "tooth"},    {"theses", "thesis"},
        {"women", "woman"},
    };
    return table;
}

std::string lemmatize_plural(const std::string& word) {
    auto it = irregular_plurals().find(word);
    if (it != irregular_plurals().end()) return it->second;
    static const std::unordered_set<std::string> invariant = {"series", "species", "news"};
    if (invariant.count(word)) return word;
    if (ends_with(word, "ics")) return word;  // analytics, physics, ...
    if (ends_with(word, "sses") || ends_with(word, "xes") || ends_with(word, "ches") ||
        ends_with(word, "shes") || ends_with(word, "zes"))
        return word.substr(0, word.size() - 2);
    if (ends_with(word, "ies") && word.size() >= 5)
        return word.substr(0, word.size() - 3) + "y";
    if (ends_with(word, "oes") && word.size() >= 5)
        return word.substr(0, word.size() - 2);
    if (ends_with(word, "ss") || ends_with(word, "us") || ends_with(word, "is"))
        return word;
    if (ends_with(word, "s") && word.size() > 3) return word.substr(0, word.size() - 1);
    return word;
}

std::string suffix_tag(const std::string& word) {
    if (all_digits(word)) return "OTHER";
    if (ends_with(word, "ly") && word.size() > 3) return "RB";
    if (ends_with(word, "ing") && word.size() > 4) return "VBG";
    if (ends_with(word, "s") && !ends_with(word, "ss") && word.size() > 3) return "NNS";
    return "NN";
}

struct RawToken {
    std::string surface;
    bool follows_break;
};

// Tokens are maximal runs of word bytes; '-' and '\'' join two word bytes
// ("health-care" stays one token). Whitespace separates without breaking a
// phrase; any other byte is a break.
std::vector<RawToken> tokenize(const std::string& sentence) {
    std::vector<RawToken> out;
    bool pending_break = true;  // sentence start counts as a break
    std::size_t i = 0;
    const std::size_t n = sentence.size();
    while (i < n) {
        unsigned char c = sentence[i];
        if (is_word_byte(c)) {
            std::size_t start = i;
            while (i < n) {
                unsigned char cur = sentence[i];
                if (is_word_byte(cur)) {
                    ++i;
                } else if ((cur == '-' || cur == '\'') && i > start && i + 1 < n &&
                           is_word_byte(static_cast<unsigned char>(sentence[i + 1]))) {
                    ++i;
                } else {
                    break;
                }
            }
            out.push_back({sentence.substr(start, i - start), pending_break});
            pending_break = false;
        } else {
            if (!std::isspace(c)) pending_break = true;
            ++i;
        }
    }
    return out;
}

const std::unordered_set<std::string>& noun_tags() {
    static const std::unordered_set<std::string> tags = {"NN", "NNS", "NNP"};
    return tags;
}

bool element_matches(const PatternElement& element, const std::string& tag) {
    return std::find(element.tags.begin(), element.tags.end(), tag) != element.tags.end();
}

} // namespace

std::string TopicPhrase::key() const {
    std::string out;
    for (std::size_t i = 0; i < lemmas.size(); ++i) {
        if (i) out += ' ';
        out += lemmas[i];
    }
    return out;
}

std::vector<std::string> split_topic_key(const std::string& key) {
    std::vector<std::string> out;
    std::istringstream in(key);
    std::string word;
    while (in >> word) out.push_back(word);
    return out;
}

std::vector<PatternElement> parse_pattern(const std::string& pattern) {
    std::vector<PatternElement> elements;
    std::istringstream in(pattern);
    std::string chunk;
    while (in >> chunk) {
        PatternElement element;
        if (chunk.size() > 1 &&
            (chunk.back() == '*' || chunk.back() == '+' || chunk.back() == '?')) {
            element.quant = chunk.back();
            chunk.pop_back();
        }
        if (chunk.size() >= 2 && chunk.front() == '(' && chunk.back() == ')')
            chunk = chunk.substr(1, chunk.size() - 2);
        std::string tag;
        for (char c : chunk + "|") {
            if (c == '|') {
                if (tag.empty()) fail("E_PATTERN", "empty alternative in pattern element");
                element.tags.push_back(tag);
                tag.clear();
            } else if (std::isalnum(static_cast<unsigned char>(c))) {
                tag += c;
            } else {
                fail("E_PATTERN", std::string("unexpected character '") + c + "' in pattern");
            }
        }
        elements.push_back(std::move(element));
    }
    if (elements.empty()) fail("E_PATTERN", "pattern has no elements");
    const PatternElement& last = elements.back();
    if (last.quant != '1' && last.quant != '+')
        fail("E_PATTERN", "final pattern element must be required (quantifier none or '+')");
    for (const auto& tag : last.tags)
        if (!noun_tags().count(tag))
            fail("E_PATTERN", "final pattern element must contain only noun tags, got " + tag);
    return elements;
}

ExtractionConfig ExtractionConfig::defaults() {
    ExtractionConfig config;
    config.stopwords = parse_stopwords(embedded_stopwords());
    config.lexicon = parse_lexicon(embedded_lexicon());
    return config;
}

std::set<std::string> parse_stopwords(const std::string& text) {
    std::set<std::string> out;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        while (!line.empty() && (line.back() == '\r' || line.back() == ' ')) line.pop_back();
        if (line.empty() || line[0] == '#') continue;
        out.insert(lowercase(line));
    }
    return out;
}

std::map<std::string, std::string> parse_lexicon(const std::string& text) {
    std::map<std::string, std::string> out;
    std::istringstream in(text);
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        while (!line.empty() && (line.back() == '\r' || line.back() == ' ')) line.pop_back();
        if (line.empty() || line[0] == '#') continue;
        auto tab = line.find('\t');
        if (tab == std::string::npos || tab == 0 || tab + 1 >= line.size())
            fail("E_FORMAT", "lexicon line " + std::to_string(lineno) +
                                 ": expected 'word<TAB>tag'");
        out[lowercase(line.substr(0, tab))] = line.substr(tab + 1);
    }
    return out;
}

std::vector<std::string> split_sentences(const std::string& text) {
    std::vector<std::string> sentences;
    std::size_t start = 0;
    const std::size_t n = text.size();
    auto flush = [&](std::size_t end) {
        std::size_t a = start, b = end;
        while (a < b && std::isspace(static_cast<unsigned char>(text[a]))) ++a;
        while (b > a && std::isspace(static_cast<unsigned char>(text[b - 1]))) --b;
        if (b > a) sentences.push_back(text.substr(a, b - a));
        start = end;
    };
    for (std::size_t i = 0; i < n; ++i) {
        char c = text[i];
        if (c == '.' || c == '!' || c == '?') {
            std::size_t j = i;
            while (j + 1 < n && (text[j + 1] == '.' || text[j + 1] == '!' || text[j + 1] == '?'))
                ++j;
            // A terminator run ends the sentence only at end-of-text or before
            // whitespace; "e.g" style internals pass through untouched.
            if (j + 1 >= n || std::isspace(static_cast<unsigned char>(text[j + 1]))) {
                flush(j + 1);
                i = j;
            } else {
                i = j;
            }
        }
    }
    flush(n);
    return sentences;
}

std::vector<TaggedToken> tag(const std::string& sentence, const ExtractionConfig& config) {
    std::vector<TaggedToken> out;
    bool pending_break = true;
    for (const RawToken& raw : tokenize(sentence)) {
        pending_break = pending_break || raw.follows_break;
        std::string lower = lowercase(raw.surface);
        if (config.stopwords.count(lower)) {
            pending_break = true;  // removed word leaves a gap phrases cannot cross
            continue;
        }
        auto it = config.lexicon.find(lower);
        std::string pos = it != config.lexicon.end() ? it->second : suffix_tag(lower);
        std::string lemma = pos == "NNS" ? lemmatize_plural(lower) : lower;
        out.push_back({raw.surface, std::move(lemma), std::move(pos), pending_break});
        pending_break = false;
    }
    return out;
}

ExtractedTerms extract_topics(const std::vector<TaggedToken>& tagged,
                              const ExtractionConfig& config) {
    if (config.max_len < 1) fail("E_CONFIG", "max_len must be >= 1");
    const auto elements = parse_pattern(config.pattern);

    ExtractedTerms result;
    result.tokens.reserve(tagged.size());
    for (const auto& token : tagged) result.tokens.push_back(token.lemma);

    const std::size_t n = tagged.size();
    std::size_t i = 0;
    while (i < n) {
        // Phrases may not cross a break, so matching is confined to the
        // current unbroken span.
        std::size_t limit = i + 1;
        while (limit < n && !tagged[limit].follows_break) ++limit;

        // Greedy, non-backtracking match of the pattern starting at i.
        std::size_t pos = i;
        bool ok = true;
        for (const auto& element : elements) {
            std::size_t count = 0;
            std::size_t cap = (element.quant == '1' || element.quant == '?')
                                  ? 1
                                  : std::numeric_limits<std::size_t>::max();
            while (pos < limit && count < cap && element_matches(element, tagged[pos].pos)) {
                ++pos;
                ++count;
            }
            if ((element.quant == '1' || element.quant == '+') && count == 0) {
                ok = false;
                break;
            }
        }

        std::size_t len = pos - i;
        if (ok && len > 0) {
            // Over-long chunks keep only the tail of max_len lemmas: the
            // suffix still matches the pattern, and the head is dropped.
            std::size_t keep = std::min<std::size_t>(len, config.max_len);
            TopicPhrase phrase;
            phrase.lemmas.reserve(keep);
            for (std::size_t k = i + len - keep; k < i + len; ++k)
                phrase.lemmas.push_back(tagged[k].lemma);
            result.topics.push_back(std::move(phrase));
            i += len;
        } else {
            ++i;
        }
    }
    return result;
}

int ExtractionResult::token_index(const std::string& lemma) const {
    auto it = token_lookup_.find(lemma);
    return it == token_lookup_.end() ? -1 : it->second;
}

int ExtractionResult::topic_index(const std::string& key) const {
    auto it = topic_lookup_.find(key);
    return it == topic_lookup_.end() ? -1 : it->second;
}

void ExtractionResult::rebuild_lookup() {
    token_lookup_.clear();
    topic_lookup_.clear();
    for (std::size_t i = 0; i < token_vocab.size(); ++i)
        token_lookup_.emplace(token_vocab[i], static_cast<int>(i));
    for (std::size_t i = 0; i < topic_vocab.size(); ++i)
        topic_lookup_.emplace(topic_vocab[i], static_cast<int>(i));
}

std::vector<std::vector<TaggedToken>> parse_pretagged(const std::string& file_text,
                                                      const Corpus& corpus,
                                                      const ExtractionConfig& config) {
    std::vector<std::vector<TaggedToken>> streams(corpus.documents.size());
    std::istringstream in(file_text);
    std::string line;
    std::size_t lineno = 0;
    int current = -1;
    bool pending_break = true;
    while (std::getline(in, line)) {
        ++lineno;
        while (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.rfind("#DOC ", 0) == 0) {
            std::string id = line.substr(5);
            current = corpus.document_index(id);
            if (current < 0)
                fail("E_REF", "pretagged line " + std::to_string(lineno) +
                                  ": unknown document " + id);
            pending_break = true;
            continue;
        }
        if (line.empty()) {  // sentence break
            pending_break = true;
            continue;
        }
        if (current < 0)
            fail("E_FORMAT", "pretagged line " + std::to_string(lineno) +
                                 ": token before any #DOC header");
        auto t1 = line.find('\t');
        auto t2 = t1 == std::string::npos ? std::string::npos : line.find('\t', t1 + 1);
        if (t1 == std::string::npos || t2 == std::string::npos ||
            line.find('\t', t2 + 1) != std::string::npos)
            fail("E_FORMAT", "pretagged line " + std::to_string(lineno) +
                                 ": expected 'surface<TAB>pos<TAB>lemma'");
        std::string surface = line.substr(0, t1);
        std::string pos = line.substr(t1 + 1, t2 - t1 - 1);
        std::string lemma = lowercase(line.substr(t2 + 1));
        if (surface.empty() || pos.empty() || lemma.empty())
            fail("E_FORMAT", "pretagged line " + std::to_string(lineno) +
                                 ": empty field");
        bool wordlike = std::any_of(surface.begin(), surface.end(), [](unsigned char c) {
            return is_word_byte(c);
        });
        if (!wordlike) {  // punctuation row acts as a break marker
            pending_break = true;
            continue;
        }
        if (config.stopwords.count(lowercase(surface))) {
            pending_break = true;
            continue;
        }
        streams[current].push_back({surface, lemma, pos, pending_break});
        pending_break = false;
    }
    return streams;
}

ExtractionResult extract_corpus(const Corpus& corpus, const ExtractionConfig& config) {
    ExtractionResult result;
    const std::size_t n_docs = corpus.documents.size();
    result.doc_tokens.resize(n_docs);
    result.doc_topics.resize(n_docs);

    std::vector<std::vector<TaggedToken>> streams;
    if (config.tagger == TaggerMode::pretagged) {
        if (config.pretagged_path.empty())
            fail("E_CONFIG", "pretagged mode requires a pretagged file");
        std::ifstream in(config.pretagged_path, std::ios::binary);
        if (!in) fail("E_IO", "cannot open " + config.pretagged_path);
        std::ostringstream buffer;
        buffer << in.rdbuf();
        streams = parse_pretagged(buffer.str(), corpus, config);
    } else {
        streams.resize(n_docs);
        for (std::size_t d = 0; d < n_docs; ++d) {
            for (const std::string& sentence : split_sentences(corpus.documents[d].text)) {
                auto tokens = tag(sentence, config);
                streams[d].insert(streams[d].end(), tokens.begin(), tokens.end());
            }
        }
    }

    std::set<std::string> token_set;
    std::set<std::string> topic_set;
    for (std::size_t d = 0; d < n_docs; ++d) {
        ExtractedTerms terms = extract_topics(streams[d], config);
        result.doc_tokens[d] = std::move(terms.tokens);
        for (const auto& lemma : result.doc_tokens[d]) token_set.insert(lemma);
        result.doc_topics[d].reserve(terms.topics.size());
        for (const auto& phrase : terms.topics) {
            std::string key = phrase.key();
            topic_set.insert(key);
            result.doc_topics[d].push_back(std::move(key));
        }
    }
    result.token_vocab.assign(token_set.begin(), token_set.end());
    result.topic_vocab.assign(topic_set.begin(), topic_set.end());
    result.rebuild_lookup();
    return result;
}

} // namespace expertrank
