#pragma once

#include <cstdint>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

namespace sedsi::corpus {

struct Document {
    std::string doc_id;
    std::string title;  // optional, may be empty
    std::string text;
};

/// Sentences of one document, in reading order.
struct SentenceList {
    std::string doc_id;
    std::vector<std::string> sentences;
};

/// Half-open [begin, end) sentence-index ranges produced by the sliding window.
struct Passage {
    size_t begin = 0;
    size_t end = 0;
};

struct PassageList {
    std::vector<Passage> passages;
    size_t window = 5;
    size_t stride = 2;
};

enum class CorpusFormat { Jsonl, Tsv };

/// Load a corpus file. JSONL records need doc_id and text (title optional);
/// TSV rows are doc_id <TAB> title <TAB> text. Lines starting with '#' and
/// blank lines are skipped. Malformed records and duplicate ids throw with
/// the offending line number / id.
std::vector<Document> load_corpus(const std::string& path, CorpusFormat format);

/// Write documents as JSONL, one object per line. When header is non-empty it
/// is emitted first as a '#' comment line.
void write_corpus(const std::vector<Document>& docs, const std::string& path,
                  const std::string& header = "");

/// Split on '.', '!' or '?' followed by whitespace or end of text. A trailing
/// fragment without a terminator becomes the final sentence, so any non-blank
/// text yields at least one sentence.
std::vector<std::string> split_sentences(const std::string& text);

/// Sliding window over sentence indices: starts at 0, stride, 2*stride, ...
/// and stops with the first window whose end reaches the sentence count (that
/// window is clipped). A document shorter than the window yields one passage.
PassageList window_passages(size_t n_sentences, size_t window = 5, size_t stride = 2);

/// Lowercased maximal runs of alphanumeric characters; punctuation is dropped.
/// Bytes >= 0x80 are treated as word characters so UTF-8 stays intact.
std::vector<std::string> tokenize(const std::string& text);

/// Token <-> id bijection with six reserved ids: PAD, UNK, BOS, EOS and the
/// two task markers prepended to model inputs.
class Vocabulary {
public:
    static constexpr int kPad = 0;
    static constexpr int kUnk = 1;
    static constexpr int kBos = 2;
    static constexpr int kEos = 3;
    static constexpr int kDocTask = 4;
    static constexpr int kQueryTask = 5;
    static constexpr int kNumSpecials = 6;

    Vocabulary();

    /// Id for a token; UNK when absent.
    int id(const std::string& token) const;
    bool contains(const std::string& token) const;
    const std::string& token(int id) const;
    int size() const { return static_cast<int>(id_to_token_.size()); }
    int min_freq() const { return min_freq_; }

    /// Ids for a token list (UNK for unknowns).
    std::vector<int> ids(const std::vector<std::string>& tokens) const;
    /// Inverse of ids(); only valid for in-range ids.
    std::vector<std::string> tokens(const std::vector<int>& ids) const;

    void save(const std::string& path, const std::string& header = "") const;
    static Vocabulary load(const std::string& path);

    /// Specials first, then tokens with frequency >= min_freq ordered by
    /// descending frequency, ties broken lexicographically.
    static Vocabulary build(const std::vector<std::vector<std::string>>& streams, int min_freq);

private:
    std::vector<std::string> id_to_token_;
    std::unordered_map<std::string, int> token_to_id_;
    int min_freq_ = 1;
};

}  // namespace sedsi::corpus
