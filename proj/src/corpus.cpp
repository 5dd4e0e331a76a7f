#include "sedsi/corpus.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <map>
#include <sstream>

#include "sedsi/util.hpp"
#include "json.hpp"

namespace sedsi::corpus {

namespace {

std::string trim(const std::string& s) {
    size_t b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    size_t e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

bool is_comment_or_blank(const std::string& line) {
    for (char c : line) {
        if (c == ' ' || c == '\t' || c == '\r') continue;
        return c == '#';
    }
    return true;
}

std::vector<std::string> split_tabs(const std::string& line) {
    std::vector<std::string> fields;
    size_t start = 0;
    while (true) {
        size_t tab = line.find('\t', start);
        if (tab == std::string::npos) {
            fields.push_back(line.substr(start));
            break;
        }
        fields.push_back(line.substr(start, tab - start));
        start = tab + 1;
    }
    if (!fields.empty() && !fields.back().empty() && fields.back().back() == '\r')
        fields.back().pop_back();
    return fields;
}

void validate(std::vector<Document>& docs, const Document& doc, size_t line_no,
              std::unordered_map<std::string, size_t>& seen) {
    if (doc.doc_id.empty())
        throw Error("corpus line " + std::to_string(line_no) + ": empty doc_id");
    if (trim(doc.text).empty())
        throw Error("corpus line " + std::to_string(line_no) + ": empty text for doc_id '" +
                    doc.doc_id + "'");
    if (!seen.emplace(doc.doc_id, line_no).second)
        throw Error("corpus line " + std::to_string(line_no) + ": duplicate doc_id '" +
                    doc.doc_id + "'");
    docs.push_back(doc);
}

}  // namespace

std::vector<Document> load_corpus(const std::string& path, CorpusFormat format) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open corpus file: " + path);

    std::vector<Document> docs;
    std::unordered_map<std::string, size_t> seen;
    std::string line;
    size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (is_comment_or_blank(line)) continue;
        Document doc;
        if (format == CorpusFormat::Jsonl) {
            nlohmann::json record;
            try {
                record = nlohmann::json::parse(line);
            } catch (const nlohmann::json::exception& e) {
                throw Error("corpus line " + std::to_string(line_no) + ": malformed JSON (" +
                            e.what() + ")");
            }
            if (!record.contains("doc_id") || !record["doc_id"].is_string())
                throw Error("corpus line " + std::to_string(line_no) + ": missing field 'doc_id'");
            if (!record.contains("text") || !record["text"].is_string())
                throw Error("corpus line " + std::to_string(line_no) + ": missing field 'text'");
            doc.doc_id = record["doc_id"].get<std::string>();
            doc.text = record["text"].get<std::string>();
            if (record.contains("title") && record["title"].is_string())
                doc.title = record["title"].get<std::string>();
        } else {
            auto fields = split_tabs(line);
            if (fields.size() != 3)
                throw Error("corpus line " + std::to_string(line_no) +
                            ": expected 3 tab-separated fields, got " +
                            std::to_string(fields.size()));
            doc.doc_id = fields[0];
            doc.title = fields[1];
            doc.text = fields[2];
        }
        validate(docs, doc, line_no, seen);
    }
    return docs;
}

void write_corpus(const std::vector<Document>& docs, const std::string& path,
                  const std::string& header) {
    std::ofstream out(path);
    if (!out) throw Error("cannot write corpus file: " + path);
    if (!header.empty()) out << "# " << header << "\n";
    for (const auto& doc : docs) {
        nlohmann::ordered_json record;
        record["doc_id"] = doc.doc_id;
        if (!doc.title.empty()) record["title"] = doc.title;
        record["text"] = doc.text;
        out << record.dump() << "\n";
    }
}

std::vector<std::string> split_sentences(const std::string& text) {
    std::vector<std::string> sentences;
    size_t start = 0;
    auto is_ws = [](char c) { return c == ' ' || c == '\t' || c == '\n' || c == '\r'; };
    auto flush = [&](size_t end) {
        std::string sent = trim(text.substr(start, end - start));
        if (!sent.empty()) sentences.push_back(std::move(sent));
        start = end;
    };
    for (size_t i = 0; i < text.size(); ++i) {
        char c = text[i];
        if ((c == '.' || c == '!' || c == '?') &&
            (i + 1 == text.size() || is_ws(text[i + 1]))) {
            flush(i + 1);
        }
    }
    flush(text.size());
    if (sentences.empty()) {
        std::string whole = trim(text);
        if (!whole.empty()) sentences.push_back(std::move(whole));
    }
    return sentences;
}

PassageList window_passages(size_t n_sentences, size_t window, size_t stride) {
    if (window < 1 || stride < 1) throw Error("window and stride must be >= 1");
    PassageList list;
    list.window = window;
    list.stride = stride;
    for (size_t start = 0; start < n_sentences; start += stride) {
        size_t end = std::min(start + window, n_sentences);
        list.passages.push_back({start, end});
        if (end >= n_sentences) break;
    }
    return list;
}

std::vector<std::string> tokenize(const std::string& text) {
    std::vector<std::string> tokens;
    std::string current;
    auto is_word_char = [](unsigned char c) {
        return std::isalnum(c) != 0 || c >= 0x80;  // keep UTF-8 bytes intact
    };
    for (unsigned char c : text) {
        if (is_word_char(c)) {
            current.push_back(static_cast<char>(std::tolower(c)));
        } else if (!current.empty()) {
            tokens.push_back(std::move(current));
            current.clear();
        }
    }
    if (!current.empty()) tokens.push_back(std::move(current));
    return tokens;
}

namespace {
const char* kSpecialNames[Vocabulary::kNumSpecials] = {"<pad>", "<unk>", "<bos>",
                                                       "<eos>", "<doc>", "<query>"};
}

Vocabulary::Vocabulary() {
    for (int i = 0; i < kNumSpecials; ++i) {
        id_to_token_.emplace_back(kSpecialNames[i]);
        token_to_id_[kSpecialNames[i]] = i;
    }
}

int Vocabulary::id(const std::string& token) const {
    auto it = token_to_id_.find(token);
    return it == token_to_id_.end() ? kUnk : it->second;
}

bool Vocabulary::contains(const std::string& token) const {
    return token_to_id_.count(token) > 0;
}

const std::string& Vocabulary::token(int id) const {
    if (id < 0 || id >= size()) throw Error("token id out of range: " + std::to_string(id));
    return id_to_token_[static_cast<size_t>(id)];
}

std::vector<int> Vocabulary::ids(const std::vector<std::string>& tokens) const {
    std::vector<int> out;
    out.reserve(tokens.size());
    for (const auto& t : tokens) out.push_back(id(t));
    return out;
}

std::vector<std::string> Vocabulary::tokens(const std::vector<int>& ids) const {
    std::vector<std::string> out;
    out.reserve(ids.size());
    for (int i : ids) out.push_back(token(i));
    return out;
}

Vocabulary Vocabulary::build(const std::vector<std::vector<std::string>>& streams, int min_freq) {
    if (min_freq < 1) throw Error("min_freq must be >= 1");
    std::unordered_map<std::string, size_t> counts;
    size_t total = 0;
    for (const auto& stream : streams) {
        for (const auto& tok : stream) {
            ++counts[tok];
            ++total;
        }
    }
    if (total == 0) throw Error("cannot build vocabulary from an empty token stream");

    // descending frequency, ties lexicographic
    std::vector<std::pair<std::string, size_t>> sorted(counts.begin(), counts.end());
    std::sort(sorted.begin(), sorted.end(), [](const auto& a, const auto& b) {
        if (a.second != b.second) return a.second > b.second;
        return a.first < b.first;
    });

    Vocabulary vocab;
    vocab.min_freq_ = min_freq;
    for (const auto& [tok, count] : sorted) {
        if (count < static_cast<size_t>(min_freq)) continue;
        if (vocab.token_to_id_.count(tok)) continue;  // a special name fed as data
        vocab.token_to_id_[tok] = vocab.size();
        vocab.id_to_token_.push_back(tok);
    }
    return vocab;
}

void Vocabulary::save(const std::string& path, const std::string& header) const {
    std::ofstream out(path);
    if (!out) throw Error("cannot write vocabulary file: " + path);
    if (!header.empty()) out << "# " << header << "\n";
    out << "# min_freq\t" << min_freq_ << "\n";
    for (int i = 0; i < size(); ++i) out << i << "\t" << id_to_token_[i] << "\n";
}

Vocabulary Vocabulary::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open vocabulary file: " + path);
    Vocabulary vocab;
    vocab.id_to_token_.clear();
    vocab.token_to_id_.clear();
    std::string line;
    size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.rfind("# min_freq\t", 0) == 0) {
            vocab.min_freq_ = std::stoi(line.substr(11));
            continue;
        }
        if (is_comment_or_blank(line)) continue;
        auto fields = split_tabs(line);
        if (fields.size() != 2)
            throw Error("vocabulary line " + std::to_string(line_no) + ": expected id<TAB>token");
        int id = std::stoi(fields[0]);
        if (id != vocab.size())
            throw Error("vocabulary line " + std::to_string(line_no) + ": non-contiguous id " +
                        fields[0]);
        vocab.token_to_id_[fields[1]] = id;
        vocab.id_to_token_.push_back(fields[1]);
    }
    for (int i = 0; i < kNumSpecials; ++i) {
        if (vocab.size() <= i || vocab.id_to_token_[i] != kSpecialNames[i])
            throw Error("vocabulary file missing special token " + std::string(kSpecialNames[i]) +
                        " at id " + std::to_string(i));
    }
    return vocab;
}

}  // namespace sedsi::corpus
