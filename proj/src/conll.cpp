#include "punct/conll.hpp"

#include <charconv>
#include <fstream>
#include <iostream>
#include <sstream>

#include "punct/errors.hpp"

namespace punct {

namespace {

void warn(std::vector<std::string>* warnings, const std::string& msg) {
    if (warnings) {
        warnings->push_back(msg);
    } else {
        std::cerr << "warning: " << msg << "\n";
    }
}

bool parse_int(const std::string& s, int& out) {
    if (s.empty()) return false;
    const char* first = s.data();
    const char* last = s.data() + s.size();
    auto [ptr, ec] = std::from_chars(first, last, out);
    return ec == std::errc() && ptr == last;
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
    return fields;
}

void finish_sentence(Document& doc, Sentence& sent, long first_line,
                     const std::string& source) {
    if (sent.tokens.empty() && sent.comments.empty()) return;
    if (sent.tokens.empty()) {
        // comments with no token lines (e.g. trailing comments)
        throw ParseError("comment block without token lines", first_line);
    }
    ValidationReport report = validate(sent);
    if (!report.ok()) {
        std::ostringstream msg;
        msg << source << ": sentence " << doc.sentences.size() + 1
            << " does not validate:";
        for (const Violation& v : report.violations) msg << " " << v.message << ";";
        throw ValidationError(msg.str());
    }
    doc.sentences.push_back(std::move(sent));
    sent = Sentence{};
}

}  // namespace

Document read_conll(std::istream& in, const std::string& source_name,
                    std::vector<std::string>* warnings) {
    Document doc;
    doc.source_name = source_name;
    Sentence sent;
    long line_number = 0;
    long sentence_first_line = 0;
    std::string line;

    while (std::getline(in, line)) {
        ++line_number;
        if (!line.empty() && line.back() == '\r') line.pop_back();

        if (line.empty()) {
            finish_sentence(doc, sent, sentence_first_line, source_name);
            continue;
        }
        if (sent.tokens.empty() && sent.comments.empty()) sentence_first_line = line_number;

        if (line[0] == '#') {
            sent.comments.push_back(line);
            continue;
        }

        std::vector<std::string> fields = split_tabs(line);
        if (fields.size() != 10) {
            throw ParseError("expected 10 tab-separated columns, got " +
                                 std::to_string(fields.size()),
                             line_number);
        }

        const std::string& id_field = fields[0];
        if (id_field.find('-') != std::string::npos) {
            warn(warnings, source_name + ": line " + std::to_string(line_number) +
                               ": dropping multiword-token range line \"" + id_field + "\"");
            continue;
        }
        if (id_field.find('.') != std::string::npos) {
            throw UnsupportedConstructError(
                source_name + ": line " + std::to_string(line_number) + ": sentence " +
                std::to_string(doc.sentences.size() + 1) + " contains empty-node id \"" +
                id_field + "\"");
        }

        Token tok;
        if (!parse_int(id_field, tok.id) || tok.id < 1) {
            throw ParseError("token id \"" + id_field + "\" is not a positive integer",
                             line_number);
        }
        if (tok.id != sent.size() + 1) {
            throw ParseError("token id " + id_field + " breaks the 1..n sequence",
                             line_number);
        }
        tok.form = fields[1];
        tok.lemma = fields[2];
        tok.upos = fields[3];
        tok.xpos = fields[4];
        tok.feats = fields[5];
        if (!parse_int(fields[6], tok.head) || tok.head < 0) {
            throw ParseError("HEAD \"" + fields[6] + "\" is not a non-negative integer",
                             line_number);
        }
        tok.deprel = fields[7];
        tok.deps = fields[8];
        tok.misc = fields[9];
        sent.tokens.push_back(std::move(tok));
    }
    finish_sentence(doc, sent, sentence_first_line, source_name);
    return doc;
}

Document read_conll_file(const std::string& path, std::vector<std::string>* warnings) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open " + path + " for reading");
    return read_conll(in, path, warnings);
}

void write_conll(const Document& document, std::ostream& out) {
    for (const Sentence& sent : document.sentences) {
        for (const std::string& comment : sent.comments) out << comment << "\n";
        for (const Token& t : sent.tokens) {
            out << t.id << '\t' << t.form << '\t' << t.lemma << '\t' << t.upos << '\t'
                << t.xpos << '\t' << t.feats << '\t' << t.head << '\t' << t.deprel
                << '\t' << t.deps << '\t' << t.misc << "\n";
        }
        out << "\n";
    }
}

void write_conll_file(const Document& document, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot open " + path + " for writing");
    write_conll(document, out);
    if (!out) throw DataError("write to " + path + " failed");
}

std::string to_conll_string(const Document& document) {
    std::ostringstream out;
    write_conll(document, out);
    return out.str();
}

}  // namespace punct
