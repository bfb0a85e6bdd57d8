#ifndef PUNCT_CONLL_HPP
#define PUNCT_CONLL_HPP

#include <iosfwd>
#include <string>
#include <vector>

#include "punct/tree.hpp"

namespace punct {

// An ordered collection of sentences read from one source.
struct Document {
    std::vector<Sentence> sentences;
    std::string source_name;

    bool operator==(const Document& other) const {
        return sentences == other.sentences;  // source name is provenance only
    }
};

// Reads CoNLL-X / CoNLL-U tabular data: 10 tab-separated columns per token
// line, blank-line sentence separators, "#" comment lines attached to the
// following sentence. Only ID, FORM, UPOS (column 4), HEAD (column 7) and
// DEPREL (column 8) are interpreted; the other columns are preserved
// verbatim. Multiword-token range lines ("3-4") are dropped with a warning;
// empty-node ids ("3.1") are a hard error. Every sentence must validate.
//
// Warnings go into *warnings when given, otherwise to stderr.
Document read_conll(std::istream& in, const std::string& source_name = "",
                    std::vector<std::string>* warnings = nullptr);
Document read_conll_file(const std::string& path,
                         std::vector<std::string>* warnings = nullptr);

// Writes the document back; re-reading the output yields an equal Document,
// and for canonical input files (no dropped constructs, LF line ends, blank
// line after every sentence) the bytes are identical to the input.
void write_conll(const Document& document, std::ostream& out);
void write_conll_file(const Document& document, const std::string& path);

std::string to_conll_string(const Document& document);

}  // namespace punct

#endif  // PUNCT_CONLL_HPP
