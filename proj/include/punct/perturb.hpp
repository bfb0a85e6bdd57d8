#ifndef PUNCT_PERTURB_HPP
#define PUNCT_PERTURB_HPP

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "punct/conll.hpp"
#include "punct/tree.hpp"

namespace punct {

struct PerturbConfig {
    double chi = 0.0;    // comma-injection rate
    double delta = 0.0;  // dot-injection rate
    PunctClass punct_class = PunctClass::DotsAndCommas;
    std::uint64_t master_seed = 0;
};

// Record of one punctuation-removal pass, sufficient to reinsert the removed
// tokens at their original positions.
struct StripLog {
    struct Removed {
        int original_position;
        std::string form;
        int original_head_position;
        std::string deprel;
        bool operator==(const Removed&) const = default;
    };
    std::vector<Removed> removed;  // positions strictly increasing
    int lifted_dependents = 0;     // surviving tokens reattached past a removed head

    bool operator==(const StripLog&) const = default;
};

struct InjectLog {
    struct Injected {
        int new_position;  // position in the output sentence
        std::string form;  // "." or ","
        int head_new_position;
        bool operator==(const Injected&) const = default;
    };
    std::vector<Injected> injected;  // positions strictly increasing
    bool made_nonprojective = false;

    bool operator==(const InjectLog&) const = default;
};

// Removes every token matching the class; survivors keep their order with
// ids compacted to 1..m and heads remapped. A survivor whose head was
// removed is lifted to the nearest surviving ancestor. Throws DataError if
// no token would survive or if the root token itself matches.
std::pair<Sentence, StripLog> strip_punct(const Sentence& sentence,
                                          PunctClass punct_class);

// One requested insertion site, in terms of original node indices 1..n.
struct Injection {
    enum class Kind { CommaBefore, DotAfter };
    int node;
    Kind kind;
};

// Applies the given insertions (which must be sorted by node, comma-before
// ahead of dot-after at the same node). Injected commas attach to the token
// immediately to their left (the sentence's root token when there is none);
// injected dots attach to the root token. Both carry deprel "punct" and
// UPOS "PUNCT". Pre-existing heads are remapped through the shifts.
std::pair<Sentence, InjectLog> apply_injections(const Sentence& sentence,
                                                const std::vector<Injection>& sites);

// Draws the insertion sites: for each original node i in order 1..n, first a
// comma before i with probability chi, then a dot after i with probability
// delta (exactly 2n Bernoulli draws from a generator seeded by
// (master_seed, sentence_ordinal)), and applies them.
std::pair<Sentence, InjectLog> inject_punct(const Sentence& sentence,
                                            const PerturbConfig& config,
                                            std::uint64_t sentence_ordinal = 0);

// Reinserts the removed tokens of the log into a parsed core at their
// original positions: dots attach to the (predicted) root token, other
// punctuation to its left neighbor, with root fallback. Throws
// AlignmentError if the core length does not match the log.
Sentence attach_stripped(const Sentence& parsed_core, const StripLog& strip_log);

// Document-level conveniences used by the CLI.
struct StripStats {
    long removed_tokens = 0;
    long lifted_dependents = 0;
};
std::pair<Document, StripStats> strip_document(const Document& document,
                                               PunctClass punct_class);

struct InjectStats {
    long injected_tokens = 0;
    long injected_commas = 0;
    long injected_dots = 0;
    long sentences_made_nonprojective = 0;
};
std::pair<Document, InjectStats> inject_document(const Document& document,
                                                 const PerturbConfig& config);

}  // namespace punct

#endif  // PUNCT_PERTURB_HPP
