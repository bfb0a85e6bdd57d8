#ifndef PUNCT_TREE_HPP
#define PUNCT_TREE_HPP

#include <string>
#include <utility>
#include <vector>

namespace punct {

// One treebank node. Position (id) is 1-based; head 0 is the artificial root.
// The toolkit interprets id, form, upos, head and deprel; the remaining
// CoNLL columns are carried along verbatim so files round-trip.
struct Token {
    int id = 0;
    std::string form;
    std::string lemma = "_";
    std::string upos = "_";
    std::string xpos = "_";
    std::string feats = "_";
    int head = -1;
    std::string deprel = "_";
    std::string deps = "_";
    std::string misc = "_";

    bool operator==(const Token&) const = default;
};

// An ordered token list forming a single-rooted dependency tree.
struct Sentence {
    std::vector<Token> tokens;
    std::vector<std::string> comments;

    int size() const { return static_cast<int>(tokens.size()); }
    // Access by 1-based token id.
    const Token& at(int id) const { return tokens[static_cast<size_t>(id) - 1]; }
    Token& at(int id) { return tokens[static_cast<size_t>(id) - 1]; }
    // 1-based id of the (first) token whose head is 0; 0 if there is none.
    int root_id() const;

    bool operator==(const Sentence&) const = default;
};

enum class PunctClass {
    DotsAndCommas,  // forms "." and "," exactly
    AllPunct,       // deprel "punct" or UPOS "PUNCT"
};

bool is_punct(const Token& token, PunctClass punct_class);

struct Violation {
    enum class Kind {
        BadTokenId,      // id != position or id < 1
        SelfHead,        // head == id
        HeadOutOfRange,  // head outside [0, n]
        RootCount,       // zero or more than one token with head 0
        Cycle,           // head relation has a cycle through this token
    };
    Kind kind;
    int token_id;  // offending token (0 when sentence-level)
    std::string message;
};

struct ValidationReport {
    std::vector<Violation> violations;
    bool ok() const { return violations.empty(); }
};

// Checks the Sentence invariants; violations are data, not exceptions.
ValidationReport validate(const Sentence& sentence);

// Throws ContractViolation if the sentence does not validate.
void require_valid(const Sentence& sentence, const char* where);

// A dependency arc; the root token's arc is (0, root).
struct Arc {
    int head;
    int dep;
    bool operator==(const Arc&) const = default;
    auto operator<=>(const Arc&) const = default;
};

// Every pair of crossing arcs in the sentence, each token contributing its
// head arc (the root token contributes the virtual arc from position 0).
// Pairs come out ordered by dependent id, the smaller-dependent arc first.
std::vector<std::pair<Arc, Arc>> crossing_arc_pairs(const Sentence& sentence);

// True iff no two arcs cross. Arc (h,d) spans [min(h,d), max(h,d)]; two arcs
// cross iff each has exactly one endpoint strictly inside the other's span
// (strict interleaving; arcs sharing an endpoint do not cross).
bool is_projective(const Sentence& sentence);

}  // namespace punct

#endif  // PUNCT_TREE_HPP
