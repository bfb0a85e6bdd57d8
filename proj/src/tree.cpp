#include "punct/tree.hpp"

#include <algorithm>

#include "punct/errors.hpp"

namespace punct {

int Sentence::root_id() const {
    for (const Token& t : tokens) {
        if (t.head == 0) return t.id;
    }
    return 0;
}

bool is_punct(const Token& token, PunctClass punct_class) {
    switch (punct_class) {
        case PunctClass::DotsAndCommas:
            return token.form == "." || token.form == ",";
        case PunctClass::AllPunct:
            return token.deprel == "punct" || token.upos == "PUNCT";
    }
    return false;
}

ValidationReport validate(const Sentence& sentence) {
    ValidationReport report;
    const int n = sentence.size();

    for (int i = 0; i < n; ++i) {
        const Token& t = sentence.tokens[static_cast<size_t>(i)];
        if (t.id != i + 1) {
            report.violations.push_back({Violation::Kind::BadTokenId, t.id,
                                         "token id " + std::to_string(t.id) +
                                             " at position " + std::to_string(i + 1)});
        }
        if (t.head == t.id) {
            report.violations.push_back({Violation::Kind::SelfHead, t.id,
                                         "token " + std::to_string(t.id) + " is its own head"});
        }
        if (t.head < 0 || t.head > n) {
            report.violations.push_back({Violation::Kind::HeadOutOfRange, t.id,
                                         "token " + std::to_string(t.id) + " has head " +
                                             std::to_string(t.head) + " outside [0, " +
                                             std::to_string(n) + "]"});
        }
    }
    if (!report.ok()) return report;  // head arithmetic below needs sane ids

    std::vector<int> roots;
    for (const Token& t : sentence.tokens) {
        if (t.head == 0) roots.push_back(t.id);
    }
    if (n > 0 && roots.size() != 1) {
        for (int id : roots) {
            report.violations.push_back({Violation::Kind::RootCount, id,
                                         std::to_string(roots.size()) + " tokens with head 0"});
        }
        if (roots.empty()) {
            report.violations.push_back(
                {Violation::Kind::RootCount, 0, "no token with head 0"});
        }
    }

    // A token is on a cycle iff walking the head chain never reaches 0
    // within n steps.
    for (int id = 1; id <= n; ++id) {
        int cur = id;
        int steps = 0;
        while (cur != 0 && steps <= n) {
            cur = sentence.at(cur).head;
            ++steps;
        }
        if (cur != 0) {
            report.violations.push_back({Violation::Kind::Cycle, id,
                                         "head chain from token " + std::to_string(id) +
                                             " never reaches the root"});
        }
    }
    return report;
}

void require_valid(const Sentence& sentence, const char* where) {
    ValidationReport report = validate(sentence);
    if (!report.ok()) {
        throw ContractViolation(std::string(where) + ": sentence does not validate: " +
                                report.violations.front().message);
    }
}

namespace {

// Strict interleaving: each arc has exactly one endpoint strictly inside the
// other's span. Arcs sharing an endpoint never cross.
bool arcs_cross(const Arc& a, const Arc& b) {
    const int al = std::min(a.head, a.dep), ar = std::max(a.head, a.dep);
    const int bl = std::min(b.head, b.dep), br = std::max(b.head, b.dep);
    return (al < bl && bl < ar && ar < br) || (bl < al && al < br && br < ar);
}

std::vector<Arc> head_arcs(const Sentence& sentence) {
    std::vector<Arc> arcs;
    arcs.reserve(sentence.tokens.size());
    for (const Token& t : sentence.tokens) arcs.push_back({t.head, t.id});
    return arcs;
}

}  // namespace

std::vector<std::pair<Arc, Arc>> crossing_arc_pairs(const Sentence& sentence) {
    require_valid(sentence, "crossing_arc_pairs");
    std::vector<std::pair<Arc, Arc>> pairs;
    const std::vector<Arc> arcs = head_arcs(sentence);
    for (size_t i = 0; i < arcs.size(); ++i) {
        for (size_t j = i + 1; j < arcs.size(); ++j) {
            if (arcs_cross(arcs[i], arcs[j])) pairs.emplace_back(arcs[i], arcs[j]);
        }
    }
    return pairs;
}

bool is_projective(const Sentence& sentence) {
    require_valid(sentence, "is_projective");
    const std::vector<Arc> arcs = head_arcs(sentence);
    for (size_t i = 0; i < arcs.size(); ++i) {
        for (size_t j = i + 1; j < arcs.size(); ++j) {
            if (arcs_cross(arcs[i], arcs[j])) return false;
        }
    }
    return true;
}

}  // namespace punct
