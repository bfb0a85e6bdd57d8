#ifndef PUNCT_PARSER_HPP
#define PUNCT_PARSER_HPP

#include <cstdint>
#include <iosfwd>
#include <string>
#include <unordered_map>
#include <vector>

#include "punct/conll.hpp"
#include "punct/tree.hpp"

namespace punct {

enum class Mode { Standard, NoPunct };

std::string to_string(Mode mode);
Mode mode_from_string(const std::string& name);

// Arc-eager transition. label is empty for Shift and Reduce.
struct Transition {
    enum class Kind { Shift, Reduce, LeftArc, RightArc };
    Kind kind;
    std::string label;

    bool operator==(const Transition&) const = default;
};

struct LabeledArc {
    int head;
    int dep;
    std::string deprel;

    bool operator==(const LabeledArc&) const = default;
    auto operator<=>(const LabeledArc&) const = default;
};

struct TrainingMeta {
    int epochs = 0;
    std::uint64_t seed = 0;
    int skipped_nonprojective = 0;
    int skipped_unstrippable = 0;
};

// Averaged linear model over (feature, transition) pairs. Weight vectors are
// indexed by the transition enumeration [Shift, RightArc(l*) alphabetical,
// LeftArc(l*) alphabetical, Reduce], which is also the greedy tie-break
// order.
struct ParserModel {
    std::unordered_map<std::string, std::vector<double>> weights;
    std::vector<std::string> label_set;  // sorted
    Mode mode = Mode::Standard;
    int feature_version = 1;
    TrainingMeta meta;

    int num_transitions() const { return 2 + 2 * static_cast<int>(label_set.size()); }
};

// Static arc-eager oracle. Replaying the returned sequence from the initial
// state reconstructs exactly the gold arc set. Throws OracleInfeasibleError
// on non-projective input.
std::vector<Transition> oracle_transitions(const Sentence& sentence);

// Mechanically replays a transition sequence over an n-token sentence,
// enforcing permissibility; returns the arc set sorted by dependent.
std::vector<LabeledArc> replay_transitions(int n, const std::vector<Transition>& seq);

std::vector<LabeledArc> gold_arcs(const Sentence& sentence);

// Averaged-perceptron training over shuffled sentences. Non-projective
// sentences are skipped and counted; in NoPunct mode every sentence is first
// stripped of dots and commas (sentences that cannot be stripped are skipped
// and counted too). Deterministic given (documents, epochs, mode, seed).
ParserModel train(const std::vector<Document>& documents, int epochs, Mode mode,
                  std::uint64_t seed);

// Greedy decoding; total: any token left unattached is attached to the
// predicted root with label "dep". In NoPunct mode the input is stripped of
// dots and commas before decoding and the punctuation is deterministically
// reattached afterwards.
Sentence parse(const ParserModel& model, const Sentence& sentence);

Document parse_document(const ParserModel& model, const Document& document);

// Versioned JSON model file; save/load round-trips to identical behavior.
void save_model(const ParserModel& model, std::ostream& out);
void save_model_file(const ParserModel& model, const std::string& path);
ParserModel load_model(std::istream& in);
ParserModel load_model_file(const std::string& path);

}  // namespace punct

#endif  // PUNCT_PARSER_HPP
