#include "punct/parser.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "punct/errors.hpp"
#include "punct/perturb.hpp"
#include "punct/rng.hpp"

namespace punct {

std::string to_string(Mode mode) {
    return mode == Mode::Standard ? "standard" : "nopunct";
}

Mode mode_from_string(const std::string& name) {
    if (name == "standard") return Mode::Standard;
    if (name == "nopunct") return Mode::NoPunct;
    throw UsageError("unknown mode \"" + name + "\" (expected standard|nopunct)");
}

namespace {

// Parser configuration: stack over [0..n] with the artificial root 0 at the
// bottom, buffer of unread token ids, and the arcs predicted so far.
//
//   Shift        push b, advance buffer
//   RightArc(l)  add s -l-> b, push b
//   LeftArc(l)   add b -l-> s, pop s          (s must be unattached, not 0)
//   Reduce       pop s                        (s must be attached)
//
// RightArc from the root is blocked once a root dependent exists, so decoded
// trees stay single-rooted.
struct State {
    int n;
    std::vector<int> stack;
    int next;  // buffer front; buffer is next..n
    std::vector<int> head;          // -1 = unattached
    std::vector<std::string> label;
    std::vector<int> leftmost_child;   // 0 = none
    std::vector<int> rightmost_child;
    std::vector<std::string> lc_label;
    std::vector<std::string> rc_label;
    bool has_root_dep = false;

    explicit State(int n_tokens)
        : n(n_tokens),
          stack{0},
          next(1),
          head(static_cast<size_t>(n_tokens) + 1, -1),
          label(static_cast<size_t>(n_tokens) + 1),
          leftmost_child(static_cast<size_t>(n_tokens) + 1, 0),
          rightmost_child(static_cast<size_t>(n_tokens) + 1, 0),
          lc_label(static_cast<size_t>(n_tokens) + 1),
          rc_label(static_cast<size_t>(n_tokens) + 1) {}

    bool done() const { return next > n; }
    int top() const { return stack.back(); }

    void add_arc(int h, int d, const std::string& l) {
        head[static_cast<size_t>(d)] = h;
        label[static_cast<size_t>(d)] = l;
        if (h == 0) {
            has_root_dep = true;
            return;
        }
        auto hs = static_cast<size_t>(h);
        if (leftmost_child[hs] == 0 || d < leftmost_child[hs]) {
            leftmost_child[hs] = d;
            lc_label[hs] = l;
        }
        if (d > rightmost_child[hs]) {
            rightmost_child[hs] = d;
            rc_label[hs] = l;
        }
    }

    bool permissible(Transition::Kind kind) const {
        const int s = top();
        switch (kind) {
            case Transition::Kind::Shift:
                return next <= n;
            case Transition::Kind::RightArc:
                return next <= n && !(s == 0 && has_root_dep);
            case Transition::Kind::LeftArc:
                return next <= n && s != 0 && head[static_cast<size_t>(s)] == -1;
            case Transition::Kind::Reduce:
                return s != 0 && head[static_cast<size_t>(s)] != -1;
        }
        return false;
    }

    void apply(const Transition& t) {
        if (!permissible(t.kind)) {
            throw ContractViolation("transition not permissible in this state");
        }
        switch (t.kind) {
            case Transition::Kind::Shift:
                stack.push_back(next++);
                break;
            case Transition::Kind::RightArc:
                add_arc(top(), next, t.label);
                stack.push_back(next++);
                break;
            case Transition::Kind::LeftArc:
                add_arc(next, top(), t.label);
                stack.pop_back();
                break;
            case Transition::Kind::Reduce:
                stack.pop_back();
                break;
        }
    }
};

const std::string kRootSymbol = "<ROOT>";
const std::string kNoneSymbol = "<NONE>";

struct TokenView {
    const std::string* form;
    const std::string* pos;
};

TokenView view(const Sentence& sent, int id) {
    if (id == 0) return {&kRootSymbol, &kRootSymbol};
    if (id < 0 || id > sent.size()) return {&kNoneSymbol, &kNoneSymbol};
    const Token& t = sent.at(id);
    return {&t.form, &t.upos};
}

std::string distance_bucket(int s0, int b0) {
    const int d = b0 - s0;
    return d >= 6 ? "6+" : std::to_string(d);
}

// Feature templates (feature_version 1): forms and POS of s0/b0/b1, deprels
// of s0's leftmost and rightmost predicted children, the s0-b0 distance
// bucket, and pairwise conjunctions of those atoms.
void extract_features(const State& state, const Sentence& sent,
                      std::vector<std::string>& out) {
    out.clear();
    const int s0 = state.top();
    const int b0 = state.next <= state.n ? state.next : -1;
    const int b1 = state.next + 1 <= state.n ? state.next + 1 : -1;
    const TokenView vs0 = view(sent, s0);
    const TokenView vb0 = view(sent, b0);
    const TokenView vb1 = view(sent, b1);
    const std::string& lc = s0 > 0 ? state.lc_label[static_cast<size_t>(s0)] : kNoneSymbol;
    const std::string& rc = s0 > 0 ? state.rc_label[static_cast<size_t>(s0)] : kNoneSymbol;
    const std::string dist = distance_bucket(s0, b0 < 0 ? state.n + 1 : b0);

    out.push_back("b");
    out.push_back("s0w=" + *vs0.form);
    out.push_back("s0p=" + *vs0.pos);
    out.push_back("s0wp=" + *vs0.form + "|" + *vs0.pos);
    out.push_back("b0w=" + *vb0.form);
    out.push_back("b0p=" + *vb0.pos);
    out.push_back("b0wp=" + *vb0.form + "|" + *vb0.pos);
    out.push_back("b1w=" + *vb1.form);
    out.push_back("b1p=" + *vb1.pos);
    out.push_back("s0w,b0w=" + *vs0.form + "|" + *vb0.form);
    out.push_back("s0p,b0p=" + *vs0.pos + "|" + *vb0.pos);
    out.push_back("s0w,b0p=" + *vs0.form + "|" + *vb0.pos);
    out.push_back("s0p,b0w=" + *vs0.pos + "|" + *vb0.form);
    out.push_back("s0p,b0p,b1p=" + *vs0.pos + "|" + *vb0.pos + "|" + *vb1.pos);
    out.push_back("s0lc=" + lc);
    out.push_back("s0rc=" + rc);
    out.push_back("s0p,lc=" + *vs0.pos + "|" + lc);
    out.push_back("s0p,rc=" + *vs0.pos + "|" + rc);
    out.push_back("d=" + dist);
    out.push_back("d,s0p,b0p=" + dist + "|" + *vs0.pos + "|" + *vb0.pos);
}

int transition_index(const Transition& t, const std::vector<std::string>& labels) {
    const int L = static_cast<int>(labels.size());
    auto label_pos = [&labels](const std::string& l) {
        auto it = std::lower_bound(labels.begin(), labels.end(), l);
        if (it == labels.end() || *it != l) {
            throw ContractViolation("label \"" + l + "\" not in model label set");
        }
        return static_cast<int>(it - labels.begin());
    };
    switch (t.kind) {
        case Transition::Kind::Shift:
            return 0;
        case Transition::Kind::RightArc:
            return 1 + label_pos(t.label);
        case Transition::Kind::LeftArc:
            return 1 + L + label_pos(t.label);
        case Transition::Kind::Reduce:
            return 1 + 2 * L;
    }
    return 0;
}

Transition transition_at(int index, const std::vector<std::string>& labels) {
    const int L = static_cast<int>(labels.size());
    if (index == 0) return {Transition::Kind::Shift, ""};
    if (index <= L) return {Transition::Kind::RightArc, labels[static_cast<size_t>(index - 1)]};
    if (index <= 2 * L)
        return {Transition::Kind::LeftArc, labels[static_cast<size_t>(index - 1 - L)]};
    return {Transition::Kind::Reduce, ""};
}

Transition::Kind kind_at(int index, int num_labels) {
    if (index == 0) return Transition::Kind::Shift;
    if (index <= num_labels) return Transition::Kind::RightArc;
    if (index <= 2 * num_labels) return Transition::Kind::LeftArc;
    return Transition::Kind::Reduce;
}

}  // namespace

std::vector<Transition> oracle_transitions(const Sentence& sentence) {
    require_valid(sentence, "oracle_transitions");
    if (!is_projective(sentence)) {
        throw OracleInfeasibleError("oracle_transitions: sentence is non-projective");
    }
    const int n = sentence.size();

    // dependents_left[b] = gold dependents of b, used for the reduce test
    std::vector<std::vector<int>> deps(static_cast<size_t>(n) + 1);
    for (const Token& t : sentence.tokens) {
        if (t.head >= 1) deps[static_cast<size_t>(t.head)].push_back(t.id);
    }

    State state(n);
    std::vector<Transition> seq;
    while (!state.done()) {
        const int s = state.top();
        const int b = state.next;
        Transition t;
        if (s != 0 && sentence.at(s).head == b) {
            t = {Transition::Kind::LeftArc, sentence.at(s).deprel};
        } else if (sentence.at(b).head == s) {
            t = {Transition::Kind::RightArc, sentence.at(b).deprel};
        } else {
            // b linked to something strictly left of s => s is finished
            bool link_left = sentence.at(b).head < s;
            if (!link_left) {
                for (int d : deps[static_cast<size_t>(b)]) {
                    if (d < s) {
                        link_left = true;
                        break;
                    }
                }
            }
            if (link_left) {
                if (s == 0 || state.head[static_cast<size_t>(s)] == -1) {
                    throw OracleInfeasibleError(
                        "oracle_transitions: no feasible transition");
                }
                t = {Transition::Kind::Reduce, ""};
            } else {
                t = {Transition::Kind::Shift, ""};
            }
        }
        state.apply(t);
        seq.push_back(std::move(t));
    }
    return seq;
}

std::vector<LabeledArc> replay_transitions(int n, const std::vector<Transition>& seq) {
    State state(n);
    for (const Transition& t : seq) state.apply(t);
    std::vector<LabeledArc> arcs;
    for (int d = 1; d <= n; ++d) {
        if (state.head[static_cast<size_t>(d)] != -1) {
            arcs.push_back({state.head[static_cast<size_t>(d)], d,
                            state.label[static_cast<size_t>(d)]});
        }
    }
    return arcs;
}

std::vector<LabeledArc> gold_arcs(const Sentence& sentence) {
    std::vector<LabeledArc> arcs;
    for (const Token& t : sentence.tokens) arcs.push_back({t.head, t.id, t.deprel});
    return arcs;
}

namespace {

// Greedy decode with the model's weights; returns predicted heads/labels.
void decode(const ParserModel& model, const Sentence& sent, std::vector<int>& head,
            std::vector<std::string>& label) {
    const int n = sent.size();
    const int num_t = model.num_transitions();
    const int L = static_cast<int>(model.label_set.size());
    State state(n);
    std::vector<std::string> feats;
    std::vector<double> score(static_cast<size_t>(num_t));

    while (!state.done()) {
        extract_features(state, sent, feats);
        std::fill(score.begin(), score.end(), 0.0);
        for (const std::string& f : feats) {
            auto it = model.weights.find(f);
            if (it == model.weights.end()) continue;
            const std::vector<double>& w = it->second;
            for (int t = 0; t < num_t; ++t) score[static_cast<size_t>(t)] += w[static_cast<size_t>(t)];
        }
        int best = -1;
        for (int t = 0; t < num_t; ++t) {
            if (!state.permissible(kind_at(t, L))) continue;
            if (best < 0 || score[static_cast<size_t>(t)] > score[static_cast<size_t>(best)]) best = t;
        }
        state.apply(transition_at(best, model.label_set));
    }

    // fallback: attach leftovers to the predicted root
    int root = 0;
    for (int d = 1; d <= n; ++d) {
        if (state.head[static_cast<size_t>(d)] == 0) {
            root = d;
            break;
        }
    }
    if (root == 0) {
        for (int d = 1; d <= n; ++d) {
            if (state.head[static_cast<size_t>(d)] == -1) {
                state.head[static_cast<size_t>(d)] = 0;
                state.label[static_cast<size_t>(d)] = "root";
                root = d;
                break;
            }
        }
    }
    for (int d = 1; d <= n; ++d) {
        if (state.head[static_cast<size_t>(d)] == -1) {
            state.head[static_cast<size_t>(d)] = root;
            state.label[static_cast<size_t>(d)] = "dep";
        }
    }

    head.assign(state.head.begin(), state.head.end());
    label.assign(state.label.begin(), state.label.end());
}

Sentence decode_sentence(const ParserModel& model, const Sentence& sent) {
    Sentence out = sent;
    if (sent.size() == 0) return out;
    std::vector<int> head;
    std::vector<std::string> label;
    decode(model, sent, head, label);
    for (Token& t : out.tokens) {
        t.head = head[static_cast<size_t>(t.id)];
        t.deprel = label[static_cast<size_t>(t.id)];
    }
    require_valid(out, "parse output");
    return out;
}

bool is_dot_or_comma(const Token& t) {
    return is_punct(t, PunctClass::DotsAndCommas);
}

// Form-level strip used at parse time: ignores the input's head structure
// entirely (a parser must not depend on it) and therefore stays total even
// when the gold-aware strip_punct would refuse.
std::pair<Sentence, StripLog> strip_for_parsing(const Sentence& sent) {
    Sentence core;
    core.comments = sent.comments;
    StripLog log;
    for (const Token& t : sent.tokens) {
        if (is_dot_or_comma(t)) {
            log.removed.push_back({t.id, t.form, t.head, t.deprel});
        } else {
            Token copy = t;
            copy.id = static_cast<int>(core.tokens.size()) + 1;
            copy.head = copy.id - 1;  // placeholder chain; decoding ignores heads
            core.tokens.push_back(std::move(copy));
        }
    }
    return {std::move(core), std::move(log)};
}

// Valid tree over an all-punctuation sentence: first token is the root,
// dots attach to it, anything else to its left neighbor.
Sentence all_punct_fallback(const Sentence& sent) {
    Sentence out = sent;
    for (Token& t : out.tokens) {
        if (t.id == 1) {
            t.head = 0;
            t.deprel = "root";
        } else if (t.form == ".") {
            t.head = 1;
            t.deprel = "punct";
        } else {
            t.head = t.id - 1;
            t.deprel = "punct";
        }
    }
    require_valid(out, "parse output");
    return out;
}

}  // namespace

Sentence parse(const ParserModel& model, const Sentence& sentence) {
    require_valid(sentence, "parse");
    if (sentence.size() == 0) return sentence;
    if (model.mode == Mode::Standard) {
        return decode_sentence(model, sentence);
    }
    auto [core, log] = strip_for_parsing(sentence);
    if (core.size() == 0) return all_punct_fallback(sentence);
    if (log.removed.empty()) return decode_sentence(model, core);
    Sentence parsed_core = decode_sentence(model, core);
    Sentence out = attach_stripped(parsed_core, log);
    out.comments = sentence.comments;
    return out;
}

Document parse_document(const ParserModel& model, const Document& document) {
    Document out;
    out.source_name = document.source_name;
    out.sentences.reserve(document.sentences.size());
    for (const Sentence& s : document.sentences) out.sentences.push_back(parse(model, s));
    return out;
}

ParserModel train(const std::vector<Document>& documents, int epochs, Mode mode,
                  std::uint64_t seed) {
    if (epochs < 1) throw ContractViolation("train: epochs must be >= 1");

    TrainingMeta meta;
    meta.epochs = epochs;
    meta.seed = seed;

    std::vector<Sentence> instances;
    for (const Document& doc : documents) {
        for (const Sentence& s : doc.sentences) {
            if (mode == Mode::NoPunct) {
                try {
                    instances.push_back(strip_punct(s, PunctClass::DotsAndCommas).first);
                } catch (const DataError&) {
                    ++meta.skipped_unstrippable;
                }
            } else {
                instances.push_back(s);
            }
        }
    }

    std::vector<const Sentence*> kept;
    for (const Sentence& s : instances) {
        if (is_projective(s)) {
            kept.push_back(&s);
        } else {
            ++meta.skipped_nonprojective;
        }
    }
    if (kept.empty()) {
        throw DataError("train: no projective training sentence survives");
    }

    ParserModel model;
    model.mode = mode;
    model.meta = meta;
    {
        std::vector<std::string> labels;
        for (const Sentence* s : kept) {
            for (const Token& t : s->tokens) labels.push_back(t.deprel);
        }
        std::sort(labels.begin(), labels.end());
        labels.erase(std::unique(labels.begin(), labels.end()), labels.end());
        model.label_set = std::move(labels);
    }
    const int num_t = model.num_transitions();
    const int L = static_cast<int>(model.label_set.size());

    std::vector<std::vector<Transition>> oracle;
    oracle.reserve(kept.size());
    for (const Sentence* s : kept) oracle.push_back(oracle_transitions(*s));

    // averaged perceptron with the lazy accumulator trick:
    // avg = w - u / T, where u collects timestamp-weighted updates
    std::unordered_map<std::string, std::vector<double>> w, u;
    long long now = 0;
    auto bump = [&](const std::string& f, int t, double delta) {
        std::vector<double>& wf = w[f];
        if (wf.empty()) wf.assign(static_cast<size_t>(num_t), 0.0);
        std::vector<double>& uf = u[f];
        if (uf.empty()) uf.assign(static_cast<size_t>(num_t), 0.0);
        wf[static_cast<size_t>(t)] += delta;
        uf[static_cast<size_t>(t)] += static_cast<double>(now) * delta;
    };

    Rng rng(derive_seed(seed, 0x7261696e));
    std::vector<size_t> order(kept.size());
    for (size_t i = 0; i < order.size(); ++i) order[i] = i;

    std::vector<std::string> feats;
    std::vector<double> score(static_cast<size_t>(num_t));
    for (int epoch = 0; epoch < epochs; ++epoch) {
        rng.shuffle(order);
        for (size_t idx : order) {
            const Sentence& sent = *kept[idx];
            State state(sent.size());
            for (const Transition& gold : oracle[idx]) {
                ++now;
                extract_features(state, sent, feats);
                std::fill(score.begin(), score.end(), 0.0);
                for (const std::string& f : feats) {
                    auto it = w.find(f);
                    if (it == w.end()) continue;
                    for (int t = 0; t < num_t; ++t)
                        score[static_cast<size_t>(t)] += it->second[static_cast<size_t>(t)];
                }
                int best = -1;
                for (int t = 0; t < num_t; ++t) {
                    if (!state.permissible(kind_at(t, L))) continue;
                    if (best < 0 ||
                        score[static_cast<size_t>(t)] > score[static_cast<size_t>(best)])
                        best = t;
                }
                const int gold_idx = transition_index(gold, model.label_set);
                if (best != gold_idx) {
                    for (const std::string& f : feats) {
                        bump(f, gold_idx, 1.0);
                        bump(f, best, -1.0);
                    }
                }
                state.apply(gold);
            }
        }
    }

    for (auto& [f, wf] : w) {
        const std::vector<double>& uf = u[f];
        std::vector<double> avg(wf.size());
        for (size_t t = 0; t < wf.size(); ++t) {
            avg[t] = wf[t] - uf[t] / static_cast<double>(now);
        }
        model.weights.emplace(f, std::move(avg));
    }
    return model;
}

void save_model(const ParserModel& model, std::ostream& out) {
    // weight vectors are sparse after averaging; store only nonzero entries
    nlohmann::json weights(nlohmann::json::value_t::object);
    for (const auto& [f, wf] : model.weights) {
        nlohmann::json entry(nlohmann::json::value_t::object);
        for (size_t t = 0; t < wf.size(); ++t) {
            if (wf[t] != 0.0) entry[std::to_string(t)] = wf[t];
        }
        if (!entry.empty()) weights[f] = std::move(entry);
    }
    nlohmann::json j{
        {"format", "punct-parser-model"},
        {"version", 1},
        {"feature_version", model.feature_version},
        {"mode", to_string(model.mode)},
        {"label_set", model.label_set},
        {"meta",
         {{"epochs", model.meta.epochs},
          {"seed", model.meta.seed},
          {"skipped_nonprojective", model.meta.skipped_nonprojective},
          {"skipped_unstrippable", model.meta.skipped_unstrippable}}},
        {"weights", std::move(weights)},
    };
    out << j.dump() << "\n";
}

void save_model_file(const ParserModel& model, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot open " + path + " for writing");
    save_model(model, out);
    if (!out) throw DataError("write to " + path + " failed");
}

ParserModel load_model(std::istream& in) {
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw DataError(std::string("model file is not valid JSON: ") + e.what());
    }
    if (j.value("format", "") != "punct-parser-model" || j.value("version", 0) != 1) {
        throw DataError("unrecognized model file format/version");
    }
    ParserModel model;
    model.feature_version = j.at("feature_version").get<int>();
    model.mode = mode_from_string(j.at("mode").get<std::string>());
    model.label_set = j.at("label_set").get<std::vector<std::string>>();
    if (!std::is_sorted(model.label_set.begin(), model.label_set.end())) {
        throw DataError("model label_set is not sorted");
    }
    const auto& meta = j.at("meta");
    model.meta.epochs = meta.at("epochs").get<int>();
    model.meta.seed = meta.at("seed").get<std::uint64_t>();
    model.meta.skipped_nonprojective = meta.at("skipped_nonprojective").get<int>();
    model.meta.skipped_unstrippable = meta.at("skipped_unstrippable").get<int>();
    const size_t num_t = static_cast<size_t>(model.num_transitions());
    for (const auto& [f, entry] : j.at("weights").items()) {
        std::vector<double> vec(num_t, 0.0);
        for (const auto& [t_str, value] : entry.items()) {
            size_t t = 0;
            try {
                t = std::stoul(t_str);
            } catch (const std::exception&) {
                throw DataError("bad transition index \"" + t_str + "\" in model");
            }
            if (t >= num_t) {
                throw DataError("transition index " + t_str + " out of range in model");
            }
            vec[t] = value.get<double>();
        }
        model.weights.emplace(f, std::move(vec));
    }
    return model;
}

ParserModel load_model_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open " + path + " for reading");
    return load_model(in);
}

}  // namespace punct
