// Deterministic generator for the bundled English-like dependency treebank.
// Trees follow the Stanford-style punctuation conventions the toolkit
// assumes: sentence-final dots attach to the root token, commas to their
// left neighbor. Comma-bearing constructions (appositions, fronted
// adverbial clauses, coordination, lists) are frequent on purpose, so a
// parser trained on this data has a real punctuation signal to lose.

#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "punct/conll.hpp"
#include "punct/perturb.hpp"
#include "punct/rng.hpp"
#include "punct/tree.hpp"

namespace {

using punct::Rng;
using punct::Sentence;
using punct::StripLog;
using punct::Token;

const std::vector<std::string> kNames = {"John", "Mary",  "Sarah", "Peter",
                                         "Anna", "Tom",   "Lucy",  "Mark",
                                         "Emma", "Paul",  "Nora",  "James"};
const std::vector<std::string> kNouns = {
    "dog",    "cat",    "bird",   "farmer", "teacher", "student", "report",
    "piano",  "garden", "letter", "river",  "story",   "house",   "child",
    "doctor", "song",   "market", "road",   "winter",  "meeting", "coffee",
    "fence",  "engine", "harvest", "painting"};
const std::vector<std::string> kIntransVerbs = {"sleeps", "laughs", "arrives",
                                                "waits",  "sings",  "falls",
                                                "runs",   "smiles", "works"};
const std::vector<std::string> kTransVerbs = {"likes",  "sees",   "writes", "reads",
                                              "buys",   "builds", "paints", "hears",
                                              "finds",  "helps",  "visits", "watches"};
const std::vector<std::string> kAdjs = {"old",   "young", "small",  "big",
                                        "quiet", "bright", "tired", "happy",
                                        "green", "cold",  "busy",   "gentle"};
const std::vector<std::string> kAdvs = {"often", "quietly", "slowly",    "today",
                                        "yesterday", "carefully", "soon"};
const std::vector<std::string> kPreps = {"in", "on", "near", "with", "under", "behind"};
const std::vector<std::string> kDets = {"the", "a", "this", "every"};
const std::vector<std::string> kNums = {"27", "3", "14", "52", "8", "91"};
const std::vector<std::string> kSconjs = {"when", "while", "because", "if"};

const std::string& pick(Rng& rng, const std::vector<std::string>& items) {
    return items[static_cast<size_t>(rng.below(items.size()))];
}

// Dependency node; pre/post children linearize around it in listed order.
struct GNode {
    std::string form;
    std::string upos;
    std::string deprel;
    std::vector<GNode> pre;
    std::vector<GNode> post;
    bool comma_after = false;
};

GNode leaf(std::string form, std::string upos, std::string deprel) {
    return {std::move(form), std::move(upos), std::move(deprel), {}, {}, false};
}

// Flags the token that ends this subtree in linear order.
void flag_comma_after_last(GNode& node) {
    if (node.post.empty()) {
        node.comma_after = true;
    } else {
        flag_comma_after_last(node.post.back());
    }
}

int emit(const GNode& node, std::vector<Token>& out, std::vector<int>& comma_after) {
    std::vector<int> pre_positions;
    for (const GNode& child : node.pre) {
        pre_positions.push_back(emit(child, out, comma_after));
    }
    Token tok;
    tok.id = static_cast<int>(out.size()) + 1;
    tok.form = node.form;
    tok.upos = node.upos;
    tok.deprel = node.deprel;
    tok.head = 0;  // assigned by the parent
    const int pos = tok.id;
    out.push_back(std::move(tok));
    if (node.comma_after) comma_after.push_back(pos);
    for (int child_pos : pre_positions) {
        out[static_cast<size_t>(child_pos) - 1].head = pos;
    }
    for (const GNode& child : node.post) {
        const int child_pos = emit(child, out, comma_after);
        out[static_cast<size_t>(child_pos) - 1].head = pos;
    }
    return pos;
}

GNode make_np(Rng& rng, const std::string& deprel) {
    if (rng.bernoulli(0.3)) {
        return leaf(pick(rng, kNames), "PROPN", deprel);
    }
    GNode head = leaf(pick(rng, kNouns), "NOUN", deprel);
    head.pre.push_back(leaf(pick(rng, kDets), "DET", "det"));
    if (rng.bernoulli(0.35)) {
        head.pre.push_back(leaf(pick(rng, kAdjs), "ADJ", "amod"));
    }
    return head;
}

GNode make_pp(Rng& rng, const std::string& deprel) {
    GNode prep = leaf(pick(rng, kPreps), "ADP", deprel);
    prep.post.push_back(make_np(rng, "pobj"));
    return prep;
}

// Simple clause; root deprel filled by the caller.
GNode make_clause(Rng& rng, const std::string& deprel, bool allow_pp = true) {
    const bool transitive = rng.bernoulli(0.55);
    GNode verb = leaf(pick(rng, transitive ? kTransVerbs : kIntransVerbs), "VERB", deprel);
    verb.pre.push_back(make_np(rng, "nsubj"));
    if (transitive) {
        GNode obj = make_np(rng, "dobj");
        if (allow_pp && rng.bernoulli(0.2)) {
            // genuinely ambiguous attachment site keeps accuracy off the ceiling
            obj.post.push_back(make_pp(rng, "prep"));
        }
        verb.post.push_back(std::move(obj));
    }
    if (allow_pp && rng.bernoulli(0.25)) {
        verb.post.push_back(make_pp(rng, "prep"));
    }
    if (rng.bernoulli(0.25)) {
        if (rng.bernoulli(0.5)) {
            verb.pre.insert(verb.pre.begin(), leaf(pick(rng, kAdvs), "ADV", "advmod"));
        } else {
            verb.post.push_back(leaf(pick(rng, kAdvs), "ADV", "advmod"));
        }
    }
    return verb;
}

GNode make_apposition_clause(Rng& rng) {
    GNode verb = leaf(pick(rng, kTransVerbs), "VERB", "root");
    GNode subj = leaf(pick(rng, kNames), "PROPN", "nsubj");
    subj.comma_after = true;
    GNode num = leaf(pick(rng, kNums), "NUM", "appos");
    num.comma_after = true;
    subj.post.push_back(std::move(num));
    verb.pre.push_back(std::move(subj));
    verb.post.push_back(make_np(rng, "dobj"));
    return verb;
}

GNode make_fronted_advcl(Rng& rng) {
    GNode sub = make_clause(rng, "advcl", false);
    sub.pre.insert(sub.pre.begin(), leaf(pick(rng, kSconjs), "SCONJ", "mark"));
    flag_comma_after_last(sub);
    GNode main = make_clause(rng, "root");
    main.pre.insert(main.pre.begin(), std::move(sub));
    return main;
}

GNode make_trailing_advcl(Rng& rng) {
    GNode main = make_clause(rng, "root", false);
    GNode sub = make_clause(rng, "advcl", false);
    sub.pre.insert(sub.pre.begin(), leaf(pick(rng, kSconjs), "SCONJ", "mark"));
    main.post.push_back(std::move(sub));
    return main;
}

GNode make_coordination(Rng& rng) {
    GNode first = make_clause(rng, "root", false);
    flag_comma_after_last(first);
    GNode second = make_clause(rng, "conj", false);
    first.post.push_back(leaf(rng.bernoulli(0.7) ? "and" : "but", "CCONJ", "cc"));
    first.post.push_back(std::move(second));
    return first;
}

GNode make_list_clause(Rng& rng) {
    const int items = rng.bernoulli(0.5) ? 3 : 2;
    GNode head_noun = leaf(pick(rng, kNouns), "NOUN", "nsubj");
    head_noun.comma_after = true;
    for (int i = 1; i < items; ++i) {
        if (i == items - 1) {
            head_noun.post.push_back(leaf("and", "CCONJ", "cc"));
            head_noun.post.push_back(leaf(pick(rng, kNouns), "NOUN", "conj"));
        } else {
            GNode mid = leaf(pick(rng, kNouns), "NOUN", "conj");
            mid.comma_after = true;
            head_noun.post.push_back(std::move(mid));
        }
    }
    GNode verb = leaf(pick(rng, kIntransVerbs), "VERB", "root");
    verb.pre.push_back(std::move(head_noun));
    if (rng.bernoulli(0.3)) verb.post.push_back(leaf(pick(rng, kAdvs), "ADV", "advmod"));
    return verb;
}

GNode make_numeric_object(Rng& rng) {
    GNode verb = leaf(pick(rng, kTransVerbs), "VERB", "root");
    verb.pre.push_back(make_np(rng, "nsubj"));
    GNode obj = leaf(pick(rng, kNouns), "NOUN", "dobj");
    obj.pre.push_back(leaf(pick(rng, kNums), "NUM", "num"));
    verb.post.push_back(std::move(obj));
    return verb;
}

// Extraposed relative clause; crosses the root arc.
Sentence make_nonprojective(Rng& rng) {
    Sentence sent;
    auto add = [&sent](const std::string& form, const std::string& upos, int head,
                       const std::string& deprel) {
        Token t;
        t.id = sent.size() + 1;
        t.form = form;
        t.upos = upos;
        t.head = head;
        t.deprel = deprel;
        sent.tokens.push_back(std::move(t));
    };
    add("a", "DET", 2, "det");
    add(pick(rng, kNouns), "NOUN", 3, "nsubj");
    add(pick(rng, kIntransVerbs), "VERB", 0, "root");
    add(pick(rng, kAdvs), "ADV", 3, "advmod");
    add("which", "PRON", 6, "nsubj");
    add(pick(rng, kIntransVerbs), "VERB", 2, "acl");
    add(".", "PUNCT", 3, "punct");
    return sent;
}

Sentence realize(const GNode& root, bool final_dot) {
    std::vector<Token> core;
    std::vector<int> comma_after;
    emit(root, core, comma_after);

    Sentence core_sent;
    core_sent.tokens = std::move(core);

    // Reuse the reattachment conventions to place the punctuation: commas
    // after the flagged tokens, optionally a final dot.
    StripLog log;
    const int num_commas = static_cast<int>(comma_after.size());
    for (int i = 0; i < num_commas; ++i) {
        log.removed.push_back({comma_after[static_cast<size_t>(i)] + i + 1, ",", 0, "punct"});
    }
    if (final_dot) {
        log.removed.push_back({core_sent.size() + num_commas + 1, ".", 0, "punct"});
    }
    if (log.removed.empty()) return core_sent;
    return punct::attach_stripped(core_sent, log);
}

Sentence generate_sentence(Rng& rng) {
    const double roll = rng.uniform();
    if (roll < 0.01) return make_nonprojective(rng);
    GNode root;
    if (roll < 0.31) {
        root = make_clause(rng, "root");
    } else if (roll < 0.49) {
        root = make_apposition_clause(rng);
    } else if (roll < 0.62) {
        root = make_fronted_advcl(rng);
    } else if (roll < 0.69) {
        root = make_trailing_advcl(rng);
    } else if (roll < 0.81) {
        root = make_coordination(rng);
    } else if (roll < 0.93) {
        root = make_list_clause(rng);
    } else {
        root = make_numeric_object(rng);
    }
    return realize(root, rng.bernoulli(0.9));
}

punct::Document generate(Rng& rng, int count, const std::string& id_prefix) {
    punct::Document doc;
    for (int i = 0; i < count; ++i) {
        Sentence sent = generate_sentence(rng);
        sent.comments.push_back("# sent_id = " + id_prefix + "-" + std::to_string(i + 1));
        doc.sentences.push_back(std::move(sent));
    }
    return doc;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"generate the bundled synthetic dependency treebank"};
    std::string train_path = "data/train.conllu";
    std::string test_path = "data/test.conllu";
    int train_n = 3000;
    int test_n = 800;
    std::uint64_t seed = 7;
    app.add_option("--out-train", train_path, "training treebank path");
    app.add_option("--out-test", test_path, "test treebank path");
    app.add_option("--train-n", train_n, "number of training sentences");
    app.add_option("--test-n", test_n, "number of test sentences");
    app.add_option("--seed", seed, "generator seed");
    CLI11_PARSE(app, argc, argv);

    Rng rng(punct::splitmix64(seed));
    punct::Document train_doc = generate(rng, train_n, "synth-train");
    punct::Document test_doc = generate(rng, test_n, "synth-test");
    punct::write_conll_file(train_doc, train_path);
    punct::write_conll_file(test_doc, test_path);
    std::cout << "wrote " << train_n << " sentences to " << train_path << " and " << test_n
              << " to " << test_path << "\n";
    return 0;
}
