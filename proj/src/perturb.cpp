#include "punct/perturb.hpp"

#include <algorithm>

#include "punct/errors.hpp"
#include "punct/rng.hpp"

namespace punct {

std::pair<Sentence, StripLog> strip_punct(const Sentence& sentence,
                                          PunctClass punct_class) {
    require_valid(sentence, "strip_punct");
    const int n = sentence.size();

    std::vector<bool> removed(static_cast<size_t>(n) + 1, false);
    int kept = 0;
    for (const Token& t : sentence.tokens) {
        if (is_punct(t, punct_class)) {
            removed[static_cast<size_t>(t.id)] = true;
        } else {
            ++kept;
        }
    }
    if (kept == 0) {
        throw DataError("strip_punct: sentence consists entirely of punctuation");
    }
    const int root = sentence.root_id();
    if (removed[static_cast<size_t>(root)]) {
        throw DataError("strip_punct: root token " + std::to_string(root) + " (\"" +
                        sentence.at(root).form + "\") matches the punctuation class");
    }

    // new_id[old] = compacted id, 0 for removed tokens
    std::vector<int> new_id(static_cast<size_t>(n) + 1, 0);
    int next = 0;
    for (int id = 1; id <= n; ++id) {
        if (!removed[static_cast<size_t>(id)]) new_id[static_cast<size_t>(id)] = ++next;
    }

    Sentence out;
    out.comments = sentence.comments;
    StripLog log;
    for (const Token& t : sentence.tokens) {
        if (removed[static_cast<size_t>(t.id)]) {
            log.removed.push_back({t.id, t.form, t.head, t.deprel});
            continue;
        }
        Token copy = t;
        copy.id = new_id[static_cast<size_t>(t.id)];
        int head = t.head;
        bool lifted = false;
        while (head != 0 && removed[static_cast<size_t>(head)]) {
            head = sentence.at(head).head;
            lifted = true;
        }
        if (lifted) ++log.lifted_dependents;
        copy.head = head == 0 ? 0 : new_id[static_cast<size_t>(head)];
        out.tokens.push_back(std::move(copy));
    }
    require_valid(out, "strip_punct output");
    return {std::move(out), std::move(log)};
}

namespace {

struct WorkEntry {
    Token token;
    int head_handle;  // index into the work list, -1 for head 0
    bool injected;
};

Token make_punct_token(std::string form) {
    Token t;
    t.form = std::move(form);
    t.lemma = "_";
    t.upos = "PUNCT";
    t.xpos = "_";
    t.feats = "_";
    t.deprel = "punct";
    t.deps = "_";
    t.misc = "_";
    return t;
}

}  // namespace

std::pair<Sentence, InjectLog> apply_injections(const Sentence& sentence,
                                                const std::vector<Injection>& sites) {
    require_valid(sentence, "apply_injections");
    const int n = sentence.size();
    const bool was_projective = is_projective(sentence);
    const int root = sentence.root_id();

    // Heads are tracked as handles into the work list so that later
    // insertions cannot invalidate earlier attachments.
    std::vector<WorkEntry> work;
    work.reserve(sentence.tokens.size() + sites.size());
    std::vector<int> handle_of(static_cast<size_t>(n) + 1, -1);
    for (const Token& t : sentence.tokens) {
        handle_of[static_cast<size_t>(t.id)] = static_cast<int>(work.size());
        work.push_back({t, t.head, false});
    }
    for (WorkEntry& e : work) {
        // original tokens appear in id order, so heads resolve in one pass
        e.head_handle =
            e.head_handle == 0 ? -1 : handle_of[static_cast<size_t>(e.head_handle)];
    }

    // Order of the output sequence as work-list indices.
    std::vector<int> order(work.size());
    for (size_t i = 0; i < order.size(); ++i) order[i] = static_cast<int>(i);

    auto position_in_order = [&order](int handle) {
        return static_cast<int>(std::find(order.begin(), order.end(), handle) -
                                order.begin());
    };

    int last_node = 0;
    bool last_was_comma_before = false;
    for (const Injection& site : sites) {
        if (site.node < 1 || site.node > n) {
            throw ContractViolation("apply_injections: node index out of range");
        }
        const bool comma = site.kind == Injection::Kind::CommaBefore;
        if (site.node < last_node ||
            (site.node == last_node && comma && !last_was_comma_before)) {
            throw ContractViolation("apply_injections: sites out of order");
        }
        last_node = site.node;
        last_was_comma_before = comma;

        const int anchor = handle_of[static_cast<size_t>(site.node)];
        const int anchor_pos = position_in_order(anchor);
        const int new_handle = static_cast<int>(work.size());

        if (comma) {
            // attach to the token immediately to the left, root fallback
            const int head_handle =
                anchor_pos == 0 ? handle_of[static_cast<size_t>(root)]
                                : order[static_cast<size_t>(anchor_pos) - 1];
            work.push_back({make_punct_token(","), head_handle, true});
            order.insert(order.begin() + anchor_pos, new_handle);
        } else {
            work.push_back(
                {make_punct_token("."), handle_of[static_cast<size_t>(root)], true});
            order.insert(order.begin() + anchor_pos + 1, new_handle);
        }
    }

    std::vector<int> position(work.size());
    for (size_t pos = 0; pos < order.size(); ++pos) {
        position[static_cast<size_t>(order[pos])] = static_cast<int>(pos) + 1;
    }

    Sentence out;
    out.comments = sentence.comments;
    out.tokens.reserve(order.size());
    InjectLog log;
    for (size_t pos = 0; pos < order.size(); ++pos) {
        const WorkEntry& e = work[static_cast<size_t>(order[pos])];
        Token t = e.token;
        t.id = static_cast<int>(pos) + 1;
        t.head = e.head_handle < 0 ? 0 : position[static_cast<size_t>(e.head_handle)];
        if (e.injected) {
            log.injected.push_back({t.id, t.form, t.head});
        }
        out.tokens.push_back(std::move(t));
    }

    require_valid(out, "apply_injections output");
    log.made_nonprojective = was_projective && !is_projective(out);
    return {std::move(out), std::move(log)};
}

std::pair<Sentence, InjectLog> inject_punct(const Sentence& sentence,
                                            const PerturbConfig& config,
                                            std::uint64_t sentence_ordinal) {
    if (config.chi < 0.0 || config.chi > 1.0 || config.delta < 0.0 ||
        config.delta > 1.0) {
        throw ContractViolation("inject_punct: chi and delta must lie in [0,1]");
    }
    require_valid(sentence, "inject_punct");

    Rng rng(derive_seed(config.master_seed, sentence_ordinal));
    std::vector<Injection> sites;
    for (int i = 1; i <= sentence.size(); ++i) {
        if (rng.bernoulli(config.chi)) sites.push_back({i, Injection::Kind::CommaBefore});
        if (rng.bernoulli(config.delta)) sites.push_back({i, Injection::Kind::DotAfter});
    }
    return apply_injections(sentence, sites);
}

Sentence attach_stripped(const Sentence& parsed_core, const StripLog& strip_log) {
    require_valid(parsed_core, "attach_stripped");
    const int m = parsed_core.size();
    const int total = m + static_cast<int>(strip_log.removed.size());

    if (m == 0) throw AlignmentError("attach_stripped: empty core");
    int prev = 0;
    for (const StripLog::Removed& r : strip_log.removed) {
        if (r.original_position <= prev || r.original_position > total) {
            throw AlignmentError("attach_stripped: removed position " +
                                 std::to_string(r.original_position) +
                                 " inconsistent with core of length " + std::to_string(m));
        }
        prev = r.original_position;
    }

    // Map core ids to original positions by filling the non-removed slots.
    std::vector<bool> is_removed_pos(static_cast<size_t>(total) + 1, false);
    for (const StripLog::Removed& r : strip_log.removed) {
        is_removed_pos[static_cast<size_t>(r.original_position)] = true;
    }
    std::vector<int> core_to_full(static_cast<size_t>(m) + 1, 0);
    int next_core = 1;
    for (int pos = 1; pos <= total; ++pos) {
        if (!is_removed_pos[static_cast<size_t>(pos)]) {
            core_to_full[static_cast<size_t>(next_core++)] = pos;
        }
    }

    const int core_root = parsed_core.root_id();
    const int full_root = core_to_full[static_cast<size_t>(core_root)];

    std::vector<Token> tokens(static_cast<size_t>(total));
    for (const Token& t : parsed_core.tokens) {
        Token copy = t;
        copy.id = core_to_full[static_cast<size_t>(t.id)];
        copy.head = t.head == 0 ? 0 : core_to_full[static_cast<size_t>(t.head)];
        tokens[static_cast<size_t>(copy.id) - 1] = std::move(copy);
    }
    for (const StripLog::Removed& r : strip_log.removed) {
        Token t = make_punct_token(r.form);
        t.id = r.original_position;
        if (r.form == ".") {
            t.head = full_root;
        } else {
            t.head = t.id == 1 ? full_root : t.id - 1;
        }
        tokens[static_cast<size_t>(t.id) - 1] = std::move(t);
    }

    Sentence out;
    out.comments = parsed_core.comments;
    out.tokens = std::move(tokens);
    require_valid(out, "attach_stripped output");
    return out;
}

std::pair<Document, StripStats> strip_document(const Document& document,
                                               PunctClass punct_class) {
    Document out;
    out.source_name = document.source_name;
    StripStats stats;
    for (size_t i = 0; i < document.sentences.size(); ++i) {
        try {
            auto [sent, log] = strip_punct(document.sentences[i], punct_class);
            stats.removed_tokens += static_cast<long>(log.removed.size());
            stats.lifted_dependents += log.lifted_dependents;
            out.sentences.push_back(std::move(sent));
        } catch (const DataError& e) {
            throw DataError("sentence " + std::to_string(i + 1) + ": " + e.what());
        }
    }
    return {std::move(out), stats};
}

std::pair<Document, InjectStats> inject_document(const Document& document,
                                                 const PerturbConfig& config) {
    Document out;
    out.source_name = document.source_name;
    InjectStats stats;
    for (size_t i = 0; i < document.sentences.size(); ++i) {
        auto [sent, log] = inject_punct(document.sentences[i], config, i);
        stats.injected_tokens += static_cast<long>(log.injected.size());
        for (const auto& inj : log.injected) {
            if (inj.form == ",") ++stats.injected_commas;
            if (inj.form == ".") ++stats.injected_dots;
        }
        if (log.made_nonprojective) ++stats.sentences_made_nonprojective;
        out.sentences.push_back(std::move(sent));
    }
    return {std::move(out), stats};
}

}  // namespace punct
