#include "punct/eval.hpp"

#include <cstdio>
#include <sstream>

#include "punct/errors.hpp"

namespace punct {

namespace {

std::vector<int> nonpunct_ids(const Sentence& s, PunctClass pc) {
    std::vector<int> ids;
    for (const Token& t : s.tokens) {
        if (!is_punct(t, pc)) ids.push_back(t.id);
    }
    return ids;
}

// Nearest non-punct ancestor of token id; 0 when the chain ends at the root.
int lift_nonpunct(const Sentence& s, int id, PunctClass pc) {
    int cur = id;
    while (cur != 0 && is_punct(s.at(cur), pc)) cur = s.at(cur).head;
    return cur;
}

bool same_token_sequence(const Sentence& a, const Sentence& b) {
    if (a.size() != b.size()) return false;
    for (int i = 0; i < a.size(); ++i) {
        if (a.tokens[static_cast<size_t>(i)].form != b.tokens[static_cast<size_t>(i)].form)
            return false;
    }
    return true;
}

}  // namespace

Alignment align_nonpunct(const Sentence& gold, const Sentence& system,
                         PunctClass punct_class) {
    const std::vector<int> g = nonpunct_ids(gold, punct_class);
    const std::vector<int> s = nonpunct_ids(system, punct_class);
    const size_t common = std::min(g.size(), s.size());
    for (size_t k = 0; k < common; ++k) {
        const std::string& gf = gold.at(g[k]).form;
        const std::string& sf = system.at(s[k]).form;
        if (gf != sf) {
            throw AlignmentError("non-punctuation token " + std::to_string(k + 1) +
                                 " diverges: gold \"" + gf + "\" vs system \"" + sf +
                                 "\"");
        }
    }
    if (g.size() != s.size()) {
        throw AlignmentError("non-punctuation token counts differ: gold " +
                             std::to_string(g.size()) + " vs system " +
                             std::to_string(s.size()));
    }
    Alignment alignment;
    alignment.pairs.reserve(common);
    for (size_t k = 0; k < common; ++k) alignment.pairs.emplace_back(g[k], s[k]);
    return alignment;
}

namespace {

SentenceScore score_sentence(const Sentence& gold, const Sentence& system,
                             PunctClass pc) {
    // Identical token sequences score by plain position comparison (the
    // identity alignment); otherwise tokens are matched through the
    // non-punct alignment.
    Alignment alignment;
    if (same_token_sequence(gold, system)) {
        for (const Token& t : gold.tokens) {
            if (!is_punct(t, pc)) alignment.pairs.emplace_back(t.id, t.id);
        }
    } else {
        alignment = align_nonpunct(gold, system, pc);
    }
    // image of each aligned gold token in the system sentence
    std::vector<int> image(static_cast<size_t>(gold.size()) + 1, 0);
    for (const auto& [gid, sid] : alignment.pairs) image[static_cast<size_t>(gid)] = sid;

    SentenceScore score;
    for (const auto& [gid, sid] : alignment.pairs) {
        ++score.scored;
        const int gh = gold.at(gid).head;
        const int sh = system.at(sid).head;
        bool head_ok;
        if (gh == 0) {
            head_ok = sh == 0;
        } else if (is_punct(gold.at(gh), pc)) {
            // nonstandard gold head: both sides are judged by the nearest
            // surviving (non-punct) ancestor
            const int glift = lift_nonpunct(gold, gh, pc);
            const int slift =
                sh == 0 || !is_punct(system.at(sh), pc) ? sh : lift_nonpunct(system, sh, pc);
            head_ok = glift == 0 ? slift == 0
                                 : image[static_cast<size_t>(glift)] == slift;
        } else {
            head_ok = image[static_cast<size_t>(gh)] == sh;
        }
        if (head_ok) {
            ++score.head_correct;
            if (gold.at(gid).deprel == system.at(sid).deprel) ++score.both_correct;
        }
    }
    return score;
}

}  // namespace

EvalReport attachment_scores(const Document& gold, const Document& system,
                             PunctClass punct_class) {
    if (gold.sentences.size() != system.sentences.size()) {
        throw AlignmentError("sentence counts differ: gold " +
                             std::to_string(gold.sentences.size()) + " vs system " +
                             std::to_string(system.sentences.size()));
    }
    EvalReport report;
    long head_correct = 0;
    long both_correct = 0;
    for (size_t i = 0; i < gold.sentences.size(); ++i) {
        SentenceScore score;
        try {
            score = score_sentence(gold.sentences[i], system.sentences[i], punct_class);
        } catch (const AlignmentError& e) {
            throw AlignmentError("sentence " + std::to_string(i + 1) + ": " + e.what());
        }
        report.per_sentence.push_back(score);
        report.scored_tokens += score.scored;
        head_correct += score.head_correct;
        both_correct += score.both_correct;
    }
    if (report.scored_tokens > 0) {
        report.uas = static_cast<double>(head_correct) /
                     static_cast<double>(report.scored_tokens);
        report.las = static_cast<double>(both_correct) /
                     static_cast<double>(report.scored_tokens);
    }
    return report;
}

SentenceFilter sentence_filter_from_string(const std::string& name) {
    if (name == "all") return SentenceFilter::All;
    if (name == "no-punct-5plus") return SentenceFilter::NoPunctAtLeast5;
    if (name == "multi-dot") return SentenceFilter::MultiDot;
    throw UsageError("unknown sentence filter \"" + name +
                     "\" (expected all|no-punct-5plus|multi-dot)");
}

bool passes_filter(const Sentence& sentence, SentenceFilter filter,
                   PunctClass punct_class) {
    switch (filter) {
        case SentenceFilter::All:
            return true;
        case SentenceFilter::NoPunctAtLeast5: {
            if (sentence.size() < 5) return false;
            for (const Token& t : sentence.tokens) {
                if (is_punct(t, punct_class)) return false;
            }
            return true;
        }
        case SentenceFilter::MultiDot: {
            int dots = 0;
            for (const Token& t : sentence.tokens) {
                if (t.form == ".") ++dots;
            }
            return dots > 1;
        }
    }
    return true;
}

std::pair<Document, Document> filter_pairs(const Document& gold, const Document& system,
                                           SentenceFilter filter, PunctClass punct_class) {
    if (gold.sentences.size() != system.sentences.size()) {
        throw AlignmentError("sentence counts differ: gold " +
                             std::to_string(gold.sentences.size()) + " vs system " +
                             std::to_string(system.sentences.size()));
    }
    Document g, s;
    g.source_name = gold.source_name;
    s.source_name = system.source_name;
    for (size_t i = 0; i < gold.sentences.size(); ++i) {
        if (passes_filter(gold.sentences[i], filter, punct_class)) {
            g.sentences.push_back(gold.sentences[i]);
            s.sentences.push_back(system.sentences[i]);
        }
    }
    return {std::move(g), std::move(s)};
}

double relative_error_increase(double bl, double sys) {
    if (bl >= 1.0) {
        throw UndefinedMetricError(
            "relative error increase is undefined for a perfect baseline");
    }
    return (1.0 - sys) / (1.0 - bl) - 1.0;
}

RobustnessReport robustness_report(const EvalReport& baseline,
                                   const std::map<std::string, EvalReport>& conditions) {
    if (baseline.las >= 1.0 && !conditions.empty()) {
        throw UndefinedMetricError(
            "robustness report is undefined for a perfect baseline");
    }
    RobustnessReport report;
    report.baseline_las = baseline.las;
    for (const auto& [name, eval] : conditions) {
        report.condition_las[name] = eval.las;
        report.rel_err_increase[name] = relative_error_increase(baseline.las, eval.las);
    }
    return report;
}

std::string render_robustness_table(const RobustnessReport& report) {
    size_t width = std::string("condition").size();
    for (const auto& [name, _] : report.condition_las) width = std::max(width, name.size());
    width = std::max(width, std::string("baseline").size());

    std::ostringstream out;
    char buf[64];
    auto row = [&](const std::string& name, double las, const char* rel) {
        out << name;
        out << std::string(width - name.size() + 2, ' ');
        std::snprintf(buf, sizeof buf, "%7.3f  %12s", las, rel);
        out << buf << "\n";
    };
    out << "condition" << std::string(width - 9 + 2, ' ')
        << "    LAS  Rel.err.incr.\n";
    row("baseline", report.baseline_las, "-");
    for (const auto& [name, las] : report.condition_las) {
        std::snprintf(buf, sizeof buf, "%.3f", report.rel_err_increase.at(name));
        std::string rel = buf;
        row(name, las, rel.c_str());
    }
    return out.str();
}

}  // namespace punct
