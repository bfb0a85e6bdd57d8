#ifndef PUNCT_EVAL_HPP
#define PUNCT_EVAL_HPP

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "punct/conll.hpp"
#include "punct/tree.hpp"

namespace punct {

// In-order pairing of gold and system non-punctuation tokens (1-based ids).
struct Alignment {
    std::vector<std::pair<int, int>> pairs;
};

// Matches non-punctuation tokens of both sentences in order by surface form.
// Throws AlignmentError naming the first divergence.
Alignment align_nonpunct(const Sentence& gold, const Sentence& system,
                         PunctClass punct_class);

struct SentenceScore {
    int scored = 0;
    int head_correct = 0;
    int both_correct = 0;
};

struct EvalReport {
    long scored_tokens = 0;
    double uas = 0.0;
    double las = 0.0;
    std::vector<SentenceScore> per_sentence;
};

// Punctuation-excluded micro-averaged attachment scores. When gold and
// system token sequences are identical, heads are compared by position;
// otherwise through the non-punct alignment, lifting punctuation heads to
// their nearest non-punct ancestor on both sides.
EvalReport attachment_scores(const Document& gold, const Document& system,
                             PunctClass punct_class);

// Sentence selection predicates for out-of-domain style evaluations:
// NoPunctAtLeast5 keeps punctuation-free sentences of at least five tokens,
// MultiDot keeps sentences containing more than one "." token.
enum class SentenceFilter { All, NoPunctAtLeast5, MultiDot };

SentenceFilter sentence_filter_from_string(const std::string& name);
bool passes_filter(const Sentence& sentence, SentenceFilter filter,
                   PunctClass punct_class);

// Keeps the sentence pairs whose gold side passes the filter.
std::pair<Document, Document> filter_pairs(const Document& gold, const Document& system,
                                           SentenceFilter filter, PunctClass punct_class);

// (1 - sys) / (1 - bl) - 1: the proportional growth of error from baseline
// score bl to condition score sys. Throws UndefinedMetricError for bl >= 1.
double relative_error_increase(double bl, double sys);

struct RobustnessReport {
    double baseline_las = 0.0;
    std::map<std::string, double> condition_las;
    std::map<std::string, double> rel_err_increase;
};

RobustnessReport robustness_report(const EvalReport& baseline,
                                   const std::map<std::string, EvalReport>& conditions);

// Aligned text table with one row per condition and a Rel.err.incr. column.
std::string render_robustness_table(const RobustnessReport& report);

}  // namespace punct

#endif  // PUNCT_EVAL_HPP
