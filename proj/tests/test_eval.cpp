#include <doctest.h>

#include <cmath>

#include "punct/errors.hpp"
#include "punct/eval.hpp"
#include "punct/perturb.hpp"
#include "testutil.hpp"

using namespace punct;
using testutil::make_sentence;

namespace {

Document single(const Sentence& s) {
    Document d;
    d.sentences.push_back(s);
    return d;
}

}  // namespace

TEST_CASE("identical sentences align token by token") {
    Sentence s = testutil::figure2();
    Alignment a = align_nonpunct(s, s, PunctClass::DotsAndCommas);
    REQUIRE(a.pairs.size() == 4);
    for (const auto& [g, y] : a.pairs) CHECK(g == y);
}

TEST_CASE("gold with punctuation aligns against its stripped version") {
    Sentence gold = testutil::figure2();
    auto [stripped, log] = strip_punct(gold, PunctClass::DotsAndCommas);
    Alignment a = align_nonpunct(gold, stripped, PunctClass::DotsAndCommas);
    REQUIRE(a.pairs.size() == 4);
    CHECK(a.pairs[0] == std::pair<int, int>{1, 1});
    CHECK(a.pairs[1] == std::pair<int, int>{3, 2});
    CHECK(a.pairs[2] == std::pair<int, int>{5, 3});
    CHECK(a.pairs[3] == std::pair<int, int>{6, 4});
}

TEST_CASE("a substituted word form breaks alignment") {
    Sentence gold = testutil::figure2();
    Sentence bad = gold;
    bad.at(6).form = "blues";
    CHECK_THROWS_AS(align_nonpunct(gold, bad, PunctClass::DotsAndCommas), AlignmentError);
}

TEST_CASE("gold scored against itself is perfect") {
    Document d = single(testutil::figure2());
    EvalReport r = attachment_scores(d, d, PunctClass::DotsAndCommas);
    CHECK(r.scored_tokens == 4);
    CHECK(r.uas == 1.0);
    CHECK(r.las == 1.0);
}

TEST_CASE("one wrong head out of four scored tokens gives UAS 0.75") {
    Sentence gold = testutil::figure2();
    Sentence pred = gold;
    pred.at(3).head = 5;  // "27" attached to the verb instead of "John"
    pred.at(3).deprel = "dobj";
    EvalReport r = attachment_scores(single(gold), single(pred), PunctClass::DotsAndCommas);
    CHECK(r.scored_tokens == 4);
    CHECK(r.uas == doctest::Approx(0.75));
    CHECK(r.las == doctest::Approx(0.75));
}

TEST_CASE("a wrong label only affects LAS") {
    Sentence gold = testutil::figure2();
    Sentence pred = gold;
    pred.at(6).deprel = "nmod";
    EvalReport r = attachment_scores(single(gold), single(pred), PunctClass::DotsAndCommas);
    CHECK(r.uas == 1.0);
    CHECK(r.las == doctest::Approx(0.75));
}

TEST_CASE("mismatched sentence counts are an alignment error") {
    Document gold = single(testutil::figure2());
    Document sys = gold;
    sys.sentences.push_back(testutil::figure2());
    CHECK_THROWS_AS(attachment_scores(gold, sys, PunctClass::DotsAndCommas), AlignmentError);
}

TEST_CASE("adding arbitrarily attached punctuation to the system never changes scores") {
    Rng rng(2718);
    for (int iter = 0; iter < 200; ++iter) {
        const int n = 2 + static_cast<int>(rng.below(10));
        Sentence gold = testutil::random_projective_tree(rng, n, 0.1);
        // a system output over the same token sequence with random heads
        Sentence system = testutil::random_tree(rng, n, 0.0);
        for (int i = 1; i <= n; ++i) {
            system.at(i).form = gold.at(i).form;
            system.at(i).upos = gold.at(i).upos;
            system.at(i).deprel = gold.at(i).deprel;
        }
        EvalReport base =
            attachment_scores(single(gold), single(system), PunctClass::DotsAndCommas);

        // sprinkle punctuation into the system output
        std::vector<Injection> sites;
        for (int i = 1; i <= n; ++i) {
            if (rng.bernoulli(0.3)) {
                sites.push_back({i, rng.bernoulli(0.5) ? Injection::Kind::CommaBefore
                                                       : Injection::Kind::DotAfter});
            }
        }
        auto [noisy, log] = apply_injections(system, sites);
        EvalReport with_punct =
            attachment_scores(single(gold), single(noisy), PunctClass::DotsAndCommas);
        CHECK(base.uas == with_punct.uas);
        CHECK(base.las == with_punct.las);
        CHECK(base.scored_tokens == with_punct.scored_tokens);
    }
}

TEST_CASE("micro-average equals a brute-force recount") {
    Rng rng(31);
    Document gold, sys;
    for (int i = 0; i < 40; ++i) {
        const int n = 1 + static_cast<int>(rng.below(9));
        Sentence g = testutil::random_projective_tree(rng, n, 0.1);
        Sentence s = g;
        if (n >= 2 && rng.bernoulli(0.7)) {
            // corrupt into a left-branching chain, still a valid tree
            for (int id = 1; id <= n; ++id) {
                s.at(id).head = id - 1;
                if (rng.bernoulli(0.3)) s.at(id).deprel = "dep";
            }
            s.at(1).head = 0;
        }
        gold.sentences.push_back(g);
        sys.sentences.push_back(s);
    }
    EvalReport r = attachment_scores(gold, sys, PunctClass::DotsAndCommas);
    long scored = 0, heads = 0, both = 0;
    REQUIRE(r.per_sentence.size() == gold.sentences.size());
    for (const SentenceScore& ss : r.per_sentence) {
        scored += ss.scored;
        heads += ss.head_correct;
        both += ss.both_correct;
    }
    CHECK(scored == r.scored_tokens);
    CHECK(r.uas == doctest::Approx(static_cast<double>(heads) / scored).epsilon(1e-12));
    CHECK(r.las == doctest::Approx(static_cast<double>(both) / scored).epsilon(1e-12));
    CHECK(r.las <= r.uas);
}

TEST_CASE("relative error increase reproduces the published cells") {
    CHECK(relative_error_increase(0.918, 0.869) == doctest::Approx(0.598).epsilon(0.0025));
    CHECK(relative_error_increase(0.910, 0.865) == doctest::Approx(0.500).epsilon(0.0025));
    CHECK(relative_error_increase(0.894, 0.802) == doctest::Approx(0.868).epsilon(0.0025));
    CHECK(relative_error_increase(0.5, 0.5) == doctest::Approx(0.0));
    CHECK(relative_error_increase(0.0, 0.0) == doctest::Approx(0.0));
}

TEST_CASE("relative error increase is monotone decreasing in sys") {
    double prev = relative_error_increase(0.9, 0.99);
    for (double sys = 0.98; sys >= 0.5; sys -= 0.01) {
        double cur = relative_error_increase(0.9, sys);
        CHECK(cur >= prev);
        prev = cur;
    }
}

TEST_CASE("a perfect baseline makes the metric undefined") {
    CHECK_THROWS_AS(relative_error_increase(1.0, 0.9), UndefinedMetricError);
}

TEST_CASE("robustness report assembles per-condition ratios") {
    EvalReport baseline;
    baseline.las = 0.918;
    EvalReport cond;
    cond.las = 0.869;
    RobustnessReport r = robustness_report(baseline, {{"no_punct", cond}});
    CHECK(r.baseline_las == doctest::Approx(0.918));
    CHECK(r.condition_las.at("no_punct") == doctest::Approx(0.869));
    CHECK(r.rel_err_increase.at("no_punct") == doctest::Approx(0.598).epsilon(0.0025));
}

TEST_CASE("empty condition map yields empty maps") {
    EvalReport baseline;
    baseline.las = 0.9;
    RobustnessReport r = robustness_report(baseline, {});
    CHECK(r.condition_las.empty());
    CHECK(r.rel_err_increase.empty());
}

TEST_CASE("equal baseline and condition scores yield zero increase") {
    EvalReport baseline;
    baseline.las = 0.898;
    EvalReport cond;
    cond.las = 0.898;
    RobustnessReport r = robustness_report(baseline, {{"a", cond}, {"b", cond}});
    CHECK(r.rel_err_increase.at("a") == 0.0);
    CHECK(r.rel_err_increase.at("b") == 0.0);
}

TEST_CASE("sentence filters replicate the out-of-domain predicates") {
    Sentence five_clean = make_sentence({{"a", "X", 2, "d"},
                                         {"b", "X", 0, "root"},
                                         {"c", "X", 2, "d"},
                                         {"d", "X", 2, "d"},
                                         {"e", "X", 2, "d"}});
    CHECK(passes_filter(five_clean, SentenceFilter::NoPunctAtLeast5,
                        PunctClass::DotsAndCommas));
    CHECK_FALSE(passes_filter(five_clean, SentenceFilter::MultiDot,
                              PunctClass::DotsAndCommas));
    CHECK(passes_filter(five_clean, SentenceFilter::All, PunctClass::DotsAndCommas));

    Sentence four_clean = make_sentence(
        {{"a", "X", 2, "d"}, {"b", "X", 0, "root"}, {"c", "X", 2, "d"}, {"d", "X", 2, "d"}});
    CHECK_FALSE(passes_filter(four_clean, SentenceFilter::NoPunctAtLeast5,
                              PunctClass::DotsAndCommas));

    CHECK_FALSE(passes_filter(testutil::figure2(), SentenceFilter::NoPunctAtLeast5,
                              PunctClass::DotsAndCommas));
    CHECK_FALSE(passes_filter(testutil::figure2(), SentenceFilter::MultiDot,
                              PunctClass::DotsAndCommas));

    Sentence two_dots = make_sentence({{"What", "PRON", 0, "root"},
                                       {".", "PUNCT", 1, "punct"},
                                       {"Ever", "ADV", 1, "advmod"},
                                       {".", "PUNCT", 1, "punct"}});
    CHECK(passes_filter(two_dots, SentenceFilter::MultiDot, PunctClass::DotsAndCommas));

    Document gold;
    gold.sentences = {five_clean, testutil::figure2(), two_dots};
    Document system = gold;
    auto [g, s] = filter_pairs(gold, system, SentenceFilter::MultiDot,
                               PunctClass::DotsAndCommas);
    REQUIRE(g.sentences.size() == 1);
    CHECK(g.sentences[0] == two_dots);
    CHECK(sentence_filter_from_string("no-punct-5plus") == SentenceFilter::NoPunctAtLeast5);
    CHECK_THROWS_AS(sentence_filter_from_string("bogus"), UsageError);
}

TEST_CASE("the rendered table carries the Rel.err.incr. column") {
    EvalReport baseline;
    baseline.las = 0.9;
    EvalReport cond;
    cond.las = 0.85;
    RobustnessReport r = robustness_report(baseline, {{"no_punct", cond}});
    std::string table = render_robustness_table(r);
    CHECK(table.find("Rel.err.incr.") != std::string::npos);
    CHECK(table.find("no_punct") != std::string::npos);
    CHECK(table.find("baseline") != std::string::npos);
}
