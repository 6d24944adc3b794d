#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <set>
#include <sstream>

#include "xling/effects.hpp"
#include "xling/glm.hpp"

using namespace xling;
using namespace xling::effects;
using corpus::TweetRecord;
using inference::PredictionRecord;

namespace {

const glm::CoefficientTable& fixture(ModelId id) {
    static const auto tables = [] {
        std::vector<glm::CoefficientTable> t;
        for (int n = 1; n <= 4; ++n) t.push_back(load_fixture(model_id_from_number(n)));
        return t;
    }();
    return tables[static_cast<std::size_t>(id)];
}

glm::CoefficientTable table_of(std::vector<std::pair<std::string, double>> rows) {
    glm::CoefficientTable t;
    for (auto& [term, v] : rows) t.push_back(glm::Coefficient{term, v});
    return t;
}

// One observation per (model, label, language, split, quality) combination
// that the corpus can produce.
std::vector<glm::Observation> full_coverage_rows() {
    std::vector<glm::Observation> rows;
    for (auto m : all_values<ModelVariant>())
        for (auto s : all_values<Stance>())
            for (auto l : all_values<Language>())
                for (auto split : {"train", "test"})
                    for (auto q : all_values<TranslationQuality>()) {
                        if (l == Language::en && q != TranslationQuality::not_translated) continue;
                        glm::Observation o;
                        o.levels = {{kModel, std::string(to_string(m))},
                                    {kLabel, std::string(to_string(s))},
                                    {kLanguage, std::string(to_string(l))},
                                    {kSplit, split},
                                    {kQuality, std::string(to_string(q))}};
                        o.covariates[kShareUnrelated] = 0.1 * static_cast<double>(l);
                        rows.push_back(std::move(o));
                    }
    return rows;
}

PredictionRecord pred(std::string id, ModelVariant v, Stance gold, bool correct, bool translated = false) {
    PredictionRecord p;
    p.tweet_id = std::move(id);
    p.variant = v;
    p.gold = gold;
    p.predicted = correct ? gold : (gold == Stance::neutral ? Stance::pro : Stance::neutral);
    p.correct = correct;
    p.translated = translated;
    return p;
}

TweetRecord rec(std::string id, Language l, Stance s, Split split = Split::test) {
    TweetRecord r;
    r.id = std::move(id);
    r.text = "t";
    r.language = l;
    r.label = s;
    r.split = split;
    return r;
}

}  // namespace

TEST(MakeSpec, TermSets) {
    auto m1 = make_spec(ModelId::M1);
    EXPECT_TRUE(m1.interactions.empty());
    EXPECT_TRUE(m1.is_factor(kLabel));
    EXPECT_EQ(m1.factors.size(), 5u);

    auto m3 = make_spec(ModelId::M3);
    EXPECT_TRUE(m3.has_interaction(kModel, kLanguage));
    EXPECT_FALSE(m3.has_interaction(kModel, kLabel));

    auto m2 = make_spec(ModelId::M2);
    EXPECT_TRUE(m2.has_interaction(kModel, kLabel));
    EXPECT_FALSE(m2.has_interaction(kModel, kLanguage));

    auto m4 = make_spec(ModelId::M4);
    EXPECT_FALSE(m4.is_factor(kLabel));
    EXPECT_TRUE(m4.is_covariate(kShareUnrelated));
    EXPECT_TRUE(m4.has_interaction(kModel, kShareUnrelated));
    EXPECT_TRUE(m4.has_interaction(kModel, kLanguage));

    EXPECT_EQ(m1.factor(kModel).reference, "English");
    EXPECT_EQ(m1.factor(kLabel).reference, "neutral");
    EXPECT_EQ(m1.factor(kLanguage).reference, "en");
    EXPECT_EQ(m1.factor(kSplit).reference, "train");
    EXPECT_EQ(m1.factor(kQuality).reference, "not_translated");
    EXPECT_THROW(model_id_from_number(5), ConfigError);
}

TEST(Fixtures, RowCounts) {
    EXPECT_EQ(fixture(ModelId::M1).rows().size(), 23u);
    EXPECT_EQ(fixture(ModelId::M2).rows().size(), 32u);
    EXPECT_EQ(fixture(ModelId::M3).rows().size(), 59u);
    EXPECT_EQ(fixture(ModelId::M4).rows().size(), 60u);
}

// Every fixture term must be a column the encoder would produce for that
// model, so fitted tables and fixtures line up term for term.
TEST(Fixtures, TermsMatchEncodedColumns) {
    const auto rows = full_coverage_rows();
    for (int n = 1; n <= 4; ++n) {
        const auto id = model_id_from_number(n);
        auto dm = glm::encode_design(rows, make_spec(id));
        const auto names = dm.names();
        const std::set<std::string> cols(names.begin(), names.end());
        for (const auto& c : fixture(id).rows()) EXPECT_TRUE(cols.contains(c.term)) << "model " << n << ": " << c.term;
        EXPECT_EQ(cols.size(), fixture(id).rows().size()) << "model " << n;
    }
}

TEST(Fixtures, SelectedValuesAndBounds) {
    const auto& m1 = fixture(ModelId::M1);
    EXPECT_DOUBLE_EQ(*m1.estimate("(Intercept)"), 0.53301);
    EXPECT_DOUBLE_EQ(*m1.estimate("Label:unrelated"), 1.57870);
    EXPECT_TRUE(m1.find("(Intercept)")->p_is_bound);
    EXPECT_DOUBLE_EQ(m1.find("Language:id")->p_value, 0.64089);
    EXPECT_DOUBLE_EQ(*fixture(ModelId::M2).estimate("Model:EnglishSpanish×Label:unrelated"), 1.75508);
    EXPECT_DOUBLE_EQ(*fixture(ModelId::M4).estimate("Model:Multilanguage×Language:tr"), 0.674);
    EXPECT_DOUBLE_EQ(*fixture(ModelId::M4).estimate("Model:Multilanguage×ShareUnrelated"), -2.740);
}

TEST(Fixtures, Remarks) {
    EXPECT_EQ(fixture_remarks(ModelId::M2, fixture(ModelId::M2)).size(), 3u);
    EXPECT_EQ(fixture_remarks(ModelId::M4, fixture(ModelId::M4)).size(), 1u);
    EXPECT_TRUE(fixture_remarks(ModelId::M3, fixture(ModelId::M3)).empty());
    EXPECT_THROW(load_fixture(ModelId::M1, "/nonexistent"), ConfigError);
}

TEST(Cumulative, QuotedCells) {
    const auto& m3 = fixture(ModelId::M3);
    struct Case {
        ModelVariant v;
        Language l;
        double oracle;
        double quoted;
    } cases[] = {
        {ModelVariant::Multilanguage, Language::pl, -0.16966 + -1.35079 + 0.80255, -0.718},
        {ModelVariant::Multilanguage, Language::tr, -0.16966 + -0.96396 + 0.56074, -0.573},
        {ModelVariant::EnglishSpanish, Language::id, 0.24164 + -0.74985 + 0.94326, 0.435},
        {ModelVariant::EnglishSpanish, Language::ko, 0.24164 + 0.34114 + -0.03758, 0.545},
        {ModelVariant::Spanish, Language::es, -0.87078 + -0.94583 + 1.34904, -0.468},
        {ModelVariant::EnglishSpanish, Language::es, 0.24164 + -0.94583 + 0.43262, -0.272},
    };
    for (const auto& c : cases) {
        auto r = cumulative_model_language(m3, c.v, c.l);
        EXPECT_DOUBLE_EQ(r.total, c.oracle);
        EXPECT_NEAR(r.total, c.quoted, 0.0005) << to_string(c.v) << " " << to_string(c.l);
        ASSERT_EQ(r.components.size(), 3u);
        EXPECT_EQ(r.total, r.components[0].value + r.components[1].value + r.components[2].value);
    }
    for (const auto& check : cumulative_checks(m3)) EXPECT_TRUE(check.consistent()) << check.description;
}

TEST(Cumulative, ReferenceCellsAndErrors) {
    const auto& m3 = fixture(ModelId::M3);
    auto r = cumulative_model_language(m3, ModelVariant::English, Language::en);
    EXPECT_EQ(r.total, 0.0);
    for (const auto& c : r.components) EXPECT_FALSE(c.present);
    EXPECT_DOUBLE_EQ(cumulative_model_language(m3, ModelVariant::English, Language::pl).total, -1.35079);
    EXPECT_DOUBLE_EQ(cumulative_model_language(m3, ModelVariant::Spanish, Language::en).total, -0.87078);
    EXPECT_THROW(cumulative_model_language(fixture(ModelId::M1), ModelVariant::Spanish, Language::pl), ConfigError);
}

TEST(Cumulative, HeatmapCoversAllCells) {
    auto cells = model_language_heatmap(fixture(ModelId::M3));
    EXPECT_EQ(cells.size(), 52u);
    std::ostringstream out;
    write_heatmap(out, cells);
    EXPECT_NE(out.str().find("pl\tMultilanguage\t-0.16966\t-1.35079\t0.80255\t-0.71790\n"), std::string::npos);
}

TEST(ShareUnrelated, ThreeComponentTotals) {
    const auto& m4 = fixture(ModelId::M4);
    EXPECT_NEAR(share_unrelated_total(m4, ModelVariant::EnglishSpanish).total, 0.420 + 4.661 - 0.431, 1e-12);
    EXPECT_NEAR(share_unrelated_total(m4, ModelVariant::Spanish).total, -1.052 + 4.661 + 0.605, 1e-12);
    EXPECT_NEAR(share_unrelated_total(m4, ModelVariant::Multilanguage).total, 1.020 + 4.661 - 2.740, 1e-12);
    EXPECT_NEAR(share_unrelated_total(m4, ModelVariant::EnglishSpanish).total, 4.650, 5e-4);
    EXPECT_NEAR(share_unrelated_total(m4, ModelVariant::Spanish).total, 4.214, 5e-4);
    EXPECT_NEAR(share_unrelated_total(m4, ModelVariant::Multilanguage).total, 2.941, 5e-4);
    EXPECT_DOUBLE_EQ(share_unrelated_total(m4, ModelVariant::English).total, 4.661);

    auto zero = table_of({{"(Intercept)", 1.0}, {"ShareUnrelated", 0.0}});
    EXPECT_EQ(share_unrelated_total(zero, ModelVariant::Spanish).total, 0.0);
    EXPECT_THROW(share_unrelated_total(fixture(ModelId::M3), ModelVariant::Spanish), ConfigError);
}

TEST(ShareUnrelated, NarrativeTotalsAreFlagged) {
    auto checks = share_total_checks(fixture(ModelId::M4));
    ASSERT_EQ(checks.size(), 3u);
    const double reported[] = {5.009, 4.456, 3.597};
    const double computed[] = {4.650, 4.214, 2.941};
    for (std::size_t i = 0; i < 3; ++i) {
        EXPECT_FALSE(checks[i].consistent());
        EXPECT_DOUBLE_EQ(checks[i].reported, reported[i]);
        EXPECT_NEAR(checks[i].deviation(), computed[i] - reported[i], 5e-4);
    }
}

TEST(AccuracyCurve, InterceptOnlyAtBaseline) {
    auto c = accuracy_curve(fixture(ModelId::M4), ModelVariant::English, Language::en, {0.0});
    ASSERT_EQ(c.size(), 1u);
    EXPECT_DOUBLE_EQ(c[0].total_effect, -0.556);
    EXPECT_NEAR(c[0].accuracy, 1.0 / (1.0 + std::exp(0.556)), 1e-15);
    EXPECT_NEAR(c[0].accuracy, 0.365, 1e-3);
}

TEST(AccuracyCurve, ZeroEffectGivesHalf) {
    auto t = table_of({{"(Intercept)", -1.0}, {"ShareUnrelated", 2.0}});
    auto c = accuracy_curve(t, ModelVariant::English, Language::en, {0.5});
    EXPECT_EQ(c[0].total_effect, 0.0);
    EXPECT_EQ(c[0].accuracy, 0.5);
}

TEST(AccuracyCurve, LinearInShareAndBounded) {
    const auto& m4 = fixture(ModelId::M4);
    const auto grid = share_grid(21);
    for (auto v : all_values<ModelVariant>())
        for (auto l : all_values<Language>()) {
            auto c = accuracy_curve(m4, v, l, grid);
            const double slope = *m4.estimate("ShareUnrelated") +
                                 m4.estimate(glm::join_interaction(model_term(v), kShareUnrelated)).value_or(0.0);
            EXPECT_NEAR(c.back().total_effect - c.front().total_effect, slope, 1e-12);
            for (std::size_t i = 0; i < c.size(); ++i) {
                EXPECT_GT(c[i].accuracy, 0.0);
                EXPECT_LT(c[i].accuracy, 1.0);
                if (i > 0) {
                    if (slope > 0) EXPECT_GT(c[i].accuracy, c[i - 1].accuracy);
                    if (slope < 0) EXPECT_LT(c[i].accuracy, c[i - 1].accuracy);
                }
            }
        }
    EXPECT_THROW(accuracy_curve(m4, ModelVariant::English, Language::en, {1.5}), ConfigError);
    EXPECT_THROW(share_grid(1), ConfigError);
}

TEST(Pretrain, ShareLookup) {
    auto t = default_pretrain_shares();
    EXPECT_DOUBLE_EQ(t.lookup(Language::es).percent, 0.13);
    EXPECT_EQ(t.lookup(Language::es).provenance, ShareProvenance::listed);
    EXPECT_DOUBLE_EQ(t.lookup(Language::en).percent, 89.70);
    for (auto l : {Language::tr, Language::ar, Language::hi}) {
        EXPECT_EQ(t.lookup(l).percent, 0.0);
        EXPECT_EQ(t.lookup(l).provenance, ShareProvenance::below_threshold);
    }
    EXPECT_THROW(t.set(Language::es, {-1.0}), ConfigError);
}

TEST(Pretrain, GroupMeansFilterAndTrend) {
    std::vector<TweetRecord> corpus;
    std::vector<PredictionRecord> preds;
    for (int i = 0; i < 10; ++i) {
        const auto id = "es" + std::to_string(i);
        corpus.push_back(rec(id, Language::es, Stance::pro));
        preds.push_back(pred(id, ModelVariant::Spanish, Stance::pro, true));
    }
    for (int i = 0; i < 4; ++i) {
        const auto id = "tr" + std::to_string(i);
        corpus.push_back(rec(id, Language::tr, Stance::anti));
        preds.push_back(pred(id, ModelVariant::Spanish, Stance::anti, i == 0));
    }
    // Excluded by the filter.
    corpus.push_back(rec("en0", Language::en, Stance::pro));
    preds.push_back(pred("en0", ModelVariant::Spanish, Stance::pro, false));
    corpus.push_back(rec("un0", Language::es, Stance::unrelated));
    preds.push_back(pred("un0", ModelVariant::Spanish, Stance::unrelated, false));

    auto a = accuracy_by_pretraining_share(preds, corpus, default_pretrain_shares());
    ASSERT_EQ(a.groups.size(), 2u);
    EXPECT_EQ(a.groups[0].language, Language::tr);
    EXPECT_TRUE(a.groups[0].below_threshold);
    EXPECT_DOUBLE_EQ(a.groups[0].mean_accuracy, 0.25);
    EXPECT_EQ(a.groups[1].language, Language::es);
    EXPECT_EQ(a.groups[1].n, 10u);
    EXPECT_DOUBLE_EQ(a.groups[1].mean_accuracy, 1.0);
    // Two points determine the line.
    ASSERT_TRUE(a.trend);
    EXPECT_NEAR(a.trend->slope, (1.0 - 0.25) / 0.13, 1e-9);
    EXPECT_NEAR(a.trend->intercept, 0.25, 1e-12);

    std::vector<PredictionRecord> only_excluded{preds.end() - 2, preds.end()};
    EXPECT_THROW(accuracy_by_pretraining_share(only_excluded, corpus, default_pretrain_shares()), DataError);
    std::vector<PredictionRecord> unknown{pred("zz", ModelVariant::English, Stance::pro, true)};
    EXPECT_THROW(accuracy_by_pretraining_share(unknown, corpus, default_pretrain_shares()), DataError);
}

TEST(Pretrain, GroupOrderInvariantToRowOrder) {
    std::mt19937_64 rng(7);
    std::vector<TweetRecord> corpus;
    std::vector<PredictionRecord> preds;
    const Language langs[] = {Language::es, Language::de, Language::tr, Language::pl, Language::ko};
    for (int i = 0; i < 400; ++i) {
        const auto id = "r" + std::to_string(i);
        const auto l = langs[rng() % 5];
        corpus.push_back(rec(id, l, Stance::pro));
        preds.push_back(pred(id, all_values<ModelVariant>()[rng() % 4], Stance::pro, rng() % 3 != 0));
    }
    auto a = accuracy_by_pretraining_share(preds, corpus, default_pretrain_shares());
    std::shuffle(preds.begin(), preds.end(), rng);
    std::shuffle(corpus.begin(), corpus.end(), rng);
    auto b = accuracy_by_pretraining_share(preds, corpus, default_pretrain_shares());
    ASSERT_EQ(a.groups.size(), b.groups.size());
    for (std::size_t i = 0; i < a.groups.size(); ++i) {
        EXPECT_EQ(a.groups[i].language, b.groups[i].language);
        EXPECT_EQ(a.groups[i].variant, b.groups[i].variant);
        EXPECT_EQ(a.groups[i].mean_accuracy, b.groups[i].mean_accuracy);
    }
    EXPECT_NEAR(a.trend->slope, b.trend->slope, 1e-12);
}

TEST(PretrainingFraction, Ratios) {
    EXPECT_NEAR(pretraining_fraction(1500), 9.615e-11, 5e-15);
    EXPECT_EQ(pretraining_fraction(0), 0.0);
    EXPECT_NEAR(pretraining_fraction(1349), 8.65e-11, 5e-14);
    EXPECT_THROW(pretraining_fraction(1, 0), ConfigError);
    EXPECT_THROW(pretraining_fraction(-1), ConfigError);
}

TEST(Observations, JoinConventions) {
    std::vector<TweetRecord> corpus{rec("a", Language::tr, Stance::unrelated, Split::additional_test),
                                    rec("b", Language::tr, Stance::pro, Split::train),
                                    rec("c", Language::en, Stance::neutral, Split::test)};
    corpus[1].translation_quality = TranslationQuality::good;
    corpus[1].translated_text = "text";
    std::vector<PredictionRecord> preds{pred("a", ModelVariant::Spanish, Stance::unrelated, true),
                                        pred("b", ModelVariant::Spanish, Stance::pro, false, true),
                                        pred("b", ModelVariant::English, Stance::pro, true, false),
                                        pred("c", ModelVariant::English, Stance::neutral, true)};
    auto rows = build_observations(preds, corpus);
    ASSERT_EQ(rows.size(), 4u);
    EXPECT_EQ(rows[0].levels.at(kSplit), "test");
    EXPECT_EQ(rows[0].levels.at(kQuality), "not_translated");
    EXPECT_DOUBLE_EQ(rows[0].covariates.at(kShareUnrelated), 0.5);
    EXPECT_EQ(rows[0].response, 1.0);
    EXPECT_EQ(rows[1].levels.at(kQuality), "good");
    EXPECT_EQ(rows[1].levels.at(kSplit), "train");
    EXPECT_EQ(rows[1].response, 0.0);
    EXPECT_EQ(rows[2].levels.at(kQuality), "not_translated");
    EXPECT_EQ(rows[3].levels.at(kLanguage), "en");
    EXPECT_DOUBLE_EQ(rows[3].covariates.at(kShareUnrelated), 0.0);

    auto bad = preds;
    bad[0].gold = Stance::pro;
    bad[0].predicted = Stance::pro;
    EXPECT_THROW(build_observations(bad, corpus), DataError);
    corpus[0].split.reset();
    EXPECT_THROW(build_observations(preds, corpus), DataError);
}
