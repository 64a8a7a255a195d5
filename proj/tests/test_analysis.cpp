#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "feedaudit/analysis.hpp"

using namespace feedaudit;

namespace {

std::vector<LabeledWatch> watches(int rep, int dem, int neutral_political, int apolitical) {
    std::vector<LabeledWatch> out;
    for (int i = 0; i < rep; ++i) out.push_back({Alignment::RepAligned, true});
    for (int i = 0; i < dem; ++i) out.push_back({Alignment::DemAligned, true});
    for (int i = 0; i < neutral_political; ++i) out.push_back({Alignment::Neutral, true});
    for (int i = 0; i < apolitical; ++i) out.push_back({Alignment::Neutral, false});
    return out;
}

}  // namespace

TEST_CASE("ideological content: counting oracle") {
    CHECK(ideological_content(watches(30, 10, 60, 0)) == doctest::Approx(0.2).epsilon(1e-12));
    CHECK(ideological_content(watches(30, 10, 60, 500)) == doctest::Approx(0.2).epsilon(1e-12));
    CHECK(ideological_content(watches(0, 25, 0, 0)) == doctest::Approx(-1.0));
    CHECK(ideological_content(watches(25, 0, 0, 0)) == doctest::Approx(1.0));
    CHECK_THROWS_AS(ideological_content(watches(0, 0, 0, 10)), NoPoliticalContent);
    CHECK_THROWS_AS(ideological_content({}), NoPoliticalContent);
}

TEST_CASE("condition_trends: constant and exactly linear weekly scores") {
    std::map<std::string, std::vector<WeeklyScore>> weekly;
    for (std::int64_t w = 0; w < 10; ++w) {
        weekly["flat"].push_back({w, 0.25});
        weekly["linear"].push_back({w, -0.1 + 0.03 * static_cast<double>(w)});
    }
    const auto fits = condition_trends(weekly);
    CHECK(fits.at("flat").slope == doctest::Approx(0.0).scale(1).epsilon(1e-14));
    CHECK(fits.at("flat").intercept == doctest::Approx(0.25).epsilon(1e-12));
    CHECK(fits.at("linear").slope == doctest::Approx(0.03).epsilon(1e-12));
    CHECK(fits.at("linear").intercept == doctest::Approx(-0.1).epsilon(1e-12));
    CHECK(fits.at("linear").slope_se == doctest::Approx(0.0).scale(1).epsilon(1e-12));
}

TEST_CASE("mismatch proportion: counting oracle, controls excluded") {
    std::vector<ChannelWatch> w;
    for (int i = 0; i < 27; ++i) w.push_back({Leaning::Democrat, Alignment::RepAligned});
    for (int i = 0; i < 73; ++i) w.push_back({Leaning::Republican, Alignment::RepAligned});
    for (int i = 0; i < 50; ++i) w.push_back({Leaning::NeutralControl, Alignment::RepAligned});
    CHECK(mismatch_proportion(w) == doctest::Approx(0.27).epsilon(1e-12));

    std::vector<ChannelWatch> same_only;
    for (int i = 0; i < 10; ++i) same_only.push_back({Leaning::Democrat, Alignment::DemAligned});
    CHECK(mismatch_proportion(same_only) == 0.0);

    const std::vector<ChannelWatch> controls_only(5,
                                                  {Leaning::NeutralControl, Alignment::DemAligned});
    CHECK_THROWS_AS(mismatch_proportion(controls_only), NoPartisanWatches);
}

TEST_CASE("partisanship split: shares, subsets, and the all-positive edge case") {
    std::vector<StancedWatch> w;
    // Dem bots: 10 ProDem, 30 AntiRep, 5 ProRep, 15 AntiDem, 40 Neutral
    for (int i = 0; i < 10; ++i) w.push_back({Leaning::Democrat, StanceLabel::ProDemocrat});
    for (int i = 0; i < 30; ++i) w.push_back({Leaning::Democrat, StanceLabel::AntiRepublican});
    for (int i = 0; i < 5; ++i) w.push_back({Leaning::Democrat, StanceLabel::ProRepublican});
    for (int i = 0; i < 15; ++i) w.push_back({Leaning::Democrat, StanceLabel::AntiDemocrat});
    for (int i = 0; i < 40; ++i) w.push_back({Leaning::Democrat, StanceLabel::Neutral});
    // Rep bots: 8 ProRep, 32 AntiDem, 4 ProDem, 6 AntiRep, 50 Neutral
    for (int i = 0; i < 8; ++i) w.push_back({Leaning::Republican, StanceLabel::ProRepublican});
    for (int i = 0; i < 32; ++i) w.push_back({Leaning::Republican, StanceLabel::AntiDemocrat});
    for (int i = 0; i < 4; ++i) w.push_back({Leaning::Republican, StanceLabel::ProDemocrat});
    for (int i = 0; i < 6; ++i) w.push_back({Leaning::Republican, StanceLabel::AntiRepublican});
    for (int i = 0; i < 50; ++i) w.push_back({Leaning::Republican, StanceLabel::Neutral});

    const auto report = partisanship_split_report(w);
    const auto& dem = report.stance_shares.at(Leaning::Democrat);
    CHECK(dem.political_watches == 100);
    CHECK(dem.shares.at(StanceLabel::AntiRepublican) == doctest::Approx(0.30));
    CHECK(dem.shares.at(StanceLabel::ProDemocrat) == doctest::Approx(0.10));
    // anti shares dominate pro shares for both groups
    const auto& rep = report.stance_shares.at(Leaning::Republican);
    CHECK(dem.shares.at(StanceLabel::AntiRepublican) > dem.shares.at(StanceLabel::ProDemocrat));
    CHECK(rep.shares.at(StanceLabel::AntiDemocrat) > rep.shares.at(StanceLabel::ProRepublican));

    // positive subset: 10+4 ProDem vs 5+8 ProRep -> (13-14)/27
    REQUIRE(report.subset_skews.size() == 2);
    CHECK(report.subset_skews[0].subset == "positive");
    CHECK(report.subset_skews[0].defined);
    CHECK(report.subset_skews[0].skew == doctest::Approx((13.0 - 14.0) / 27.0).epsilon(1e-12));
    // negative subset: AntiDem 47 (rep-aligned) vs AntiRep 36 (dem-aligned)
    CHECK(report.subset_skews[1].subset == "negative");
    CHECK(report.subset_skews[1].skew == doctest::Approx((47.0 - 36.0) / 83.0).epsilon(1e-12));
}

TEST_CASE("partisanship split: empty negative subset surfaces as a note row") {
    std::vector<StancedWatch> w;
    for (int i = 0; i < 20; ++i) w.push_back({Leaning::Democrat, StanceLabel::ProDemocrat});
    for (int i = 0; i < 20; ++i) w.push_back({Leaning::Republican, StanceLabel::ProRepublican});
    const auto report = partisanship_split_report(w);
    CHECK(report.subset_skews[0].defined);
    CHECK_FALSE(report.subset_skews[1].defined);
    CHECK(report.subset_skews[1].note == "insufficient data");
}

TEST_CASE("topic table: single-sided topic") {
    std::vector<TopicVideo> videos;
    for (int i = 0; i < 40; ++i) videos.push_back({Alignment::DemAligned, {"climate"}});
    for (int i = 0; i < 60; ++i) videos.push_back({Alignment::DemAligned, {"economy"}});
    for (int i = 0; i < 100; ++i) videos.push_back({Alignment::RepAligned, {"economy"}});
    const auto rows = topic_partisan_table(videos, 1);
    REQUIRE(rows.size() == 2);
    // climate: dem share 0.4, rep share 0 -> difference -0.4
    const auto& climate = rows.back();
    CHECK(climate.topic == "climate");
    CHECK(climate.dem_share == doctest::Approx(0.4));
    CHECK(climate.rep_share == 0.0);
    CHECK(climate.difference == doctest::Approx(-0.4));
}

TEST_CASE("topic table: two-topic hand fixture with chi-squared oracle") {
    std::vector<TopicVideo> videos;
    for (int i = 0; i < 30; ++i) videos.push_back({Alignment::DemAligned, {"a"}});
    for (int i = 0; i < 70; ++i) videos.push_back({Alignment::DemAligned, {"b"}});
    for (int i = 0; i < 60; ++i) videos.push_back({Alignment::RepAligned, {"a"}});
    for (int i = 0; i < 40; ++i) videos.push_back({Alignment::RepAligned, {"b"}});
    const auto rows = topic_partisan_table(videos, 1);
    REQUIRE(rows.size() == 2);
    CHECK(rows[0].topic == "a");  // sorted by difference desc
    CHECK(rows[0].dem_share == doctest::Approx(0.3));
    CHECK(rows[0].rep_share == doctest::Approx(0.6));
    CHECK(rows[0].difference == doctest::Approx(0.3));
    // hand chi-squared for [[30,70],[60,40]]
    const auto chi = chi_squared_test({{30, 70}, {60, 40}});
    CHECK(rows[0].chi2 == doctest::Approx(chi.chi2).epsilon(1e-12));
    CHECK(rows[0].p == doctest::Approx(chi.p).epsilon(1e-12));

    // both topics share the one chi2 value by symmetry of the 2x2
    CHECK(rows[1].chi2 == doctest::Approx(rows[0].chi2).epsilon(1e-12));
}

TEST_CASE("topic table: min-count filter and missing sides") {
    std::vector<TopicVideo> videos;
    for (int i = 0; i < 5; ++i) videos.push_back({Alignment::DemAligned, {"rare"}});
    for (int i = 0; i < 200; ++i) videos.push_back({Alignment::RepAligned, {"common"}});
    CHECK(topic_partisan_table(videos, 100).size() == 1);
    // no dem-aligned videos at all -> empty output, not a crash
    std::vector<TopicVideo> one_sided(50, {Alignment::RepAligned, {"x"}});
    CHECK(topic_partisan_table(one_sided, 1).empty());
}
