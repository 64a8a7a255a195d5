#include <algorithm>
#include <filesystem>

#include "feedaudit/csv.hpp"
#include "feedaudit/pipeline.hpp"

namespace feedaudit {

const std::set<std::string>& all_report_sets() {
    static const std::set<std::string> sets{
        "skew",    "counterfactual", "sensitivity", "regression", "channels",
        "partisanship", "topics",    "agreement",   "plotdata",   "misinfo",
        "validation"};
    return sets;
}

void write_reports(const AnalysisBundle& bundle, const std::filesystem::path& out_dir,
                   const std::set<std::string>& report_sets) {
    for (const auto& set : report_sets)
        if (!all_report_sets().contains(set)) throw ConfigError("unknown report set: " + set);
    std::filesystem::create_directories(out_dir);
    const auto want = [&](const std::string& s) { return report_sets.contains(s); };
    using F = CsvWriter;

    if (want("skew")) {
        {
            CsvWriter csv(out_dir / "skew_by_week.csv", "skew_by_week",
                          {"week", "state", "leaning", "mean_score", "ci_lo", "ci_hi", "n_runs"});
            for (const auto& r : bundle.weekly)
                csv.row({F::field(r.week), to_string(r.condition.state),
                         to_string(r.condition.leaning), F::field(r.mean), F::field(r.ci_lo),
                         F::field(r.ci_hi), F::field(static_cast<std::int64_t>(r.n_runs))});
        }
        {
            CsvWriter csv(out_dir / "observed_skew.csv", "observed_skew",
                          {"week", "state", "mean_pair_skew", "n_pairs"});
            for (const auto& r : bundle.observed_weekly)
                csv.row({F::field(r.week), to_string(r.state), F::field(r.mean_skew),
                         F::field(static_cast<std::int64_t>(r.n_pairs))});
        }
        {
            CsvWriter csv(out_dir / "trend_fits.csv", "trend_fits",
                          {"condition", "slope", "intercept", "slope_se", "slope_ci_lo",
                           "slope_ci_hi", "n_weeks"});
            for (const auto& [condition, fit] : bundle.trends)
                csv.row({condition, F::field(fit.slope), F::field(fit.intercept),
                         F::field(fit.slope_se), F::field(fit.slope_ci_lo),
                         F::field(fit.slope_ci_hi),
                         F::field(static_cast<std::int64_t>(fit.n))});
        }
        {
            CsvWriter csv(out_dir / "ttests.csv", "ttests",
                          {"scope", "comparison", "t", "df", "p", "n_a", "n_b"});
            for (const auto& r : bundle.ttests)
                csv.row({r.scope, r.comparison, F::field(r.t), F::field(r.df), F::field(r.p),
                         F::field(static_cast<std::int64_t>(r.n_a)),
                         F::field(static_cast<std::int64_t>(r.n_b))});
        }
    }

    if (want("counterfactual")) {
        CsvWriter csv(out_dir / "counterfactual_skews.csv", "counterfactual_skews",
                      {"subset", "metric", "recency", "expected_skew", "expected_se",
                       "observed_skew", "t", "df", "p", "weeks"});
        for (const auto& r : bundle.counterfactuals)
            csv.row({r.subset, to_string(r.metric), to_string(r.recency),
                     F::field(r.expected_mean), F::field(r.expected_se),
                     F::field(r.observed_mean), F::field(r.t), F::field(r.df), F::field(r.p),
                     F::field(static_cast<std::int64_t>(r.weeks))});
    }

    if (want("sensitivity")) {
        CsvWriter csv(out_dir / "sensitivity.csv", "sensitivity",
                      {"metric", "family", "normalized_gap", "required_scaling_k", "delta_star",
                       "note"});
        for (const auto& r : bundle.sensitivity)
            csv.row({r.metric, r.family, F::field(r.normalized_gap),
                     r.ok ? F::field(r.k) : std::string{}, r.ok ? F::field(r.delta_star) : std::string{},
                     r.note});
    }

    if (want("regression")) {
        {
            CsvWriter csv(out_dir / "mismatch_logit.csv", "mismatch_logit",
                          {"term", "coefficient", "std_error", "odds_ratio", "or_ci_lo",
                           "or_ci_hi", "p", "note"});
            if (bundle.fit_ok) {
                for (std::size_t j = 0; j < bundle.mismatch_fit.names.size(); ++j)
                    csv.row({bundle.mismatch_fit.names[j],
                             F::field(bundle.mismatch_fit.coefficients[j]),
                             F::field(bundle.mismatch_fit.std_errors[j]),
                             F::field(bundle.mismatch_fit.odds_ratios[j]),
                             F::field(bundle.mismatch_fit.or_ci_lo[j]),
                             F::field(bundle.mismatch_fit.or_ci_hi[j]),
                             F::field(bundle.mismatch_fit.p_values[j]), std::string{}});
            } else if (!bundle.fit_note.empty()) {
                csv.row({"(no fit)", "", "", "", "", "", "", bundle.fit_note});
            }
        }
        {
            CsvWriter csv(out_dir / "vif.csv", "vif", {"variable", "vif", "screened_out"});
            for (const auto& [name, vif] : bundle.vif_initial) {
                const bool dropped = std::find(bundle.vif_dropped.begin(),
                                               bundle.vif_dropped.end(),
                                               name) != bundle.vif_dropped.end();
                csv.row({name, F::field(vif), dropped ? "yes" : "no"});
            }
        }
    }

    if (want("channels")) {
        {
            CsvWriter csv(out_dir / "channel_mismatch.csv", "channel_mismatch",
                          {"channel_id", "party", "followers", "partisan_watches",
                           "mismatch_proportion"});
            for (const auto& r : bundle.channels)
                csv.row({r.channel_id, r.party, F::field(r.followers), F::field(r.watches),
                         F::field(r.mismatch)});
        }
        {
            CsvWriter csv(out_dir / "channel_tests.csv", "channel_tests",
                          {"comparison", "chi2", "df", "p"});
            for (const auto& r : bundle.channel_tests)
                csv.row({r.comparison, F::field(r.chi2), F::field(r.df), F::field(r.p)});
        }
    }

    if (want("partisanship")) {
        CsvWriter csv(out_dir / "partisanship_split.csv", "partisanship_split",
                      {"row_kind", "group_or_subset", "stance", "value", "note"});
        if (bundle.partisanship_ok) {
            for (const auto& [leaning, shares] : bundle.partisanship.stance_shares)
                for (const auto& [stance, share] : shares.shares)
                    csv.row({"stance_share", to_string(leaning), to_string(stance),
                             F::field(share), std::string{}});
            for (const auto& row : bundle.partisanship.subset_skews)
                csv.row({"subset_skew", row.subset, "",
                         row.defined ? F::field(row.skew) : std::string{}, row.note});
        }
        for (const auto& [subset, defined] : bundle.pooled_defined_by_subset)
            csv.row({"pooled_observed", subset, "",
                     defined ? F::field(bundle.pooled_observed_by_subset.at(subset))
                             : std::string{},
                     defined ? std::string{} : "insufficient data"});
    }

    if (want("topics")) {
        CsvWriter csv(out_dir / "topic_table.csv", "topic_table",
                      {"topic", "dem_share_pct", "rep_share_pct", "difference_pct", "chi2", "p",
                       "videos"});
        for (const auto& r : bundle.topics)
            csv.row({r.topic, F::field(100.0 * r.dem_share), F::field(100.0 * r.rep_share),
                     F::field(100.0 * r.difference), F::field(r.chi2), F::field(r.p),
                     F::field(r.video_count)});
    }

    if (want("agreement")) {
        CsvWriter csv(out_dir / "agreement.csv", "agreement", {"question", "metric", "value"});
        for (const auto& r : bundle.agreement)
            csv.row({r.question, r.metric, F::field(r.value)});
    }

    if (want("plotdata")) {
        {
            CsvWriter csv(out_dir / "plot_skew_by_week.csv", "plot_skew_by_week",
                          {"week", "condition", "mean", "ci_low", "ci_high"});
            for (const auto& r : bundle.weekly)
                csv.row({F::field(r.week), to_string(r.condition), F::field(r.mean),
                         F::field(r.ci_lo), F::field(r.ci_hi)});
        }
        {
            CsvWriter csv(out_dir / "plot_rolling_political.csv", "plot_rolling_political",
                          {"condition", "ordinal", "rolling_political_share"});
            for (const auto& r : bundle.rolling)
                csv.row({r.condition, F::field(r.ordinal), F::field(r.value)});
        }
    }

    if (want("misinfo")) {
        CsvWriter csv(out_dir / "misinfo.csv", "misinfo",
                      {"stance", "threshold", "matches", "transcripts", "percent"});
        if (bundle.misinfo_ok) {
            for (int s = 0; s < kNumStances; ++s)
                for (std::size_t k = 0; k < bundle.misinfo.thresholds.size(); ++k) {
                    const auto& cell = bundle.misinfo.by_stance[static_cast<std::size_t>(s)][k];
                    csv.row({to_string(static_cast<StanceLabel>(s)),
                             F::field(bundle.misinfo.thresholds[k]), F::field(cell.matches),
                             F::field(bundle.misinfo.transcripts_per_stance[static_cast<std::size_t>(s)]),
                             F::field(cell.percent)});
                }
        }
    }

    if (want("validation")) {
        CsvWriter csv(out_dir / "validation.csv", "validation", {"run_id", "violation"});
        for (const auto& [run_id, issue] : bundle.validation_issues) csv.row({run_id, issue});
    }
}

void emit_report(const std::filesystem::path& manifest_path, const std::set<std::string>& sets,
                 const std::filesystem::path& out_dir, int workers) {
    const auto inputs = load_inputs(manifest_path);
    const auto bundle = analyze_campaign(inputs, workers);
    write_reports(bundle, out_dir, sets);
}

}  // namespace feedaudit
