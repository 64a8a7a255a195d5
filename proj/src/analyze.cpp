#include <algorithm>
#include <cmath>
#include <fstream>
#include <nlohmann/json.hpp>
#include <unordered_map>
#include <unordered_set>

#include "feedaudit/channels.hpp"
#include "feedaudit/csv.hpp"
#include "feedaudit/pca.hpp"
#include "feedaudit/pipeline.hpp"
#include "feedaudit/sensitivity.hpp"
#include "feedaudit/special.hpp"

using nlohmann::json;

namespace feedaudit {

namespace {

constexpr const char* kSubsets[3] = {"all", "positive", "negative"};

struct RunView {
    const ExperimentRun* run = nullptr;
    std::int64_t used = 0;  // recommendation events analyzed (pair-truncated)
};

bool in_subset(StanceLabel s, int subset) {
    switch (subset) {
        case 0: return true;
        case 1: return s == StanceLabel::ProDemocrat || s == StanceLabel::ProRepublican;
        default: return s == StanceLabel::AntiDemocrat || s == StanceLabel::AntiRepublican;
    }
}

// Everything the table builders need, derived once.
struct AnalysisContext {
    const AnalysisInputs* inputs = nullptr;
    std::unordered_map<std::string, LabeledVideo> labels;  // ensemble output per video
    std::unordered_map<std::string, const ExperimentRun*> run_by_id;
    std::vector<RunView> included;  // paired partisan runs + qualifying controls
    std::unordered_map<std::string, std::int64_t> used_by_run;
    std::vector<std::string> watched_unique;  // rec-stage video ids, first-seen order

    const LabeledVideo& label_of(const std::string& video_id) const {
        return labels.at(video_id);
    }
};

std::vector<const WatchEvent*> used_rec_events(const AnalysisContext& ctx,
                                               const ExperimentRun& run) {
    std::vector<const WatchEvent*> out;
    const auto it = ctx.used_by_run.find(run.run_id);
    if (it == ctx.used_by_run.end()) return out;
    std::int64_t remaining = it->second;
    for (const auto& e : run.events) {
        if (e.stage != Stage::Recommendation) continue;
        if (remaining-- <= 0) break;
        out.push_back(&e);
    }
    return out;
}

std::vector<LabeledWatch> labeled_watches(const AnalysisContext& ctx, const ExperimentRun& run,
                                          int subset) {
    std::vector<LabeledWatch> out;
    for (const auto* e : used_rec_events(ctx, run)) {
        const auto& label = ctx.label_of(e->video_id);
        if (!label.is_political) {
            if (subset == 0) out.push_back({Alignment::Neutral, false});
            continue;
        }
        if (label.unresolved_stance) continue;  // no five-way majority: dropped
        const StanceLabel stance = label.stance.value_or(StanceLabel::Neutral);
        if (!in_subset(stance, subset)) continue;
        out.push_back({alignment_of(stance), true});
    }
    return out;
}

AnalysisContext build_context(const AnalysisInputs& inputs) {
    AnalysisContext ctx;
    ctx.inputs = &inputs;

    auto labeler = make_oracle_labeler(inputs.config.analysis.label_noise,
                                       inputs.config.analysis.seed, inputs.config.analysis.n_raters);
    for (const auto& v : inputs.world.videos) ctx.labels.emplace(v.video_id, labeler.label(v));

    for (const auto& run : inputs.runs) ctx.run_by_id.emplace(run.run_id, &run);

    for (const auto& pair : inputs.pairs) {
        ctx.used_by_run[pair.dem_run] = pair.n;
        ctx.used_by_run[pair.rep_run] = pair.n;
    }
    for (const auto& run : inputs.runs) {
        if (run.condition.leaning == Leaning::NeutralControl &&
            run.recommendation_count() >= inputs.config.campaign.min_pair_length)
            ctx.used_by_run[run.run_id] = run.recommendation_count();
    }
    for (const auto& run : inputs.runs)
        if (ctx.used_by_run.contains(run.run_id)) ctx.included.push_back({&run, ctx.used_by_run[run.run_id]});

    std::unordered_set<std::string> seen;
    for (const auto& view : ctx.included)
        for (const auto* e : used_rec_events(ctx, *view.run))
            if (seen.insert(e->video_id).second) ctx.watched_unique.push_back(e->video_id);
    return ctx;
}

double clamp_ci(double v) { return std::clamp(v, -1.0, 1.0); }

}  // namespace

AnalysisBundle analyze_campaign(const AnalysisInputs& inputs, int workers) {
    const auto& cfg = inputs.config;
    AnalysisBundle bundle;
    AnalysisContext ctx = build_context(inputs);
    bundle.included_runs = ctx.included.size();

    // ---- per-run ideological content, grouped by week x condition ----
    struct RunScore {
        const ExperimentRun* run;
        double score;
    };
    std::vector<RunScore> run_scores;
    for (const auto& view : ctx.included) {
        const auto watches = labeled_watches(ctx, *view.run, 0);
        try {
            run_scores.push_back({view.run, ideological_content(watches)});
        } catch (const NoPoliticalContent&) {
            // run saw no political content at all; it cannot score
        }
    }

    std::map<std::tuple<std::int64_t, int, int>, std::vector<double>> by_week_condition;
    for (const auto& rs : run_scores)
        by_week_condition[{rs.run->week, static_cast<int>(rs.run->condition.state),
                           static_cast<int>(rs.run->condition.leaning)}]
            .push_back(rs.score);
    for (const auto& [key, scores] : by_week_condition) {
        WeeklyConditionRow row;
        row.week = std::get<0>(key);
        row.condition.state = static_cast<State>(std::get<1>(key));
        row.condition.leaning = static_cast<Leaning>(std::get<2>(key));
        row.n_runs = static_cast<int>(scores.size());
        row.mean = mean(scores);
        if (scores.size() >= 2) {
            const double se = std::sqrt(sample_variance(scores) / static_cast<double>(scores.size()));
            const double tq = student_t_quantile(0.975, static_cast<double>(scores.size() - 1));
            row.ci_lo = clamp_ci(row.mean - tq * se);
            row.ci_hi = clamp_ci(row.mean + tq * se);
        } else {
            row.ci_lo = row.ci_hi = row.mean;
        }
        bundle.weekly.push_back(row);
    }

    // ---- OLS trends per condition ----
    std::map<std::string, std::vector<WeeklyScore>> weekly_by_condition;
    for (const auto& row : bundle.weekly)
        weekly_by_condition[to_string(row.condition)].push_back({row.week, row.mean});
    for (auto& [cond, scores] : weekly_by_condition) {
        if (scores.size() < 2) continue;
        std::map<std::string, std::vector<WeeklyScore>> one{{cond, scores}};
        try {
            bundle.trends.merge(condition_trends(one));
        } catch (const InsufficientData&) {
        }
    }

    // ---- matched-pair observed skew, per subset ----
    struct PairSkew {
        const MatchedPair* pair;
        std::array<double, 3> skew;
        std::array<bool, 3> defined;
    };
    std::vector<PairSkew> pair_skews;
    for (const auto& pair : inputs.pairs) {
        PairSkew ps{&pair, {}, {}};
        const auto* dem = ctx.run_by_id.at(pair.dem_run);
        const auto* rep = ctx.run_by_id.at(pair.rep_run);
        for (int subset = 0; subset < 3; ++subset) {
            auto watches = labeled_watches(ctx, *dem, subset);
            const auto rep_watches = labeled_watches(ctx, *rep, subset);
            watches.insert(watches.end(), rep_watches.begin(), rep_watches.end());
            try {
                ps.skew[static_cast<std::size_t>(subset)] = ideological_content(watches);
                ps.defined[static_cast<std::size_t>(subset)] = true;
            } catch (const NoPoliticalContent&) {
            }
        }
        pair_skews.push_back(ps);
    }

    std::map<std::pair<std::int64_t, int>, std::vector<double>> skews_by_week_state;
    for (const auto& ps : pair_skews)
        if (ps.defined[0])
            skews_by_week_state[{ps.pair->week, static_cast<int>(ps.pair->state)}].push_back(
                ps.skew[0]);
    for (const auto& [key, skews] : skews_by_week_state) {
        ObservedSkewRow row;
        row.week = key.first;
        row.state = static_cast<State>(key.second);
        row.mean_skew = mean(skews);
        row.n_pairs = static_cast<int>(skews.size());
        bundle.observed_weekly.push_back(row);
    }

    for (int subset = 0; subset < 3; ++subset) {
        std::vector<double> values;
        for (const auto& ps : pair_skews)
            if (ps.defined[static_cast<std::size_t>(subset)])
                values.push_back(ps.skew[static_cast<std::size_t>(subset)]);
        const bool defined = !values.empty();
        bundle.pooled_defined_by_subset[kSubsets[subset]] = defined;
        bundle.pooled_observed_by_subset[kSubsets[subset]] = defined ? mean(values) : 0.0;
    }
    bundle.pooled_observed_skew = bundle.pooled_observed_by_subset["all"];

    // ---- independent t-tests per state and overall ----
    auto scores_of = [&](std::optional<State> state, Leaning leaning) {
        std::vector<double> out;
        for (const auto& rs : run_scores) {
            if (state && rs.run->condition.state != *state) continue;
            if (rs.run->condition.leaning != leaning) continue;
            out.push_back(rs.score);
        }
        return out;
    };
    auto add_ttest = [&](const std::string& scope, const std::string& name,
                         const std::vector<double>& a, const std::vector<double>& b) {
        if (a.size() < 2 || b.size() < 2) return;
        try {
            const auto r = t_test_independent(a, b, TTestVariant::Welch);
            bundle.ttests.push_back(
                {scope, name, r.t, r.df, r.p, static_cast<int>(a.size()), static_cast<int>(b.size())});
        } catch (const DegenerateSample&) {
        }
    };
    for (State s : {State::NewYork, State::Texas, State::Georgia}) {
        add_ttest(to_string(s), "Republican vs Democrat", scores_of(s, Leaning::Republican),
                  scores_of(s, Leaning::Democrat));
        add_ttest(to_string(s), "Republican vs Neutral", scores_of(s, Leaning::Republican),
                  scores_of(s, Leaning::NeutralControl));
        add_ttest(to_string(s), "Democrat vs Neutral", scores_of(s, Leaning::Democrat),
                  scores_of(s, Leaning::NeutralControl));
    }
    add_ttest("Overall", "Republican vs Democrat", scores_of(std::nullopt, Leaning::Republican),
              scores_of(std::nullopt, Leaning::Democrat));
    add_ttest("Overall", "Republican vs Neutral", scores_of(std::nullopt, Leaning::Republican),
              scores_of(std::nullopt, Leaning::NeutralControl));
    add_ttest("Overall", "Democrat vs Neutral", scores_of(std::nullopt, Leaning::Democrat),
              scores_of(std::nullopt, Leaning::NeutralControl));

    // ---- counterfactual null models ----
    // cumulative stance-labeled pool per week (videos seen during and prior)
    const std::int64_t max_week = cfg.campaign.weeks;
    std::vector<std::vector<std::pair<std::size_t, StanceLabel>>> first_seen(
        static_cast<std::size_t>(max_week));
    {
        std::unordered_set<std::string> seen;
        std::map<std::int64_t, std::vector<const ExperimentRun*>> runs_by_week;
        for (const auto& view : ctx.included) runs_by_week[view.run->week].push_back(view.run);
        for (const auto& [week, runs] : runs_by_week) {
            for (const auto* run : runs) {
                for (const auto* e : used_rec_events(ctx, *run)) {
                    if (!seen.insert(e->video_id).second) continue;
                    const auto& label = ctx.label_of(e->video_id);
                    if (!label.is_political || !label.stance.has_value()) continue;
                    first_seen[static_cast<std::size_t>(week)].push_back(
                        {ctx.inputs->world.video_index.at(e->video_id), *label.stance});
                }
            }
        }
    }

    std::map<std::int64_t, std::vector<double>> pair_n_by_week;
    for (const auto& pair : inputs.pairs)
        pair_n_by_week[pair.week].push_back(static_cast<double>(pair.n));

    // weekly observed series per subset, aligned to weeks with pairs
    std::array<std::map<std::int64_t, double>, 3> observed_series;
    {
        std::array<std::map<std::int64_t, std::vector<double>>, 3> acc;
        for (const auto& ps : pair_skews)
            for (int subset = 0; subset < 3; ++subset)
                if (ps.defined[static_cast<std::size_t>(subset)])
                    acc[static_cast<std::size_t>(subset)][ps.pair->week].push_back(
                        ps.skew[static_cast<std::size_t>(subset)]);
        for (int subset = 0; subset < 3; ++subset)
            for (const auto& [week, values] : acc[static_cast<std::size_t>(subset)])
                observed_series[static_cast<std::size_t>(subset)][week] = mean(values);
    }

    const auto models = cfg.analysis.resolved_models();
    const std::size_t n_tasks = models.size() * 3;
    std::vector<CounterfactualRow> cf_rows(n_tasks);
    std::vector<bool> cf_ok(n_tasks, false);

    // per-week pools are shared across tasks; build once per subset
    std::array<std::vector<std::vector<CfPoolItem>>, 3> pools;
    for (int subset = 0; subset < 3; ++subset) {
        auto& weekly_pools = pools[static_cast<std::size_t>(subset)];
        weekly_pools.resize(static_cast<std::size_t>(max_week));
        std::vector<CfPoolItem> cumulative;
        for (std::int64_t w = 0; w < max_week; ++w) {
            // refresh ages for the current week
            for (auto& item : cumulative) item.age_weeks += 1.0;
            for (const auto& [vidx, stance] : first_seen[static_cast<std::size_t>(w)]) {
                if (!in_subset(stance, subset)) continue;
                const auto& video = inputs.world.videos[vidx];
                const auto& channel = inputs.world.channel(video.channel_id);
                cumulative.push_back(
                    CfPoolItem::from_records(video, channel, alignment_of(stance), w));
            }
            weekly_pools[static_cast<std::size_t>(w)] = cumulative;
        }
    }

    parallel_for(n_tasks, workers, [&](std::size_t task) {
        const std::size_t model_idx = task / 3;
        const int subset = static_cast<int>(task % 3);
        auto spec = models[model_idx];
        CounterfactualRow row;
        row.subset = kSubsets[subset];
        row.metric = spec.metric;
        row.recency = spec.recency;

        std::vector<double> expected, observed;
        for (std::int64_t w = 0; w < max_week; ++w) {
            const auto& pool = pools[static_cast<std::size_t>(subset)][static_cast<std::size_t>(w)];
            const auto obs_it = observed_series[static_cast<std::size_t>(subset)].find(w);
            const auto n_it = pair_n_by_week.find(w);
            if (pool.empty() || obs_it == observed_series[static_cast<std::size_t>(subset)].end() ||
                n_it == pair_n_by_week.end())
                continue;
            const auto n = std::max<std::int64_t>(1, std::llround(mean(n_it->second)));
            Rng rng(mix_seed(cfg.analysis.seed ^ 0xCF5EEDULL, task,
                             static_cast<std::uint64_t>(w)));
            try {
                const auto est = counterfactual_skew(pool, spec, n, rng);
                expected.push_back(est.mean);
                observed.push_back(obs_it->second);
            } catch (const AllZeroWeights&) {
            } catch (const EmptyPool&) {
            }
        }
        if (expected.empty()) return;
        row.weeks = static_cast<int>(expected.size());
        row.expected_mean = mean(expected);
        row.expected_se =
            expected.size() > 1
                ? std::sqrt(sample_variance(expected) / static_cast<double>(expected.size()))
                : 0.0;
        row.observed_mean = mean(observed);
        if (expected.size() >= 2 && observed.size() >= 2) {
            try {
                const auto t = t_test_independent(expected, observed, TTestVariant::Welch);
                row.t = t.t;
                row.df = t.df;
                row.p = t.p;
            } catch (const DegenerateSample&) {
            }
        }
        cf_rows[task] = row;
        cf_ok[task] = true;
    });
    for (std::size_t task = 0; task < n_tasks; ++task)
        if (cf_ok[task]) bundle.counterfactuals.push_back(cf_rows[task]);

    // ---- sensitivity analysis ----
    if (!pools[0].empty() && !pools[0].back().empty() &&
        bundle.pooled_defined_by_subset["all"]) {
        const auto& full_pool = pools[0].back();
        // deterministic subsample keeps the search fast on big campaigns
        constexpr std::size_t kSensitivityPoolCap = 1500;
        std::vector<CfPoolItem> pool;
        const std::size_t stride = std::max<std::size_t>(1, full_pool.size() / kSensitivityPoolCap);
        for (std::size_t i = 0; i < full_pool.size(); i += stride) pool.push_back(full_pool[i]);

        std::vector<Alignment> aligns(pool.size());
        for (std::size_t i = 0; i < pool.size(); ++i) aligns[i] = pool[i].alignment;

        const std::vector<CfMetric> gap_metrics{CfMetric::CombinedLSPC, CfMetric::Likes,
                                                CfMetric::Plays, CfMetric::Shares,
                                                CfMetric::Comments};
        const std::vector<std::pair<std::string, DistSpec>> families{
            {"Binomial", {DistFamily::Binomial, 20.0, 0.25}},
            {"Lognormal", {DistFamily::Lognormal, 5.0, 0.5}},
            {"Normal", {DistFamily::Normal, 5.0, 1.0}},
            {"Poisson", {DistFamily::Poisson, 5.0, 0.0}},
        };

        std::vector<SensitivityRow> rows(gap_metrics.size() * families.size());
        parallel_for(rows.size(), workers, [&](std::size_t idx) {
            const auto metric = gap_metrics[idx / families.size()];
            const auto& [family_name, base] = families[idx % families.size()];
            SensitivityRow row;
            row.metric = to_string(metric);
            row.family = family_name;
            CounterfactualModelSpec gap_spec;
            gap_spec.metric = metric;
            gap_spec.recency = RecencyMode::None;
            gap_spec.verified_weight = cfg.analysis.verified_weight;
            try {
                const auto weights = model_weights(pool, gap_spec);
                double rep_sum = 0.0, dem_sum = 0.0;
                std::int64_t rep_n = 0, dem_n = 0;
                for (std::size_t i = 0; i < pool.size(); ++i) {
                    if (aligns[i] == Alignment::RepAligned) {
                        rep_sum += weights[i];
                        ++rep_n;
                    } else if (aligns[i] == Alignment::DemAligned) {
                        dem_sum += weights[i];
                        ++dem_n;
                    }
                }
                if (rep_n == 0 || dem_n == 0) throw DegenerateSample("one-sided pool");
                row.normalized_gap = rep_sum / static_cast<double>(rep_n) -
                                     dem_sum / static_cast<double>(dem_n);

                SensitivitySpec spec;
                spec.base = base;
                spec.target_skew = bundle.pooled_observed_skew;
                spec.mc_trials = 150;
                spec.search_tolerance = 2e-3;
                Rng rng(mix_seed(cfg.analysis.seed ^ 0x5E5EEDULL, idx));
                const auto result =
                    sensitivity_required_scaling(aligns, spec, row.normalized_gap, rng);
                row.ok = true;
                row.k = result.k;
                row.delta_star = result.delta_star;
            } catch (const FeedauditError& e) {
                row.note = e.what();
            }
            rows[idx] = row;
        });
        bundle.sensitivity = std::move(rows);
    }

    // ---- mismatch logistic regression with VIF screening ----
    {
        struct Row {
            int outcome;
            std::vector<double> x;
        };
        // conditioning-stage engagement score per run (PCA over the run means)
        std::unordered_map<std::string, double> cond_score;
        {
            std::vector<const ExperimentRun*> partisan_runs;
            for (const auto& view : ctx.included)
                if (view.run->condition.leaning != Leaning::NeutralControl)
                    partisan_runs.push_back(view.run);
            std::vector<std::vector<double>> cols(4, std::vector<double>());
            for (const auto* run : partisan_runs) {
                double plays = 0, likes = 0, comments = 0, shares = 0;
                std::int64_t n = 0;
                for (const auto& e : run->events) {
                    if (e.stage != Stage::Conditioning) continue;
                    const auto& v = inputs.world.video(e.video_id);
                    plays += static_cast<double>(v.plays);
                    likes += static_cast<double>(v.likes);
                    comments += static_cast<double>(v.comments);
                    shares += static_cast<double>(v.shares);
                    ++n;
                }
                const double div = n > 0 ? static_cast<double>(n) : 1.0;
                cols[0].push_back(plays / div);
                cols[1].push_back(likes / div);
                cols[2].push_back(comments / div);
                cols[3].push_back(shares / div);
            }
            if (!partisan_runs.empty()) {
                std::vector<std::vector<double>> normalized;
                for (auto& c : cols) normalized.push_back(minmax_normalize(c));
                std::vector<double> loadings;
                try {
                    loadings = pca_first_component_weights(normalized);
                } catch (const FeedauditError&) {
                    loadings.assign(4, 0.25);
                }
                for (std::size_t i = 0; i < partisan_runs.size(); ++i) {
                    double score = 0.0;
                    for (std::size_t j = 0; j < 4; ++j) score += loadings[j] * normalized[j][i];
                    cond_score[partisan_runs[i]->run_id] = score;
                }
            }
        }

        const std::vector<std::string> names{
            "intercept",          "dem_conditioning",       "state_georgia",
            "state_texas",        "week",                   "n_conditioning",
            "cond_engagement",    "share_count",            "likes_per_rec",
            "comments_per_rec",   "opposing_comment_prop",  "video_length",
            "channel_verified",   "channel_video_count",    "channel_followers"};
        std::vector<Row> rows;
        for (const auto& view : ctx.included) {
            const auto& run = *view.run;
            if (run.condition.leaning == Leaning::NeutralControl) continue;
            for (const auto* e : used_rec_events(ctx, run)) {
                const auto& label = ctx.label_of(e->video_id);
                if (!label.is_political || !label.stance.has_value()) continue;
                const Alignment a = alignment_of(*label.stance);
                if (a == Alignment::Neutral) continue;
                const bool bot_dem = run.condition.leaning == Leaning::Democrat;
                const bool mismatch = bot_dem != (a == Alignment::DemAligned);
                const auto& video = inputs.world.video(e->video_id);
                const auto& channel = inputs.world.channel(video.channel_id);
                const auto d = derived_metrics(video);
                Row r;
                r.outcome = mismatch ? 1 : 0;
                r.x = {1.0,
                       bot_dem ? 1.0 : 0.0,
                       run.condition.state == State::Georgia ? 1.0 : 0.0,
                       run.condition.state == State::Texas ? 1.0 : 0.0,
                       static_cast<double>(run.week),
                       static_cast<double>(run.conditioning_count),
                       cond_score.contains(run.run_id) ? cond_score.at(run.run_id) : 0.0,
                       static_cast<double>(video.shares),
                       d.likes_per_rec,
                       d.comments_per_rec,
                       video.opposing_comment_prop,
                       video.duration_s,
                       channel.verified ? 1.0 : 0.0,
                       static_cast<double>(channel.video_count),
                       static_cast<double>(channel.followers)};
                rows.push_back(std::move(r));
            }
        }

        if (rows.size() > names.size() * 4) {
            // z-score the continuous columns (dummies stay 0/1)
            const std::vector<std::size_t> continuous{4, 5, 6, 7, 8, 9, 10, 11, 13, 14};
            for (std::size_t j : continuous) {
                std::vector<double> col(rows.size());
                for (std::size_t i = 0; i < rows.size(); ++i) col[i] = rows[i].x[j];
                const double m = mean(col);
                const double sd = col.size() > 1 ? std::sqrt(sample_variance(col)) : 0.0;
                for (std::size_t i = 0; i < rows.size(); ++i)
                    rows[i].x[j] = sd > 0.0 ? (rows[i].x[j] - m) / sd : 0.0;
            }

            // VIF screen over everything but the intercept; the treatment
            // dummy stays in regardless of the screen outcome
            std::vector<std::vector<double>> cols(names.size() - 1);
            for (std::size_t j = 1; j < names.size(); ++j) {
                cols[j - 1].resize(rows.size());
                for (std::size_t i = 0; i < rows.size(); ++i) cols[j - 1][i] = rows[i].x[j];
            }
            try {
                const auto initial = vif_scores(cols);
                for (std::size_t j = 0; j < initial.size(); ++j)
                    bundle.vif_initial.emplace_back(names[j + 1], initial[j]);
                auto screen = vif_screen(cols, 5.0);
                for (auto d : screen.dropped) bundle.vif_dropped.push_back(names[d + 1]);
                std::vector<std::size_t> kept_cols = screen.kept;
                if (std::find(kept_cols.begin(), kept_cols.end(), 0u) == kept_cols.end())
                    kept_cols.insert(kept_cols.begin(), 0u);  // dem_conditioning stays
                std::sort(kept_cols.begin(), kept_cols.end());

                std::vector<std::string> design_names{"intercept"};
                for (auto j : kept_cols) design_names.push_back(names[j + 1]);
                std::vector<std::vector<double>> design(rows.size());
                std::vector<int> outcomes(rows.size());
                for (std::size_t i = 0; i < rows.size(); ++i) {
                    design[i].push_back(1.0);
                    for (auto j : kept_cols) design[i].push_back(rows[i].x[j + 1]);
                    outcomes[i] = rows[i].outcome;
                }
                bundle.mismatch_fit =
                    logistic_fit(design, outcomes, design_names, cfg.analysis.ridge);
                bundle.fit_ok = true;
            } catch (const FeedauditError& e) {
                bundle.fit_note = e.what();
            }
        } else {
            bundle.fit_note = "not enough labeled partisan watches for the regression";
        }
    }

    // ---- channel mismatch table ----
    {
        std::unordered_map<std::string, std::vector<ChannelWatch>> watches_by_channel;
        std::unordered_map<std::string, std::vector<std::string>> watched_videos_by_channel;
        for (const auto& view : ctx.included) {
            const auto& run = *view.run;
            for (const auto* e : used_rec_events(ctx, run)) {
                const auto& video = inputs.world.video(e->video_id);
                watched_videos_by_channel[video.channel_id].push_back(e->video_id);
            }
        }
        // channel party from ensemble labels of its watched videos, topped up
        // with other pool videos from the channel when below the minimum
        std::unordered_map<std::string, Alignment> channel_party;
        for (const auto& [channel_id, video_ids] : watched_videos_by_channel) {
            std::vector<StanceLabel> stances;
            std::unordered_set<std::string> used;
            for (const auto& vid : video_ids) {
                if (!used.insert(vid).second) continue;
                const auto& label = ctx.label_of(vid);
                if (label.is_political && label.stance.has_value()) stances.push_back(*label.stance);
            }
            auto cls = classify_channel(stances);
            if (cls == ChannelClass::NeedsSupplement) {
                const auto cidx = inputs.world.channel_index.at(channel_id);
                int extra = 0;
                for (auto vidx : inputs.world.channel_videos[cidx]) {
                    if (extra >= 30) break;
                    const auto& vid = inputs.world.videos[vidx].video_id;
                    if (!used.insert(vid).second) continue;
                    const auto& label = ctx.label_of(vid);
                    if (label.is_political && label.stance.has_value()) {
                        stances.push_back(*label.stance);
                        ++extra;
                    }
                }
                cls = classify_channel(stances, 1);
            }
            if (cls == ChannelClass::DemAligned) channel_party.emplace(channel_id, Alignment::DemAligned);
            if (cls == ChannelClass::RepAligned) channel_party.emplace(channel_id, Alignment::RepAligned);
        }

        for (const auto& view : ctx.included) {
            const auto& run = *view.run;
            for (const auto* e : used_rec_events(ctx, run)) {
                const auto& video = inputs.world.video(e->video_id);
                const auto party = channel_party.find(video.channel_id);
                if (party == channel_party.end()) continue;
                watches_by_channel[video.channel_id].push_back(
                    {run.condition.leaning, party->second});
            }
        }

        double dem_match = 0, dem_mismatch = 0, rep_match = 0, rep_mismatch = 0;
        for (const auto& [channel_id, watches] : watches_by_channel) {
            if (static_cast<std::int64_t>(watches.size()) < cfg.analysis.min_channel_watches)
                continue;
            const auto party = channel_party.at(channel_id);
            double prop = 0.0;
            try {
                prop = mismatch_proportion(watches);
            } catch (const NoPartisanWatches&) {
                continue;
            }
            std::int64_t partisan = 0;
            for (const auto& w : watches)
                if (w.watcher != Leaning::NeutralControl) ++partisan;
            ChannelMismatchRow row;
            row.channel_id = channel_id;
            row.party = party == Alignment::DemAligned ? "DemAligned" : "RepAligned";
            row.followers = inputs.world.channel(channel_id).followers;
            row.watches = partisan;
            row.mismatch = prop;
            bundle.channels.push_back(row);
            const double mm = prop * static_cast<double>(partisan);
            if (party == Alignment::DemAligned) {
                dem_mismatch += mm;
                dem_match += static_cast<double>(partisan) - mm;
            } else {
                rep_mismatch += mm;
                rep_match += static_cast<double>(partisan) - mm;
            }
        }
        std::sort(bundle.channels.begin(), bundle.channels.end(),
                  [](const ChannelMismatchRow& a, const ChannelMismatchRow& b) {
                      if (a.followers != b.followers) return a.followers > b.followers;
                      return a.channel_id < b.channel_id;
                  });
        if (dem_match + dem_mismatch > 0 && rep_match + rep_mismatch > 0) {
            try {
                const auto chi = chi_squared_test(
                    {{rep_match, rep_mismatch}, {dem_match, dem_mismatch}});
                bundle.channel_tests.push_back(
                    {"RepChannels vs DemChannels mismatch", chi.chi2, chi.df, chi.p});
            } catch (const FeedauditError&) {
            }
        }
    }

    // ---- negative/positive partisanship split ----
    {
        std::vector<StancedWatch> stanced;
        for (const auto& view : ctx.included) {
            const auto& run = *view.run;
            if (run.condition.leaning == Leaning::NeutralControl) continue;
            for (const auto* e : used_rec_events(ctx, run)) {
                const auto& label = ctx.label_of(e->video_id);
                if (!label.is_political || !label.stance.has_value()) continue;
                stanced.push_back({run.condition.leaning, *label.stance});
            }
        }
        try {
            bundle.partisanship = partisanship_split_report(stanced);
            bundle.partisanship_ok = true;
        } catch (const NoPartisanWatches&) {
        }
    }

    // ---- topic table over unique labeled political videos ----
    {
        std::vector<TopicVideo> topic_videos;
        for (const auto& vid : ctx.watched_unique) {
            const auto& label = ctx.label_of(vid);
            if (!label.is_political || !label.stance.has_value()) continue;
            const Alignment a = alignment_of(*label.stance);
            if (a == Alignment::Neutral) continue;
            topic_videos.push_back({a, inputs.world.video(vid).topics});
        }
        bundle.topics = topic_partisan_table(topic_videos, cfg.analysis.min_topic_count);
    }

    // ---- agreement metrics over the watched corpus ----
    {
        std::vector<VideoRecord> watched_records;
        watched_records.reserve(ctx.watched_unique.size());
        for (const auto& vid : ctx.watched_unique)
            watched_records.push_back(inputs.world.video(vid));
        auto labeler = make_oracle_labeler(cfg.analysis.label_noise, cfg.analysis.seed,
                                           cfg.analysis.n_raters);
        RaterAnswerSheets sheets;
        const auto labeled = labeler.label_all(watched_records, &sheets);

        auto add_rater_agreement = [&](const std::string& question, const RatingsMatrix& m) {
            if (m.empty() || m.front().empty()) return;
            try {
                bundle.agreement.push_back({question, "FleissKappa", fleiss_kappa(m)});
            } catch (const FeedauditError&) {
            }
            try {
                bundle.agreement.push_back(
                    {question, "KrippendorffAlphaNominal", krippendorff_alpha_nominal(m)});
            } catch (const FeedauditError&) {
            }
        };
        add_rater_agreement("Q1_political", sheets.q1);
        add_rater_agreement("Q2_election", sheets.q2);
        add_rater_agreement("Q3_stance", sheets.q3);

        // ensemble vs ground truth
        ConfusionMatrix q1(2, std::vector<double>(2, 0.0));
        ConfusionMatrix q2(2, std::vector<double>(2, 0.0));
        ConfusionMatrix q3(kNumStances, std::vector<double>(kNumStances, 0.0));
        bool any_q2 = false, any_q3 = false;
        for (std::size_t i = 0; i < watched_records.size(); ++i) {
            const auto& truth = watched_records[i];
            const auto& pred = labeled[i];
            q1[truth.is_political ? 1 : 0][pred.is_political ? 1 : 0] += 1.0;
            if (pred.is_political && truth.is_political) {
                q2[truth.is_election_related ? 1 : 0][pred.is_election_related ? 1 : 0] += 1.0;
                any_q2 = true;
                if (pred.stance.has_value() && truth.stance.has_value()) {
                    q3[static_cast<std::size_t>(*truth.stance)]
                      [static_cast<std::size_t>(*pred.stance)] += 1.0;
                    any_q3 = true;
                }
            }
        }
        auto add_truth_metrics = [&](const std::string& question, const ConfusionMatrix& m) {
            try {
                bundle.agreement.push_back({question, "Accuracy", accuracy(m)});
            } catch (const FeedauditError&) {
                return;
            }
            try {
                bundle.agreement.push_back({question, "CohenKappa", cohen_kappa(m)});
            } catch (const FeedauditError&) {
            }
            try {
                bundle.agreement.push_back({question, "F1Macro", f1_macro(m)});
            } catch (const FeedauditError&) {
            }
        };
        add_truth_metrics("Q1_political", q1);
        if (any_q2) add_truth_metrics("Q2_election", q2);
        if (any_q3) add_truth_metrics("Q3_stance", q3);
    }

    // ---- rolling political share per condition ----
    {
        std::map<std::string, std::vector<const ExperimentRun*>> runs_by_condition;
        for (const auto& view : ctx.included)
            runs_by_condition[to_string(view.run->condition)].push_back(view.run);
        for (const auto& [condition, runs] : runs_by_condition) {
            std::int64_t max_len = 0;
            std::vector<std::vector<const WatchEvent*>> events;
            for (const auto* run : runs) {
                events.push_back(used_rec_events(ctx, *run));
                max_len = std::max(max_len, static_cast<std::int64_t>(events.back().size()));
            }
            std::vector<double> series;
            for (std::int64_t i = 0; i < max_len; ++i) {
                double sum = 0.0;
                int n = 0;
                for (const auto& ev : events) {
                    if (static_cast<std::int64_t>(ev.size()) <= i) continue;
                    sum += ctx.label_of(ev[static_cast<std::size_t>(i)]->video_id).is_political
                               ? 1.0
                               : 0.0;
                    ++n;
                }
                if (n == 0) break;
                series.push_back(sum / n);
            }
            if (series.empty()) continue;
            const auto rolled = rolling_average(series, cfg.analysis.rolling_window);
            for (std::size_t i = 0; i < rolled.size(); ++i)
                bundle.rolling.push_back({condition, static_cast<std::int64_t>(i), rolled[i]});
        }
    }

    // ---- misinformation screen (when a corpus is configured) ----
    if (!cfg.analysis.misinfo_corpus.empty() && !cfg.analysis.misinfo_transcripts.empty()) {
        const auto corpus = load_corpus(cfg.analysis.misinfo_corpus);
        std::ifstream in(cfg.analysis.misinfo_transcripts);
        if (!in)
            throw MissingArtifact("cannot open transcripts: " + cfg.analysis.misinfo_transcripts);
        std::vector<StancedTranscript> transcripts;
        std::string line;
        while (std::getline(in, line)) {
            if (line.empty()) continue;
            json j = json::parse(line, nullptr, false);
            if (j.is_discarded()) throw DataError("malformed transcript JSONL line");
            transcripts.push_back({j.at("text").get<std::string>(),
                                   stance_from_string(j.at("stance").get<std::string>())});
        }
        const HashedBagEmbedder embedder;
        bundle.misinfo =
            misinfo_report(transcripts, corpus, cfg.analysis.misinfo_thresholds, embedder);
        bundle.misinfo_ok = true;
    }

    // ---- watch-log validation over every run ----
    {
        std::vector<std::string> pool_ids;
        pool_ids.reserve(inputs.world.videos.size());
        for (const auto& v : inputs.world.videos) pool_ids.push_back(v.video_id);
        ValidationLimits limits{cfg.campaign.conditioning_cap, cfg.campaign.rec_cap};
        for (const auto& run : inputs.runs) {
            const auto report = validate_watch_log(run, limits, &pool_ids);
            for (const auto& issue : report.violations)
                bundle.validation_issues.emplace_back(run.run_id, issue);
        }
    }

    return bundle;
}

}  // namespace feedaudit
