#include "feedaudit/pipeline.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <fstream>
#include <nlohmann/json.hpp>
#include <sstream>
#include <thread>
#include <unordered_map>
#include <unordered_set>

#include "feedaudit/csv.hpp"
#include "feedaudit/sensitivity.hpp"
#include "feedaudit/special.hpp"
#include "feedaudit/watch_log.hpp"

using nlohmann::json;

namespace feedaudit {

void parallel_for(std::size_t n, int workers, const std::function<void(std::size_t)>& work) {
    if (n == 0) return;
    const int usable = std::max(1, std::min<int>(workers, static_cast<int>(n)));
    if (usable == 1) {
        for (std::size_t i = 0; i < n; ++i) work(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    std::vector<std::exception_ptr> errors(static_cast<std::size_t>(usable));
    for (int t = 0; t < usable; ++t) {
        pool.emplace_back([&, t] {
            try {
                for (;;) {
                    const std::size_t i = next.fetch_add(1);
                    if (i >= n) return;
                    work(i);
                }
            } catch (...) {
                errors[static_cast<std::size_t>(t)] = std::current_exception();
            }
        });
    }
    for (auto& th : pool) th.join();
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
}

// ---------------------------------------------------------------------------
// config <-> json (embedded in the manifest so `analyze` is self-contained)
// ---------------------------------------------------------------------------
namespace {

json dist_to_json(const DistSpec& d) {
    return json{{"family", to_string(d.family)}, {"p1", d.p1}, {"p2", d.p2}};
}

DistSpec dist_from_json(const json& j) {
    DistSpec d;
    d.family = dist_family_from_string(j.at("family").get<std::string>());
    d.p1 = j.at("p1").get<double>();
    d.p2 = j.at("p2").get<double>();
    return d;
}

json config_to_json(const CampaignConfig& cfg) {
    json pool{{"seed", cfg.pool.seed},
              {"n_videos", cfg.pool.n_videos},
              {"n_channels", cfg.pool.n_channels},
              {"political_fraction", cfg.pool.political_fraction},
              {"verified_prob", cfg.pool.verified_prob},
              {"stance_mix", cfg.pool.stance_mix}};
    json dists = json::object();
    for (const auto& [k, v] : cfg.pool.engagement_dists) dists[k] = dist_to_json(v);
    pool["engagement_dists"] = std::move(dists);
    json topics = json::array();
    for (const auto& t : cfg.pool.topic_catalog)
        topics.push_back(json{{"id", t.topic_id}, {"weights", t.stance_weights}});
    pool["topic_catalog"] = std::move(topics);

    const auto& r = cfg.recommender;
    json rec{{"copartisan_boost_dem", r.copartisan_boost_dem},
             {"copartisan_boost_rep", r.copartisan_boost_rep},
             {"crosspartisan_rate_dem", r.crosspartisan_rate_dem},
             {"crosspartisan_rate_rep", r.crosspartisan_rate_rep},
             {"engagement_exponent", r.engagement_exponent},
             {"polarization_drift_per_week", r.polarization_drift_per_week},
             {"history_window", r.history_window}};

    const auto& c = cfg.campaign;
    json conds = json::array();
    for (const auto& cr :
         (c.conditions.empty() ? CampaignSpec::default_conditions() : c.conditions))
        conds.push_back(json{{"state", to_string(cr.condition.state)},
                             {"leaning", to_string(cr.condition.leaning)},
                             {"replicates", cr.replicates}});
    json camp{{"master_seed", cfg.master_seed},
              {"weeks", c.weeks},
              {"bots_per_week", c.bots_per_week},
              {"conditions", std::move(conds)},
              {"conditioning_channels_per_run", c.conditioning_channels_per_run},
              {"videos_per_channel", c.videos_per_channel},
              {"rec_batch_size", c.rec_batch_size},
              {"rec_cap", c.rec_cap},
              {"rec_window_hours", c.rec_window_hours},
              {"conditioning_cap", c.conditioning_cap},
              {"min_pair_length", c.min_pair_length},
              {"failure_prob", c.failure_model.probability},
              {"failure_bot_detection_share", c.failure_model.bot_detection_share}};

    const auto& a = cfg.analysis;
    json models = json::array();
    for (const auto& m : a.models)
        models.push_back(json{{"metric", to_string(m.metric)}, {"recency", to_string(m.recency)}});
    json analysis{{"seed", a.seed},
                  {"reps", a.reps},
                  {"models", std::move(models)},
                  {"recency_lambda", a.recency_lambda},
                  {"verified_weight", a.verified_weight},
                  {"min_topic_count", a.min_topic_count},
                  {"label_noise", a.label_noise},
                  {"n_raters", a.n_raters},
                  {"misinfo_thresholds", a.misinfo_thresholds},
                  {"ridge", a.ridge},
                  {"min_channel_watches", a.min_channel_watches},
                  {"rolling_window", a.rolling_window},
                  {"misinfo_corpus", a.misinfo_corpus},
                  {"misinfo_transcripts", a.misinfo_transcripts}};

    return json{{"pool", std::move(pool)},
                {"recommender", std::move(rec)},
                {"campaign", std::move(camp)},
                {"analysis", std::move(analysis)},
                {"output_dir", cfg.output_dir}};
}

CampaignConfig config_from_json(const json& j) {
    CampaignConfig cfg;
    const auto& pool = j.at("pool");
    cfg.pool.seed = pool.at("seed").get<std::uint64_t>();
    cfg.pool.n_videos = pool.at("n_videos").get<std::int64_t>();
    cfg.pool.n_channels = pool.at("n_channels").get<std::int64_t>();
    cfg.pool.political_fraction = pool.at("political_fraction").get<double>();
    cfg.pool.verified_prob = pool.at("verified_prob").get<double>();
    cfg.pool.stance_mix = pool.at("stance_mix").get<std::array<double, kNumStances>>();
    for (const auto& [k, v] : pool.at("engagement_dists").items())
        cfg.pool.engagement_dists[k] = dist_from_json(v);
    for (const auto& t : pool.at("topic_catalog")) {
        TopicSpec spec;
        spec.topic_id = t.at("id").get<std::string>();
        spec.stance_weights = t.at("weights").get<std::array<double, kNumStances>>();
        cfg.pool.topic_catalog.push_back(std::move(spec));
    }

    const auto& rec = j.at("recommender");
    cfg.recommender.copartisan_boost_dem = rec.at("copartisan_boost_dem").get<double>();
    cfg.recommender.copartisan_boost_rep = rec.at("copartisan_boost_rep").get<double>();
    cfg.recommender.crosspartisan_rate_dem = rec.at("crosspartisan_rate_dem").get<double>();
    cfg.recommender.crosspartisan_rate_rep = rec.at("crosspartisan_rate_rep").get<double>();
    cfg.recommender.engagement_exponent = rec.at("engagement_exponent").get<double>();
    cfg.recommender.polarization_drift_per_week =
        rec.at("polarization_drift_per_week").get<double>();
    cfg.recommender.history_window = rec.at("history_window").get<int>();

    const auto& camp = j.at("campaign");
    cfg.master_seed = camp.at("master_seed").get<std::uint64_t>();
    cfg.campaign.weeks = camp.at("weeks").get<std::int64_t>();
    cfg.campaign.bots_per_week = camp.at("bots_per_week").get<int>();
    for (const auto& c : camp.at("conditions")) {
        ConditionReplicates cr;
        cr.condition.state = state_from_string(c.at("state").get<std::string>());
        cr.condition.leaning = leaning_from_string(c.at("leaning").get<std::string>());
        cr.replicates = c.at("replicates").get<int>();
        cfg.campaign.conditions.push_back(cr);
    }
    cfg.campaign.conditioning_channels_per_run =
        camp.at("conditioning_channels_per_run").get<int>();
    cfg.campaign.videos_per_channel = camp.at("videos_per_channel").get<int>();
    cfg.campaign.rec_batch_size = camp.at("rec_batch_size").get<int>();
    cfg.campaign.rec_cap = camp.at("rec_cap").get<std::int64_t>();
    cfg.campaign.rec_window_hours = camp.at("rec_window_hours").get<std::int64_t>();
    cfg.campaign.conditioning_cap = camp.at("conditioning_cap").get<std::int64_t>();
    cfg.campaign.min_pair_length = camp.at("min_pair_length").get<std::int64_t>();
    cfg.campaign.failure_model.probability = camp.at("failure_prob").get<double>();
    cfg.campaign.failure_model.bot_detection_share =
        camp.at("failure_bot_detection_share").get<double>();

    const auto& a = j.at("analysis");
    cfg.analysis.seed = a.at("seed").get<std::uint64_t>();
    cfg.analysis.reps = a.at("reps").get<int>();
    for (const auto& m : a.at("models")) {
        CounterfactualModelSpec spec;
        spec.metric = cf_metric_from_string(m.at("metric").get<std::string>());
        spec.recency = recency_mode_from_string(m.at("recency").get<std::string>());
        cfg.analysis.models.push_back(spec);
    }
    cfg.analysis.recency_lambda = a.at("recency_lambda").get<double>();
    cfg.analysis.verified_weight = a.at("verified_weight").get<double>();
    cfg.analysis.min_topic_count = a.at("min_topic_count").get<std::int64_t>();
    cfg.analysis.label_noise = a.at("label_noise").get<double>();
    cfg.analysis.n_raters = a.at("n_raters").get<int>();
    cfg.analysis.misinfo_thresholds = a.at("misinfo_thresholds").get<std::vector<double>>();
    cfg.analysis.ridge = a.at("ridge").get<double>();
    cfg.analysis.min_channel_watches = a.at("min_channel_watches").get<std::int64_t>();
    cfg.analysis.rolling_window = a.at("rolling_window").get<std::size_t>();
    cfg.analysis.misinfo_corpus = a.at("misinfo_corpus").get<std::string>();
    cfg.analysis.misinfo_transcripts = a.at("misinfo_transcripts").get<std::string>();
    for (auto& m : cfg.analysis.models) {
        m.verified_weight = cfg.analysis.verified_weight;
        m.reps = cfg.analysis.reps;
        m.lambda = cfg.analysis.recency_lambda;
    }

    cfg.output_dir = j.at("output_dir").get<std::string>();
    return cfg;
}

std::string digest_of(const std::string& bytes) {
    std::ostringstream out;
    out << "fnv1a64:" << std::hex << fnv1a64(bytes);
    return out.str();
}

}  // namespace

// ---------------------------------------------------------------------------
// run_campaign
// ---------------------------------------------------------------------------
CampaignArtifacts run_campaign(const CampaignConfig& config, const std::filesystem::path& out_dir,
                               int workers) {
    config.campaign.validate();
    config.recommender.validate();
    config.pool.validate();

    std::filesystem::create_directories(out_dir);
    std::filesystem::create_directories(out_dir / "runs");

    const World world = generate_pool(config.pool);
    std::ostringstream pool_stream;
    write_pool(world.videos, world.channels, pool_stream);
    const std::string pool_bytes = pool_stream.str();
    {
        std::ofstream out(out_dir / "pool.jsonl");
        if (!out) throw DataError("cannot write pool export");
        out << pool_bytes;
    }

    const Recommender recommender(world, config.recommender);
    const auto schedule = schedule_cohorts(config.campaign, config.master_seed);

    std::vector<ExperimentRun> runs(schedule.size());
    parallel_for(schedule.size(), workers, [&](std::size_t i) {
        runs[i] = execute_run(schedule[i], config.campaign, world, recommender);
    });

    std::vector<std::string> run_digests(runs.size());
    std::vector<std::string> run_paths(runs.size());
    parallel_for(runs.size(), workers, [&](std::size_t i) {
        std::ostringstream buf;
        write_run_log(runs[i], buf);
        const std::string bytes = buf.str();
        run_digests[i] = digest_of(bytes);
        const auto rel = "runs/" + runs[i].run_id + ".jsonl";
        run_paths[i] = rel;
        std::ofstream out(out_dir / rel);
        if (!out) throw DataError("cannot write run log " + rel);
        out << bytes;
    });

    // pair matching per (week, state)
    std::map<std::pair<std::int64_t, int>, std::vector<const ExperimentRun*>> groups;
    for (const auto& run : runs)
        groups[{run.week, static_cast<int>(run.condition.state)}].push_back(&run);
    PairMatchResult all_pairs;
    for (auto& [key, members] : groups) {
        auto result = pair_match(members, config.campaign.min_pair_length);
        all_pairs.pairs.insert(all_pairs.pairs.end(), result.pairs.begin(), result.pairs.end());
        all_pairs.excluded.insert(all_pairs.excluded.end(), result.excluded.begin(),
                                  result.excluded.end());
        all_pairs.unpaired.insert(all_pairs.unpaired.end(), result.unpaired.begin(),
                                  result.unpaired.end());
    }
    std::sort(all_pairs.unpaired.begin(), all_pairs.unpaired.end());

    json manifest;
    manifest["tool"] = "feedaudit";
    manifest["version"] = kToolVersion;
    manifest["config"] = config_to_json(config);
    manifest["pool"] = json{{"path", "pool.jsonl"},
                            {"digest", digest_of(pool_bytes)},
                            {"videos", world.videos.size()},
                            {"channels", world.channels.size()}};
    json jruns = json::array();
    for (std::size_t i = 0; i < runs.size(); ++i) {
        const auto& r = runs[i];
        jruns.push_back(json{{"run_id", r.run_id},
                             {"week", r.week},
                             {"state", to_string(r.condition.state)},
                             {"leaning", to_string(r.condition.leaning)},
                             {"seed", r.seed},
                             {"status", to_string(r.status)},
                             {"conditioning_count", r.conditioning_count},
                             {"recommendation_count", r.recommendation_count()},
                             {"path", run_paths[i]},
                             {"digest", run_digests[i]}});
    }
    manifest["runs"] = std::move(jruns);
    json jpairs = json::array();
    for (const auto& p : all_pairs.pairs)
        jpairs.push_back(json{{"dem_run", p.dem_run},
                              {"rep_run", p.rep_run},
                              {"week", p.week},
                              {"state", to_string(p.state)},
                              {"n", p.n}});
    manifest["pairs"] = std::move(jpairs);
    json jexcluded = json::array();
    for (const auto& e : all_pairs.excluded)
        jexcluded.push_back(json{{"dem_run", e.dem_run},
                                 {"rep_run", e.rep_run},
                                 {"week", e.week},
                                 {"state", to_string(e.state)},
                                 {"n", e.n},
                                 {"reason", e.reason}});
    manifest["excluded_pairs"] = std::move(jexcluded);
    manifest["unpaired"] = all_pairs.unpaired;

    const auto manifest_path = out_dir / "manifest.json";
    {
        std::ofstream out(manifest_path);
        if (!out) throw DataError("cannot write manifest");
        out << manifest.dump(2) << '\n';
    }

    CampaignArtifacts artifacts;
    artifacts.manifest_path = manifest_path;
    artifacts.n_runs = runs.size();
    artifacts.n_pairs = all_pairs.pairs.size();
    artifacts.n_excluded = all_pairs.excluded.size();
    return artifacts;
}

AnalysisInputs load_inputs(const std::filesystem::path& manifest_path) {
    std::ifstream in(manifest_path);
    if (!in) throw MissingArtifact("cannot open manifest: " + manifest_path.string());
    json manifest = json::parse(in, nullptr, false);
    if (manifest.is_discarded()) throw DataError("manifest is not valid JSON");

    AnalysisInputs inputs;
    inputs.config = config_from_json(manifest.at("config"));

    const auto base = manifest_path.parent_path();
    const auto pool_path = base / manifest.at("pool").at("path").get<std::string>();
    if (!std::filesystem::exists(pool_path))
        throw MissingArtifact("pool export missing: " + pool_path.string());
    std::vector<VideoRecord> videos;
    std::vector<ChannelRecord> channels;
    read_pool(pool_path, videos, channels);
    inputs.world = World::from_records(std::move(videos), std::move(channels));

    for (const auto& r : manifest.at("runs")) {
        const auto rel = r.at("path").get<std::string>();
        const auto path = base / rel;
        if (!std::filesystem::exists(path)) throw MissingArtifact("run log missing: " + rel);
        inputs.runs.push_back(read_run_log(path));
    }
    for (const auto& p : manifest.at("pairs")) {
        MatchedPair pair;
        pair.dem_run = p.at("dem_run").get<std::string>();
        pair.rep_run = p.at("rep_run").get<std::string>();
        pair.week = p.at("week").get<std::int64_t>();
        pair.state = state_from_string(p.at("state").get<std::string>());
        pair.n = p.at("n").get<std::int64_t>();
        inputs.pairs.push_back(std::move(pair));
    }
    for (const auto& e : manifest.at("excluded_pairs")) {
        PairExclusion ex;
        ex.dem_run = e.at("dem_run").get<std::string>();
        ex.rep_run = e.at("rep_run").get<std::string>();
        ex.week = e.at("week").get<std::int64_t>();
        ex.state = state_from_string(e.at("state").get<std::string>());
        ex.n = e.at("n").get<std::int64_t>();
        ex.reason = e.at("reason").get<std::string>();
        inputs.excluded.push_back(std::move(ex));
    }
    return inputs;
}

}  // namespace feedaudit
