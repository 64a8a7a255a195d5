#include "feedaudit/config.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <set>
#include <sstream>

namespace feedaudit {

namespace {

std::string trim(std::string_view s) {
    std::size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return std::string(s.substr(b, e - b));
}

std::vector<std::string> split_ws(const std::string& s) {
    std::vector<std::string> out;
    std::istringstream in(s);
    std::string tok;
    while (in >> tok) out.push_back(tok);
    return out;
}

std::vector<std::string> split_on(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : s) {
        if (c == sep) {
            out.push_back(trim(cur));
            cur.clear();
        } else {
            cur.push_back(c);
        }
    }
    out.push_back(trim(cur));
    return out;
}

}  // namespace

IniFile IniFile::parse(const std::string& text) {
    IniFile ini;
    std::string section;
    std::istringstream in(text);
    std::string raw;
    std::size_t lineno = 0;
    std::set<std::pair<std::string, std::string>> seen;
    while (std::getline(in, raw)) {
        ++lineno;
        const auto hash = raw.find_first_of("#;");
        std::string line = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']')
                throw ConfigError("line " + std::to_string(lineno) + ": unterminated section");
            section = trim(line.substr(1, line.size() - 2));
            if (section.empty())
                throw ConfigError("line " + std::to_string(lineno) + ": empty section name");
            ini.sections.try_emplace(section);
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("line " + std::to_string(lineno) + ": expected key = value");
        if (section.empty())
            throw ConfigError("line " + std::to_string(lineno) + ": key outside any section");
        std::string key = trim(line.substr(0, eq));
        std::string value = trim(line.substr(eq + 1));
        if (key.empty()) throw ConfigError("line " + std::to_string(lineno) + ": empty key");
        if (key != "topic" && !seen.insert({section, key}).second)
            throw ConfigError("duplicate key '" + key + "' in section [" + section + "]");
        ini.sections[section].emplace_back(std::move(key), std::move(value));
    }
    return ini;
}

IniFile IniFile::load(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config: " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse(buf.str());
}

namespace {

// Tracks key consumption so anything left over is an unknown-key error.
class SectionReader {
public:
    SectionReader(const IniFile& ini, std::string name) : name_(std::move(name)) {
        auto it = ini.sections.find(name_);
        if (it != ini.sections.end()) entries_ = &it->second;
    }

    bool present() const { return entries_ != nullptr; }

    std::optional<std::string> get(const std::string& key) {
        if (entries_ == nullptr) return std::nullopt;
        consumed_.insert(key);
        for (const auto& [k, v] : *entries_)
            if (k == key) return v;
        return std::nullopt;
    }

    std::string require(const std::string& key) {
        auto v = get(key);
        if (!v)
            throw ConfigError("missing required key '" + key + "' in section [" + name_ + "]");
        return *v;
    }

    std::vector<std::string> get_all(const std::string& key) {
        std::vector<std::string> out;
        if (entries_ == nullptr) return out;
        consumed_.insert(key);
        for (const auto& [k, v] : *entries_)
            if (k == key) out.push_back(v);
        return out;
    }

    double number(const std::string& key, double fallback) {
        auto v = get(key);
        return v ? parse_double(key, *v) : fallback;
    }

    std::int64_t integer(const std::string& key, std::int64_t fallback) {
        auto v = get(key);
        return v ? parse_int(key, *v) : fallback;
    }

    std::uint64_t require_seed(const std::string& key) {
        const std::string v = require(key);
        std::uint64_t out = 0;
        const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
        if (ec != std::errc{} || ptr != v.data() + v.size())
            throw ConfigError("key '" + key + "' must be an unsigned 64-bit seed, got '" + v + "'");
        return out;
    }

    void finish() const {
        if (entries_ == nullptr) return;
        for (const auto& [k, v] : *entries_)
            if (!consumed_.contains(k))
                throw ConfigError("unknown key '" + k + "' in section [" + name_ + "]");
    }

    double parse_double(const std::string& key, const std::string& v) const {
        try {
            std::size_t pos = 0;
            const double d = std::stod(v, &pos);
            if (pos != v.size()) throw std::invalid_argument(v);
            return d;
        } catch (const std::exception&) {
            throw ConfigError("key '" + key + "' in [" + name_ + "] is not a number: '" + v + "'");
        }
    }

    std::int64_t parse_int(const std::string& key, const std::string& v) const {
        std::int64_t out = 0;
        const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
        if (ec != std::errc{} || ptr != v.data() + v.size())
            throw ConfigError("key '" + key + "' in [" + name_ + "] is not an integer: '" + v + "'");
        return out;
    }

private:
    std::string name_;
    const std::vector<std::pair<std::string, std::string>>* entries_ = nullptr;
    std::set<std::string> consumed_;
};

DistSpec parse_dist(const std::string& key, const std::string& value) {
    const auto parts = split_ws(value);
    if (parts.size() < 2 || parts.size() > 3)
        throw ConfigError("metric '" + key + "' expects: family p1 [p2]");
    DistSpec d;
    d.family = dist_family_from_string(parts[0]);
    try {
        d.p1 = std::stod(parts[1]);
        d.p2 = parts.size() > 2 ? std::stod(parts[2]) : 0.0;
    } catch (const std::exception&) {
        throw ConfigError("metric '" + key + "' has non-numeric parameters");
    }
    return d;
}

}  // namespace

std::vector<CounterfactualModelSpec> AnalysisOptions::resolved_models() const {
    if (!models.empty()) return models;
    std::vector<CounterfactualModelSpec> out;
    for (int m = 0; m < kNumCfMetrics; ++m) {
        for (RecencyMode r : {RecencyMode::None, RecencyMode::Linear, RecencyMode::Exponential}) {
            CounterfactualModelSpec spec;
            spec.metric = static_cast<CfMetric>(m);
            spec.recency = r;
            spec.verified_weight = verified_weight;
            spec.reps = reps;
            spec.lambda = recency_lambda;
            out.push_back(spec);
        }
    }
    return out;
}

CampaignConfig config_from_ini(const IniFile& ini) {
    for (const auto& [name, _] : ini.sections) {
        if (name != "pool" && name != "recommender" && name != "campaign" && name != "analysis" &&
            name != "output")
            throw ConfigError("unknown section [" + name + "]");
    }

    CampaignConfig cfg;

    {
        SectionReader s(ini, "pool");
        if (!s.present()) throw ConfigError("missing [pool] section");
        cfg.pool.seed = s.require_seed("seed");
        cfg.pool.n_videos = s.integer("n_videos", cfg.pool.n_videos);
        cfg.pool.n_channels = s.integer("n_channels", cfg.pool.n_channels);
        cfg.pool.political_fraction = s.number("political_fraction", cfg.pool.political_fraction);
        cfg.pool.verified_prob = s.number("verified_prob", cfg.pool.verified_prob);
        if (auto mix = s.get("stance_mix")) {
            const auto parts = split_ws(*mix);
            if (parts.size() != kNumStances)
                throw ConfigError("stance_mix expects five probabilities (ProDem AntiDem ProRep "
                                  "AntiRep Neutral)");
            for (int i = 0; i < kNumStances; ++i)
                cfg.pool.stance_mix[static_cast<std::size_t>(i)] =
                    s.parse_double("stance_mix", parts[static_cast<std::size_t>(i)]);
        }
        for (const auto& [metric, _] : ContentPoolSpec::default_engagement_dists())
            if (auto v = s.get(metric)) cfg.pool.engagement_dists[metric] = parse_dist(metric, *v);
        for (const auto& t : s.get_all("topic")) {
            const auto parts = split_ws(t);
            if (parts.size() != 1 + kNumStances)
                throw ConfigError("topic expects: id w_prodem w_antidem w_prorep w_antirep w_neutral");
            TopicSpec topic;
            topic.topic_id = parts[0];
            for (int i = 0; i < kNumStances; ++i)
                topic.stance_weights[static_cast<std::size_t>(i)] =
                    s.parse_double("topic", parts[static_cast<std::size_t>(i) + 1]);
            cfg.pool.topic_catalog.push_back(std::move(topic));
        }
        s.finish();
        cfg.pool.validate();
    }

    {
        SectionReader s(ini, "recommender");
        auto& r = cfg.recommender;
        r.copartisan_boost_dem = s.number("copartisan_boost_dem", r.copartisan_boost_dem);
        r.copartisan_boost_rep = s.number("copartisan_boost_rep", r.copartisan_boost_rep);
        r.crosspartisan_rate_dem = s.number("crosspartisan_rate_dem", r.crosspartisan_rate_dem);
        r.crosspartisan_rate_rep = s.number("crosspartisan_rate_rep", r.crosspartisan_rate_rep);
        r.engagement_exponent = s.number("engagement_exponent", r.engagement_exponent);
        r.polarization_drift_per_week =
            s.number("polarization_drift_per_week", r.polarization_drift_per_week);
        r.history_window = static_cast<int>(s.integer("history_window", r.history_window));
        s.finish();
        r.validate();
    }

    {
        SectionReader s(ini, "campaign");
        if (!s.present()) throw ConfigError("missing [campaign] section");
        auto& c = cfg.campaign;
        cfg.master_seed = s.require_seed("master_seed");
        c.weeks = s.integer("weeks", c.weeks);
        c.bots_per_week = static_cast<int>(s.integer("bots_per_week", c.bots_per_week));
        if (auto conds = s.get("conditions")) {
            c.conditions.clear();
            for (const auto& item : split_on(*conds, ',')) {
                const auto parts = split_on(item, ':');
                if (parts.size() != 3)
                    throw ConfigError("conditions expects State:Leaning:count entries");
                ConditionReplicates cr;
                cr.condition.state = state_from_string(parts[0]);
                cr.condition.leaning = leaning_from_string(parts[1]);
                cr.replicates = static_cast<int>(s.parse_int("conditions", parts[2]));
                c.conditions.push_back(cr);
            }
        }
        c.conditioning_channels_per_run = static_cast<int>(
            s.integer("conditioning_channels_per_run", c.conditioning_channels_per_run));
        c.videos_per_channel =
            static_cast<int>(s.integer("videos_per_channel", c.videos_per_channel));
        c.rec_batch_size = static_cast<int>(s.integer("rec_batch_size", c.rec_batch_size));
        c.rec_cap = s.integer("rec_cap", c.rec_cap);
        c.rec_window_hours = s.integer("rec_window_hours", c.rec_window_hours);
        c.conditioning_cap = s.integer("conditioning_cap", c.conditioning_cap);
        c.min_pair_length = s.integer("min_pair_length", c.min_pair_length);
        c.failure_model.probability = s.number("failure_prob", c.failure_model.probability);
        c.failure_model.bot_detection_share =
            s.number("failure_bot_detection_share", c.failure_model.bot_detection_share);
        s.finish();
        c.validate();
    }

    {
        SectionReader s(ini, "analysis");
        if (!s.present()) throw ConfigError("missing [analysis] section");
        auto& a = cfg.analysis;
        a.seed = s.require_seed("seed");
        a.reps = static_cast<int>(s.integer("reps", a.reps));
        a.recency_lambda = s.number("recency_lambda", a.recency_lambda);
        a.verified_weight = s.number("verified_weight", a.verified_weight);
        a.min_topic_count = s.integer("min_topic_count", a.min_topic_count);
        a.label_noise = s.number("label_noise", a.label_noise);
        a.n_raters = static_cast<int>(s.integer("n_raters", a.n_raters));
        a.ridge = s.number("ridge", a.ridge);
        a.min_channel_watches = s.integer("min_channel_watches", a.min_channel_watches);
        a.rolling_window = static_cast<std::size_t>(s.integer("rolling_window",
                                                              static_cast<std::int64_t>(a.rolling_window)));
        if (auto models = s.get("models")) {
            if (*models != "all") {
                for (const auto& item : split_on(*models, ',')) {
                    const auto parts = split_on(item, ':');
                    if (parts.size() != 2)
                        throw ConfigError("models expects Metric:RecencyMode entries or 'all'");
                    CounterfactualModelSpec spec;
                    spec.metric = cf_metric_from_string(parts[0]);
                    spec.recency = recency_mode_from_string(parts[1]);
                    spec.verified_weight = a.verified_weight;
                    spec.reps = a.reps;
                    spec.lambda = a.recency_lambda;
                    a.models.push_back(spec);
                }
            }
        }
        if (auto th = s.get("misinfo_thresholds")) {
            a.misinfo_thresholds.clear();
            for (const auto& tok : split_ws(*th))
                a.misinfo_thresholds.push_back(s.parse_double("misinfo_thresholds", tok));
        }
        if (auto v = s.get("misinfo_corpus")) a.misinfo_corpus = *v;
        if (auto v = s.get("misinfo_transcripts")) a.misinfo_transcripts = *v;
        s.finish();
        if (a.reps < 1) throw ConfigError("analysis reps must be >= 1");
        if (a.n_raters < 1) throw ConfigError("analysis n_raters must be >= 1");
        if (a.label_noise < 0.0 || a.label_noise > 1.0)
            throw ConfigError("label_noise outside [0,1]");
        if (a.verified_weight < 0.5 || a.verified_weight > 1.0)
            throw ConfigError("verified_weight outside [0.5,1.0]");
    }

    {
        SectionReader s(ini, "output");
        if (auto v = s.get("dir")) cfg.output_dir = *v;
        s.finish();
    }

    return cfg;
}

CampaignConfig load_campaign_config(const std::filesystem::path& path) {
    return config_from_ini(IniFile::load(path));
}

std::string default_config_text() {
    return R"(# feedaudit campaign configuration
[pool]
seed = 1001
n_videos = 8000
n_channels = 160
political_fraction = 0.30
# ProDem AntiDem ProRep AntiRep Neutral
stance_mix = 0.10 0.22 0.08 0.14 0.46
verified_prob = 0.2
# per-metric distributions: family p1 [p2]
# plays = lognormal 20000 1.6

[recommender]
copartisan_boost_dem = 1.3
copartisan_boost_rep = 2.0
crosspartisan_rate_dem = 1.2
crosspartisan_rate_rep = 0.8
engagement_exponent = 0.25
polarization_drift_per_week = 0.04
history_window = 25

[campaign]
master_seed = 2002
weeks = 27
bots_per_week = 21
conditioning_channels_per_run = 8
videos_per_channel = 50
rec_batch_size = 10
rec_cap = 1200
rec_window_hours = 144
min_pair_length = 150
failure_prob = 0.12
failure_bot_detection_share = 0.7

[analysis]
seed = 3003
reps = 100
models = all
label_noise = 0.02
n_raters = 3
min_topic_count = 100
min_channel_watches = 10

[output]
dir = out
)";
}

}  // namespace feedaudit
