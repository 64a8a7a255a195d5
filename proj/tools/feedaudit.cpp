#include <CLI11.hpp>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <nlohmann/json.hpp>
#include <thread>

#include "feedaudit/csv.hpp"
#include "feedaudit/pipeline.hpp"
#include "feedaudit/watch_log.hpp"

namespace fs = std::filesystem;
using feedaudit::CampaignConfig;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitData = 3;

void print_error(const std::string& type, const std::string& message) {
    nlohmann::json j{{"error", {{"type", type}, {"message", message}}}};
    std::cerr << j.dump() << '\n';
}

int cmd_gen_pool(const std::string& config_path, const std::string& out) {
    const auto cfg = feedaudit::load_campaign_config(config_path);
    const auto world = feedaudit::generate_pool(cfg.pool);
    feedaudit::write_pool(world.videos, world.channels, fs::path(out));
    std::cout << "wrote " << world.videos.size() << " videos, " << world.channels.size()
              << " channels to " << out << '\n';
    return kExitOk;
}

int cmd_run(const std::string& config_path, std::string out_dir, int workers) {
    const auto cfg = feedaudit::load_campaign_config(config_path);
    if (out_dir.empty()) out_dir = cfg.output_dir;
    const auto artifacts = feedaudit::run_campaign(cfg, out_dir, workers);
    std::cout << "campaign complete: " << artifacts.n_runs << " runs, " << artifacts.n_pairs
              << " matched pairs, " << artifacts.n_excluded << " excluded pairs\n"
              << "manifest: " << artifacts.manifest_path.string() << '\n';
    return kExitOk;
}

int cmd_reports(const std::string& manifest, std::string out_dir,
                const std::vector<std::string>& sets, int workers) {
    const fs::path manifest_path(manifest);
    if (out_dir.empty()) out_dir = (manifest_path.parent_path() / "reports").string();
    std::set<std::string> chosen(sets.begin(), sets.end());
    if (chosen.empty() || chosen.contains("all")) chosen = feedaudit::all_report_sets();
    feedaudit::emit_report(manifest_path, chosen, out_dir, workers);
    std::cout << "reports written to " << out_dir << '\n';
    return kExitOk;
}

int cmd_selftest(int workers) {
    // one-week smoke campaign, executed twice, byte-compared
    feedaudit::IniFile ini = feedaudit::IniFile::parse(feedaudit::default_config_text());
    auto cfg = feedaudit::config_from_ini(ini);
    cfg.campaign.weeks = 1;
    cfg.pool.n_videos = 2000;
    cfg.pool.n_channels = 80;
    cfg.analysis.reps = 25;
    cfg.analysis.models.clear();
    for (const char* m : {"Likes", "Plays", "CombinedLSPC"}) {
        feedaudit::CounterfactualModelSpec spec;
        spec.metric = feedaudit::cf_metric_from_string(m);
        spec.reps = cfg.analysis.reps;
        cfg.analysis.models.push_back(spec);
    }

    const auto base = fs::temp_directory_path() / "feedaudit-selftest";
    fs::remove_all(base);
    auto read_all = [](const fs::path& p) {
        std::ifstream in(p, std::ios::binary);
        return std::string(std::istreambuf_iterator<char>(in), {});
    };

    int failures = 0;
    auto check = [&](const std::string& name, bool ok) {
        std::cout << (ok ? "[pass] " : "[FAIL] ") << name << '\n';
        if (!ok) ++failures;
    };

    const auto a1 = feedaudit::run_campaign(cfg, base / "a", workers);
    const auto a2 = feedaudit::run_campaign(cfg, base / "b", 1);
    check("campaign runs", a1.n_runs == static_cast<std::size_t>(cfg.campaign.bots_per_week));
    check("manifest determinism across worker counts",
          read_all(a1.manifest_path) == read_all(a2.manifest_path));

    feedaudit::emit_report(a1.manifest_path, feedaudit::all_report_sets(), base / "a" / "reports",
                           workers);
    feedaudit::emit_report(a2.manifest_path, feedaudit::all_report_sets(), base / "b" / "reports",
                           1);
    bool reports_equal = true;
    for (const auto& entry : fs::directory_iterator(base / "a" / "reports")) {
        const auto other = base / "b" / "reports" / entry.path().filename();
        if (!fs::exists(other) || read_all(entry.path()) != read_all(other)) {
            reports_equal = false;
            break;
        }
    }
    check("report determinism across worker counts", reports_equal);

    const auto inputs = feedaudit::load_inputs(a1.manifest_path);
    bool logs_valid = true;
    std::vector<std::string> ids;
    for (const auto& v : inputs.world.videos) ids.push_back(v.video_id);
    for (const auto& run : inputs.runs)
        if (!feedaudit::validate_watch_log(
                 run, {cfg.campaign.conditioning_cap, cfg.campaign.rec_cap}, &ids)
                 .ok())
            logs_valid = false;
    check("watch logs valid", logs_valid);

    std::cout << (failures == 0 ? "selftest passed" : "selftest FAILED") << '\n';
    return failures == 0 ? kExitOk : kExitData;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"feedaudit: sock-puppet audit experiments against a simulated, planted-bias "
                 "recommender, plus the full statistical pipeline"};
    app.require_subcommand(1);

    std::string config_path, out, out_dir, manifest;
    std::vector<std::string> sets;
    int workers = static_cast<int>(std::thread::hardware_concurrency());
    if (workers < 1) workers = 1;
    app.add_option("--workers", workers, "worker threads (results are worker-count invariant)");

    auto* gen = app.add_subcommand("gen-pool", "generate and export a content pool");
    gen->add_option("--config", config_path, "campaign config (INI)")->required();
    gen->add_option("--out", out, "output JSONL path")->default_val("pool.jsonl");

    auto* run = app.add_subcommand("run", "execute the campaign: pool, runs, pairs, manifest");
    run->add_option("--config", config_path, "campaign config (INI)")->required();
    run->add_option("--out-dir", out_dir, "artifact directory (default: config [output] dir)");

    auto* analyze = app.add_subcommand("analyze", "run the full statistical pipeline");
    analyze->add_option("--manifest", manifest, "campaign manifest.json")->required();
    analyze->add_option("--out-dir", out_dir, "report directory (default: <manifest dir>/reports)");

    auto* report = app.add_subcommand("report", "emit selected report tables");
    report->add_option("--manifest", manifest, "campaign manifest.json")->required();
    report->add_option("--out-dir", out_dir, "report directory");
    report->add_option("--set", sets,
                       "report sets (repeatable): skew counterfactual sensitivity regression "
                       "channels partisanship topics agreement plotdata misinfo validation all");

    auto* selftest = app.add_subcommand("selftest", "one-week smoke campaign with determinism checks");

    auto* init = app.add_subcommand("init-config", "print a ready-to-edit campaign config");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? kExitOk : kExitConfig;
    }

    try {
        if (gen->parsed()) return cmd_gen_pool(config_path, out);
        if (run->parsed()) return cmd_run(config_path, out_dir, workers);
        if (analyze->parsed()) return cmd_reports(manifest, out_dir, {}, workers);
        if (report->parsed()) return cmd_reports(manifest, out_dir, sets, workers);
        if (selftest->parsed()) return cmd_selftest(workers);
        if (init->parsed()) {
            std::cout << feedaudit::default_config_text();
            return kExitOk;
        }
    } catch (const feedaudit::ConfigError& e) {
        print_error("config", e.what());
        return kExitConfig;
    } catch (const feedaudit::FeedauditError& e) {
        print_error("data", e.what());
        return kExitData;
    } catch (const std::exception& e) {
        print_error("internal", e.what());
        return kExitData;
    }
    return kExitOk;
}
