#include "colink/error.hpp"
#include "colink/export.hpp"
#include "colink/pipeline.hpp"

#include <CLI11.hpp>

#include <ostream>

namespace colink {

namespace {

constexpr int exit_ok = 0;
constexpr int exit_usage = 1;
constexpr int exit_config = 2;
constexpr int exit_io = 3;
constexpr int exit_provider = 4;

int exit_code_for(const Error& e)
{
    switch (e.code()) {
    case Errc::auth_failure:
    case Errc::rate_limited:
    case Errc::transport_error:
        return exit_provider;
    case Errc::invalid_config:
    case Errc::duplicate_portfolio_domain:
        return exit_config;
    default:
        return exit_io;
    }
}

struct Overrides {
    std::string config;
    std::string portfolio;
    std::string snapshot_date;
    std::string suffix_rules;
    std::string allowlist;
    std::string tld_country_map;
    std::string banned_tlds;
    std::string output_dir;
    std::optional<double> resolution;
    std::optional<std::uint64_t> seed;
    std::optional<unsigned> restarts;
    bool banned_given = false;
};

PipelineConfig resolve_config(const Overrides& o)
{
    auto c = o.config.empty() ? default_config() : load_config(o.config);
    auto set = [&](const char* key, const std::string& value) {
        if (!value.empty())
            apply_setting(c, key, value, {});
    };
    set("portfolio_file", o.portfolio);
    set("snapshot_date", o.snapshot_date);
    set("suffix_rules", o.suffix_rules);
    set("allowlist", o.allowlist);
    set("tld_country_map", o.tld_country_map);
    set("output_dir", o.output_dir);
    if (o.banned_given)
        apply_setting(c, "banned_tlds", o.banned_tlds, {});
    if (o.resolution)
        apply_setting(c, "cluster_resolution", std::to_string(*o.resolution), {});
    if (o.seed)
        c.cluster_seed = *o.seed;
    if (o.restarts)
        apply_setting(c, "cluster_restarts", std::to_string(*o.restarts), {});
    return c;
}

void print_stats(std::ostream& out, const IngestOutcome& r)
{
    out << "rows_read=" << r.stats.rows_read << " rows_rejected=" << r.stats.rows_rejected
        << " self_links_dropped=" << r.stats.self_links_dropped << " relations=" << r.stats.relations_emitted
        << " dedup_ratio=" << format_real(r.stats.dedup_ratio());
    if (r.provider_retries)
        out << " provider_retries=" << r.provider_retries;
    out << "\nsnapshot " << format_date(r.manifest.snapshot_date) << ": " << r.manifest.relation_count
        << " relations, " << r.manifest.domain_count << " domains, " << r.manifest.project_count << " projects\n";
}

void print_analysis(std::ostream& out, const AnalyzeOutcome& a)
{
    auto opt = [](const std::optional<double>& v) { return v ? format_real(*v) : std::string("undefined"); };
    out << "projects=" << a.summary.project_count << " mean_internal_share=" << opt(a.summary.mean_internal_share)
        << " max_internal_share=" << opt(a.summary.max_internal_share)
        << " zero_internal=" << a.summary.zero_internal_count
        << " spearman_age_vs_referrers=" << opt(a.summary.spearman_age_vs_referrers) << '\n';
    for (const auto& n : a.networks) {
        out << n.name << ": ";
        if (n.written)
            out << n.nodes << " nodes, " << n.edges << " edges, " << n.clusters << " clusters\n";
        else
            out << "skipped (no co-occurrences)\n";
    }
}

} // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err)
{
    CLI::App app{"Co-link analysis of a portfolio of project websites", "colink"};
    app.require_subcommand(1);
    app.fallthrough();

    Overrides o;
    app.add_option("-c,--config", o.config, "Pipeline config file (key = value lines)");
    app.add_option("--portfolio", o.portfolio, "Portfolio CSV (project_id,root_domain,start_date,end_date,title)");
    app.add_option("--snapshot-date", o.snapshot_date, "Snapshot date YYYY-MM-DD (default: today)");
    app.add_option("--suffix-rules", o.suffix_rules, "Multi-label public suffix rule file");
    app.add_option("--allowlist", o.allowlist, "Country allowlist file (country:XX / tld:xx lines)");
    app.add_option("--tld-country-map", o.tld_country_map, "CSV tld,country_code");
    auto* banned = app.add_option("--banned-tlds", o.banned_tlds,
                                  "Comma-separated TLDs left out of external networks (default: com)");
    app.add_option("--resolution", o.resolution, "Clustering resolution (default 1.0)");
    app.add_option("--seed", o.seed, "Clustering seed (default 42)");
    app.add_option("--restarts", o.restarts, "Clustering restarts (default 10)");
    app.add_option("-o,--output-dir", o.output_dir, "Workspace output directory");

    std::vector<std::string> csv_sources;
    bool fetch = false;
    auto add_source_flags = [&](CLI::App* cmd) {
        cmd->add_option("--from-csv", csv_sources, "Backlink CSV export(s)");
        cmd->add_flag("--fetch", fetch, "Query the configured backlink provider");
    };
    auto* ingest = app.add_subcommand("ingest", "Import backlinks and write a relation snapshot");
    add_source_flags(ingest);
    auto* analyze = app.add_subcommand("analyze", "Compute metrics and co-link networks from the snapshot");
    auto* run = app.add_subcommand("run", "ingest followed by analyze");
    add_source_flags(run);
    auto* validate = app.add_subcommand("validate", "Check the configuration and referenced files");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return exit_ok;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return exit_ok;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n" << app.help();
        return exit_usage;
    }
    o.banned_given = banned->count() > 0;

    PipelineConfig config;
    try {
        config = resolve_config(o);
    } catch (const Error& e) {
        err << "config error: " << e.what() << '\n';
        return exit_config;
    }

    if (validate->parsed()) {
        auto problems = validate_config(config);
        if (problems.empty()) {
            out << "ok\n";
            return exit_ok;
        }
        for (const auto& p : problems)
            err << "problem: " << p << '\n';
        return exit_config;
    }

    const bool wants_ingest = ingest->parsed() || run->parsed();
    std::vector<std::filesystem::path> sources(csv_sources.begin(), csv_sources.end());
    if (wants_ingest) {
        if (sources.empty() && !fetch)
            sources = config.backlink_csv;
        if (sources.empty() && !fetch) {
            err << "error: give --from-csv <path>... or --fetch\n"
                << (ingest->parsed() ? ingest->help() : run->help());
            return exit_usage;
        }
    }

    try {
        load_inputs(config);
    } catch (const Error& e) {
        err << "config error: " << e.what() << '\n';
        return exit_config;
    }

    try {
        if (wants_ingest)
            print_stats(out, run_ingest(config, sources, fetch));
        if (analyze->parsed() || run->parsed())
            print_analysis(out, run_analyze(config));
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return exit_code_for(e);
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return exit_io;
    }
    return exit_ok;
}

} // namespace colink
