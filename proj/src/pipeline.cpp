#include "colink/pipeline.hpp"
#include "colink/clustering.hpp"
#include "colink/digest.hpp"
#include "colink/error.hpp"
#include "colink/export.hpp"
#include "colink/log.hpp"
#include "colink/networks.hpp"
#include "fs_util.hpp"

#include <json.hpp>

#include <charconv>
#include <cstdlib>
#include <ctime>
#include <fstream>

#ifndef COLINK_DATA_DIR
#define COLINK_DATA_DIR "data"
#endif

namespace colink {

namespace fs = std::filesystem;

namespace {

std::string trim(std::string_view s)
{
    auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos)
        return {};
    auto e = s.find_last_not_of(" \t\r");
    return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> split_list(std::string_view value)
{
    std::vector<std::string> out;
    std::size_t start = 0;
    for (;;) {
        auto comma = value.find(',', start);
        auto item = trim(value.substr(start, comma - start));
        if (!item.empty())
            out.push_back(std::move(item));
        if (comma == std::string_view::npos)
            return out;
        start = comma + 1;
    }
}

template <typename T>
T parse_number(std::string_view key, std::string_view value)
{
    T out{};
    auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
    if (value.empty() || ec != std::errc{} || ptr != value.data() + value.size())
        throw Error(Errc::invalid_config, "invalid value '" + std::string(value) + "' for " + std::string(key));
    return out;
}

fs::path resolve(const fs::path& base, std::string_view value)
{
    fs::path p{std::string(value)};
    return p.is_absolute() || base.empty() ? p : base / p;
}

ProviderSettings& provider_of(PipelineConfig& c)
{
    if (!c.provider)
        c.provider.emplace();
    return *c.provider;
}

struct NetworkSpec {
    const char* name;
    const CoOccurrenceMatrix* matrix;
};

} // namespace

PipelineConfig default_config()
{
    PipelineConfig c;
    const char* env = std::getenv("COLINK_DATA_DIR");
    const fs::path data = env && *env ? env : COLINK_DATA_DIR;
    c.suffix_rules = data / "suffix_rules.txt";
    c.allowlist = data / "allowlist.txt";
    c.tld_country_map = data / "country_tld.csv";
    return c;
}

void apply_setting(PipelineConfig& c, std::string_view key, std::string_view value, const fs::path& base)
{
    if (key == "portfolio_file")
        c.portfolio_file = resolve(base, value);
    else if (key == "snapshot_date")
        c.snapshot_date = value.empty() || value == "today" ? std::nullopt : std::optional<Date>(parse_date(value));
    else if (key == "suffix_rules")
        c.suffix_rules = resolve(base, value);
    else if (key == "allowlist")
        c.allowlist = resolve(base, value);
    else if (key == "tld_country_map")
        c.tld_country_map = resolve(base, value);
    else if (key == "banned_tlds") {
        c.banned_tlds.clear();
        for (auto& t : split_list(value))
            c.banned_tlds.insert(t);
    } else if (key == "backlink_csv") {
        c.backlink_csv.clear();
        for (auto& p : split_list(value))
            c.backlink_csv.push_back(resolve(base, p));
    } else if (key == "cluster_resolution") {
        c.cluster_resolution = parse_number<double>(key, value);
        if (!(c.cluster_resolution > 0))
            throw Error(Errc::invalid_config, "cluster_resolution must be positive");
    } else if (key == "cluster_seed")
        c.cluster_seed = parse_number<std::uint64_t>(key, value);
    else if (key == "cluster_restarts") {
        c.cluster_restarts = parse_number<unsigned>(key, value);
        if (c.cluster_restarts == 0)
            throw Error(Errc::invalid_config, "cluster_restarts must be positive");
    } else if (key == "output_dir")
        c.output_dir = resolve(base, value);
    else if (key == "provider_base_url")
        provider_of(c).base_url = std::string(value);
    else if (key == "provider_credential_env")
        provider_of(c).credential_env = std::string(value);
    else if (key == "provider_page_size")
        provider_of(c).page_size = parse_number<std::size_t>(key, value);
    else if (key == "provider_retry_cap")
        provider_of(c).retry_cap = parse_number<int>(key, value);
    else if (key == "provider_workers")
        provider_of(c).workers = parse_number<std::size_t>(key, value);
    else
        throw Error(Errc::invalid_config, "unknown setting '" + std::string(key) + "'");
}

PipelineConfig load_config(const fs::path& path)
{
    std::ifstream in(path);
    if (!in)
        throw Error(Errc::file_not_found, "cannot open config file " + path.string());
    auto config = default_config();
    const auto base = path.parent_path();
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (auto hash = line.find('#'); hash != std::string::npos)
            line.erase(hash);
        if (trim(line).empty())
            continue;
        auto eq = line.find('=');
        const auto where = path.string() + ":" + std::to_string(lineno) + ": ";
        if (eq == std::string::npos)
            throw Error(Errc::invalid_config, where + "expected 'key = value'");
        try {
            apply_setting(config, trim(line.substr(0, eq)), trim(line.substr(eq + 1)), base);
        } catch (const Error& e) {
            throw Error(Errc::invalid_config, where + e.what());
        }
    }
    return config;
}

PipelineInputs load_inputs(const PipelineConfig& config)
{
    if (config.portfolio_file.empty())
        throw Error(Errc::invalid_config, "no portfolio_file configured");
    PipelineInputs in;
    in.rules = load_suffix_rules(config.suffix_rules);
    in.allowlist = load_allowlist(config.allowlist);
    in.tld_map = load_country_tld_table(config.tld_country_map);
    in.portfolio = load_portfolio(config.portfolio_file, in.rules);
    return in;
}

std::vector<std::string> validate_config(const PipelineConfig& config)
{
    std::vector<std::string> problems;
    auto check = [&](auto&& fn) {
        try {
            fn();
        } catch (const std::exception& e) {
            problems.emplace_back(e.what());
        }
    };

    SuffixRuleSet rules;
    check([&] { rules = load_suffix_rules(config.suffix_rules); });
    check([&] { load_allowlist(config.allowlist); });
    check([&] { load_country_tld_table(config.tld_country_map); });
    if (config.portfolio_file.empty()) {
        problems.emplace_back("no portfolio_file configured");
    } else {
        check([&] {
            auto portfolio = load_portfolio(config.portfolio_file, rules);
            for (const auto& [domain, ids] : duplicate_portfolio_domains(portfolio)) {
                std::string msg = "duplicate portfolio root domain '" + domain + "' used by";
                for (const auto& id : ids)
                    msg += " '" + id + "'";
                problems.push_back(std::move(msg));
            }
        });
    }
    for (const auto& p : config.backlink_csv)
        if (!fs::exists(p))
            problems.push_back("backlink CSV not found: " + p.string());
    if (!(config.cluster_resolution > 0))
        problems.emplace_back("cluster_resolution must be positive");
    if (config.cluster_restarts == 0)
        problems.emplace_back("cluster_restarts must be positive");
    if (config.provider && config.provider->base_url.empty())
        problems.emplace_back("provider settings given without provider_base_url");
    return problems;
}

fs::path snapshot_dir(const PipelineConfig& config)
{
    return config.output_dir / "snapshot";
}

IngestOutcome run_ingest(const PipelineConfig& config, const std::vector<fs::path>& csv_sources, bool fetch,
                         Sleeper sleeper)
{
    auto inputs = load_inputs(config);
    IngestOutcome outcome;
    RelationSet relations;
    for (const auto& path : csv_sources) {
        auto result = import_backlinks_csv(path, inputs.portfolio, inputs.rules);
        outcome.stats += result.stats;
        relations.merge(result.relations);
    }
    if (fetch) {
        if (!config.provider || config.provider->base_url.empty())
            throw Error(Errc::invalid_config, "--fetch needs provider_base_url in the config");
        const auto& ps = *config.provider;
        ProviderConfig pc;
        pc.base_url = ps.base_url;
        if (const char* token = std::getenv(ps.credential_env.c_str()))
            pc.credential = token;
        pc.page_size = ps.page_size;
        pc.max_attempts = ps.retry_cap;
        ProviderClient client(pc, std::move(sleeper));
        relations.merge(fetch_portfolio(inputs.portfolio, client, inputs.rules, ps.workers));
        outcome.provider_retries = client.retries();
    }
    outcome.stats.relations_emitted = relations.size();
    outcome.manifest = write_snapshot(relations, config.snapshot_date.value_or(today()), snapshot_dir(config));
    return outcome;
}

AnalyzeOutcome run_analyze(const PipelineConfig& config)
{
    auto inputs = load_inputs(config);
    const auto snap_dir = snapshot_dir(config);
    if (!fs::exists(snap_dir / snapshot_manifest_file))
        throw Error(Errc::io_error, "snapshot not found: expected " + (snap_dir / snapshot_manifest_file).string()
                                        + " (run `colink ingest` first)");
    auto snapshot = read_snapshot(snap_dir);
    const Date snapshot_date = config.snapshot_date.value_or(snapshot.manifest.snapshot_date);

    const auto filtered = filter_by_country(snapshot.relations, inputs.allowlist, inputs.tld_map);
    const auto classified = classify_relations(filtered, inputs.portfolio);
    const auto metrics = compute_project_metrics(classified, inputs.portfolio, snapshot_date);
    const auto tld_table = tld_frequency(filtered);

    const auto reports_dir = config.output_dir / "reports";
    write_reports(metrics, tld_table, reports_dir);

    const auto internal = colinked_matrix(build_incidence(classified, OriginFilter::internal));
    const auto external_classified = classify_relations(exclude_tlds(filtered, config.banned_tlds), inputs.portfolio);
    const auto external_incidence = build_incidence(external_classified, OriginFilter::external);
    const auto external_colinked = colinked_matrix(external_incidence);
    const auto external_colinking = colinking_matrix(external_incidence);

    const NetworkSpec specs[] = {
        {"internal_colinked", &internal},
        {"external_colinked", &external_colinked},
        {"external_colinking", &external_colinking},
    };

    const auto networks_dir = config.output_dir / "networks";
    detail::ensure_directory(networks_dir);
    AnalyzeOutcome outcome;
    outcome.summary = summarize(metrics);
    nlohmann::ordered_json outputs;
    for (const auto& rel : {"reports/metrics.csv", "reports/summary.json", "reports/tld_frequency.csv"})
        outputs[rel] = sha256_file(config.output_dir / rel);

    for (const auto& spec : specs) {
        NetworkOutcome no;
        no.name = spec.name;
        no.nodes = spec.matrix->size();
        no.edges = spec.matrix->weights().size();
        const std::string stem = spec.name;
        const fs::path files[] = {networks_dir / (stem + "_map.txt"), networks_dir / (stem + "_network.txt"),
                                  networks_dir / (stem + ".net"), networks_dir / (stem + ".clu")};
        if (spec.matrix->weights().empty()) {
            warn(std::string(spec.name) + " network has no co-occurrences; export skipped");
            for (const auto& f : files)
                fs::remove(f);
        } else {
            auto clustered = cluster_network(*spec.matrix, config.cluster_resolution, config.cluster_seed,
                                             config.cluster_restarts);
            auto doc = to_network_document(clustered);
            write_vosviewer(doc, files[0], files[1]);
            write_pajek(doc, files[2]);
            write_pajek_partition(doc, files[3]);
            no.written = true;
            no.clusters = clustered.cluster_count();
            no.quality = clustered.quality;
            for (const auto& f : files)
                outputs["networks/" + f.filename().string()] = sha256_file(f);
        }
        outcome.networks.push_back(no);
    }

    nlohmann::ordered_json manifest;
    manifest["snapshot_date"] = format_date(snapshot_date);
    nlohmann::ordered_json params;
    params["banned_tlds"] = std::vector<std::string>(config.banned_tlds.begin(), config.banned_tlds.end());
    params["cluster_resolution"] = config.cluster_resolution;
    params["cluster_seed"] = config.cluster_seed;
    params["cluster_restarts"] = config.cluster_restarts;
    manifest["parameters"] = params;
    nlohmann::ordered_json in;
    auto record = [&](const char* key, const fs::path& p) {
        in[key] = {{"path", p.string()}, {"sha256", sha256_file(p)}};
    };
    record("portfolio_file", config.portfolio_file);
    record("suffix_rules", config.suffix_rules);
    record("allowlist", config.allowlist);
    record("tld_country_map", config.tld_country_map);
    in["snapshot_relations_sha256"] = snapshot.manifest.relations_sha256;
    manifest["inputs"] = in;
    nlohmann::ordered_json counts;
    counts["snapshot_relations"] = snapshot.relations.size();
    counts["country_filtered_relations"] = filtered.size();
    counts["external_relations_after_tld_ban"] = external_incidence.edges().size();
    manifest["counts"] = counts;
    nlohmann::ordered_json nets = nlohmann::ordered_json::array();
    for (const auto& no : outcome.networks)
        nets.push_back({{"name", no.name},
                        {"written", no.written},
                        {"nodes", no.nodes},
                        {"edges", no.edges},
                        {"clusters", no.clusters},
                        {"quality", no.quality}});
    manifest["networks"] = nets;
    manifest["outputs"] = outputs;
    detail::write_text_file(config.output_dir / run_manifest_file, manifest.dump(2) + "\n");

    std::time_t now = std::time(nullptr);
    char stamp[32];
    std::strftime(stamp, sizeof stamp, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&now));
    detail::write_text_file(config.output_dir / run_timestamp_file, std::string(stamp) + "\n");
    return outcome;
}

} // namespace colink
