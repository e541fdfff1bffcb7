#include "colink/export.hpp"
#include "colink/csv.hpp"
#include "colink/error.hpp"
#include "fs_util.hpp"

#include <json.hpp>

#include <algorithm>
#include <charconv>
#include <numeric>
#include <sstream>

namespace colink {

namespace fs = std::filesystem;

namespace {

template <typename Int>
Int parse_uint(std::string_view text, const std::string& where)
{
    Int value{};
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (text.empty() || ec != std::errc{} || ptr != text.data() + text.size())
        throw Error(Errc::invalid_record, where + ": expected an unsigned integer, got '" + std::string(text) + "'");
    return value;
}

std::vector<std::string_view> split(std::string_view line, char sep)
{
    std::vector<std::string_view> out;
    std::size_t start = 0;
    for (;;) {
        auto pos = line.find(sep, start);
        out.push_back(line.substr(start, pos - start));
        if (pos == std::string_view::npos)
            return out;
        start = pos + 1;
    }
}

std::vector<std::string_view> lines_of(const std::string& text)
{
    std::vector<std::string_view> out;
    std::string_view view = text;
    while (!view.empty()) {
        auto nl = view.find('\n');
        out.push_back(view.substr(0, nl));
        if (nl == std::string_view::npos)
            break;
        view.remove_prefix(nl + 1);
    }
    return out;
}

void fill_weights(NetworkDocument& doc)
{
    for (auto& n : doc.nodes)
        n.weight = 0;
    for (const auto& e : doc.edges) {
        doc.nodes[e.a - 1].weight += e.strength;
        doc.nodes[e.b - 1].weight += e.strength;
    }
}

void check_label(const std::string& label, std::string_view forbidden, const char* format)
{
    if (label.empty() || label.find_first_of(forbidden) != std::string::npos)
        throw Error(Errc::invalid_label, "label '" + label + "' cannot be written to a " + format + " file");
}

constexpr std::string_view vos_map_header = "id\tlabel\tcluster\tweight<Links>";

} // namespace

std::string format_real(double value)
{
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value);
    return std::string(buf, ptr);
}

// --- documents -------------------------------------------------------------

NetworkDocument to_network_document(const ClusteredNetwork& network)
{
    const auto& m = network.matrix;
    if (m.size() == 0)
        throw Error(Errc::empty_network, "network has no nodes");
    if (network.cluster_of.size() != m.size())
        throw Error(Errc::invalid_record, "cluster assignment does not cover every node");

    std::vector<std::uint32_t> order(m.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](auto a, auto b) { return m.node_ids()[a] < m.node_ids()[b]; });
    std::vector<std::uint32_t> id_of(m.size());
    NetworkDocument doc;
    for (std::uint32_t k = 0; k < order.size(); ++k) {
        id_of[order[k]] = k + 1;
        doc.nodes.push_back({k + 1, m.node_ids()[order[k]], network.cluster_of[order[k]], 0});
    }
    for (const auto& [key, w] : m.weights()) {
        auto a = id_of[key.first], b = id_of[key.second];
        doc.edges.push_back({std::min(a, b), std::max(a, b), w});
    }
    std::sort(doc.edges.begin(), doc.edges.end(),
              [](const DocumentEdge& x, const DocumentEdge& y) { return std::tie(x.a, x.b) < std::tie(y.a, y.b); });
    fill_weights(doc);
    check_document(doc);
    return doc;
}

CoOccurrenceMatrix to_matrix(const NetworkDocument& doc)
{
    check_document(doc);
    std::vector<std::string> labels;
    for (const auto& n : doc.nodes)
        labels.push_back(n.label);
    CoOccurrenceMatrix m(std::move(labels));
    for (const auto& e : doc.edges)
        m.add(e.a - 1, e.b - 1, e.strength);
    return m;
}

void check_document(const NetworkDocument& doc)
{
    std::vector<std::string_view> labels;
    for (std::size_t i = 0; i < doc.nodes.size(); ++i) {
        if (doc.nodes[i].id != i + 1)
            throw Error(Errc::invalid_record, "node ids must run 1..n in order");
        labels.push_back(doc.nodes[i].label);
    }
    std::sort(labels.begin(), labels.end());
    if (std::adjacent_find(labels.begin(), labels.end()) != labels.end())
        throw Error(Errc::invalid_record, "node labels must be unique");
    for (const auto& e : doc.edges) {
        if (!(e.a >= 1 && e.a < e.b && e.b <= doc.nodes.size()))
            throw Error(Errc::invalid_record, "edge endpoints must satisfy 1 <= a < b <= n");
        if (e.strength == 0)
            throw Error(Errc::invalid_record, "edge strengths must be positive");
    }
}

// --- VOSviewer ---------------------------------------------------------------

void write_vosviewer(const NetworkDocument& doc, const fs::path& map_path, const fs::path& network_path)
{
    check_document(doc);
    std::string map(vos_map_header);
    map += '\n';
    for (const auto& n : doc.nodes) {
        check_label(n.label, "\t\r\n", "VOSviewer");
        map += std::to_string(n.id) + '\t' + n.label + '\t' + std::to_string(n.cluster) + '\t'
               + std::to_string(n.weight) + '\n';
    }
    std::string net;
    for (const auto& e : doc.edges)
        net += std::to_string(e.a) + '\t' + std::to_string(e.b) + '\t' + std::to_string(e.strength) + '\n';
    detail::write_text_file(map_path, map);
    detail::write_text_file(network_path, net);
}

NetworkDocument read_vosviewer(const fs::path& map_path, const fs::path& network_path)
{
    const auto map = detail::read_text_file(map_path);
    const auto net = detail::read_text_file(network_path);
    auto map_lines = lines_of(map);
    if (map_lines.empty() || map_lines[0] != vos_map_header)
        throw Error(Errc::schema_mismatch, map_path.string() + ": unexpected map header");

    NetworkDocument doc;
    for (std::size_t i = 1; i < map_lines.size(); ++i) {
        const auto where = map_path.string() + ":" + std::to_string(i + 1);
        auto f = split(map_lines[i], '\t');
        if (f.size() != 4)
            throw Error(Errc::invalid_record, where + ": expected 4 tab-separated fields");
        doc.nodes.push_back({parse_uint<std::uint32_t>(f[0], where), std::string(f[1]),
                             parse_uint<std::uint32_t>(f[2], where), parse_uint<std::uint64_t>(f[3], where)});
    }
    auto net_lines = lines_of(net);
    for (std::size_t i = 0; i < net_lines.size(); ++i) {
        const auto where = network_path.string() + ":" + std::to_string(i + 1);
        auto f = split(net_lines[i], '\t');
        if (f.size() != 3)
            throw Error(Errc::invalid_record, where + ": expected 3 tab-separated fields");
        doc.edges.push_back({parse_uint<std::uint32_t>(f[0], where), parse_uint<std::uint32_t>(f[1], where),
                             parse_uint<std::uint64_t>(f[2], where)});
    }
    check_document(doc);
    return doc;
}

// --- Pajek -------------------------------------------------------------------

void write_pajek(const NetworkDocument& doc, const fs::path& path)
{
    check_document(doc);
    std::string out = "*Vertices " + std::to_string(doc.nodes.size()) + '\n';
    for (const auto& n : doc.nodes) {
        check_label(n.label, "\"\r\n", "Pajek");
        out += std::to_string(n.id) + " \"" + n.label + "\"\n";
    }
    out += "*Edges\n";
    for (const auto& e : doc.edges)
        out += std::to_string(e.a) + ' ' + std::to_string(e.b) + ' ' + std::to_string(e.strength) + '\n';
    detail::write_text_file(path, out);
}

void write_pajek_partition(const NetworkDocument& doc, const fs::path& path)
{
    check_document(doc);
    std::string out = "*Vertices " + std::to_string(doc.nodes.size()) + '\n';
    for (const auto& n : doc.nodes)
        out += std::to_string(n.cluster) + '\n';
    detail::write_text_file(path, out);
}

NetworkDocument read_pajek(const fs::path& net_path, const std::optional<fs::path>& partition_path)
{
    const auto text = detail::read_text_file(net_path);
    auto lines = lines_of(text);
    std::size_t i = 0;
    auto where = [&] { return net_path.string() + ":" + std::to_string(i + 1); };

    constexpr std::string_view vertices = "*Vertices ";
    if (lines.empty() || lines[0].substr(0, vertices.size()) != vertices)
        throw Error(Errc::schema_mismatch, net_path.string() + ": missing '*Vertices n' line");
    const auto n = parse_uint<std::size_t>(lines[0].substr(vertices.size()), where());

    NetworkDocument doc;
    for (i = 1; i <= n; ++i) {
        if (i >= lines.size())
            throw Error(Errc::invalid_record, where() + ": fewer vertex lines than declared");
        auto line = lines[i];
        auto sp = line.find(' ');
        if (sp == std::string_view::npos || line.size() < sp + 3 || line[sp + 1] != '"' || line.back() != '"')
            throw Error(Errc::invalid_record, where() + ": expected 'id \"label\"'");
        doc.nodes.push_back({parse_uint<std::uint32_t>(line.substr(0, sp), where()),
                             std::string(line.substr(sp + 2, line.size() - sp - 3)), 0, 0});
    }
    if (i >= lines.size() || lines[i] != "*Edges")
        throw Error(Errc::schema_mismatch, where() + ": expected '*Edges'");
    for (++i; i < lines.size(); ++i) {
        auto f = split(lines[i], ' ');
        if (f.size() != 3)
            throw Error(Errc::invalid_record, where() + ": expected 'a b w'");
        doc.edges.push_back({parse_uint<std::uint32_t>(f[0], where()), parse_uint<std::uint32_t>(f[1], where()),
                             parse_uint<std::uint64_t>(f[2], where())});
    }
    check_document(doc);
    fill_weights(doc);

    if (partition_path) {
        const auto clu = detail::read_text_file(*partition_path);
        auto clu_lines = lines_of(clu);
        if (clu_lines.size() != doc.nodes.size() + 1 || clu_lines[0] != "*Vertices " + std::to_string(doc.nodes.size()))
            throw Error(Errc::schema_mismatch, partition_path->string() + ": partition does not match network");
        for (std::size_t k = 0; k < doc.nodes.size(); ++k)
            doc.nodes[k].cluster = parse_uint<std::uint32_t>(clu_lines[k + 1], partition_path->string());
    }
    return doc;
}

// --- reports -------------------------------------------------------------------

std::string render_metrics_csv(const std::vector<ProjectMetrics>& metrics)
{
    std::ostringstream out;
    csv::write_row(out, {"project_id", "total_referrers", "internal_referrers", "internal_share", "age_days"});
    for (const auto& m : metrics)
        csv::write_row(out, {m.project_id, std::to_string(m.total_referrers), std::to_string(m.internal_referrers),
                             m.internal_share ? format_real(*m.internal_share) : "", std::to_string(m.age_days)});
    return out.str();
}

std::string render_summary_json(const PortfolioSummary& s)
{
    auto opt = [](const std::optional<double>& v) { return v ? nlohmann::ordered_json(*v) : nlohmann::ordered_json(); };
    nlohmann::ordered_json doc;
    doc["project_count"] = s.project_count;
    doc["total_relations"] = s.total_relations;
    doc["internal_relations"] = s.internal_relations;
    doc["mean_internal_share"] = opt(s.mean_internal_share);
    doc["max_internal_share"] = opt(s.max_internal_share);
    doc["max_internal_share_project"] = s.max_internal_share ? nlohmann::ordered_json(s.max_internal_share_project)
                                                             : nlohmann::ordered_json();
    doc["zero_internal_count"] = s.zero_internal_count;
    doc["undefined_share_count"] = s.undefined_share_count;
    doc["spearman_age_vs_referrers"] = opt(s.spearman_age_vs_referrers);
    return doc.dump(2) + "\n";
}

std::string render_tld_frequency_csv(const TldFrequency& table)
{
    std::ostringstream out;
    csv::write_row(out, {"tld", "distinct_domains"});
    for (const auto& r : table.rows)
        csv::write_row(out, {r.suffix, std::to_string(r.distinct_domains)});
    return out.str();
}

void write_reports(const std::vector<ProjectMetrics>& metrics, const TldFrequency& tld_table, const fs::path& dir)
{
    detail::ensure_directory(dir);
    detail::write_text_file(dir / metrics_csv_file, render_metrics_csv(metrics));
    detail::write_text_file(dir / summary_json_file, render_summary_json(summarize(metrics)));
    detail::write_text_file(dir / tld_frequency_file, render_tld_frequency_csv(tld_table));
}

std::vector<ProjectMetrics> read_metrics_csv(const fs::path& path)
{
    std::istringstream in(detail::read_text_file(path));
    csv::Reader reader(in);
    auto header = reader.next();
    if (!header || *header != csv::Row{"project_id", "total_referrers", "internal_referrers", "internal_share", "age_days"})
        throw Error(Errc::schema_mismatch, path.string() + ": unexpected metrics header");
    std::vector<ProjectMetrics> out;
    while (auto row = reader.next()) {
        const auto where = path.string() + ":" + std::to_string(reader.line());
        if (row->size() != 5)
            throw Error(Errc::invalid_record, where + ": expected 5 fields");
        ProjectMetrics m;
        m.project_id = (*row)[0];
        m.total_referrers = parse_uint<std::size_t>((*row)[1], where);
        m.internal_referrers = parse_uint<std::size_t>((*row)[2], where);
        if (!(*row)[3].empty()) {
            double share = 0;
            const auto& f = (*row)[3];
            auto [ptr, ec] = std::from_chars(f.data(), f.data() + f.size(), share);
            if (ec != std::errc{} || ptr != f.data() + f.size())
                throw Error(Errc::invalid_record, where + ": bad internal_share");
            m.internal_share = share;
        }
        m.age_days = parse_uint<std::int64_t>((*row)[4], where);
        out.push_back(std::move(m));
    }
    return out;
}

TldFrequency read_tld_frequency_csv(const fs::path& path)
{
    std::istringstream in(detail::read_text_file(path));
    csv::Reader reader(in);
    auto header = reader.next();
    if (!header || *header != csv::Row{"tld", "distinct_domains"})
        throw Error(Errc::schema_mismatch, path.string() + ": unexpected TLD frequency header");
    TldFrequency table;
    while (auto row = reader.next()) {
        const auto where = path.string() + ":" + std::to_string(reader.line());
        if (row->size() != 2)
            throw Error(Errc::invalid_record, where + ": expected 2 fields");
        table.rows.push_back({(*row)[0], parse_uint<std::size_t>((*row)[1], where)});
    }
    return table;
}

} // namespace colink
