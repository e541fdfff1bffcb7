#include "colink/clustering.hpp"
#include "colink/date.hpp"
#include "colink/domain.hpp"
#include "colink/error.hpp"
#include "colink/ingestion.hpp"
#include "colink/metrics.hpp"
#include "colink/networks.hpp"
#include "colink/pipeline.hpp"

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include <sstream>

namespace py = pybind11;
using namespace colink;

namespace {

py::dict matrix_dict(const CoOccurrenceMatrix& m)
{
    py::dict weights;
    for (const auto& [k, w] : m.weights())
        weights[py::make_tuple(m.node_ids()[k.first], m.node_ids()[k.second])] = w;
    py::dict out;
    out["nodes"] = m.node_ids();
    out["weights"] = weights;
    return out;
}

BipartiteIncidence incidence_from_pairs(const std::vector<std::pair<std::string, std::string>>& pairs)
{
    std::vector<ClassifiedRelation> rels;
    for (const auto& [referrer, project] : pairs)
        rels.push_back({{referrer, "", project, std::nullopt}, Origin::external});
    return build_incidence(rels, OriginFilter::both);
}

CoOccurrenceMatrix matrix_from(const std::vector<std::string>& nodes,
                               const std::vector<std::tuple<std::uint32_t, std::uint32_t, std::uint64_t>>& edges)
{
    CoOccurrenceMatrix m(nodes);
    for (auto [a, b, w] : edges)
        m.add(a, b, w);
    return m;
}

const SuffixRuleSet& bundled_rules()
{
    static const SuffixRuleSet rules = load_suffix_rules(default_config().suffix_rules);
    return rules;
}

py::dict parsed_dict(const ParsedDomain& d)
{
    py::dict out;
    out["host"] = d.host;
    out["root_domain"] = d.root_domain;
    out["public_suffix"] = d.public_suffix;
    out["second_level"] = d.second_level;
    return out;
}

} // namespace

PYBIND11_MODULE(_core, m)
{
    static py::handle error_type = py::exception<Error>(m, "ColinkError", PyExc_RuntimeError).release();
    py::register_exception_translator([](std::exception_ptr p) {
        try {
            if (p)
                std::rethrow_exception(p);
        } catch (const Error& e) {
            py::object exc = py::reinterpret_borrow<py::object>(error_type)(e.what());
            exc.attr("code") = std::string(errc_name(e.code()));
            PyErr_SetObject(error_type.ptr(), exc.ptr());
        }
    });

    m.def("normalize_host", [](std::string_view raw) { return normalize_host(raw); }, py::arg("raw"));
    m.def(
        "split_domain",
        [](std::string_view host, std::optional<std::filesystem::path> rules_path) {
            if (!rules_path)
                return parsed_dict(split_domain(host, bundled_rules()));
            return parsed_dict(split_domain(host, load_suffix_rules(*rules_path)));
        },
        py::arg("host"), py::arg("rules_path") = py::none());
    m.def(
        "country_of_tld",
        [](std::string_view suffix, std::optional<std::filesystem::path> table_path) {
            return country_of_tld(suffix, load_country_tld_table(table_path.value_or(default_config().tld_country_map)));
        },
        py::arg("public_suffix"), py::arg("table_path") = py::none());

    m.def(
        "project_age_days",
        [](std::string_view start, std::string_view snapshot) {
            return project_age_days(parse_date(start), parse_date(snapshot));
        },
        py::arg("start"), py::arg("snapshot"));
    m.def(
        "average_ranks", [](const std::vector<double>& v) { return average_ranks(v); }, py::arg("values"));
    m.def(
        "spearman",
        [](const std::vector<double>& xs, const std::vector<double>& ys) { return spearman_rank_correlation(xs, ys); },
        py::arg("xs"), py::arg("ys"));

    m.def(
        "colinked_matrix", [](const std::vector<std::pair<std::string, std::string>>& pairs) {
            return matrix_dict(colinked_matrix(incidence_from_pairs(pairs)));
        },
        py::arg("pairs"));
    m.def(
        "colinking_matrix", [](const std::vector<std::pair<std::string, std::string>>& pairs) {
            return matrix_dict(colinking_matrix(incidence_from_pairs(pairs)));
        },
        py::arg("pairs"));
    m.def(
        "cluster",
        [](const std::vector<std::string>& nodes,
           const std::vector<std::tuple<std::uint32_t, std::uint32_t, std::uint64_t>>& edges, double resolution,
           std::uint64_t seed, unsigned restarts) {
            auto cn = cluster_network(matrix_from(nodes, edges), resolution, seed, restarts);
            py::dict out;
            out["cluster_of"] = cn.cluster_of;
            out["quality"] = cn.quality;
            out["cluster_count"] = cn.cluster_count();
            return out;
        },
        py::arg("nodes"), py::arg("edges"), py::arg("resolution") = 1.0, py::arg("seed") = 42,
        py::arg("restarts") = 10);
    m.def(
        "modularity",
        [](const std::vector<std::string>& nodes,
           const std::vector<std::tuple<std::uint32_t, std::uint32_t, std::uint64_t>>& edges,
           const std::vector<std::uint32_t>& cluster_of, double resolution) {
            return modularity(matrix_from(nodes, edges), cluster_of, resolution);
        },
        py::arg("nodes"), py::arg("edges"), py::arg("cluster_of"), py::arg("resolution") = 1.0);

    m.def(
        "import_backlinks",
        [](const std::filesystem::path& portfolio_path, const std::filesystem::path& csv_path) {
            const auto& rules = bundled_rules();
            auto portfolio = load_portfolio(portfolio_path, rules);
            auto result = import_backlinks_csv(csv_path, portfolio, rules);
            py::list relations;
            for (const auto& r : result.relations) {
                py::dict d;
                d["referring_domain"] = r.referring_domain;
                d["referring_tld"] = r.referring_tld;
                d["project_id"] = r.project_id;
                d["country"] = r.country;
                relations.append(d);
            }
            py::dict stats;
            stats["rows_read"] = result.stats.rows_read;
            stats["rows_rejected"] = result.stats.rows_rejected;
            stats["self_links_dropped"] = result.stats.self_links_dropped;
            stats["relations_emitted"] = result.stats.relations_emitted;
            py::dict out;
            out["relations"] = relations;
            out["stats"] = stats;
            return out;
        },
        py::arg("portfolio_path"), py::arg("csv_path"));

    m.def(
        "run_cli",
        [](const std::vector<std::string>& args) {
            std::vector<const char*> argv{"colink"};
            for (const auto& a : args)
                argv.push_back(a.c_str());
            std::ostringstream out, err;
            int code;
            {
                py::gil_scoped_release release;
                code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
            }
            return py::make_tuple(code, out.str(), err.str());
        },
        py::arg("args"));
}
