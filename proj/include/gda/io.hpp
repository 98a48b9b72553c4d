#ifndef GDA_IO_HPP
#define GDA_IO_HPP

#include <string>
#include <vector>

#include "json.hpp"

#include "gda/aztec.hpp"
#include "gda/bipartite.hpp"
#include "gda/params.hpp"
#include "gda/paths.hpp"
#include "gda/polymer.hpp"
#include "gda/stats.hpp"
#include "gda/suite.hpp"
#include "gda/weights.hpp"

namespace gda {

using Json = nlohmann::json;

// {"level": n, "a": [...], "b": [...]} with row-major grids; windows other
// than the full field add "i_min", "j_min", "rows", "cols".
Json to_json(const WeightFieldd& w);
WeightFieldd weight_field_from_json(const Json& j);

// {"psi", "phi", "theta", "s"} as arrays or scalars (constant sequences),
// with "phi_min_index" (default 1 - len) and optional "psi_min_index",
// "theta_min_index", "s_min_index" (default 1).
Json to_json(const ParamSet& p);
ParamSet params_from_json(const Json& j);

// {"white": [[x, y], ...], "black": [...], "edges": [[w, b, weight], ...]}.
Json to_json(const BipartiteGraph& g);
BipartiteGraph graph_from_json(const Json& j);

// {"n": n, "rows": ["LDUU", ...]} in the text-grid alphabet.
Json to_json(const Matching& m);
Matching matching_from_json(const Json& j);

// {"p", "m", "paths": [{"start": [x, y], "steps": "HDV..."}, ...]}.
Json to_json(const PathTuple& t);
PathTuple path_tuple_from_json(const Json& j);

Json to_json(const TestReport& r);
TestReport test_report_from_json(const Json& j);
std::string to_jsonl(const std::vector<TestReport>& reports);
// id,statistic,threshold,pass rows with a header.
std::string summary_csv(const std::vector<TestReport>& reports);

Json to_json(const FreeEnergyReport& r);

// {"tests": [...], "sizes": {"name": [[...], ...]}, "replicas": N, "seed": u64};
// throws std::invalid_argument on malformed input.
SuiteConfig suite_config_from_json(const Json& j);
Json to_json(const SuiteConfig& c);

struct CrossingRow
{
    int n = 0;
    double alpha = 0.0, beta = 0.0;
    CrossingStats stats;
    std::uint64_t seed = 0;
};
std::string crossing_csv_header();
std::string to_csv(const CrossingRow& r);

std::string read_file(const std::string& path);
// Writes path.tmp then renames over path.
void write_file_atomic(const std::string& path, const std::string& content);

} // namespace gda

#endif
