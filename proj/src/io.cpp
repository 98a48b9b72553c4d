#include "gda/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace gda {

namespace {

Json grid_to_json(const Grid<double>& g)
{
    Json out = Json::array();
    for (Eigen::Index r = 0; r < g.rows(); ++r)
        for (Eigen::Index c = 0; c < g.cols(); ++c)
            out.push_back(g(r, c));
    return out;
}

Grid<double> grid_from_json(const Json& j, int rows, int cols, const char* name)
{
    if (!j.is_array() || static_cast<long>(j.size()) != static_cast<long>(rows) * cols)
        throw std::invalid_argument(std::string("weight field '") + name + "' has the wrong length");
    Grid<double> g(rows, cols);
    std::size_t k = 0;
    for (int r = 0; r < rows; ++r)
        for (int c = 0; c < cols; ++c) {
            const Json& v = j[k++];
            if (!v.is_number())
                throw std::invalid_argument(std::string("weight field '") + name + "' has a non-number");
            g(r, c) = v.get<double>();
        }
    return g;
}

template <typename T>
T require(const Json& j, const char* key)
{
    if (!j.is_object() || !j.contains(key))
        throw std::invalid_argument(std::string("missing key '") + key + "'");
    try {
        return j.at(key).get<T>();
    } catch (const Json::exception&) {
        throw std::invalid_argument(std::string("bad value for '") + key + "'");
    }
}

template <typename T>
T optional(const Json& j, const char* key, T fallback)
{
    if (!j.contains(key))
        return fallback;
    return require<T>(j, key);
}

Json seq_to_json(const IndexedSequence& s)
{
    if (s.is_constant())
        return s(0);
    return s.values();
}

IndexedSequence seq_from_json(const Json& j, const char* key, int default_min, const char* min_key,
                              const Json& parent)
{
    if (!j.contains(key))
        throw std::invalid_argument(std::string("missing parameter '") + key + "'");
    const Json& v = j.at(key);
    if (v.is_number())
        return IndexedSequence::constant(v.get<double>());
    if (!v.is_array() || v.empty())
        throw std::invalid_argument(std::string("parameter '") + key + "' must be a number or nonempty array");
    std::vector<double> vals;
    for (const auto& x : v) {
        if (!x.is_number())
            throw std::invalid_argument(std::string("parameter '") + key + "' has a non-number");
        vals.push_back(x.get<double>());
    }
    const int lo = optional<int>(parent, min_key, default_min);
    return IndexedSequence(lo, std::move(vals));
}

std::string fmt(double x)
{
    return Json(x).dump();
}

} // namespace

Json to_json(const WeightFieldd& w)
{
    Json j;
    j["level"] = w.level;
    if (!w.is_full()) {
        j["i_min"] = w.i_min;
        j["j_min"] = w.j_min;
        j["rows"] = w.rows();
        j["cols"] = w.cols();
    }
    j["a"] = grid_to_json(w.a);
    j["b"] = grid_to_json(w.b);
    return j;
}

WeightFieldd weight_field_from_json(const Json& j)
{
    const int level = require<int>(j, "level");
    if (level < 0)
        throw std::invalid_argument("weight field level must be nonnegative");
    const int rows = optional<int>(j, "rows", level);
    const int cols = optional<int>(j, "cols", level);
    if (rows < 0 || cols < 0)
        throw std::invalid_argument("weight field shape must be nonnegative");
    Grid<double> a = grid_from_json(j.at("a"), rows, cols, "a");
    if (!j.contains("b"))
        throw std::invalid_argument("missing key 'b'");
    Grid<double> b = grid_from_json(j.at("b"), rows, cols, "b");
    return WeightFieldd(level, std::move(a), std::move(b), optional<int>(j, "i_min", 1),
                        optional<int>(j, "j_min", 1));
}

Json to_json(const ParamSet& p)
{
    Json j;
    j["psi"] = seq_to_json(p.psi);
    j["phi"] = seq_to_json(p.phi);
    j["theta"] = seq_to_json(p.theta);
    j["s"] = seq_to_json(p.s);
    if (!p.psi.is_constant())
        j["psi_min_index"] = p.psi.min_index();
    if (!p.phi.is_constant())
        j["phi_min_index"] = p.phi.min_index();
    if (!p.theta.is_constant())
        j["theta_min_index"] = p.theta.min_index();
    if (!p.s.is_constant())
        j["s_min_index"] = p.s.min_index();
    return j;
}

ParamSet params_from_json(const Json& j)
{
    if (!j.is_object())
        throw std::invalid_argument("parameter set must be a JSON object");
    ParamSet p;
    p.psi = seq_from_json(j, "psi", 1, "psi_min_index", j);
    const int phi_len = j.contains("phi") && j.at("phi").is_array() ? static_cast<int>(j.at("phi").size()) : 1;
    p.phi = seq_from_json(j, "phi", 1 - phi_len, "phi_min_index", j);
    p.theta = j.contains("theta") ? seq_from_json(j, "theta", 1, "theta_min_index", j)
                                  : IndexedSequence::constant(0.0);
    if (j.contains("s"))
        p.s = seq_from_json(j, "s", 1, "s_min_index", j);
    return p;
}

Json to_json(const BipartiteGraph& g)
{
    Json j;
    j["white"] = Json::array();
    for (const auto& p : g.white_pos())
        j["white"].push_back({p.x, p.y});
    j["black"] = Json::array();
    for (const auto& p : g.black_pos())
        j["black"].push_back({p.x, p.y});
    j["edges"] = Json::array();
    for (const auto& e : g.edges())
        j["edges"].push_back({e.white, e.black, e.weight});
    return j;
}

BipartiteGraph graph_from_json(const Json& j)
{
    if (!j.is_object() || !j.contains("white") || !j.contains("black") || !j.contains("edges"))
        throw std::invalid_argument("graph JSON needs 'white', 'black' and 'edges'");
    BipartiteGraph g;
    auto point = [](const Json& v) {
        if (v.is_array() && v.size() == 2 && v[0].is_number() && v[1].is_number())
            return Point2{v[0].get<double>(), v[1].get<double>()};
        return Point2{};
    };
    for (const auto& v : j.at("white"))
        g.add_white(point(v));
    for (const auto& v : j.at("black"))
        g.add_black(point(v));
    for (const auto& e : j.at("edges")) {
        if (!e.is_array() || e.size() != 3 || !e[0].is_number_integer() || !e[1].is_number_integer()
            || !e[2].is_number())
            throw std::invalid_argument("graph edge must be [white, black, weight]");
        const int w = e[0].get<int>(), b = e[1].get<int>();
        if (w < 0 || w >= g.n_white() || b < 0 || b >= g.n_black())
            throw std::invalid_argument("graph edge endpoint out of range");
        g.add_edge(w, b, e[2].get<double>());
    }
    return g;
}

Json to_json(const Matching& m)
{
    Json j;
    j["n"] = m.n();
    j["rows"] = Json::array();
    for (int l = 1; l <= m.n(); ++l) {
        std::string row;
        for (int k = 1; k <= m.n() + 1; ++k)
            row += dir_char(m(l, k));
        j["rows"].push_back(row);
    }
    return j;
}

Matching matching_from_json(const Json& j)
{
    const int n = require<int>(j, "n");
    const auto rows = require<std::vector<std::string>>(j, "rows");
    if (n < 0 || static_cast<int>(rows.size()) != n)
        throw std::invalid_argument("matching JSON needs n rows");
    std::string text = "aztec n=" + std::to_string(n) + "\n";
    for (const auto& r : rows) {
        if (static_cast<int>(r.size()) != n + 1)
            throw std::invalid_argument("matching row has the wrong length");
        text += r + "\n";
    }
    return matching_from_text(text);
}

Json to_json(const PathTuple& t)
{
    Json j;
    j["p"] = t.p;
    j["m"] = t.m;
    j["paths"] = Json::array();
    for (const auto& path : t.paths)
        j["paths"].push_back({{"start", {path.start.x, path.start.y}}, {"steps", path.steps}});
    return j;
}

PathTuple path_tuple_from_json(const Json& j)
{
    PathTuple t;
    t.p = require<int>(j, "p");
    t.m = require<int>(j, "m");
    if (!j.contains("paths") || !j.at("paths").is_array())
        throw std::invalid_argument("missing key 'paths'");
    for (const auto& v : j.at("paths")) {
        Path path;
        const auto start = require<std::vector<int>>(v, "start");
        if (start.size() != 2)
            throw std::invalid_argument("path start must be [x, y]");
        path.start = {start[0], start[1]};
        path.steps = require<std::string>(v, "steps");
        for (char c : path.steps)
            if (c != 'H' && c != 'D' && c != 'V')
                throw std::invalid_argument("path step must be H, D or V");
        t.paths.push_back(std::move(path));
    }
    return t;
}

Json to_json(const TestReport& r)
{
    Json j;
    j["id"] = r.id;
    j["statistic"] = r.statistic;
    j["threshold"] = r.threshold;
    j["sample_sizes"] = r.sample_sizes;
    j["pass"] = r.pass;
    j["seeds"] = r.seeds;
    j["detail"] = r.detail;
    return j;
}

TestReport test_report_from_json(const Json& j)
{
    TestReport r;
    r.id = require<std::string>(j, "id");
    r.statistic = require<double>(j, "statistic");
    r.threshold = require<double>(j, "threshold");
    r.sample_sizes = optional<std::vector<long>>(j, "sample_sizes", {});
    r.pass = require<bool>(j, "pass");
    r.seeds = optional<std::vector<std::uint64_t>>(j, "seeds", {});
    r.detail = optional<std::string>(j, "detail", "");
    return r;
}

std::string to_jsonl(const std::vector<TestReport>& reports)
{
    std::string out;
    for (const auto& r : reports)
        out += to_json(r).dump() + "\n";
    return out;
}

std::string summary_csv(const std::vector<TestReport>& reports)
{
    std::string out = "id,statistic,threshold,pass\n";
    for (const auto& r : reports)
        out += r.id + "," + fmt(r.statistic) + "," + fmt(r.threshold) + "," + (r.pass ? "1" : "0") + "\n";
    return out;
}

Json to_json(const FreeEnergyReport& r)
{
    Json j;
    j["n"] = r.n;
    j["T"] = r.T;
    j["params"] = r.params;
    j["replicas"] = r.replicas;
    j["mean"] = r.mean;
    j["variance"] = r.variance;
    j["annealed"] = r.annealed;
    j["quenched_mean"] = r.quenched_mean;
    j["variance_formula"] = r.variance_formula;
    j["variance_alt"] = r.variance_alt;
    j["gap_normalized"] = r.gap_normalized;
    j["gap_lower"] = r.gap_lower;
    j["gap_upper"] = r.gap_upper;
    j["ks"] = r.ks;
    j["ks_alt"] = r.ks_alt;
    j["ks_crit"] = r.ks_crit;
    return j;
}

SuiteConfig suite_config_from_json(const Json& j)
{
    if (!j.is_object())
        throw std::invalid_argument("suite config must be a JSON object");
    for (const auto& item : j.items())
        if (item.key() != "tests" && item.key() != "sizes" && item.key() != "replicas" && item.key() != "seed")
            throw std::invalid_argument("unknown suite config key '" + item.key() + "'");
    SuiteConfig c;
    c.tests = optional<std::vector<std::string>>(j, "tests", match_test_names());
    c.sizes = optional<std::map<std::string, std::vector<std::vector<int>>>>(j, "sizes", {});
    c.replicas = optional<long>(j, "replicas", c.replicas);
    if (j.contains("seed") && !j.at("seed").is_number_unsigned())
        throw std::invalid_argument("suite seed must be a nonnegative integer");
    c.seed = optional<std::uint64_t>(j, "seed", c.seed);
    validate_suite_config(c);
    return c;
}

Json to_json(const SuiteConfig& c)
{
    Json j;
    j["tests"] = c.tests;
    j["sizes"] = c.sizes;
    j["replicas"] = c.replicas;
    j["seed"] = c.seed;
    return j;
}

std::string crossing_csv_header()
{
    return "n,alpha,beta,x_mid,v0,v1,w0,w1,seed\n";
}

std::string to_csv(const CrossingRow& r)
{
    std::ostringstream os;
    os << r.n << ',' << fmt(r.alpha) << ',' << fmt(r.beta) << ',' << r.stats.x_mid << ',' << r.stats.v0 << ','
       << r.stats.v1 << ',' << r.stats.w0 << ',' << r.stats.w1 << ',' << r.seed << '\n';
    return os.str();
}

std::string read_file(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw std::invalid_argument("cannot read '" + path + "'");
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

void write_file_atomic(const std::string& path, const std::string& content)
{
    const std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out)
            throw std::runtime_error("cannot write '" + tmp + "'");
        out << content;
        if (!out)
            throw std::runtime_error("write failed for '" + tmp + "'");
    }
    if (std::rename(tmp.c_str(), path.c_str()) != 0)
        throw std::runtime_error("cannot rename '" + tmp + "'");
}

} // namespace gda
