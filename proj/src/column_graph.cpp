#include "gda/column_graph.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <stdexcept>
#include <string>

namespace gda {

ColumnSpec ColumnSpec::plus(Eigen::ArrayXd up, Eigen::ArrayXd flat)
{
    if (up.size() != flat.size())
        throw std::invalid_argument("(+) column weight vectors differ in length");
    ColumnSpec c{ColumnType::Plus, static_cast<int>(up.size()), std::move(up), std::move(flat), {}, {}};
    return c;
}

ColumnSpec ColumnSpec::minus(Eigen::ArrayXd in, Eigen::ArrayXd up, Eigen::ArrayXd out)
{
    if (in.size() != up.size() || in.size() != out.size())
        throw std::invalid_argument("(-) column weight vectors differ in length");
    ColumnSpec c{ColumnType::Minus, static_cast<int>(in.size()), std::move(up), {}, std::move(in), std::move(out)};
    return c;
}

std::vector<EdgeInfo> ColumnGraph::edge_info_of(const std::vector<int>& edges) const
{
    std::vector<EdgeInfo> out;
    for (int e : edges)
        out.push_back(info.at(static_cast<std::size_t>(e)));
    return out;
}

ColumnGraph build_column_graph(const Eigen::ArrayXd& pendant, const std::vector<ColumnSpec>& columns, bool caps)
{
    ColumnGraph cg;
    cg.columns = columns;
    BipartiteGraph& g = cg.graph;
    auto add = [&](int w, int b, double wt, EdgeKind kind, int col, int row) {
        g.add_edge(w, b, wt);
        cg.info.push_back(EdgeInfo{kind, col, row});
    };

    std::vector<int> frontier;
    int top = -1;
    for (int r = 1; r <= pendant.size(); ++r) {
        const int b = g.add_black({0.0, double(-r)});
        const int w = g.add_white({1.0, double(-r)});
        add(w, b, pendant(r - 1), EdgeKind::Pendant, 0, r);
        frontier.push_back(w);
    }
    cg.first_whites = frontier;

    for (std::size_t ci = 0; ci < columns.size(); ++ci) {
        const ColumnSpec& col = columns[ci];
        const int c = static_cast<int>(ci) + 1;
        const double xb = 2.0 * c, xw = 2.0 * c + 1.0;
        const int m = col.size;
        std::vector<int> blacks, next;
        if (col.type == ColumnType::Plus) {
            if (static_cast<int>(frontier.size()) != m)
                throw std::invalid_argument("(+) column " + std::to_string(c) + " needs " + std::to_string(m)
                                            + " frontier whites, found " + std::to_string(frontier.size()));
            // Frontier whites sit at rows top .. top-m+1; new whites one higher.
            for (int k = 1; k <= m; ++k)
                blacks.push_back(g.add_black({xb, double(top - k + 1)}));
            for (int k = 1; k <= m + 1; ++k)
                next.push_back(g.add_white({xw, double(top + 2 - k)}));
            for (int k = 1; k <= m; ++k) {
                add(frontier[k - 1], blacks[k - 1], 1.0, EdgeKind::PlusIn, c, k);
                add(next[k - 1], blacks[k - 1], col.up(k - 1), EdgeKind::PlusUp, c, k);
                add(next[k], blacks[k - 1], col.flat(k - 1), EdgeKind::PlusFlat, c, k);
            }
            top += 1;
        } else {
            if (static_cast<int>(frontier.size()) != m + 1)
                throw std::invalid_argument("(-) column " + std::to_string(c) + " needs " + std::to_string(m + 1)
                                            + " frontier whites, found " + std::to_string(frontier.size()));
            for (int k = 1; k <= m; ++k) {
                blacks.push_back(g.add_black({xb, double(top - k + 1)}));
                next.push_back(g.add_white({xw, double(top - k + 1)}));
            }
            for (int k = 1; k <= m; ++k) {
                add(frontier[k - 1], blacks[k - 1], col.in(k - 1), EdgeKind::MinusIn, c, k);
                add(frontier[k], blacks[k - 1], col.up(k - 1), EdgeKind::MinusUp, c, k);
                add(next[k - 1], blacks[k - 1], col.out(k - 1), EdgeKind::MinusOut, c, k);
            }
        }
        cg.blacks.push_back(blacks);
        cg.right_whites.push_back(next);
        frontier = next;
    }

    if (caps) {
        const int c = static_cast<int>(columns.size()) + 1;
        for (std::size_t r = 0; r < frontier.size(); ++r) {
            const Point2 p = g.white_pos()[static_cast<std::size_t>(frontier[r])];
            const int b = g.add_black({p.x + 1.0, p.y});
            add(frontier[r], b, 1.0, EdgeKind::Cap, c, static_cast<int>(r) + 1);
        }
    }
    return cg;
}

namespace {

Eigen::ArrayXd ones(int m) { return Eigen::ArrayXd::Ones(m); }

// Row i of level-k beta = a/(a+b), or `fallback` where the row lies
// outside the finite window (only frozen columns ask for those).
Eigen::ArrayXd beta_row(const Cascaded& c, int level, int i, int len, double fallback = 0.5)
{
    Eigen::ArrayXd v = Eigen::ArrayXd::Constant(len, fallback);
    if (level < 1 || level > c.size() || i < 1 || i > level)
        return v;
    for (int j = 1; j <= len && j <= level; ++j)
        v(j - 1) = c.level(level).beta(i, j);
    return v;
}

Eigen::ArrayXd gamma_row(const Cascaded& c, int level, int i, int len, double fallback = 1.0)
{
    Eigen::ArrayXd v = Eigen::ArrayXd::Constant(len, fallback);
    if (level < 1 || level > c.size() || i < 1 || i > level)
        return v;
    for (int j = 1; j <= len && j <= level; ++j)
        v(j - 1) = c.level(level).gamma(i, j);
    return v;
}

// a^{[level]}_{., j} over i = 1..len.
Eigen::ArrayXd a_col(const Cascaded& c, int level, int j, int len, double fallback = 1.0)
{
    Eigen::ArrayXd v = Eigen::ArrayXd::Constant(len, fallback);
    if (level < 1 || level > c.size() || j < 1 || j > level)
        return v;
    for (int i = 1; i <= len && i <= level; ++i)
        v(i - 1) = c.level(level).A(i, j);
    return v;
}

Eigen::ArrayXd inv_b_col(const Cascaded& c, int level, int j, int len, double fallback = 1.0)
{
    Eigen::ArrayXd v = Eigen::ArrayXd::Constant(len, fallback);
    if (level < 1 || level > c.size() || j < 1 || j > level)
        return v;
    for (int i = 1; i <= len && i <= level; ++i)
        v(i - 1) = 1.0 / c.level(level).B(i, j);
    return v;
}

void check_swap_args(const Cascaded& c, int n, int l)
{
    if (n < 1 || n > c.size())
        throw std::invalid_argument("swap graph size must lie in 1..cascade size");
    if (l < 1 || l > n + 1)
        throw std::out_of_range("swap graph index l must lie in 1..n+1");
}

} // namespace

ColumnGraph build_vertical(const WeightFieldd& w)
{
    if (!w.is_full())
        throw std::invalid_argument("build_vertical needs a full level-n field");
    const int n = w.level;
    Eigen::ArrayXd pendant(n);
    for (int j = 1; j <= n; ++j)
        pendant(j - 1) = w.gamma(1, j);
    std::vector<ColumnSpec> cols;
    for (int i = 1; i <= n; ++i) {
        Eigen::ArrayXd beta(n), gamma = ones(n);
        for (int j = 1; j <= n; ++j) {
            beta(j - 1) = w.beta(i, j);
            if (i < n)
                gamma(j - 1) = w.gamma(i + 1, j);
        }
        cols.push_back(ColumnSpec::plus(beta, 1.0 - beta));
        cols.push_back(ColumnSpec::minus(ones(n), ones(n), gamma));
    }
    return build_column_graph(pendant, cols);
}

Matching vertical_to_aztec(const ColumnGraph& cg, int n, const std::vector<int>& edges)
{
    Matching m(n);
    for (int e : edges) {
        const EdgeInfo& in = cg.info.at(static_cast<std::size_t>(e));
        const int i = (in.column + 1) / 2;
        const int k = in.row;
        switch (in.kind) {
            case EdgeKind::PlusUp: m(i, k) = Dir::DL; break;
            case EdgeKind::PlusFlat: m(i, k + 1) = Dir::UL; break;
            case EdgeKind::MinusIn: m(i, k) = Dir::DR; break;
            case EdgeKind::MinusUp: m(i, k + 1) = Dir::UR; break;
            default: break;
        }
    }
    return m;
}

ColumnGraph build_vswap(const Cascaded& c, int n, int l)
{
    check_swap_args(c, n, l);
    std::vector<ColumnSpec> cols;
    for (int i = 1; i <= l - 1; ++i) {
        const int m = n - i;
        cols.push_back(ColumnSpec::minus(ones(m), ones(m), gamma_row(c, n - i, 1, m)));
    }
    for (int i = 1; i <= l; ++i) {
        const int m = n - l + i;
        const Eigen::ArrayXd beta = beta_row(c, m, i, m);
        cols.push_back(ColumnSpec::plus(beta, 1.0 - beta));
    }
    for (int i = 1; i <= n - l + 1; ++i) {
        const int m = n - i + 1;
        cols.push_back(ColumnSpec::minus(ones(m), ones(m), gamma_row(c, n - i + 1, l + 1, m)));
    }
    for (int i = 1; i <= n - l; ++i) {
        const int m = l + i - 1;
        const Eigen::ArrayXd beta = beta_row(c, l + i - 1, l + i, m);
        cols.push_back(ColumnSpec::plus(beta, 1.0 - beta));
    }
    return build_column_graph(gamma_row(c, n, 1, n), cols);
}

ColumnGraph build_hswap(const Cascaded& c, int n, int l)
{
    check_swap_args(c, n, l);
    std::vector<ColumnSpec> cols;
    for (int j = 1; j <= l - 1; ++j) {
        const int m = n - j;
        const Eigen::ArrayXd ib = inv_b_col(c, n - j, 0, m);
        cols.push_back(ColumnSpec::minus(ones(m), ib, ib));
    }
    for (int j = 1; j <= l; ++j) {
        const int m = n - l + j;
        cols.push_back(ColumnSpec::plus(a_col(c, m, j, m), ones(m)));
    }
    for (int j = 1; j <= n - l + 1; ++j) {
        const int m = n - j + 1;
        const Eigen::ArrayXd ib = inv_b_col(c, n - j + 1, l, m);
        cols.push_back(ColumnSpec::minus(ones(m), ib, ib));
    }
    for (int j = 1; j <= n - l; ++j) {
        const int m = l + j - 1;
        cols.push_back(ColumnSpec::plus(a_col(c, l + j - 1, l + j, m), ones(m)));
    }
    return build_column_graph(Eigen::ArrayXd::Ones(n), cols);
}

std::vector<int> frozen_edges(const ColumnGraph& cg, int n, int l)
{
    const int last_block_start = n + l + 1;
    std::vector<int> out;
    for (std::size_t e = 0; e < cg.info.size(); ++e) {
        const EdgeInfo& in = cg.info[e];
        const bool frozen = in.kind == EdgeKind::Pendant || in.kind == EdgeKind::Cap
                            || (in.kind == EdgeKind::MinusOut && in.column <= l - 1)
                            || (in.kind == EdgeKind::PlusIn && in.column >= last_block_start);
        if (frozen)
            out.push_back(static_cast<int>(e));
    }
    return out;
}

TrimmedGraph trim_swap_graph(const ColumnGraph& cg, int n, int l)
{
    if (l < 1 || l > n)
        throw std::out_of_range("trimming needs 1 <= l <= n");
    TrimmedGraph t{condition_on_edges(cg.graph, frozen_edges(cg, n, l)), {}, n, l};
    for (int old : t.cond.new_to_old)
        t.info.push_back(cg.info[static_cast<std::size_t>(old)]);
    return t;
}

namespace {

// Polymer step carried by an edge of the trimmed graph, or 0.
char step_of(EdgeKind k)
{
    switch (k) {
        case EdgeKind::PlusUp:
        case EdgeKind::MinusOut: return 'H';
        case EdgeKind::PlusFlat: return 'D';
        case EdgeKind::MinusUp: return 'V';
        default: return 0;
    }
}

} // namespace

PathTuple dimer_to_paths(const TrimmedGraph& t, const std::vector<int>& edges)
{
    const int p = t.n - t.l + 1;
    const int m = t.l;
    std::map<LatticePoint, char> step;
    for (int e : edges) {
        const EdgeInfo& in = t.info.at(static_cast<std::size_t>(e));
        const char s = step_of(in.kind);
        if (!s)
            continue;
        const LatticePoint v{in.column - 2 * t.l, -in.row};
        if (!step.emplace(v, s).second)
            throw std::invalid_argument("two path steps leave one vertex");
    }
    PathTuple pt;
    pt.p = p;
    pt.m = m;
    for (int j = 1; j <= p; ++j) {
        Path path{{-m, -j}, {}};
        LatticePoint q = path.start;
        for (auto it = step.find(q); it != step.end(); it = step.find(q)) {
            path.steps += it->second;
            if (it->second != 'V')
                ++q.x;
            if (it->second != 'H')
                --q.y;
        }
        pt.paths.push_back(path);
    }
    pt.check();
    return pt;
}

std::vector<int> paths_to_dimer(const TrimmedGraph& t, const PathTuple& pt)
{
    pt.check();
    std::map<LatticePoint, char> step;
    std::set<LatticePoint> on_path;
    for (const Path& path : pt.paths) {
        const auto vs = path.vertices();
        for (std::size_t s = 0; s < vs.size(); ++s) {
            on_path.insert(vs[s]);
            if (s < path.steps.size())
                step[vs[s]] = path.steps[s];
        }
    }
    std::vector<int> out;
    for (std::size_t e = 0; e < t.info.size(); ++e) {
        const EdgeInfo& in = t.info[e];
        const LatticePoint v{in.column - 2 * t.l, -in.row};
        bool use = false;
        if (in.kind == EdgeKind::PlusIn || in.kind == EdgeKind::MinusIn) {
            use = !on_path.count(v);
        } else if (const char s = step_of(in.kind)) {
            const auto it = step.find(v);
            use = it != step.end() && it->second == s;
        }
        if (use)
            out.push_back(static_cast<int>(e));
    }
    if (static_cast<int>(out.size()) != t.cond.graph.n_white())
        throw std::invalid_argument("path tuple does not correspond to a perfect matching");
    std::set<int> ws, bs;
    for (int e : out) {
        ws.insert(t.cond.graph.edge(e).white);
        bs.insert(t.cond.graph.edge(e).black);
    }
    if (static_cast<int>(ws.size()) != t.cond.graph.n_white() || static_cast<int>(bs.size()) != t.cond.graph.n_black())
        throw std::invalid_argument("path tuple does not correspond to a perfect matching");
    return out;
}

std::vector<int> column_left_matched(const ColumnGraph& cg, int column, const std::vector<int>& edges)
{
    const auto& rw = cg.right_whites.at(static_cast<std::size_t>(column - 1));
    std::map<int, int> label;
    for (std::size_t r = 0; r < rw.size(); ++r)
        label[rw[r]] = static_cast<int>(r) + 1;
    std::vector<int> out;
    for (int e : edges) {
        const EdgeInfo& in = cg.info.at(static_cast<std::size_t>(e));
        if (in.column != column)
            continue;
        if (in.kind == EdgeKind::PlusUp || in.kind == EdgeKind::PlusFlat || in.kind == EdgeKind::MinusOut)
            out.push_back(label.at(cg.graph.edge(e).white));
    }
    std::sort(out.begin(), out.end());
    return out;
}

} // namespace gda
