#ifndef GDA_COLUMN_GRAPH_HPP
#define GDA_COLUMN_GRAPH_HPP

#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "gda/bipartite.hpp"
#include "gda/paths.hpp"
#include "gda/weights.hpp"

namespace gda {

enum class EdgeKind : std::uint8_t { Pendant, PlusIn, PlusUp, PlusFlat, MinusIn, MinusUp, MinusOut, Cap };
enum class ColumnType : std::uint8_t { Plus, Minus };

// A (+) column of size m takes m frontier whites to m+1 whites: black k is
// joined to frontier white k (PlusIn, weight 1), to new white k (PlusUp,
// up-right) and to new white k+1 (PlusFlat). A (-) column of size m takes
// m+1 whites to m: black k is joined to frontier white k (MinusIn), to
// frontier white k+1 (MinusUp) and to new white k (MinusOut).
struct ColumnSpec
{
    ColumnType type;
    int size;
    Eigen::ArrayXd up;     // PlusUp or MinusUp weights
    Eigen::ArrayXd flat;   // PlusFlat weights (Plus only)
    Eigen::ArrayXd in;     // MinusIn weights (Minus only)
    Eigen::ArrayXd out;    // MinusOut weights (Minus only)

    static ColumnSpec plus(Eigen::ArrayXd up, Eigen::ArrayXd flat);
    static ColumnSpec minus(Eigen::ArrayXd in, Eigen::ArrayXd up, Eigen::ArrayXd out);
};

struct EdgeInfo
{
    EdgeKind kind;
    int column;  // 1-based column index; 0 for pendant, C+1 for caps
    int row;     // black row within the column (pendant/cap: white row)
};

struct ColumnGraph
{
    BipartiteGraph graph;
    std::vector<EdgeInfo> info;                  // per edge, parallel to graph.edges()
    std::vector<ColumnSpec> columns;
    std::vector<std::vector<int>> blacks;        // per column, top-down
    std::vector<std::vector<int>> right_whites;  // per column, top-down
    std::vector<int> first_whites;               // whites left of column 1
    std::vector<EdgeInfo> edge_info_of(const std::vector<int>& edges) const;
};

// Pendant blacks with the given weights feed the first frontier; caps of
// weight 1 close the last frontier when requested.
ColumnGraph build_column_graph(const Eigen::ArrayXd& pendant, const std::vector<ColumnSpec>& columns,
                               bool caps = true);

// Column-by-column presentation of the level-n Aztec diamond.
ColumnGraph build_vertical(const WeightFieldd& w);
Matching vertical_to_aztec(const ColumnGraph& cg, int n, const std::vector<int>& edges);

// G^{v-swap}_{n,l}: blocks of l-1 (-), l (+), n-l+1 (-), n-l (+) columns.
ColumnGraph build_vswap(const Cascaded& c, int n, int l);

// G^{h-swap}_{n,l}: same shape with a on (+') columns and 1/b on (-')
// columns. Weights b_{i,0} of the first block lie outside the level-n
// window; those columns carry frozen edges only, so weight 1 is used.
ColumnGraph build_hswap(const Cascaded& c, int n, int l);

// Edges forced in every matching of a swap graph built for (n, l).
std::vector<int> frozen_edges(const ColumnGraph& cg, int n, int l);

struct TrimmedGraph
{
    Conditioned cond;
    std::vector<EdgeInfo> info;  // per edge of cond.graph
    int n = 0;
    int l = 0;
};
TrimmedGraph trim_swap_graph(const ColumnGraph& cg, int n, int l);

// Bijection between matchings of the trimmed graph and path tuples with
// p = n-l+1 paths and m = l.
PathTuple dimer_to_paths(const TrimmedGraph& t, const std::vector<int>& edges);
std::vector<int> paths_to_dimer(const TrimmedGraph& t, const PathTuple& paths);

// Labels of the right whites of column `column` matched to the left.
std::vector<int> column_left_matched(const ColumnGraph& cg, int column, const std::vector<int>& edges);

} // namespace gda

#endif
