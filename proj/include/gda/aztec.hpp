#ifndef GDA_AZTEC_HPP
#define GDA_AZTEC_HPP

#include <array>
#include <cstdint>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "gda/rng.hpp"
#include "gda/weights.hpp"

namespace gda {

// Direction from a white vertex w(l,k) to its partner:
// DL -> bk(l,k) (NW edge, weight a_lk), UL -> bk(l,k-1) (SW edge, b_{l,k-1}),
// DR -> bk(l+1,k) (NE edge), UR -> bk(l+1,k-1) (SE edge).
enum class Dir : std::uint8_t { DL, UL, DR, UR, None };

char dir_char(Dir d);
Dir dir_from_char(char c);

// Black vertex (column i, row j) reached from w(l,k) along d.
std::pair<int, int> partner_black(int l, int k, Dir d);

// Dir grid over white vertices w(l,k), l in 1..n, k in 1..n+1.
class Matching
{
    public:
        explicit Matching(int n = 0);
        Matching(int n, const std::vector<std::vector<Dir>>& rows);

        int n() const { return n_; }
        Dir operator()(int l, int k) const { return dirs_[idx(l, k)]; }
        Dir& operator()(int l, int k) { return dirs_[idx(l, k)]; }

        // One character per white vertex, row l after row l.
        std::string key() const;
        bool operator==(const Matching& o) const { return n_ == o.n_ && dirs_ == o.dirs_; }
        bool operator<(const Matching& o) const { return key() < o.key(); }

    private:
        std::size_t idx(int l, int k) const
        {
            return static_cast<std::size_t>(l - 1) * static_cast<std::size_t>(n_ + 1) + static_cast<std::size_t>(k - 1);
        }
        int n_;
        std::vector<Dir> dirs_;
};

bool validate(const Matching& m);

// Sum of log a over NW edges and log b over SW edges.
double matching_weight(const Matching& m, const WeightFieldd& w);

struct TurningPoints
{
    int north = 0;
    int east = 0;
    int south = 0;
    int west = 0;
};
TurningPoints turning_points(const Matching& m);

using SliceSet = std::vector<int>;

// Labels k of column-l whites matched to a black on their left.
SliceSet vertical_slice(const Matching& m, int l);
// Columns i of row-l blacks matched to a white above.
SliceSet horizontal_slice(const Matching& m, int l);

// Outcome of destruction + slide from level k to k+1.
struct SlideResult
{
    Matching partial;                              // level k+1, None where empty
    std::vector<std::pair<int, int>> empty_faces;  // left black bk(i,j) of each empty face
    int destroyed_pairs = 0;
};
SlideResult destroy_and_slide(const Matching& m);

// Fills face (i,j) with NW + SE when choose_a, else SW + NE.
void fill_face(Matching& m, int i, int j, bool choose_a);

// chooser(i, j, p_a) decides the creation at face (i, j).
using FaceChooser = std::function<bool(int, int, double)>;

Matching shuffle_step(const Matching& m, const WeightFieldd& w_next, RngStream& rng);
Matching shuffle_step(const Matching& m, const WeightFieldd& w_next, const FaceChooser& chooser);

// Exact successor law of one shuffle step (k <= 3).
std::vector<std::pair<Matching, double>> shuffle_transition_distribution(const Matching& m,
                                                                         const WeightFieldd& w_next);

struct Trajectory
{
    Cascaded cascade;
    std::vector<Matching> matchings;  // M_1 .. M_n
};

Trajectory sample_trajectory(const ParamSet& params, int n, RngStream& rng);
std::vector<Matching> sample_trajectory(const Cascaded& cascade, RngStream& rng);
// Final matching only.
Matching sample_matching(const Cascaded& cascade, RngStream& rng);
// Same draw as sample_matching(Cascaded(top), rng), keeping about 2 sqrt(n)
// levels in memory instead of n.
Matching sample_matching_low_memory(const WeightFieldd& top, RngStream& rng);

std::string to_text(const Matching& m);
Matching matching_from_text(const std::string& text);

} // namespace gda

#endif
