#include "gda/aztec.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>
#include <stdexcept>

namespace gda {

char dir_char(Dir d)
{
    switch (d) {
        case Dir::DL: return 'L';
        case Dir::UL: return 'U';
        case Dir::UR: return 'R';
        case Dir::DR: return 'D';
        default: return '.';
    }
}

Dir dir_from_char(char c)
{
    switch (c) {
        case 'L': return Dir::DL;
        case 'U': return Dir::UL;
        case 'R': return Dir::UR;
        case 'D': return Dir::DR;
        case '.': return Dir::None;
        default: throw std::invalid_argument(std::string("bad matching character '") + c + "'");
    }
}

std::pair<int, int> partner_black(int l, int k, Dir d)
{
    switch (d) {
        case Dir::DL: return {l, k};
        case Dir::UL: return {l, k - 1};
        case Dir::DR: return {l + 1, k};
        case Dir::UR: return {l + 1, k - 1};
        default: throw std::invalid_argument("unmatched white vertex has no partner");
    }
}

Matching::Matching(int n)
    : n_(n), dirs_(static_cast<std::size_t>(n) * static_cast<std::size_t>(n + 1), Dir::None)
{
    if (n < 0)
        throw std::invalid_argument("matching size must be nonnegative");
}

Matching::Matching(int n, const std::vector<std::vector<Dir>>& rows)
    : Matching(n)
{
    if (static_cast<int>(rows.size()) != n)
        throw std::invalid_argument("expected one row per white column");
    for (int l = 1; l <= n; ++l) {
        if (static_cast<int>(rows[l - 1].size()) != n + 1)
            throw std::invalid_argument("each white column has n+1 vertices");
        for (int k = 1; k <= n + 1; ++k)
            (*this)(l, k) = rows[l - 1][k - 1];
    }
}

std::string Matching::key() const
{
    std::string s(dirs_.size(), '.');
    for (std::size_t i = 0; i < dirs_.size(); ++i)
        s[i] = dir_char(dirs_[i]);
    return s;
}

namespace {

bool edge_exists(int n, int k, Dir d)
{
    switch (d) {
        case Dir::DL:
        case Dir::DR: return k <= n;
        case Dir::UL:
        case Dir::UR: return k >= 2;
        default: return false;
    }
}

} // namespace

bool validate(const Matching& m)
{
    const int n = m.n();
    std::vector<int> cover(static_cast<std::size_t>((n + 1) * n), 0);
    for (int l = 1; l <= n; ++l) {
        for (int k = 1; k <= n + 1; ++k) {
            const Dir d = m(l, k);
            if (!edge_exists(n, k, d))
                return false;
            const auto [i, j] = partner_black(l, k, d);
            if (++cover[static_cast<std::size_t>((i - 1) * n + (j - 1))] > 1)
                return false;
        }
    }
    // n(n+1) whites matched injectively into n(n+1) blacks.
    return true;
}

double matching_weight(const Matching& m, const WeightFieldd& w)
{
    const int n = m.n();
    if (!w.is_full() || w.level != n)
        throw std::invalid_argument("weight field level does not match matching size");
    if (!validate(m))
        throw std::invalid_argument("invalid matching");
    double lw = 0.0;
    for (int l = 1; l <= n; ++l) {
        for (int k = 1; k <= n + 1; ++k) {
            if (m(l, k) == Dir::DL)
                lw += std::log(w.A(l, k));
            else if (m(l, k) == Dir::UL)
                lw += std::log(w.B(l, k - 1));
        }
    }
    return lw;
}

TurningPoints turning_points(const Matching& m)
{
    if (!validate(m))
        throw std::invalid_argument("invalid matching");
    const int n = m.n();
    TurningPoints t;
    for (int l = 1; l <= n; ++l) {
        t.north += m(l, 1) == Dir::DL;
        t.south += m(l, n + 1) == Dir::UL;
    }
    for (int k = 1; k <= n + 1; ++k) {
        t.west += k <= n && m(1, k) == Dir::DL;
        t.east += m(n, k) == Dir::DR;
    }
    return t;
}

SliceSet vertical_slice(const Matching& m, int l)
{
    const int n = m.n();
    if (l < 1 || l > n)
        throw std::out_of_range("slice index out of range");
    SliceSet x;
    for (int k = 1; k <= n + 1; ++k)
        if (m(l, k) == Dir::DL || m(l, k) == Dir::UL)
            x.push_back(k);
    return x;
}

SliceSet horizontal_slice(const Matching& m, int l)
{
    const int n = m.n();
    if (l < 1 || l > n)
        throw std::out_of_range("slice index out of range");
    SliceSet y;
    for (int i = 1; i <= n + 1; ++i) {
        const bool nw = i <= n && m(i, l) == Dir::DL;
        const bool ne = i >= 2 && m(i - 1, l) == Dir::DR;
        if (nw || ne)
            y.push_back(i);
    }
    return y;
}

SlideResult destroy_and_slide(const Matching& m)
{
    const int k = m.n();
    Matching cur = m;
    SlideResult res{Matching(k + 1), {}, 0};
    for (int l = 1; l <= k - 1; ++l) {
        for (int c = 2; c <= k; ++c) {
            const Dir left = cur(l, c);
            const Dir right = cur(l + 1, c);
            if ((left == Dir::UR && right == Dir::DL) || (left == Dir::DR && right == Dir::UL)) {
                cur(l, c) = Dir::None;
                cur(l + 1, c) = Dir::None;
                ++res.destroyed_pairs;
            }
        }
    }

    Matching& out = res.partial;
    const int K = k + 1;
    auto place = [&](int l, int c, Dir d) {
        if (out(l, c) != Dir::None)
            throw std::logic_error("slide placed two edges at one white vertex");
        out(l, c) = d;
    };
    for (int l = 1; l <= k; ++l) {
        for (int c = 1; c <= k + 1; ++c) {
            switch (cur(l, c)) {
                case Dir::DL: place(l, c, Dir::DL); break;
                case Dir::UL: place(l, c + 1, Dir::UL); break;
                case Dir::DR: place(l + 1, c, Dir::DR); break;
                case Dir::UR: place(l + 1, c + 1, Dir::UR); break;
                default: break;
            }
        }
    }

    std::vector<char> covered(static_cast<std::size_t>((K + 1) * K), 0);
    auto cov = [&](int i, int j) -> char& { return covered[static_cast<std::size_t>((i - 1) * K + (j - 1))]; };
    for (int l = 1; l <= K; ++l) {
        for (int c = 1; c <= K + 1; ++c) {
            if (out(l, c) == Dir::None)
                continue;
            const auto [i, j] = partner_black(l, c, out(l, c));
            if (cov(i, j))
                throw std::logic_error("slide covered a black vertex twice");
            cov(i, j) = 1;
        }
    }
    for (int i = 1; i <= K; ++i) {
        for (int j = 1; j <= K; ++j) {
            if (out(i, j) == Dir::None && out(i, j + 1) == Dir::None && !cov(i, j) && !cov(i + 1, j)) {
                res.empty_faces.emplace_back(i, j);
                cov(i, j) = cov(i + 1, j) = 1;
            }
        }
    }
    return res;
}

void fill_face(Matching& m, int i, int j, bool choose_a)
{
    if (choose_a) {
        m(i, j) = Dir::DL;
        m(i, j + 1) = Dir::UR;
    } else {
        m(i, j + 1) = Dir::UL;
        m(i, j) = Dir::DR;
    }
}

namespace {

void check_step_input(const Matching& m, const WeightFieldd& w_next)
{
    if (!w_next.is_full() || w_next.level != m.n() + 1)
        throw std::invalid_argument("shuffle step needs the level k+1 weight field");
    if (m.n() > 0 && !validate(m))
        throw std::invalid_argument("invalid input matching");
}

} // namespace

Matching shuffle_step(const Matching& m, const WeightFieldd& w_next, const FaceChooser& chooser)
{
    check_step_input(m, w_next);
    SlideResult s = destroy_and_slide(m);
    for (const auto& [i, j] : s.empty_faces)
        fill_face(s.partial, i, j, chooser(i, j, w_next.beta(i, j)));
    if (!validate(s.partial))
        throw std::logic_error("shuffle step produced an invalid matching");
    return std::move(s.partial);
}

Matching shuffle_step(const Matching& m, const WeightFieldd& w_next, RngStream& rng)
{
    return shuffle_step(m, w_next, [&rng](int, int, double p) { return rng.uniform() < p; });
}

std::vector<std::pair<Matching, double>> shuffle_transition_distribution(const Matching& m,
                                                                         const WeightFieldd& w_next)
{
    if (m.n() > 3)
        throw std::invalid_argument("transition enumeration limited to k <= 3");
    check_step_input(m, w_next);
    const SlideResult s = destroy_and_slide(m);
    const std::size_t f = s.empty_faces.size();
    std::vector<std::pair<Matching, double>> out;
    for (std::size_t mask = 0; mask < (std::size_t{1} << f); ++mask) {
        Matching next = s.partial;
        double p = 1.0;
        for (std::size_t t = 0; t < f; ++t) {
            const auto [i, j] = s.empty_faces[t];
            const bool choose_a = (mask >> t) & 1U;
            const double pa = w_next.beta(i, j);
            p *= choose_a ? pa : 1.0 - pa;
            fill_face(next, i, j, choose_a);
        }
        if (!validate(next))
            throw std::logic_error("transition produced an invalid matching");
        out.emplace_back(std::move(next), p);
    }
    return out;
}

std::vector<Matching> sample_trajectory(const Cascaded& cascade, RngStream& rng)
{
    std::vector<Matching> ms;
    Matching cur(0);
    for (int k = 1; k <= cascade.size(); ++k) {
        cur = shuffle_step(cur, cascade.level(k), rng);
        ms.push_back(cur);
    }
    return ms;
}

Trajectory sample_trajectory(const ParamSet& params, int n, RngStream& rng)
{
    Cascaded c(sample_weight_field(params, n, rng));
    std::vector<Matching> ms = sample_trajectory(c, rng);
    return Trajectory{std::move(c), std::move(ms)};
}

Matching sample_matching(const Cascaded& cascade, RngStream& rng)
{
    Matching cur(0);
    for (int k = 1; k <= cascade.size(); ++k)
        cur = shuffle_step(cur, cascade.level(k), rng);
    return cur;
}

Matching sample_matching_low_memory(const WeightFieldd& top, RngStream& rng)
{
    if (!top.is_full() || top.level < 1)
        throw std::invalid_argument("sampling needs a full level-n field with n >= 1");
    const int n = top.level;
    const int c = std::max(1, static_cast<int>(std::ceil(std::sqrt(static_cast<double>(n)))));
    // Checkpoints at levels n, n - c, n - 2c, ... (ascending after reverse).
    std::vector<WeightFieldd> checkpoints{top};
    WeightFieldd cur = top;
    for (int k = n - 1; k >= 1; --k) {
        cur = downshuffle(cur);
        if ((n - k) % c == 0)
            checkpoints.push_back(cur);
    }
    std::reverse(checkpoints.begin(), checkpoints.end());
    Matching m(0);
    int done = 0;
    for (const auto& cp : checkpoints) {
        std::vector<WeightFieldd> seg{cp};
        while (seg.back().level > done + 1)
            seg.push_back(downshuffle(seg.back()));
        for (auto it = seg.rbegin(); it != seg.rend(); ++it)
            m = shuffle_step(m, *it, rng);
        done = cp.level;
    }
    return m;
}

std::string to_text(const Matching& m)
{
    std::ostringstream os;
    os << "aztec n=" << m.n() << '\n';
    for (int l = 1; l <= m.n(); ++l) {
        for (int k = 1; k <= m.n() + 1; ++k)
            os << dir_char(m(l, k));
        os << '\n';
    }
    return os.str();
}

Matching matching_from_text(const std::string& text)
{
    std::istringstream is(text);
    std::string header;
    std::getline(is, header);
    int n = -1;
    if (header.rfind("aztec n=", 0) != 0)
        throw std::invalid_argument("matching text must start with 'aztec n=<n>'");
    try {
        n = std::stoi(header.substr(8));
    } catch (const std::exception&) {
        throw std::invalid_argument("bad size in matching header");
    }
    if (n < 0)
        throw std::invalid_argument("bad size in matching header");
    Matching m(n);
    for (int l = 1; l <= n; ++l) {
        std::string row;
        if (!std::getline(is, row) || static_cast<int>(row.size()) < n + 1)
            throw std::invalid_argument("matching text has a short or missing row");
        for (int k = 1; k <= n + 1; ++k)
            m(l, k) = dir_from_char(row[static_cast<std::size_t>(k - 1)]);
    }
    return m;
}

} // namespace gda
