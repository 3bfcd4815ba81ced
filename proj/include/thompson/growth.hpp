#pragma once

#include "normal_form.hpp"
#include "word.hpp"

#include <algorithm>
#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <unordered_set>
#include <vector>

namespace thompson {

/*
 * A bounded bi-infinite binary forest.  Leaves are indexed by Z; each nontrivial tree is stored
 * under its leftmost leaf as a preorder code ('1' caret, '0' leaf).  Every other leaf is a trivial tree.
 */
struct Forest {
    std::map<long, std::string> trees;
    long pointer = 0; // leftmost leaf of the pointed tree

    friend bool operator==(const Forest& a, const Forest& b) { return a.trees == b.trees && a.pointer == b.pointer; }
};

/* top forest = range subdivision, bottom forest = domain subdivision; leaves matched by index */
struct ForestDiagram {
    Forest top, bottom;

    friend bool operator==(const ForestDiagram& a, const ForestDiagram& b)
    {
        return a.top == b.top && a.bottom == b.bottom;
    }
};

namespace detail {

inline long leaf_count(const std::string& code) { return static_cast<long>(std::count(code.begin(), code.end(), '0')); }

inline long caret_count(const std::string& code) { return static_cast<long>(std::count(code.begin(), code.end(), '1')); }

/* end of the subtree starting at pos in a preorder code */
inline std::size_t subtree_end(const std::string& code, std::size_t pos)
{
    long need = 1;
    while (need > 0) {
        need += code[pos] == '1' ? 1 : -1;
        ++pos;
    }
    return pos;
}

struct TreeRef {
    long start;
    std::string code;
    bool trivial() const { return code == "0"; }
    long end() const { return start + leaf_count(code) - 1; }
};

inline TreeRef tree_at(const Forest& f, long leaf)
{
    auto it = f.trees.upper_bound(leaf);
    if (it != f.trees.begin()) {
        --it;
        if (it->first + leaf_count(it->second) > leaf)
            return {it->first, it->second};
    }
    return {leaf, "0"};
}

inline void shift_leaves(Forest& f, long from, long by)
{
    std::map<long, std::string> out;
    for (auto& [s, c] : f.trees)
        out.emplace(s > from ? s + by : s, std::move(c));
    f.trees = std::move(out);
    if (f.pointer > from)
        f.pointer += by;
}

/* position in a preorder code of the leaf with the given index */
inline std::size_t leaf_position(const std::string& code, long index)
{
    std::size_t pos = 0;
    for (;; ++pos)
        if (code[pos] == '0' && index-- == 0)
            return pos;
}

/* leaves k, k+1 of f hang from one grounded caret */
inline bool grounded_caret_at(const Forest& f, long k)
{
    TreeRef t = tree_at(f, k);
    if (t.trivial() || t.end() == k)
        return false;
    std::size_t pos = leaf_position(t.code, k - t.start);
    return pos > 0 && t.code.compare(pos - 1, 3, "100") == 0;
}

/* collapse the grounded caret over leaves k, k+1 of f */
inline void collapse_caret(Forest& f, long k)
{
    TreeRef t = tree_at(f, k);
    std::size_t pos = leaf_position(t.code, k - t.start);
    std::string code = t.code.substr(0, pos - 1) + "0" + t.code.substr(pos + 2);
    f.trees.erase(t.start);
    if (code != "0")
        f.trees[t.start] = code;
    shift_leaves(f, k, -1);
}

/* replace leaf `leaf` of f by a grounded caret; indices to the right move up by one */
inline void expand_leaf(Forest& f, long leaf)
{
    TreeRef t = tree_at(f, leaf);
    shift_leaves(f, leaf, 1);
    if (t.trivial()) {
        f.trees[leaf] = "100";
        return;
    }
    std::size_t pos = leaf_position(t.code, leaf - t.start);
    f.trees[t.start] = t.code.substr(0, pos) + "100" + t.code.substr(pos + 1);
}

/* whether each leaf of a tree is the left child of its caret */
inline std::vector<bool> left_leaves(const std::string& code)
{
    std::vector<bool> out;
    // stack of pending child slots: true = left
    std::vector<bool> slots{false};
    for (char ch : code) {
        bool is_left = slots.back();
        slots.pop_back();
        if (ch == '1') {
            slots.push_back(false);
            slots.push_back(true);
        } else {
            out.push_back(is_left);
        }
    }
    return out;
}

inline long right_arm(const std::string& code)
{
    long n = 0;
    std::size_t pos = 0;
    while (code[pos] == '1') {
        ++n;
        pos = subtree_end(code, pos + 1);
    }
    return n;
}

} // namespace detail

inline ForestDiagram trivial_forest_diagram() { return {}; }

/* left multiplication by x_0^{sign} or x_1^{sign} */
inline void left_multiply(ForestDiagram& d, int index, int sign)
{
    using namespace detail;
    Forest& top = d.top;
    if (index == 0) {
        if (sign > 0)
            top.pointer = tree_at(top, top.pointer).end() + 1;
        else
            top.pointer = tree_at(top, top.pointer - 1).start;
        return;
    }
    if (index != 1)
        throw std::invalid_argument("forest diagrams act by x0 and x1 only");
    long p = top.pointer;
    if (sign > 0) {
        TreeRef a = tree_at(top, p);
        TreeRef b = tree_at(top, a.end() + 1);
        if (a.trivial() && b.trivial()) {
            if (grounded_caret_at(d.bottom, p)) {
                shift_leaves(top, p, -1);
                collapse_caret(d.bottom, p);
                return;
            }
        }
        top.trees.erase(a.start);
        top.trees.erase(b.start);
        top.trees[p] = "1" + a.code + b.code;
        return;
    }
    if (tree_at(top, p).trivial()) {
        expand_leaf(top, p);
        expand_leaf(d.bottom, p);
    }
    std::string code = top.trees.at(p);
    top.trees.erase(p);
    std::size_t mid = subtree_end(code, 1);
    std::string l = code.substr(1, mid - 1), r = code.substr(mid);
    if (l != "0")
        top.trees[p] = l;
    if (r != "0")
        top.trees[p + leaf_count(l)] = r;
}

inline ForestDiagram inverse(const ForestDiagram& d) { return {d.bottom, d.top}; }

inline void right_multiply(ForestDiagram& d, int index, int sign)
{
    // f x = (x^-1 f^-1)^-1
    std::swap(d.top, d.bottom);
    left_multiply(d, index, -sign);
    std::swap(d.top, d.bottom);
}

/* the forest diagram of a word in x0, x1; the word acts as a composition, its last letter first */
inline ForestDiagram forest_from_word(const Word& w)
{
    ForestDiagram d;
    for (std::size_t i = w.size(); i-- > 0;) {
        const Letter& l = w.letters[i];
        if (l.index > 1 || l.index < 0)
            throw std::invalid_argument("forest_from_word: only x0 and x1 are allowed");
        left_multiply(d, static_cast<int>(l.index), l.sign);
    }
    return d;
}

/* translation-invariant key: leaves renumbered so that the top pointer is leaf 0 */
inline std::string forest_key(const ForestDiagram& d)
{
    long o = d.top.pointer;
    std::string s = std::to_string(d.bottom.pointer - o) + "|";
    for (const auto& [k, c] : d.top.trees)
        s += std::to_string(k - o) + ":" + c + ",";
    s += "|";
    for (const auto& [k, c] : d.bottom.trees)
        s += std::to_string(k - o) + ":" + c + ",";
    return s;
}

inline bool is_reduced(const ForestDiagram& d)
{
    for (const auto& [k, c] : d.top.trees)
        for (long leaf = k; leaf < k + detail::leaf_count(c) - 1; ++leaf)
            if (detail::grounded_caret_at(d.top, leaf) && detail::grounded_caret_at(d.bottom, leaf))
                return false;
    return true;
}

/* space labels and weights of the length formula */
enum class SpaceLabel { N = 0, I = 1, R = 2, L = 3 };

inline int space_weight(SpaceLabel top, SpaceLabel bottom)
{
    // rows: top forest label, columns: bottom forest label, order N I R L
    static constexpr int table[4][4] = {{2, 2, 2, 1}, {2, 0, 0, 1}, {2, 0, 2, 1}, {1, 1, 1, 2}};
    return table[static_cast<int>(top)][static_cast<int>(bottom)];
}

/* label of the space between leaves k and k+1 */
inline SpaceLabel space_label(const Forest& f, long k)
{
    using namespace detail;
    TreeRef t = tree_at(f, k);
    if (t.end() > k) {
        auto left = left_leaves(t.code);
        return left[static_cast<std::size_t>(k + 1 - t.start)] ? SpaceLabel::N : SpaceLabel::I;
    }
    if (k + 1 <= f.pointer)
        return SpaceLabel::L;
    return tree_at(f, k + 1).trivial() ? SpaceLabel::R : SpaceLabel::N;
}

/* leaves [lo, hi] spanned by both pointers and all nontrivial trees */
inline std::pair<long, long> support(const ForestDiagram& d)
{
    using namespace detail;
    long lo = std::min(d.top.pointer, d.bottom.pointer);
    long hi = std::max(tree_at(d.top, d.top.pointer).end(), tree_at(d.bottom, d.bottom.pointer).end());
    for (const Forest* f : {&d.top, &d.bottom})
        for (const auto& [k, c] : f->trees) {
            lo = std::min(lo, k);
            hi = std::max(hi, k + leaf_count(c) - 1);
        }
    return {lo, hi};
}

inline long caret_count(const ForestDiagram& d)
{
    long n = 0;
    for (const Forest* f : {&d.top, &d.bottom})
        for (const auto& [k, c] : f->trees)
            n += detail::caret_count(c);
    return n;
}

/* word length with respect to {x0, x1}: carets plus the weights of the space pairs in the support */
inline long length(const ForestDiagram& d)
{
    if (!is_reduced(d))
        throw std::invalid_argument("length: forest diagram is not reduced");
    auto [lo, hi] = support(d);
    long n = caret_count(d);
    for (long k = lo; k < hi; ++k)
        n += space_weight(space_label(d.top, k), space_label(d.bottom, k));
    return n;
}

inline long length(const Word& w) { return length(forest_from_word(w)); }

namespace detail {

/* dyadic interval of each leaf of a tree whose root is [r, r+1] */
inline void leaf_intervals(const std::string& code, const Rational& r, std::vector<std::pair<Rational, Rational>>& out)
{
    std::vector<std::pair<Rational, Rational>> stack{{r, r + 1}};
    for (char ch : code) {
        auto iv = stack.back();
        stack.pop_back();
        if (ch == '1') {
            Rational m = (iv.first + iv.second) / 2;
            stack.push_back({m, iv.second});
            stack.push_back({iv.first, m});
        } else {
            out.push_back(iv);
        }
    }
}

/* leaf intervals for leaves [lo, hi] of a forest whose pointer tree has root [1,2]; lo and hi are tree boundaries */
inline std::vector<std::pair<Rational, Rational>> forest_intervals(const Forest& f, long lo, long hi)
{
    // position of the tree starting at lo relative to the pointer tree
    long pos = 1;
    if (lo <= f.pointer) {
        for (long k = f.pointer; k > lo; k = tree_at(f, k - 1).start)
            --pos;
    } else {
        for (long k = f.pointer; k < lo; k = tree_at(f, k).end() + 1)
            ++pos;
    }
    std::vector<std::pair<Rational, Rational>> out;
    for (long k = lo; k <= hi;) {
        TreeRef t = tree_at(f, k);
        leaf_intervals(t.code, Rational(pos), out);
        k = t.end() + 1;
        ++pos;
    }
    return out;
}

/* the identification of R with (0,1): [n, n+1] -> [1-2^-n, 1-2^-(n+1)] for n >= 1, [2^(n-2), 2^(n-1)] for n <= 0 */
inline Rational unit_from_line(const Rational& t)
{
    Integer n = floor_q(t);
    long k = n.get_si();
    Rational f = t - Rational(n);
    if (k >= 1)
        return 1 - pow2(-k) + f * pow2(-(k + 1));
    return pow2(k - 2) * (1 + f);
}

} // namespace detail

/* the element of F on [0,1] represented by a forest diagram */
inline PLMap forest_to_plmap(const ForestDiagram& d)
{
    using namespace detail;
    auto [lo, hi] = support(d);
    // widen to common tree boundaries, one trivial leaf beyond everything on each side
    lo = std::min(tree_at(d.top, lo).start, tree_at(d.bottom, lo).start) - 1;
    hi = std::max(tree_at(d.top, hi).end(), tree_at(d.bottom, hi).end()) + 1;
    auto dom = forest_intervals(d.bottom, lo, hi);
    auto rng = forest_intervals(d.top, lo, hi);
    std::vector<Rational> xs{0}, ys{0};
    for (std::size_t i = 0; i < dom.size(); ++i) {
        xs.push_back(unit_from_line(dom[i].first));
        ys.push_back(unit_from_line(rng[i].first));
    }
    xs.push_back(unit_from_line(dom.back().second));
    ys.push_back(unit_from_line(rng.back().second));
    xs.push_back(1);
    ys.push_back(1);
    // consecutive leaves inside one integer interval map linearly; boundary leaves are trivial so the ends are linear
    return PLMap::from_points(xs, ys);
}

/* positive elements: trivial bottom forest, and no top tree or top pointer left of the bottom pointer */
inline bool is_positive(const ForestDiagram& d)
{
    return d.bottom.trees.empty() && d.bottom.pointer <= d.top.pointer &&
           (d.top.trees.empty() || d.top.trees.begin()->first >= d.bottom.pointer);
}

/* slice parameters of an element outside <x0> */
struct SliceParams {
    long i, j; // right arms of T+ and T-
    long p, q; // indices of the top and bottom pointer trees, T± at 0, increasing to the left
    friend bool operator==(const SliceParams&, const SliceParams&) = default;
    friend auto operator<=>(const SliceParams&, const SliceParams&) = default;
};

namespace detail {

/* signed index of the tree starting at `target` when the tree starting at `anchor` is 0 and indices grow leftwards */
inline long tree_index(const Forest& f, long anchor, long target)
{
    auto count = [&](long a, long b) {
        long n = b - a;
        for (auto it = f.trees.lower_bound(a); it != f.trees.end() && it->first < b; ++it)
            n -= leaf_count(it->second) - 1;
        return n;
    };
    return target <= anchor ? count(target, anchor) : -count(anchor, target);
}

} // namespace detail

inline std::optional<SliceParams> slice_params(const ForestDiagram& d)
{
    using namespace detail;
    std::optional<long> m;
    for (const Forest* f : {&d.top, &d.bottom})
        if (!f->trees.empty()) {
            auto it = std::prev(f->trees.end());
            long e = it->first + leaf_count(it->second) - 1;
            m = m ? std::max(*m, e) : e;
        }
    if (!m)
        return std::nullopt;
    TreeRef tp = tree_at(d.top, *m), tm = tree_at(d.bottom, *m);
    return SliceParams{right_arm(tp.code), right_arm(tm.code), tree_index(d.top, tp.start, d.top.pointer),
                       tree_index(d.bottom, tm.start, d.bottom.pointer)};
}

/*
 * Slice sizes |Z_{i,j,p,q,n}| for n <= max_length.
 *
 * Slices with a pointer to the right of T± are carried to p, q >= 0 by inversion (i,j,p,q) -> (j,i,q,p),
 * theta1: Z_{i,j,p,q,n} = Z_{i,j,p+1,q+1,n-2} for q <= p < 0 and theta2: Z_{i,j,p,q,n} = Z_{i,j,p,q+1,n-1}
 * for q < 0 <= p.  The remaining slices are counted column by column over the support.
 */
class SliceTable {
public:
    explicit SliceTable(long max_length) : max_(max_length) { build(); }

    long max_length() const { return max_; }

    std::uint64_t slice(long i, long j, long p, long q, long n) const
    {
        for (;;) {
            if (n < 0 || i < 0 || j < 0 || (i == 0 && j == 0))
                return 0;
            if (q > p) {
                std::swap(i, j);
                std::swap(p, q);
            }
            if (p < 0) {
                ++p;
                ++q;
                n -= 2;
            } else if (q < 0) {
                ++q;
                n -= 1;
            } else {
                break;
            }
        }
        if (n > max_)
            throw std::out_of_range("SliceTable: length beyond the computed range");
        auto it = core_.find(Key{i, j, p, q, n});
        return it == core_.end() ? 0 : it->second;
    }

    /* z(p,q,n) = |Z_{1,0,p,q+1,n}|, zero for negative arguments */
    std::uint64_t z(long p, long q, long n) const
    {
        if (p < 0 || q < 0 || n < 0)
            return 0;
        return slice(1, 0, p, q + 1, n);
    }

    /* sphere size: x0^{±n} plus every slice; slice parameters are bounded by n */
    std::uint64_t sphere(long n) const
    {
        if (n == 0)
            return 1;
        std::uint64_t total = 2;
        for (long i = 0; i <= n; ++i)
            for (long j = 0; j <= n; ++j)
                for (long p = -n; p <= n; ++p)
                    for (long q = -n; q <= n; ++q)
                        total += slice(i, j, p, q, n);
        return total;
    }

private:
    using Key = std::array<long, 5>;

    struct Side {
        bool placed;   // pointer tree already started
        long c;        // pending subtree slots, 0 at a tree boundary
        bool left;     // previous leaf was a left child
        long trees;    // tree starts after the pointer tree
        long arm;      // right arm of the current tree so far
        bool caret;    // current tree is nontrivial
        friend auto operator<=>(const Side&, const Side&) = default;
    };

    struct Step {
        Side next;
        bool interior;
        SpaceLabel label;
        bool grounded;
    };

    /* reading the carets a_k opening at leaf k, then leaf k itself */
    static std::optional<Step> advance(const Side& s, long a, bool place)
    {
        Step st{s, s.c > 0, SpaceLabel::R, false};
        Side& n = st.next;
        if (s.c > 0) {
            if (place)
                return std::nullopt;
            st.label = a > 0 ? SpaceLabel::N : SpaceLabel::I;
            st.grounded = s.left && a == 0;
        } else {
            if (place && s.placed)
                return std::nullopt;
            if (!s.placed)
                st.label = SpaceLabel::L;
            else
                st.label = a > 0 ? SpaceLabel::N : SpaceLabel::R;
            if (place) {
                n.placed = true;
                n.trees = 0;
            } else if (s.placed) {
                ++n.trees;
            }
            n.c = 1;
            n.arm = 0;
            n.caret = false;
        }
        if (a > 0) {
            if (n.c == 1)
                ++n.arm;
            n.caret = true;
        }
        n.left = a > 0;
        n.c += a - 1;
        return st;
    }

    void build()
    {
        using State = std::pair<Side, Side>;
        std::map<std::pair<State, long>, std::uint64_t> layer;
        const Side fresh{false, 0, false, 0, 0, false};
        // leftmost support leaf: both forests start a tree, one of them nontrivial or pointed
        for (long at = 0; at <= max_; ++at)
            for (long ab = 0; at + ab <= max_; ++ab)
                for (int pt = 0; pt < 2; ++pt)
                    for (int pb = 0; pb < 2; ++pb) {
                        if (at == 0 && ab == 0 && !pt && !pb)
                            continue;
                        auto t = advance(fresh, at, pt);
                        auto b = advance(fresh, ab, pb);
                        layer[{{t->next, b->next}, 0}] += 1;
                    }
        while (!layer.empty()) {
            std::map<std::pair<State, long>, std::uint64_t> next;
            for (const auto& [key, count] : layer) {
                const auto& [st, cost] = key;
                const auto& [t, b] = st;
                if (t.c == 0 && b.c == 0 && t.placed && b.placed && (t.caret || b.caret))
                    core_[Key{t.caret ? t.arm : 0, b.caret ? b.arm : 0, t.trees, b.trees, cost}] += count;
                for (long at = 0; at <= max_; ++at)
                    for (long ab = 0; ab <= max_; ++ab)
                        for (int pt = 0; pt < 2; ++pt)
                            for (int pb = 0; pb < 2; ++pb) {
                                auto x = advance(t, at, pt);
                                auto y = advance(b, ab, pb);
                                if (!x || !y)
                                    continue;
                                if (x->grounded && y->grounded)
                                    continue;
                                // carets are counted by the interior spaces they create
                                long c = cost + space_weight(x->label, y->label) + x->interior + y->interior;
                                long owed = std::max(0L, x->next.c - 1) + std::max(0L, y->next.c - 1);
                                if (c + owed > max_)
                                    continue;
                                next[{{x->next, y->next}, c}] += count;
                            }
            }
            layer = std::move(next);
        }
    }

    long max_;
    std::map<Key, std::uint64_t> core_;
};

/*
 * Breadth-first search of the Cayley graph (edges f -> x f, x in x0^{±1}, x1^{±1}) from the identity.
 * The element type supplies its key and the four neighbours; visit(element, distance) sees every element once.
 */
template <class Elem, class Key, class Step, class Visit>
std::vector<std::uint64_t> bfs_spheres(const Elem& identity, long radius, Key key, Step step, Visit visit)
{
    std::vector<std::uint64_t> sizes;
    std::unordered_set<std::string> seen{key(identity)};
    std::vector<Elem> frontier{identity}, prev;
    for (long r = 0; r <= radius; ++r) {
        sizes.push_back(frontier.size());
        for (const auto& e : frontier)
            visit(e, r);
        if (r == radius)
            break;
        std::vector<Elem> next;
        for (const auto& e : frontier)
            for (int g = 0; g < 4; ++g) {
                Elem n = step(e, g / 2, g % 2 ? -1 : 1);
                if (seen.insert(key(n)).second)
                    next.push_back(std::move(n));
            }
        // elements two spheres back can no longer be reached freshly; their keys stay in `seen`
        frontier = std::move(next);
    }
    return sizes;
}

/* oracle: spheres over reduced tree pairs (canonical PL maps) */
template <class Visit>
std::vector<std::uint64_t> bfs_spheres_plmap(long radius, Visit visit)
{
    std::array<PLMap, 4> gens{generator_map(0, 1), generator_map(0, -1), generator_map(1, 1), generator_map(1, -1)};
    return bfs_spheres(
        PLMap::identity(0, 1), radius, [](const PLMap& f) { return f.str(); },
        [&](const PLMap& f, int i, int s) { return compose(gens[static_cast<std::size_t>(2 * i + (s < 0))], f); }, visit);
}

inline std::vector<std::uint64_t> bfs_spheres_plmap(long radius)
{
    return bfs_spheres_plmap(radius, [](const PLMap&, long) {});
}

/* the same search over forest diagrams */
template <class Visit>
std::vector<std::uint64_t> bfs_spheres_forest(long radius, Visit visit)
{
    return bfs_spheres(
        trivial_forest_diagram(), radius, [](const ForestDiagram& d) { return forest_key(d); },
        [](ForestDiagram d, int i, int s) {
            left_multiply(d, i, s);
            return d;
        },
        visit);
}

inline std::vector<std::uint64_t> bfs_spheres_forest(long radius)
{
    return bfs_spheres_forest(radius, [](const ForestDiagram&, long) {});
}

/* x_k = x0^{1-k} x1 x0^{k-1} */
inline Word expand_to_x0x1(const Word& w)
{
    Word out;
    for (const auto& l : w.letters) {
        if (l.index <= 1) {
            out.letters.push_back(l);
            continue;
        }
        auto k = static_cast<long>(l.index);
        out = out * power(gen(0), 1 - k) * gen(1, l.sign) * power(gen(0), k - 1);
    }
    return out;
}

inline std::uint64_t bfs_sphere(long n)
{
    if (n < 0 || n > 12)
        throw std::out_of_range("bfs_sphere: radius outside the budget 0..12");
    return bfs_spheres_plmap(n).back();
}

/* positive elements of each length, by breadth-first search */
inline std::vector<std::uint64_t> bfs_positive_counts(long radius)
{
    std::vector<std::uint64_t> out(static_cast<std::size_t>(radius + 1), 0);
    bfs_spheres_forest(radius, [&](const ForestDiagram& d, long r) {
        if (is_positive(d))
            ++out[static_cast<std::size_t>(r)];
    });
    return out;
}

/* coefficient of x^n in (1 - x^2) / (1 - 2x - x^2 + x^3) */
inline Integer positive_count(long n)
{
    if (n < 0)
        throw std::invalid_argument("positive_count: n must be non-negative");
    std::vector<Integer> p;
    for (long k = 0; k <= n; ++k) {
        Integer v = k == 0 ? 1 : (k == 2 ? -1 : 0);
        if (k >= 1)
            v += 2 * p[static_cast<std::size_t>(k - 1)];
        if (k >= 2)
            v += p[static_cast<std::size_t>(k - 2)];
        if (k >= 3)
            v -= p[static_cast<std::size_t>(k - 3)];
        p.push_back(v);
    }
    return p.back();
}

struct ValidationMismatch : std::runtime_error {
    long n;
    std::uint64_t got, expected;
    ValidationMismatch(long n_, std::uint64_t got_, std::uint64_t expected_)
        : std::runtime_error("sphere " + std::to_string(n_) + ": recurrence gives " + std::to_string(got_) +
                             ", breadth-first search gives " + std::to_string(expected_)),
          n(n_), got(got_), expected(expected_)
    {
    }
};

/* sphere sizes 0..n from the slice recursion; with validate, checked against breadth-first search */
inline std::vector<std::uint64_t> sphere_count_recursive(long n, bool validate = false)
{
    if (n < 0 || n > 20)
        throw std::out_of_range("sphere_count_recursive: n outside the budget 0..20");
    SliceTable table(n);
    std::vector<std::uint64_t> out;
    for (long k = 0; k <= n; ++k)
        out.push_back(table.sphere(k));
    if (validate) {
        auto bfs = bfs_spheres_plmap(std::min(n, 12L));
        for (std::size_t k = 0; k < bfs.size(); ++k)
            if (bfs[k] != out[k])
                throw ValidationMismatch(static_cast<long>(k), out[k], bfs[k]);
    }
    return out;
}

} // namespace thompson
