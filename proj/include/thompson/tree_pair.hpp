#pragma once

#include "normal_form.hpp"
#include "plmap.hpp"

#include <stdexcept>
#include <string>
#include <vector>

namespace thompson {

/* A finite binary tree, stored as the depths of its leaves from left to right. */
class BinaryTree {
public:
    BinaryTree() : depths_{0} {}
    explicit BinaryTree(std::vector<int> depths) : depths_(std::move(depths))
    {
        if (!valid(depths_))
            throw std::invalid_argument("leaf depths do not describe a binary tree");
    }

    static bool valid(const std::vector<int>& d)
    {
        if (d.empty())
            return false;
        // stack of pending right subtrees, each given by its depth
        std::vector<int> open{0};
        for (int x : d) {
            if (open.empty() || x < open.back())
                return false;
            int top = open.back();
            open.pop_back();
            for (int k = top + 1; k <= x; ++k)
                open.push_back(k);
        }
        return open.empty();
    }

    const std::vector<int>& depths() const { return depths_; }
    std::size_t leaves() const { return depths_.size(); }
    std::size_t carets() const { return depths_.size() - 1; }

    std::vector<Rational> leaf_starts() const
    {
        std::vector<Rational> s;
        s.reserve(depths_.size() + 1);
        Rational a(0);
        for (int d : depths_) {
            s.push_back(a);
            a += pow2(-d);
        }
        return s;
    }

    /* add a caret below leaf i */
    BinaryTree expand(std::size_t i) const
    {
        std::vector<int> d = depths_;
        d[i] += 1;
        d.insert(d.begin() + static_cast<std::ptrdiff_t>(i) + 1, d[i]);
        BinaryTree t;
        t.depths_ = std::move(d);
        return t;
    }

    /* "(" for a caret, "." for a leaf, in preorder */
    std::string str() const
    {
        std::string s;
        std::vector<int> open{0};
        for (int x : depths_) {
            int top = open.back();
            open.pop_back();
            for (int k = top; k < x; ++k) {
                s += '(';
                open.push_back(k + 1);
            }
            s += '.';
        }
        return s;
    }

    friend bool operator==(const BinaryTree& a, const BinaryTree& b) { return a.depths_ == b.depths_; }
    friend bool operator!=(const BinaryTree& a, const BinaryTree& b) { return !(a == b); }

private:
    std::vector<int> depths_;
};

struct TreePair {
    BinaryTree domain, range;

    friend bool operator==(const TreePair& a, const TreePair& b) { return a.domain == b.domain && a.range == b.range; }
    friend bool operator!=(const TreePair& a, const TreePair& b) { return !(a == b); }
};

inline PLMap plmap_from_tree_pair(const TreePair& t)
{
    if (t.domain.leaves() != t.range.leaves())
        throw std::invalid_argument("tree pair with different leaf counts");
    auto xs = t.domain.leaf_starts();
    auto ys = t.range.leaf_starts();
    xs.push_back(Rational(1));
    ys.push_back(Rational(1));
    return PLMap::from_points(std::move(xs), std::move(ys));
}

inline bool is_standard_interval(const Rational& a, const Rational& len)
{
    auto e = log2_exact(len);
    if (!e)
        return false;
    Rational k = a / len;
    return k.get_den() == 1;
}

/* The reduced tree pair of an element of F. */
inline TreePair tree_pair_from_plmap(const PLMap& f)
{
    if (!f.in_F())
        throw std::invalid_argument("tree_pair_from_plmap: map is not an element of F");
    const auto& xs = f.xs();
    std::vector<int> dom, rng;
    struct Node {
        Rational a;
        int d;
    };
    std::vector<Node> stack{{Rational(0), 0}};
    std::size_t j = 0; // xs[j] <= a < xs[j+1]
    while (!stack.empty()) {
        Node n = stack.back();
        stack.pop_back();
        Rational len = pow2(-n.d);
        Rational b = n.a + len;
        while (xs[j + 1] <= n.a)
            ++j;
        bool linear = xs[j + 1] >= b;
        if (linear) {
            Rational fa = f(n.a);
            Rational flen = f(b) - fa;
            if (is_standard_interval(fa, flen)) {
                dom.push_back(n.d);
                rng.push_back(static_cast<int>(-*log2_exact(flen)));
                continue;
            }
        }
        stack.push_back({n.a + len / 2, n.d + 1});
        stack.push_back({n.a, n.d + 1});
    }
    return TreePair{BinaryTree(std::move(dom)), BinaryTree(std::move(rng))};
}

/* Cancel matching carets whose two children are leaves in both trees, until none remain. */
inline TreePair reduce_tree_pair(const TreePair& t)
{
    if (t.domain.leaves() != t.range.leaves())
        throw std::invalid_argument("tree pair with different leaf counts");
    struct Entry {
        int dd, dr;
        Rational sd, sr; // leaf starts
    };
    auto left_child = [](const Rational& s, int d) {
        if (d == 0)
            return false;
        Rational k = s * pow2(d);
        return mpz_even_p(k.get_num_mpz_t()) != 0;
    };
    auto sd = t.domain.leaf_starts();
    auto sr = t.range.leaf_starts();
    std::vector<Entry> st;
    for (std::size_t i = 0; i < t.domain.leaves(); ++i) {
        st.push_back({t.domain.depths()[i], t.range.depths()[i], sd[i], sr[i]});
        while (st.size() >= 2) {
            const Entry& x = st[st.size() - 2];
            const Entry& y = st.back();
            if (x.dd == y.dd && x.dr == y.dr && left_child(x.sd, x.dd) && left_child(x.sr, x.dr)) {
                Entry m{x.dd - 1, x.dr - 1, x.sd, x.sr};
                st.pop_back();
                st.back() = m;
            } else {
                break;
            }
        }
    }
    std::vector<int> dd, dr;
    for (auto& e : st) {
        dd.push_back(e.dd);
        dr.push_back(e.dr);
    }
    return TreePair{BinaryTree(std::move(dd)), BinaryTree(std::move(dr))};
}

inline TreePair expand(const TreePair& t, std::size_t leaf)
{
    return TreePair{t.domain.expand(leaf), t.range.expand(leaf)};
}

inline TreePair inverse(const TreePair& t) { return TreePair{t.range, t.domain}; }

/* exponent of x_i attached to each leaf: length of the maximal left edge path ending at it
 * that does not touch the right side of the tree */
inline std::vector<long> leaf_exponents(const BinaryTree& t)
{
    std::vector<long> e;
    e.reserve(t.leaves());
    Rational a(0);
    for (int d : t.depths()) {
        Rational len = pow2(-d);
        if (a + len == 1) {
            e.push_back(0);
            a += len;
            continue;
        }
        Rational k = a * pow2(d);
        long tz = k == 0 ? d : static_cast<long>(mpz_scan1(k.get_num_mpz_t(), 0));
        long m = std::min<long>(tz, d);
        // need a + 2^(m-d) < 1
        Rational rest = 1 - a;
        long L = floor_log2(rest);
        long bound = (rest == pow2(L)) ? d + L - 1 : d + L;
        m = std::min(m, bound);
        e.push_back(std::max<long>(m, 0));
        a += len;
    }
    return e;
}

inline Word word_from_tree_pair(const TreePair& t)
{
    Word pos, neg;
    auto er = leaf_exponents(t.range);
    auto ed = leaf_exponents(t.domain);
    for (std::size_t i = 0; i < er.size(); ++i)
        for (long k = 0; k < er[i]; ++k)
            pos.letters.push_back(Letter{static_cast<std::int64_t>(i), 1});
    for (std::size_t i = ed.size(); i-- > 0;)
        for (long k = 0; k < ed[i]; ++k)
            neg.letters.push_back(Letter{static_cast<std::int64_t>(i), -1});
    return normal_form(pos * neg);
}

inline Word word_from_plmap(const PLMap& f) { return word_from_tree_pair(tree_pair_from_plmap(f)); }

inline TreePair tree_pair_from_word(const Word& w) { return tree_pair_from_plmap(word_to_plmap(w)); }

} // namespace thompson
