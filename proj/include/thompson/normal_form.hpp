#pragma once

#include "word.hpp"

#include <algorithm>
#include <cstdint>
#include <limits>
#include <vector>

namespace thompson {

/* P N^{-1} with P and N nondecreasing: x_{p1}..x_{pu} (x_{n1}..x_{nv})^{-1} */
struct SemiNormal {
    std::vector<std::int64_t> pos, neg;
};

namespace detail {

/* product of two nondecreasing positive words A·B, rewritten into nondecreasing order */
inline std::vector<std::int64_t> merge_positive(const std::vector<std::int64_t>& a, const std::vector<std::int64_t>& b)
{
    std::vector<std::int64_t> out;
    out.reserve(a.size() + b.size());
    std::size_t i = 0, j = 0;
    std::int64_t cnt = 0;
    while (i < a.size() && j < b.size()) {
        if (b[j] < a[i] + cnt) {
            out.push_back(b[j++]);
            ++cnt;
        } else {
            out.push_back(a[i++] + cnt);
        }
    }
    for (; i < a.size(); ++i)
        out.push_back(a[i] + cnt);
    for (; j < b.size(); ++j)
        out.push_back(b[j]);
    return out;
}

/* N^{-1} P = P' N'^{-1} */
inline void swap_negative_positive(const std::vector<std::int64_t>& n, const std::vector<std::int64_t>& p,
                                   std::vector<std::int64_t>& p_out, std::vector<std::int64_t>& n_out)
{
    std::size_t i = 0, j = 0;
    std::int64_t off_n = 0, off_p = 0;
    while (i < n.size() && j < p.size()) {
        std::int64_t a = n[i] + off_n;
        std::int64_t b = p[j] + off_p;
        if (a == b) {
            ++i;
            ++j;
        } else if (a < b) {
            n_out.push_back(a);
            ++off_p;
            ++i;
        } else {
            p_out.push_back(b);
            ++off_n;
            ++j;
        }
    }
    for (; i < n.size(); ++i)
        n_out.push_back(n[i] + off_n);
    for (; j < p.size(); ++j)
        p_out.push_back(p[j] + off_p);
}

inline SemiNormal multiply(const SemiNormal& x, const SemiNormal& y)
{
    std::vector<std::int64_t> p2, n2;
    swap_negative_positive(x.neg, y.pos, p2, n2);
    SemiNormal r;
    r.pos = merge_positive(x.pos, p2);
    r.neg = merge_positive(y.neg, n2);
    return r;
}

inline SemiNormal seminormal_range(const Word& w, std::size_t lo, std::size_t hi)
{
    if (hi - lo == 1) {
        SemiNormal s;
        if (w.letters[lo].sign > 0)
            s.pos.push_back(w.letters[lo].index);
        else
            s.neg.push_back(w.letters[lo].index);
        return s;
    }
    std::size_t mid = lo + (hi - lo) / 2;
    return multiply(seminormal_range(w, lo, mid), seminormal_range(w, mid, hi));
}

/* Remove pairs x_i ... x_i^{-1} violating the ε-condition (neither x_{i+1} nor x_{i+1}^{-1} present). */
inline SemiNormal reduce_pairs(const SemiNormal& s)
{
    const auto& P = s.pos;
    const auto& N = s.neg;
    // distinct values high to low with counts
    struct Group {
        std::int64_t v;
        std::int64_t cp, cn, r;
    };
    std::vector<Group> groups;
    {
        std::size_t i = P.size(), j = N.size();
        while (i > 0 || j > 0) {
            std::int64_t v = std::numeric_limits<std::int64_t>::min();
            if (i > 0)
                v = P[i - 1];
            if (j > 0)
                v = std::max(v, N[j - 1]);
            Group g{v, 0, 0, 0};
            while (i > 0 && P[i - 1] == v) {
                ++g.cp;
                --i;
            }
            while (j > 0 && N[j - 1] == v) {
                ++g.cn;
                --j;
            }
            groups.push_back(g);
        }
    }
    const std::int64_t inf = std::numeric_limits<std::int64_t>::max();
    std::int64_t next = inf; // current value of the lowest surviving letter above
    bool any = false;
    for (auto& g : groups) {
        std::int64_t cap = std::min(g.cp, g.cn);
        if (next != inf)
            cap = std::min(cap, std::max<std::int64_t>(0, next - g.v - 1));
        g.r = cap;
        any = any || cap > 0;
        if (g.cp + g.cn - 2 * g.r > 0)
            next = g.v;
        else if (next != inf)
            next -= g.r;
    }
    if (!any)
        return s;
    SemiNormal out;
    std::int64_t removed_below = 0;
    for (auto it = groups.rbegin(); it != groups.rend(); ++it) {
        std::int64_t nv = it->v - removed_below;
        for (std::int64_t k = 0; k < it->cp - it->r; ++k)
            out.pos.push_back(nv);
        for (std::int64_t k = 0; k < it->cn - it->r; ++k)
            out.neg.push_back(nv);
        removed_below += it->r;
    }
    return out;
}

} // namespace detail

inline SemiNormal seminormal(const Word& w)
{
    if (w.empty())
        return {};
    return detail::seminormal_range(w, 0, w.size());
}

inline Word word_from_seminormal(const SemiNormal& s)
{
    Word w;
    w.letters.reserve(s.pos.size() + s.neg.size());
    for (auto k : s.pos)
        w.letters.push_back(Letter{k, 1});
    for (auto it = s.neg.rbegin(); it != s.neg.rend(); ++it)
        w.letters.push_back(Letter{*it, -1});
    return w;
}

/* Unique normal form x_{i1}..x_{iu} x_{jv}^{-1}..x_{j1}^{-1}, computed in O(|w| log |w|). */
inline Word normal_form(const Word& w)
{
    if (w.normal)
        return w;
    Word r = word_from_seminormal(detail::reduce_pairs(seminormal(w)));
    r.normal = true;
    return r;
}

inline bool is_normal_form(const Word& w)
{
    std::vector<std::int64_t> P, N;
    std::size_t i = 0;
    while (i < w.size() && w.letters[i].sign > 0)
        P.push_back(w.letters[i++].index);
    for (std::size_t j = w.size(); j > i; --j) {
        if (w.letters[j - 1].sign > 0)
            return false;
        N.push_back(w.letters[j - 1].index);
    }
    if (!std::is_sorted(P.begin(), P.end()) || !std::is_sorted(N.begin(), N.end()))
        return false;
    auto has = [](const std::vector<std::int64_t>& v, std::int64_t k) {
        return std::binary_search(v.begin(), v.end(), k);
    };
    for (auto k : P)
        if (has(N, k) && !has(P, k + 1) && !has(N, k + 1))
            return false;
    return true;
}

inline bool word_equal(const Word& a, const Word& b) { return normal_form(a) == normal_form(b); }

inline bool is_identity(const Word& w) { return normal_form(w).empty(); }

} // namespace thompson
