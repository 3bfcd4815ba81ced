#pragma once

#include "plmap.hpp"

#include <stdexcept>
#include <vector>

namespace thompson {

struct StdInterval {
    Rational start, len;
};

/* [a,b] as a union of standard dyadic intervals [k/2^n, (k+1)/2^n], greedily from the left */
inline std::vector<StdInterval> standard_decomposition(const Rational& a, const Rational& b)
{
    if (!is_dyadic(a) || !is_dyadic(b) || !(a < b))
        throw std::invalid_argument("standard_decomposition needs dyadic a < b");
    std::vector<StdInterval> out;
    Rational x = a;
    while (x < b) {
        // largest 2^e with x a multiple of 2^e and x + 2^e <= b
        long e = floor_log2(b - x);
        Rational len = pow2(e);
        while (true) {
            Rational k = x / len;
            if (k.get_den() == 1)
                break;
            len /= 2;
        }
        out.push_back({x, len});
        x += len;
    }
    return out;
}

/* An element of PL_2 mapping [a,b] onto [c,d]; all four endpoints dyadic. */
inline PLMap dyadic_interval_map(const Rational& a, const Rational& b, const Rational& c, const Rational& d)
{
    auto src = standard_decomposition(a, b);
    auto dst = standard_decomposition(c, d);
    auto split_first = [](std::vector<StdInterval>& v, std::size_t need) {
        // repeatedly halve the first interval
        std::vector<StdInterval> head;
        StdInterval cur = v.front();
        std::size_t extra = need - v.size();
        for (std::size_t i = 0; i < extra; ++i) {
            cur.len /= 2;
            head.push_back({cur.start, cur.len});
            cur.start += cur.len;
        }
        std::vector<StdInterval> out = head;
        out.push_back(cur);
        out.insert(out.end(), v.begin() + 1, v.end());
        v = std::move(out);
    };
    if (src.size() < dst.size())
        split_first(src, dst.size());
    else if (dst.size() < src.size())
        split_first(dst, src.size());
    std::vector<Rational> xs, ys;
    for (std::size_t i = 0; i < src.size(); ++i) {
        xs.push_back(src[i].start);
        ys.push_back(dst[i].start);
    }
    xs.push_back(b);
    ys.push_back(d);
    return PLMap::from_points(std::move(xs), std::move(ys));
}

/* g ∈ PL_2([src.front(), src.back()]) with g(src[i]) = dst[i] */
inline PLMap map_partition(const std::vector<Rational>& src, const std::vector<Rational>& dst)
{
    if (src.size() != dst.size() || src.size() < 2)
        throw std::invalid_argument("map_partition: lists must have equal length >= 2");
    for (std::size_t i = 0; i < src.size(); ++i) {
        if (!is_dyadic(src[i]) || !is_dyadic(dst[i]))
            throw std::invalid_argument("map_partition: non-dyadic point");
        if (i > 0 && (!(src[i - 1] < src[i]) || !(dst[i - 1] < dst[i])))
            throw std::invalid_argument("map_partition: lists must be strictly increasing");
    }
    std::vector<PLMap> parts;
    for (std::size_t i = 0; i + 1 < src.size(); ++i)
        parts.push_back(dyadic_interval_map(src[i], src[i + 1], dst[i], dst[i + 1]));
    return glue(parts);
}

} // namespace thompson
