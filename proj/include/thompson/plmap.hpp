#pragma once

#include "numbers.hpp"

#include <algorithm>
#include <cassert>
#include <stdexcept>
#include <string>
#include <vector>

namespace thompson {

/*
 * Increasing piecewise-linear homeomorphism [xs.front(), xs.back()] -> [ys.front(), ys.back()]
 * given by its breakpoints.  The stored form is canonical: no interior breakpoint
 * joins two collinear segments, so equality is structural.
 */
class PLMap {
public:
    PLMap() : xs_{Rational(0), Rational(1)}, ys_{Rational(0), Rational(1)} {}

    static PLMap identity(const Rational& a, const Rational& b)
    {
        if (!(a < b))
            throw std::invalid_argument("empty interval");
        PLMap f;
        f.xs_ = {a, b};
        f.ys_ = {a, b};
        return f;
    }

    static PLMap linear(const Rational& a, const Rational& b, const Rational& c, const Rational& d)
    {
        return from_points({a, b}, {c, d});
    }

    static PLMap from_points(std::vector<Rational> xs, std::vector<Rational> ys)
    {
        if (xs.size() != ys.size() || xs.size() < 2)
            throw std::invalid_argument("breakpoint lists must have equal length >= 2");
        for (std::size_t i = 1; i < xs.size(); ++i)
            if (!(xs[i - 1] < xs[i]) || !(ys[i - 1] < ys[i]))
                throw std::invalid_argument("breakpoints must be strictly increasing");
        PLMap f;
        f.xs_ = std::move(xs);
        f.ys_ = std::move(ys);
        f.canonicalize();
        return f;
    }

    const std::vector<Rational>& xs() const { return xs_; }
    const std::vector<Rational>& ys() const { return ys_; }
    std::size_t pieces() const { return xs_.size() - 1; }
    const Rational& dom_lo() const { return xs_.front(); }
    const Rational& dom_hi() const { return xs_.back(); }
    const Rational& rng_lo() const { return ys_.front(); }
    const Rational& rng_hi() const { return ys_.back(); }

    Rational slope(std::size_t i) const { return (ys_[i + 1] - ys_[i]) / (xs_[i + 1] - xs_[i]); }

    bool in_domain(const Rational& t) const { return t >= xs_.front() && t <= xs_.back(); }

    /* index i of the piece [xs[i], xs[i+1]] containing t, preferring the right piece at breakpoints */
    std::size_t piece_at(const Rational& t) const
    {
        auto it = std::upper_bound(xs_.begin(), xs_.end(), t);
        std::size_t i = static_cast<std::size_t>(it - xs_.begin());
        if (i == 0)
            return 0;
        return std::min(i - 1, pieces() - 1);
    }

    Rational operator()(const Rational& t) const
    {
        if (!in_domain(t))
            throw std::out_of_range("point " + t.get_str() + " outside domain");
        std::size_t i = piece_at(t);
        if (t == xs_[i])
            return ys_[i];
        if (t == xs_[i + 1])
            return ys_[i + 1];
        return ys_[i] + (t - xs_[i]) * (ys_[i + 1] - ys_[i]) / (xs_[i + 1] - xs_[i]);
    }

    Rational right_slope(const Rational& t) const
    {
        if (!(t >= xs_.front() && t < xs_.back()))
            throw std::out_of_range("no right derivative at " + t.get_str());
        return slope(piece_at(t));
    }

    Rational left_slope(const Rational& t) const
    {
        if (!(t > xs_.front() && t <= xs_.back()))
            throw std::out_of_range("no left derivative at " + t.get_str());
        auto it = std::lower_bound(xs_.begin(), xs_.end(), t);
        std::size_t i = static_cast<std::size_t>(it - xs_.begin());
        return slope(i - 1);
    }

    bool is_endomorphism() const { return xs_.front() == ys_.front() && xs_.back() == ys_.back(); }

    bool is_identity() const
    {
        return xs_.size() == 2 && xs_[0] == ys_[0] && xs_[1] == ys_[1];
    }

    /* dyadic breakpoints and power-of-two slopes */
    bool is_dyadic_pl() const
    {
        for (std::size_t i = 0; i < xs_.size(); ++i)
            if (!is_dyadic(xs_[i]) || !is_dyadic(ys_[i]))
                return false;
        for (std::size_t i = 0; i < pieces(); ++i)
            if (!log2_exact(slope(i)))
                return false;
        return true;
    }

    bool in_F() const { return xs_.front() == 0 && xs_.back() == 1 && is_endomorphism() && is_dyadic_pl(); }

    PLMap restrict(const Rational& a, const Rational& b) const
    {
        if (!(a < b) || a < xs_.front() || b > xs_.back())
            throw std::out_of_range("restriction interval not inside domain");
        std::vector<Rational> nx{a}, ny{(*this)(a)};
        for (std::size_t i = 0; i < xs_.size(); ++i)
            if (xs_[i] > a && xs_[i] < b) {
                nx.push_back(xs_[i]);
                ny.push_back(ys_[i]);
            }
        nx.push_back(b);
        ny.push_back((*this)(b));
        return from_points(std::move(nx), std::move(ny));
    }

    friend bool operator==(const PLMap& f, const PLMap& g) { return f.xs_ == g.xs_ && f.ys_ == g.ys_; }
    friend bool operator!=(const PLMap& f, const PLMap& g) { return !(f == g); }

    std::string str() const
    {
        std::string s = "{";
        for (std::size_t i = 0; i < xs_.size(); ++i) {
            if (i)
                s += ", ";
            s += "(" + xs_[i].get_str() + "," + ys_[i].get_str() + ")";
        }
        return s + "}";
    }

private:
    void canonicalize()
    {
        std::size_t w = 1;
        for (std::size_t i = 1; i < xs_.size(); ++i) {
            if (w >= 2 && i + 1 <= xs_.size()) {
                // drop xs_[w-1] if it is collinear with xs_[w-2] and xs_[i]
                const Rational& x0 = xs_[w - 2];
                const Rational& y0 = ys_[w - 2];
                const Rational& x1 = xs_[w - 1];
                const Rational& y1 = ys_[w - 1];
                if ((y1 - y0) * (xs_[i] - x1) == (ys_[i] - y1) * (x1 - x0))
                    --w;
            }
            if (w != i) {
                xs_[w] = std::move(xs_[i]);
                ys_[w] = std::move(ys_[i]);
            }
            ++w;
        }
        xs_.resize(w);
        ys_.resize(w);
    }

    std::vector<Rational> xs_, ys_;
};

/* f∘g: first g, then f.  The range of g must lie inside the domain of f. */
inline PLMap compose(const PLMap& f, const PLMap& g)
{
    if (g.rng_lo() < f.dom_lo() || g.rng_hi() > f.dom_hi())
        throw std::invalid_argument("compose: range of inner map not inside domain of outer map");
    const auto& gx = g.xs();
    const auto& gy = g.ys();
    const auto& fx = f.xs();
    const auto& fy = f.ys();
    std::vector<Rational> rx, ry;
    rx.reserve(gx.size() + fx.size());
    ry.reserve(gx.size() + fx.size());
    std::size_t j = 0; // f piece index
    auto fval = [&](const Rational& y) -> Rational {
        while (j + 1 < fx.size() - 1 && fx[j + 1] <= y)
            ++j;
        if (y == fx[j])
            return fy[j];
        if (y == fx[j + 1])
            return fy[j + 1];
        return fy[j] + (y - fx[j]) * (fy[j + 1] - fy[j]) / (fx[j + 1] - fx[j]);
    };
    for (std::size_t i = 0; i + 1 < gx.size(); ++i) {
        rx.push_back(gx[i]);
        ry.push_back(fval(gy[i]));
        // breakpoints of f strictly inside (gy[i], gy[i+1])
        std::size_t k = j + 1;
        while (k < fx.size() && fx[k] <= gy[i])
            ++k;
        for (; k < fx.size() && fx[k] < gy[i + 1]; ++k) {
            rx.push_back(gx[i] + (fx[k] - gy[i]) * (gx[i + 1] - gx[i]) / (gy[i + 1] - gy[i]));
            ry.push_back(fy[k]);
        }
    }
    rx.push_back(gx.back());
    ry.push_back(fval(gy.back()));
    return PLMap::from_points(std::move(rx), std::move(ry));
}

inline PLMap inverse(const PLMap& f) { return PLMap::from_points(f.ys(), f.xs()); }

inline PLMap power(const PLMap& f, long n)
{
    if (!f.is_endomorphism())
        throw std::invalid_argument("power of a map whose domain and range differ");
    PLMap base = n < 0 ? inverse(f) : f;
    unsigned long e = n < 0 ? static_cast<unsigned long>(-n) : static_cast<unsigned long>(n);
    PLMap result = PLMap::identity(f.dom_lo(), f.dom_hi());
    while (e) {
        if (e & 1)
            result = compose(result, base);
        e >>= 1;
        if (e)
            base = compose(base, base);
    }
    return result;
}

/* conjugate g^{-1}∘y∘g */
inline PLMap conjugate(const PLMap& y, const PLMap& g) { return compose(inverse(g), compose(y, g)); }

/* Concatenate maps on adjacent intervals ([a,b]->[c,d], [b,e]->[d,f], ...) into one map. */
inline PLMap glue(const std::vector<PLMap>& parts)
{
    if (parts.empty())
        throw std::invalid_argument("glue of no pieces");
    std::vector<Rational> xs, ys;
    for (std::size_t p = 0; p < parts.size(); ++p) {
        const PLMap& f = parts[p];
        if (p > 0 && (f.dom_lo() != xs.back() || f.rng_lo() != ys.back()))
            throw std::invalid_argument("glue: pieces are not adjacent");
        for (std::size_t i = (p == 0 ? 0 : 1); i < f.xs().size(); ++i) {
            xs.push_back(f.xs()[i]);
            ys.push_back(f.ys()[i]);
        }
    }
    return PLMap::from_points(std::move(xs), std::move(ys));
}

/* An endomorphism of [c,d] extended by the identity to [a,b] ⊇ [c,d]. */
inline PLMap extend_by_identity(const PLMap& f, const Rational& a, const Rational& b)
{
    if (!f.is_endomorphism() || f.dom_lo() < a || f.dom_hi() > b)
        throw std::invalid_argument("extend_by_identity: bad interval");
    std::vector<PLMap> parts;
    if (a < f.dom_lo())
        parts.push_back(PLMap::identity(a, f.dom_lo()));
    parts.push_back(f);
    if (f.dom_hi() < b)
        parts.push_back(PLMap::identity(f.dom_hi(), b));
    return glue(parts);
}

} // namespace thompson
