#pragma once

#include "dyadic_maps.hpp"
#include "normal_form.hpp"
#include "tree_pair.hpp"

#include <algorithm>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace thompson {

/* φ_s = 1 - 2^-(s+1); A_s = PL_2([0,φ_s]) and B_s = PL_2([φ_s,1]) */
inline Rational phi(long s)
{
    if (s < 0)
        throw std::invalid_argument("phi: s must be non-negative");
    return 1 - pow2(-(s + 1));
}

enum class Variant { ShpilrainUshakov, KoLee };

struct ProtocolParams {
    long s = 3;
    long M = 256;
    std::uint64_t seed = 0;
    Variant variant = Variant::ShpilrainUshakov;
    // outside the published regime only s >= 2 and an even M >= 2 are required
    bool published_regime = true;

    void validate() const
    {
        if (published_regime) {
            if (s < 3 || s > 8)
                throw std::invalid_argument("s must lie in [3,8]");
            if (M < 256 || M > 320 || M % 2 != 0)
                throw std::invalid_argument("M must be an even integer in [256,320]");
        } else if (s < 2 || M < 2 || M % 2 != 0) {
            throw std::invalid_argument("s must be >= 2 and M even and >= 2");
        }
    }
};

/* public data seen by Eve */
struct Transcript {
    long s;
    Variant variant;
    Word w, u1, u2;
};

enum class Party { Alice, Bob };

/* a w b = u1 (Alice) or a w b = u2 (Bob, Ko-Lee variant) or b w a = u2 (Bob) */
struct RecoveredKey {
    Word a, b, K;
    Party party;
};

struct ProtocolRun {
    Transcript transcript;
    Word a1, b1, a2, b2;
    Word K;
};

enum class SubgroupKind { A, B };

inline std::vector<Word> subgroup_generators(SubgroupKind g, long s)
{
    std::vector<Word> gens;
    if (g == SubgroupKind::A)
        for (long i = 1; i <= s; ++i)
            gens.push_back(gen(0) * gen(i, -1));
    else
        for (long i = s + 1; i <= 2 * s; ++i)
            gens.push_back(gen(i));
    return gens;
}

/*
 * A random reduced word in gens^{±1}, in normal form, with normal-form length exactly M.
 * The walk backs off at the last step when it overshoots and restarts when no letter lands on M.
 */
inline Word random_element_of_length(const std::vector<Word>& gens, long M, std::mt19937_64& rng)
{
    if (gens.empty() || M < 0)
        throw std::invalid_argument("random_element_of_length: bad arguments");
    std::vector<std::pair<std::size_t, int>> moves;
    for (std::size_t i = 0; i < gens.size(); ++i) {
        moves.push_back({i, 1});
        moves.push_back({i, -1});
    }
    std::uniform_int_distribution<std::size_t> pick(0, moves.size() - 1);
    for (int attempt = 0; attempt < 200; ++attempt) {
        Word cur;
        cur.normal = true;
        std::pair<std::size_t, int> last{gens.size(), 0};
        bool stuck = false;
        while (static_cast<long>(cur.size()) < M && !stuck) {
            auto mv = moves[pick(rng)];
            if (mv.first == last.first && mv.second == -last.second)
                continue;
            Word next = normal_form(cur * (mv.second > 0 ? gens[mv.first] : inverse(gens[mv.first])));
            if (static_cast<long>(next.size()) > M) {
                stuck = true;
                std::shuffle(moves.begin(), moves.end(), rng);
                for (const auto& alt : moves) {
                    if (alt.first == last.first && alt.second == -last.second)
                        continue;
                    Word n2 = normal_form(cur * (alt.second > 0 ? gens[alt.first] : inverse(gens[alt.first])));
                    if (static_cast<long>(n2.size()) == M) {
                        next = std::move(n2);
                        mv = alt;
                        stuck = false;
                        break;
                    }
                }
                if (stuck)
                    break;
            }
            cur = std::move(next);
            last = mv;
        }
        if (static_cast<long>(cur.size()) == M)
            return cur;
    }
    throw std::runtime_error("random_element_of_length: could not reach the requested length");
}

inline Word random_subgroup_element(SubgroupKind g, long s, long M, std::mt19937_64& rng)
{
    return random_element_of_length(subgroup_generators(g, s), M, rng);
}

/* z = a·b with a ∈ A_s, b ∈ B_s, read off the normal form of z */
inline std::optional<std::pair<Word, Word>> membership_AsBs(const Word& z, long s)
{
    Word n = normal_form(z);
    std::vector<std::int64_t> pos, neg; // neg in the order x_{n1}^{-1} is last
    std::size_t i = 0;
    while (i < n.size() && n.letters[i].sign > 0)
        pos.push_back(n.letters[i++].index);
    for (std::size_t j = n.size(); j > i; --j)
        neg.push_back(n.letters[j - 1].index);
    // longest prefix length r with i_k - k < s and j_k - k < s (k 1-based)
    std::size_t r = 0;
    while (r < pos.size() && r < neg.size() && pos[r] - static_cast<std::int64_t>(r + 1) < s &&
           neg[r] - static_cast<std::int64_t>(r + 1) < s)
        ++r;
    const std::int64_t shift = static_cast<std::int64_t>(r);
    for (std::size_t k = r; k < pos.size(); ++k)
        if (pos[k] - shift < s + 1)
            return std::nullopt;
    for (std::size_t k = r; k < neg.size(); ++k)
        if (neg[k] - shift < s + 1)
            return std::nullopt;
    Word a, b;
    for (std::size_t k = 0; k < r; ++k)
        a.letters.push_back(Letter{pos[k], 1});
    for (std::size_t k = r; k-- > 0;)
        a.letters.push_back(Letter{neg[k], -1});
    for (std::size_t k = r; k < pos.size(); ++k)
        b.letters.push_back(Letter{pos[k] - shift, 1});
    for (std::size_t k = neg.size(); k-- > r;)
        b.letters.push_back(Letter{neg[k] - shift, -1});
    a.normal = b.normal = true;
    return std::make_pair(std::move(a), std::move(b));
}

inline ProtocolRun run_protocol(const ProtocolParams& p)
{
    p.validate();
    std::mt19937_64 rng(p.seed);
    std::vector<Word> wgens;
    for (long i = 0; i <= p.s + 2; ++i)
        wgens.push_back(gen(i));
    ProtocolRun run;
    Word w = random_element_of_length(wgens, p.M, rng);
    run.a1 = random_subgroup_element(SubgroupKind::A, p.s, p.M, rng);
    run.b1 = random_subgroup_element(SubgroupKind::B, p.s, p.M, rng);
    run.a2 = random_subgroup_element(SubgroupKind::A, p.s, p.M, rng);
    run.b2 = random_subgroup_element(SubgroupKind::B, p.s, p.M, rng);
    Word u1, u2, ka, kb;
    if (p.variant == Variant::ShpilrainUshakov) {
        u1 = normal_form(run.a1 * w * run.b1);
        u2 = normal_form(run.b2 * w * run.a2);
        ka = normal_form(run.a1 * u2 * run.b1);
        kb = normal_form(run.b2 * u1 * run.a2);
    } else {
        // Alice holds a1, a2 and Bob holds b1, b2
        u1 = normal_form(run.a1 * w * run.a2);
        u2 = normal_form(run.b1 * w * run.b2);
        ka = normal_form(run.a1 * u2 * run.a2);
        kb = normal_form(run.b1 * u1 * run.b2);
    }
    if (ka != kb)
        throw std::logic_error("run_protocol: the two keys differ");
    run.transcript = Transcript{p.s, p.variant, w, u1, u2};
    run.K = ka;
    return run;
}

/* the shared key from one party's recovered private pair */
inline Word key_from(const Transcript& t, const RecoveredKey& r)
{
    if (t.variant == Variant::ShpilrainUshakov)
        return r.party == Party::Alice ? normal_form(r.a * t.u2 * r.b) : normal_form(r.b * t.u1 * r.a);
    return r.party == Party::Alice ? normal_form(r.a * t.u2 * r.b) : normal_form(r.a * t.u1 * r.b);
}

/* the defining equation of a recovered pair */
inline bool recovered_pair_valid(const Transcript& t, const RecoveredKey& r)
{
    if (t.variant == Variant::ShpilrainUshakov) {
        if (r.party == Party::Alice)
            return word_equal(r.a * t.w * r.b, t.u1);
        return word_equal(r.b * t.w * r.a, t.u2);
    }
    return word_equal(r.a * t.w * r.b, r.party == Party::Alice ? t.u1 : t.u2);
}

/* Normal-form attack: one of u1 w^-1 and w^-1 u2 splits as A_s·B_s. */
inline RecoveredKey attack(const Transcript& t)
{
    if (t.variant != Variant::ShpilrainUshakov)
        throw std::invalid_argument("attack: transcript of the wrong protocol variant");
    Word wi = inverse(t.w);
    RecoveredKey r;
    if (auto z2 = membership_AsBs(wi * t.u2, t.s)) {
        r.a = z2->first;
        r.b = normal_form(t.u2 * inverse(r.a) * wi);
        r.party = Party::Bob;
    } else if (auto z1 = membership_AsBs(t.u1 * wi, t.s)) {
        r.a = z1->first;
        r.b = normal_form(wi * inverse(r.a) * t.u1);
        r.party = Party::Alice;
    } else {
        throw std::logic_error("attack: neither quotient lies in A_s B_s");
    }
    r.K = key_from(t, r);
    return r;
}

namespace detail {

/* an element of PL_2([0,1]) equal to f on [lo,hi] and to the identity outside [c,d] ⊇ f([lo,hi]) */
inline PLMap extend_partial(const PLMap& f, const Rational& c, const Rational& d)
{
    std::vector<PLMap> parts;
    if (c < f.dom_lo())
        parts.push_back(dyadic_interval_map(c, f.dom_lo(), c, f.rng_lo()));
    parts.push_back(f);
    if (f.dom_hi() < d)
        parts.push_back(dyadic_interval_map(f.dom_hi(), d, f.rng_hi(), d));
    return extend_by_identity(glue(parts), Rational(0), Rational(1));
}

/* u = a w b with a ∈ A_s, b ∈ B_s and w(φ_s) <= φ_s: a pair (a_σ, b_σ) */
inline std::pair<PLMap, PLMap> extend_alice(const PLMap& w, const PLMap& u, long s)
{
    Rational ph = phi(s);
    Rational c = w(ph);
    PLMap wi = inverse(w);
    PLMap a_sigma = PLMap::identity(0, 1);
    if (c > 0)
        a_sigma = extend_partial(compose(u, wi).restrict(0, c), 0, ph);
    PLMap b_sigma = compose(wi, compose(inverse(a_sigma), u));
    return {a_sigma, b_sigma};
}

} // namespace detail

/* Extension attack: rebuild the key of the party whose private element is pinned down on an interval. */
inline RecoveredKey attack_transitivity(const Transcript& t)
{
    if (t.variant != Variant::ShpilrainUshakov)
        throw std::invalid_argument("attack_transitivity: transcript of the wrong protocol variant");
    PLMap w = word_to_plmap(t.w);
    Rational ph = phi(t.s);
    RecoveredKey r;
    if (w(ph) <= ph) {
        auto [a, b] = detail::extend_alice(w, word_to_plmap(t.u1), t.s);
        r.a = word_from_plmap(a);
        r.b = word_from_plmap(b);
        r.party = Party::Alice;
    } else {
        // u2^-1 = a2^-1 w^-1 b2^-1 and w^-1(φ_s) < φ_s
        auto [a, b] = detail::extend_alice(inverse(w), inverse(word_to_plmap(t.u2)), t.s);
        r.a = word_from_plmap(inverse(a));
        r.b = word_from_plmap(inverse(b));
        r.party = Party::Bob;
    }
    r.K = key_from(t, r);
    return r;
}

/* Ko-Lee variant u1 = a1 w a2, u2 = b1 w b2 */
inline RecoveredKey attack_kolee(const Transcript& t)
{
    if (t.variant != Variant::KoLee)
        throw std::invalid_argument("attack_kolee: transcript of the wrong protocol variant");
    PLMap w = word_to_plmap(t.w);
    PLMap wi = inverse(w);
    Rational ph = phi(t.s);
    RecoveredKey r;
    if (w(ph) <= ph) {
        // Bob: b0 ∈ B_s with b0(u2^-1(φ)) = w^-1(φ), then b2' = b2 b0^-1 fixes w^-1(φ)
        PLMap u2 = word_to_plmap(t.u2);
        Rational p = inverse(u2)(ph), q = wi(ph);
        PLMap b0 = p == q ? PLMap::identity(0, 1)
                          : extend_by_identity(map_partition({ph, p, 1}, {ph, q, 1}), 0, 1);
        PLMap u2p = compose(u2, inverse(b0));
        PLMap bs2 = PLMap::identity(0, 1);
        if (q > ph)
            bs2 = extend_by_identity(compose(wi, u2p).restrict(0, q), 0, 1);
        PLMap bs1 = compose(u2p, compose(inverse(bs2), wi));
        r.a = word_from_plmap(bs1);
        r.b = word_from_plmap(compose(bs2, b0));
        r.party = Party::Bob;
    } else {
        // Alice: a0 ∈ A_s with a0(u1^-1(φ)) = w^-1(φ), then a2' = a2 a0^-1 fixes w^-1(φ)
        PLMap u1 = word_to_plmap(t.u1);
        Rational p = inverse(u1)(ph), q = wi(ph);
        PLMap a0 = p == q ? PLMap::identity(0, 1)
                          : extend_by_identity(map_partition({0, p, ph}, {0, q, ph}), 0, 1);
        PLMap u1p = compose(u1, inverse(a0));
        PLMap as2 = glue({PLMap::identity(0, q), compose(wi, u1p).restrict(q, 1)});
        PLMap as1 = compose(u1p, compose(inverse(as2), wi));
        r.a = word_from_plmap(as1);
        r.b = word_from_plmap(compose(as2, a0));
        r.party = Party::Alice;
    }
    r.K = key_from(t, r);
    return r;
}

} // namespace thompson
