#include "support.hpp"

#include <thompson/circle.hpp>
#include <thompson/crypto.hpp>
#include <thompson/dyadic_maps.hpp>
#include <thompson/dynamics.hpp>
#include <thompson/growth.hpp>
#include <thompson/mather.hpp>
#include <thompson/normal_form.hpp>
#include <thompson/strand.hpp>
#include <thompson/tree_pair.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

using namespace thompson;
using namespace testing_support;

namespace {

// pinned tolerances
constexpr double kNormalFormBudget = 60.0;   // seconds for criterion 1
constexpr double kAttackRunLimit = 1.0;      // seconds per attack run
constexpr double kTimingFitFactor = 2.0;     // t(M) within this factor of c M log M
constexpr double kStrandExponentMax = 1.2;   // fitted exponent of strand conjugacy time in L
constexpr double kSuiteBudget = 600.0;       // seconds

double now() { return std::chrono::duration<double>(std::chrono::steady_clock::now().time_since_epoch()).count(); }

struct Outcome {
    bool pass;
    std::string detail;
};

template <class F>
double timed(F&& f)
{
    double t0 = now();
    f();
    return now() - t0;
}

std::string fmt(double v, int prec = 3)
{
    std::ostringstream s;
    s.precision(prec);
    s << v;
    return s.str();
}

/* slope of the least-squares line through (log x, log y) */
double loglog_slope(const std::vector<double>& x, const std::vector<double>& y)
{
    double n = static_cast<double>(x.size()), sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        double a = std::log(x[i]), b = std::log(y[i]);
        sx += a;
        sy += b;
        sxx += a * a;
        sxy += a * b;
    }
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

double median(std::vector<double> v)
{
    std::sort(v.begin(), v.end());
    return v[v.size() / 2];
}

// 1. presentation and normal forms

/* w with relators x_k^-1 x_n x_k x_{n+1}^-1 or a free pair g g^-1 spliced in */
Word insert_relators(std::mt19937_64& rng, Word w, int count)
{
    for (int c = 0; c < count; ++c) {
        std::int64_t k = static_cast<std::int64_t>(rng() % 5);
        std::int64_t n = k + 1 + static_cast<std::int64_t>(rng() % 4);
        Word r = rng() % 3 == 0 ? gen(n) * gen(n, -1) : gen(k, -1) * gen(n) * gen(k) * gen(n + 1, -1);
        if (rng() % 2)
            r = inverse(r);
        auto pos = static_cast<long>(rng() % (w.size() + 1));
        w.letters.insert(w.letters.begin() + pos, r.letters.begin(), r.letters.end());
    }
    return w;
}

Outcome criterion1()
{
    long relations = 0, bad_relations = 0;
    for (std::int64_t n = 1; n <= 8; ++n)
        for (std::int64_t k = 0; k < n; ++k) {
            ++relations;
            if (conjugate(generator_map(n), generator_map(k)) != generator_map(n + 1))
                ++bad_relations;
        }
    std::mt19937_64 rng(101);
    long words = 0, failures = 0, equal_pairs = 0;
    double t = timed([&] {
        for (int i = 0; i < 10000; ++i) {
            Word w = random_word(rng, 1 + rng() % 56, 6);
            Word v;
            if (i % 2 == 0) {
                v = insert_relators(rng, w, 1 + static_cast<int>(rng() % 2));
            } else if (i % 4 == 1) {
                v = random_word(rng, 1 + rng() % 64, 6);
            } else {
                v = w;
                auto& l = v.letters[rng() % v.size()];
                if (rng() % 2)
                    l.sign = -l.sign;
                else
                    l.index = (l.index + 1) % 7;
            }
            ++words;
            Word nw = normal_form(w), nv = normal_form(v);
            PLMap fw = word_to_plmap(w), fv = word_to_plmap(v);
            bool ok = is_normal_form(nw) && word_to_plmap(nw) == fw && ((nw == nv) == (fw == fv));
            if (i % 2 == 0)
                ok = ok && nw == nv;
            equal_pairs += fw == fv;
            failures += !ok;
        }
    });
    bool pass = bad_relations == 0 && failures == 0 && t < kNormalFormBudget;
    return {pass, std::to_string(relations - bad_relations) + "/" + std::to_string(relations) + " relations; " +
                      std::to_string(failures) + " failures on " + std::to_string(words) + " pairs (" +
                      std::to_string(equal_pairs) + " equal) in " + fmt(t) + " s"};
}

// 2. conjugacy engines

Outcome criterion2()
{
    std::mt19937_64 rng(102);
    long pairs = 0, yes = 0, mather_checked = 0, disagreements = 0, bad_witness = 0;
    for (int i = 0; i < 1000; ++i) {
        bool bump = i % 4 >= 2;
        auto draw = [&] { return bump ? word_from_plmap(random_one_bump(rng, 2 + rng() % 10)) : random_word(rng, 1 + rng() % 12, 3); };
        Word w = draw();
        Word v = i % 2 == 0 ? [&] {
            Word g = random_word(rng, 1 + rng() % 8, 3);
            return inverse(g) * w * g;
        }()
                            : draw();
        ++pairs;
        PLMap a = word_to_plmap(w), b = word_to_plmap(v);
        bool strand = conjugate_strand(w, v);
        auto g = conjugate_pl(a, b);
        bool agree = strand == g.has_value();
        if (i % 2 == 0)
            agree = agree && strand;
        if (is_one_bump(a) && is_one_bump(b)) {
            ++mather_checked;
            agree = agree && mather_conjugate(a, b) == strand;
        }
        disagreements += !agree;
        if (g) {
            ++yes;
            Word gw = word_from_plmap(*g);
            if (!g->in_F() || conjugate(a, *g) != b || !word_equal(inverse(gw) * w * gw, v))
                ++bad_witness;
        }
    }
    bool pass = pairs >= 1000 && disagreements == 0 && bad_witness == 0;
    return {pass, std::to_string(pairs) + " pairs, " + std::to_string(yes) + " conjugate, " + std::to_string(mather_checked) +
                      " also decided by Mather invariants; " + std::to_string(disagreements) + " disagreements, " +
                      std::to_string(bad_witness) + " bad conjugators"};
}

// 3. orbits

Outcome criterion3()
{
    Rational a = Rational(1) / 17, b = Rational(13) / 17, c = Rational(3) / 17;
    auto g = same_orbit(a, b);
    bool some = g && g->in_F() && (*g)(a) == b;
    bool none = !same_orbit(a, c);
    return {some && none, std::string("1/17 ~ 13/17: ") + (some ? "witness verified" : "FAILED") + "; 1/17 ~ 3/17: " +
                              (none ? "none" : "unexpected witness")};
}

// 4. simultaneous conjugacy

Outcome criterion4()
{
    std::mt19937_64 rng(104);
    long recovered = 0, certified_none = 0, failures = 0;
    for (int trial = 0; trial < 200; ++trial) {
        std::size_t k = 2 + trial % 3;
        std::vector<Word> ws;
        std::vector<PLMap> xs, ys;
        PLMap g = random_element(rng, 1 + rng() % 8);
        for (std::size_t i = 0; i < k; ++i) {
            ws.push_back(random_word(rng, 1 + rng() % 8, 3));
            xs.push_back(word_to_plmap(ws.back()));
            ys.push_back(conjugate(xs.back(), g));
        }
        auto c = simultaneous_conjugate(xs, ys);
        bool ok = c.has_value();
        for (std::size_t i = 0; ok && i < k; ++i)
            ok = conjugate(xs[i], *c) == ys[i];
        recovered += ok;
        std::size_t i = rng() % k;
        Word other;
        do
            other = random_word(rng, 1 + rng() % 8, 3);
        while (conjugate_strand(ws[i], other));
        auto bad = ys;
        bad[i] = word_to_plmap(other);
        bool none = !simultaneous_conjugate(xs, bad);
        certified_none += none;
        failures += !ok + !none;
    }
    return {failures == 0, std::to_string(recovered) + "/200 conjugators recovered, " + std::to_string(certified_none) +
                               "/200 perturbed tuples rejected"};
}

// 5. roots and centralizers

Outcome criterion5()
{
    std::mt19937_64 rng(105);
    long roots = 0;
    for (int trial = 0; trial < 100; ++trial) {
        PLMap f = random_element(rng, 1 + rng() % 10);
        long n = 1 + trial % 4;
        PLMap fn = power(f, n);
        auto h = nth_root(fn, n);
        roots += h && power(*h, n) == fn;
    }
    PLMap x0 = generator_map(0), x1 = generator_map(1);
    auto c0 = centralizer(x0);
    bool ok0 = c0.parts.size() == 1 && c0.parts[0].lo == 0 && c0.parts[0].hi == 1 &&
               c0.parts[0].kind == CentralizerKind::Cyclic && c0.parts[0].generator == x0;
    auto c1 = centralizer(x1);
    Rational half(1, 2);
    bool ok1 = c1.parts.size() == 2 && c1.parts[0].lo == 0 && c1.parts[0].hi == half &&
               c1.parts[0].kind == CentralizerKind::Full && c1.parts[1].lo == half && c1.parts[1].hi == 1 &&
               c1.parts[1].kind == CentralizerKind::Cyclic && c1.parts[1].generator == x1.restrict(half, 1);
    long samples = 0, commuting = 0;
    std::uniform_int_distribution<int> expo(-3, 3);
    for (int trial = 0; trial < 100; ++trial) {
        PLMap f = random_element(rng, 1 + rng() % 10);
        if (trial % 3 == 0)
            f = power(f, 2 + trial % 3);
        auto c = centralizer(f);
        for (int s = 0; s < 3; ++s) {
            std::vector<PLMap> parts;
            for (const auto& p : c.parts) {
                if (p.kind == CentralizerKind::Cyclic) {
                    parts.push_back(power(p.generator, expo(rng)));
                } else if (p.kind == CentralizerKind::Full) {
                    Rational m = (p.lo + p.hi) / 2;
                    Rational t = p.lo + (p.hi - p.lo) * random_dyadic(rng, 4);
                    parts.push_back(glue({dyadic_interval_map(p.lo, m, p.lo, t), dyadic_interval_map(m, p.hi, t, p.hi)}));
                } else {
                    parts.push_back(PLMap::identity(p.lo, p.hi));
                }
            }
            PLMap h = glue(parts);
            ++samples;
            commuting += h.in_F() && compose(h, f) == compose(f, h);
        }
    }
    bool pass = roots == 100 && ok0 && ok1 && commuting == samples;
    return {pass, std::to_string(roots) + "/100 roots; C(x0) " + (ok0 ? "cyclic on x0" : "WRONG") + "; C(x1) " +
                      (ok1 ? "full on [0,1/2] + cyclic on [1/2,1]" : "WRONG") + "; " + std::to_string(commuting) + "/" +
                      std::to_string(samples) + " samples commute"};
}

// 6. cryptanalysis

struct FitReport {
    bool pass;
    std::string detail;
};

/* median attack time at each M, fitted to c M log M */
FitReport timing_fit(Variant variant, const std::function<RecoveredKey(const Transcript&)>& attack_fn, int seeds,
                     int reps)
{
    std::vector<long> Ms{256, 512, 1024, 2048};
    std::vector<double> ratios;
    std::string detail;
    for (long M : Ms) {
        std::vector<double> ts;
        for (int s = 0; s < seeds; ++s) {
            ProtocolParams p;
            p.s = 3;
            p.M = M;
            p.seed = 9000 + static_cast<std::uint64_t>(s);
            p.variant = variant;
            p.published_regime = false;
            ProtocolRun run = run_protocol(p);
            double best = 1e9;
            for (int rep = 0; rep < reps; ++rep)
                best = std::min(best, timed([&] { attack_fn(run.transcript); }));
            ts.push_back(best);
        }
        double t = median(ts);
        ratios.push_back(t / (static_cast<double>(M) * std::log2(static_cast<double>(M))));
        detail += (detail.empty() ? "" : ", ") + std::to_string(M) + ": " + fmt(t * 1000) + " ms";
    }
    double logc = 0;
    for (double r : ratios)
        logc += std::log(r);
    double c = std::exp(logc / static_cast<double>(ratios.size()));
    double worst = 1;
    for (double r : ratios)
        worst = std::max(worst, std::max(r / c, c / r));
    return {worst <= kTimingFitFactor, detail + "; worst factor " + fmt(worst)};
}

Outcome criterion6()
{
    long su_ok = 0, tr_ok = 0, kl_ok = 0;
    double slowest = 0;
    for (std::uint64_t seed = 1; seed <= 100; ++seed) {
        ProtocolParams p;
        p.s = 3 + static_cast<long>(seed % 6);
        p.M = 256 + 2 * static_cast<long>(seed % 33);
        p.seed = seed;
        ProtocolRun su = run_protocol(p);
        RecoveredKey r1, r2;
        slowest = std::max(slowest, timed([&] { r1 = attack(su.transcript); }));
        slowest = std::max(slowest, timed([&] { r2 = attack_transitivity(su.transcript); }));
        su_ok += r1.K == su.K && recovered_pair_valid(su.transcript, r1);
        tr_ok += r2.K == su.K && recovered_pair_valid(su.transcript, r2);
        p.variant = Variant::KoLee;
        ProtocolRun kl = run_protocol(p);
        RecoveredKey r3;
        slowest = std::max(slowest, timed([&] { r3 = attack_kolee(kl.transcript); }));
        kl_ok += r3.K == kl.K && recovered_pair_valid(kl.transcript, r3);
    }
    FitReport fit = timing_fit(Variant::ShpilrainUshakov, [](const Transcript& t) { return attack(t); }, 5, 3);
    FitReport fit_tr = timing_fit(Variant::ShpilrainUshakov, [](const Transcript& t) { return attack_transitivity(t); }, 3, 1);
    FitReport fit_kl = timing_fit(Variant::KoLee, [](const Transcript& t) { return attack_kolee(t); }, 3, 1);
    std::cout << "  info: normal-form attack timing " << fit.detail << '\n';
    std::cout << "  info: transitivity attack timing " << fit_tr.detail << (fit_tr.pass ? "" : " (outside factor 2)") << '\n';
    std::cout << "  info: Ko-Lee attack timing " << fit_kl.detail << (fit_kl.pass ? "" : " (outside factor 2)") << '\n';
    bool pass = su_ok == 100 && tr_ok == 100 && kl_ok == 100 && slowest < kAttackRunLimit && fit.pass;
    return {pass, "keys recovered: normal form " + std::to_string(su_ok) + "/100, transitivity " + std::to_string(tr_ok) +
                      "/100, Ko-Lee " + std::to_string(kl_ok) + "/100; slowest run " + fmt(slowest * 1000) +
                      " ms; c M log M fit " + (fit.pass ? "within" : "NOT within") + " factor 2"};
}

// 7. growth

/* coefficients of num/den up to x^n by long division */
std::vector<Integer> series(const std::vector<long>& num, const std::vector<long>& den, long n)
{
    std::vector<Integer> out;
    std::vector<Integer> rem(static_cast<std::size_t>(n + 1) + den.size(), 0);
    for (std::size_t i = 0; i < num.size(); ++i)
        rem[i] = num[i];
    for (long k = 0; k <= n; ++k) {
        Integer c = rem[static_cast<std::size_t>(k)] / den[0];
        out.push_back(c);
        for (std::size_t j = 0; j < den.size(); ++j)
            rem[static_cast<std::size_t>(k) + j] -= c * den[j];
    }
    return out;
}

Outcome criterion7()
{
    long elements = 0, length_mismatch = 0;
    auto forest_spheres = bfs_spheres_forest(8, [&](const ForestDiagram& d, long r) {
        ++elements;
        length_mismatch += length(d) != r;
    });
    auto plmap_spheres = bfs_spheres_plmap(10);
    bool spheres_agree = std::equal(forest_spheres.begin(), forest_spheres.end(), plmap_spheres.begin());

    auto by_division = series({1, 0, -1}, {1, -2, -1, 1}, 12);
    auto by_bfs = bfs_positive_counts(12);
    long positive_bad = 0;
    for (long n = 0; n <= 12; ++n)
        positive_bad += positive_count(n) != by_division[static_cast<std::size_t>(n)] ||
                        positive_count(n) != Integer(static_cast<unsigned long>(by_bfs[static_cast<std::size_t>(n)]));

    long recursion_bad = 0;
    std::string mismatch;
    try {
        auto rec = sphere_count_recursive(10, true);
        for (long n = 0; n <= 10; ++n)
            recursion_bad += rec[static_cast<std::size_t>(n)] != plmap_spheres[static_cast<std::size_t>(n)];
    } catch (const ValidationMismatch& e) {
        recursion_bad = 1;
        mismatch = std::string(" (") + e.what() + ")";
    }
    bool pass = length_mismatch == 0 && spheres_agree && positive_bad == 0 && recursion_bad == 0;
    return {pass, "length formula = distance on all " + std::to_string(elements) + " elements of B_8 (" +
                      std::to_string(length_mismatch) + " mismatches); positive counts n <= 12: " +
                      std::to_string(positive_bad) + " mismatches; recursion vs BFS n <= 10: " +
                      std::to_string(recursion_bad) + " mismatches" + mismatch};
}

// 8. circle maps

Outcome criterion8()
{
    long rot_checks = 0, rot_ok = 0;
    for (long n = 1; n <= 8; ++n) {
        CircleMap c = construct_torsion(n);
        for (long k = 0; k < n; ++k) {
            CircleMap f = power(c, k);
            RotationResult r = rotation_number(f, n);
            ++rot_checks;
            rot_ok += r.exact && r.value == Rational(k) / n && power(f, r.q)(r.point) == r.point + r.p;
        }
    }
    long qz_ok = 0;
    for (long n = 1; n <= 6; ++n)
        qz_ok += power(qz_generator(n + 1), n + 1).same_circle_map(qz_generator(n));
    std::mt19937_64 rng(108);
    long points = 0, h_ok = 0;
    for (long n = 2; n <= 6; ++n) {
        CircleMap f = construct_torsion(n);
        if (n % 2 == 0) {
            PLMap g = random_element(rng, 1 + rng() % 6);
            f = conjugate(f, compose(CircleMap::rotation(Rational(static_cast<long>(rng() % 16)) / 16), CircleMap::from_interval_map(g)));
        }
        CircleMapPL h = conjugate_torsion_to_shift(f);
        for (long i = 0; i < 200; ++i) {
            Rational x = Rational(i) * h.m / 199 + Rational(static_cast<long>(rng() % 1000)) / 997 - 1;
            ++points;
            h_ok += h(f(x)) == h(x) + 1;
        }
    }
    bool pass = rot_ok == rot_checks && qz_ok == 6 && h_ok == points && points >= 1000;
    return {pass, std::to_string(rot_ok) + "/" + std::to_string(rot_checks) + " rotation numbers k/n certified; " +
                      std::to_string(qz_ok) + "/6 identities (X_{n+1})^{n+1} = X_n; H(f(x)) = H(x) + 1 at " +
                      std::to_string(h_ok) + "/" + std::to_string(points) + " points"};
}

// 9. performance

Outcome criterion9(double start)
{
    std::mt19937_64 rng(109);
    std::vector<double> Ls, ts;
    std::string detail;
    bool all_yes = true;
    for (long L : {1000L, 10000L, 100000L}) {
        Word w = random_word(rng, static_cast<std::size_t>(L), 3);
        Word g = random_word(rng, static_cast<std::size_t>(L / 10), 3);
        Word v = inverse(g) * w * g;
        int reps = L >= 100000 ? 3 : 10;
        double best = 1e9;
        for (int r = 0; r < reps; ++r) {
            bool yes = false;
            best = std::min(best, timed([&] { yes = conjugate_strand(w, v); }));
            all_yes = all_yes && yes;
        }
        Ls.push_back(static_cast<double>(L));
        ts.push_back(best);
        detail += (detail.empty() ? "" : ", ") + std::to_string(L) + ": " + fmt(best * 1000) + " ms";
    }
    double exponent = loglog_slope(Ls, ts);
    double elapsed = now() - start;
    bool pass = all_yes && exponent <= kStrandExponentMax && elapsed < kSuiteBudget;
    return {pass, "strand conjugacy " + detail + "; fitted exponent " + fmt(exponent) + " (max " + fmt(kStrandExponentMax) +
                      "); acceptance run " + fmt(elapsed, 4) + " s"};
}

} // namespace

int main()
{
    double start = now();
    std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
        {"presentation and normal forms", criterion1},
        {"conjugacy engines agree", criterion2},
        {"orbit example", criterion3},
        {"simultaneous conjugacy", criterion4},
        {"roots and centralizers", criterion5},
        {"key recovery attacks", criterion6},
        {"growth", criterion7},
        {"circle maps", criterion8},
        {"performance", [&] { return criterion9(start); }},
    };
    int failed = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        Outcome o;
        double t = timed([&] {
            try {
                o = criteria[i].second();
            } catch (const std::exception& e) {
                o = {false, std::string("exception: ") + e.what()};
            }
        });
        failed += !o.pass;
        std::cout << "criterion " << i + 1 << ' ' << (o.pass ? "PASS" : "FAIL") << "  " << criteria[i].first << ": " << o.detail
                  << " [" << fmt(t) << " s]" << std::endl;
    }
    std::cout << (failed ? std::to_string(failed) + " criteria failed" : std::string("all criteria passed")) << " in "
              << fmt(now() - start, 4) << " s" << std::endl;
    return failed ? 1 : 0;
}
