#include "support.hpp"

#include <thompson/circle.hpp>

#include <gtest/gtest.h>

using namespace thompson;
using namespace testing_support;

namespace {

long factorial(long n) { return n <= 1 ? 1 : n * factorial(n - 1); }

/* an element of PL_2(S^1): a dyadic rotation after an element of F */
CircleMap random_circle_map(std::mt19937_64& rng)
{
    PLMap f = word_to_plmap(random_word(rng, 1 + rng() % 6, 3));
    Rational a = Rational(static_cast<long>(rng() % 16)) / 16;
    return compose(CircleMap::rotation(a), CircleMap::from_interval_map(f));
}

void expect_certificate(const CircleMap& f, const RotationResult& r)
{
    ASSERT_TRUE(r.exact);
    EXPECT_EQ(power(f, r.q)(r.point), r.point + r.p);
    EXPECT_EQ(r.value, Rational(r.p) / r.q - Rational(floor_q(Rational(r.p) / r.q)));
}

} // namespace

TEST(Circle, LiftArithmetic)
{
    std::mt19937_64 rng(41);
    for (int it = 0; it < 100; ++it) {
        CircleMap f = random_circle_map(rng), g = random_circle_map(rng);
        EXPECT_TRUE(f.is_pl2());
        EXPECT_TRUE(compose(f, inverse(f)).normalized().lift().is_identity());
        EXPECT_TRUE(compose(inverse(f), f).normalized().lift().is_identity());
        for (int k = 0; k < 5; ++k) {
            Rational t = Rational(static_cast<long>(rng() % 512) - 256) / 128;
            EXPECT_EQ(compose(f, g)(t), f(g(t)));
            EXPECT_EQ(f(t + 3), f(t) + 3);
        }
        EXPECT_EQ(power(f, 3), compose(f, compose(f, f)));
        EXPECT_TRUE(compose(power(f, -2), power(f, 2)).normalized().lift().is_identity());
    }
    EXPECT_THROW(CircleMap(PLMap::linear(0, 1, 0, 2)), std::invalid_argument);
}

TEST(Circle, RotationExamples)
{
    auto r = rotation_number(CircleMap::rotation(Rational(1, 4)));
    EXPECT_TRUE(r.exact);
    EXPECT_EQ(r.value, Rational(1, 4));
    EXPECT_EQ(rotation_number(CircleMap::identity()).value, 0);
    EXPECT_EQ(rotation_number(CircleMap::rotation(Rational(-3, 8))).value, Rational(5, 8));
    // a map with a fixed point
    auto x0 = CircleMap::from_interval_map(generator_map(0));
    r = rotation_number(x0);
    EXPECT_TRUE(r.exact);
    EXPECT_EQ(r.value, 0);
    expect_certificate(x0, r);
    EXPECT_THROW(rotation_number(x0, 0), std::invalid_argument);
}

TEST(Circle, UncertifiedGivesEnclosure)
{
    CircleMap f = CircleMap::rotation(Rational(1, 67));
    auto r = rotation_number(f, 64);
    EXPECT_FALSE(r.exact);
    EXPECT_LE(r.lo, Rational(1, 67));
    EXPECT_GE(r.hi, Rational(1, 67));
    EXPECT_TRUE(rotation_number(f, 67).exact);
}

TEST(Circle, CertificatesAreSound)
{
    std::mt19937_64 rng(42);
    int exact = 0;
    for (int it = 0; it < 150; ++it) {
        CircleMap f = random_circle_map(rng);
        auto r = rotation_number(f, 16);
        if (r.exact) {
            ++exact;
            expect_certificate(f, r);
        } else {
            EXPECT_LT(r.lo, r.hi);
        }
    }
    EXPECT_GT(exact, 50);
}

TEST(Circle, TorsionElements)
{
    EXPECT_TRUE(construct_torsion(1).lift().is_identity());
    EXPECT_TRUE(construct_torsion(2).same_circle_map(CircleMap::rotation(Rational(1, 2))));
    EXPECT_TRUE(construct_torsion(4).same_circle_map(CircleMap::rotation(Rational(1, 4))));
    EXPECT_EQ(balanced_partition(6), (std::vector<Rational>{0, Rational(1, 4), Rational(1, 2), Rational(5, 8),
                                                            Rational(3, 4), Rational(7, 8), 1}));
    for (long n = 1; n <= 8; ++n) {
        CircleMap c = construct_torsion(n);
        EXPECT_TRUE(c.is_pl2());
        EXPECT_EQ(is_torsion(c, 64), n);
        for (long k = 0; k < n; ++k) {
            auto r = rotation_number(power(c, k));
            EXPECT_TRUE(r.exact);
            EXPECT_EQ(r.value, Rational(k) / n);
        }
    }
    CircleMap c6 = construct_torsion(6);
    EXPECT_TRUE(power(c6, 6).normalized().lift().is_identity());
    for (long k = 1; k < 6; ++k)
        EXPECT_FALSE(power(c6, k).normalized().lift().is_identity());
    EXPECT_EQ(is_torsion(construct_torsion(5), 10), 5);
    EXPECT_FALSE(is_torsion(CircleMap::from_interval_map(generator_map(0)), 64));
    EXPECT_THROW(construct_torsion(0), std::invalid_argument);
}

TEST(Circle, QZEmbedding)
{
    EXPECT_TRUE(qz_generator(1).lift().is_identity());
    EXPECT_TRUE(qz_generator(2).same_circle_map(CircleMap::rotation(Rational(1, 2))));
    for (long n = 1; n <= 6; ++n) {
        CircleMap next = qz_generator(n + 1);
        EXPECT_TRUE(next.is_pl2());
        EXPECT_EQ(static_cast<long>(qz_partition(n + 1).size()) - 1, 2 * factorial(n + 1));
        EXPECT_TRUE(power(next, n + 1).same_circle_map(qz_generator(n))) << n;
    }
    for (long n = 2; n <= 4; ++n) {
        EXPECT_EQ(is_torsion(qz_generator(n), 30), factorial(n));
        EXPECT_EQ(rotation_number(qz_generator(n), 30).value, Rational(1, factorial(n)));
    }
}

TEST(Circle, ConjugateTorsionToShift)
{
    for (long n : {2L, 3L, 5L}) {
        CircleMap f = construct_torsion(n);
        CircleMapPL h = conjugate_torsion_to_shift(f);
        EXPECT_EQ(h.n, n);
        for (long i = 0; i < 1000; ++i) {
            Rational x = Rational(i) * h.m / 997 - 1;
            EXPECT_EQ(h(f(x)), h(x) + 1);
        }
    }
    // conjugates and powers of torsion elements
    std::mt19937_64 rng(43);
    for (int it = 0; it < 20; ++it) {
        CircleMap g = random_circle_map(rng);
        CircleMap f = conjugate(power(construct_torsion(4), 1 + it % 3), g);
        CircleMapPL h = conjugate_torsion_to_shift(f);
        for (long i = 0; i < 50; ++i) {
            Rational x = Rational(i) * h.m / 47;
            EXPECT_EQ(h(f(x)), h(x) + 1);
        }
    }
    EXPECT_THROW(conjugate_torsion_to_shift(CircleMap::from_interval_map(generator_map(0))), std::invalid_argument);
    EXPECT_THROW(conjugate_torsion_to_shift(CircleMap::identity()), std::invalid_argument);
}

TEST(Circle, RotationArithmetic)
{
    std::mt19937_64 rng(44);
    for (int it = 0; it < 40; ++it) {
        long n = 2 + it % 6;
        CircleMap c = construct_torsion(n);
        CircleMap g = random_circle_map(rng);
        auto rep = rot_arithmetic_checks(c, g);
        EXPECT_TRUE(rep.checked);
        EXPECT_TRUE(rep.conjugation_invariant);
        EXPECT_TRUE(rep.power_multiplicative);
        EXPECT_EQ(rotation_number(conjugate(c, g)).value, Rational(1, n));
        // commuting family: conjugates of powers of c by one g
        long a = 1 + static_cast<long>(rng() % 5), b = static_cast<long>(rng() % 5);
        CircleMap f1 = conjugate(power(c, a), g), f2 = conjugate(power(c, b), g);
        Rational sum = Rational(a + b) / n;
        EXPECT_EQ(rotation_number(compose(f1, f2)).value, sum - Rational(floor_q(sum)));
    }
    auto rep = rot_arithmetic_checks(CircleMap::rotation(Rational(1, 67)), CircleMap::identity(), 16);
    EXPECT_FALSE(rep.checked);
    EXPECT_FALSE(rep.notice.empty());
}
