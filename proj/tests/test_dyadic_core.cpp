#include "support.hpp"

#include <thompson/dyadic_maps.hpp>
#include <thompson/json_io.hpp>
#include <thompson/tree_pair.hpp>

#include <gtest/gtest.h>

#include <set>

using namespace thompson;
using namespace testing_support;

namespace {

PLMap pts(std::vector<std::pair<Rational, Rational>> p)
{
    std::vector<Rational> xs, ys;
    for (auto& [x, y] : p) {
        xs.push_back(x);
        ys.push_back(y);
    }
    return PLMap::from_points(xs, ys);
}

Rational q(long a, long b = 1)
{
    Rational r(a, b);
    r.canonicalize();
    return r;
}

} // namespace

TEST(Dyadic, NormalizesToOddNumerator)
{
    Dyadic d(Integer(12), 4);
    EXPECT_EQ(d.numerator(), 3);
    EXPECT_EQ(d.exponent(), 2);
    EXPECT_EQ(Dyadic(Integer(0), 7).exponent(), 0);
    EXPECT_EQ(Dyadic(q(3, 8)).exponent(), 3);
    EXPECT_THROW(Dyadic(q(1, 3)), std::domain_error);
    EXPECT_TRUE(Dyadic(q(1, 4)) < Dyadic(q(3, 8)));
}

TEST(Numbers, Logs)
{
    EXPECT_EQ(*log2_exact(q(1, 8)), -3);
    EXPECT_FALSE(log2_exact(q(3, 8)));
    EXPECT_EQ(floor_log2(q(3, 8)), -2);
    EXPECT_EQ(floor_log2(q(1, 3)), -2);
    EXPECT_EQ(floor_log2(q(4)), 2);
    EXPECT_EQ(floor_q(q(-1, 3)), -1);
}

TEST(PLMap, CanonicalMergesCollinear)
{
    PLMap f = pts({{q(0), q(0)}, {q(1, 2), q(1, 2)}, {q(1), q(1)}});
    EXPECT_TRUE(f.is_identity());
    EXPECT_EQ(f.pieces(), 1u);
}

TEST(PLMap, GeneratorX0)
{
    PLMap x0 = word_to_plmap(parse_word("x0"));
    EXPECT_EQ(x0, pts({{q(0), q(0)}, {q(1, 2), q(1, 4)}, {q(3, 4), q(1, 2)}, {q(1), q(1)}}));
    EXPECT_EQ(x0(q(1, 2)), q(1, 4));
    EXPECT_EQ(inverse(x0)(q(1, 4)), q(1, 2));
    EXPECT_TRUE(compose(x0, inverse(x0)).is_identity());
    EXPECT_TRUE(word_to_plmap(Word()).is_identity());
    EXPECT_TRUE(x0.in_F());
}

TEST(PLMap, ComposeIdentityAndRangeCheck)
{
    PLMap f = word_to_plmap(parse_word("x0 x2^-1 x1"));
    EXPECT_EQ(compose(PLMap(), f), f);
    EXPECT_EQ(compose(f, PLMap()), f);
    EXPECT_THROW(compose(PLMap::identity(q(0), q(1, 2)), f), std::invalid_argument);
    EXPECT_EQ(PLMap()(q(1, 3)), q(1, 3));
    EXPECT_THROW(f(q(2)), std::out_of_range);
}

TEST(PLMap, ComposeMatchesPointwiseEvaluation)
{
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 200; ++trial) {
        Word w = random_word(rng, 1 + trial % 20, 6);
        PLMap f = word_to_plmap(w);
        for (int k = 0; k < 10; ++k) {
            Rational t = random_dyadic(rng, 12);
            ASSERT_EQ(f(t), evaluate(w, t)) << to_string(w);
        }
        ASSERT_EQ(f(q(1, 3)), evaluate(w, q(1, 3)));
    }
}

TEST(PLMap, WorkedExampleElements)
{
    // a = x0^2 x1^-1 x0^-1 and b = x0 x1^2 x2^-1 x1^-1 x0^-1
    PLMap a = word_to_plmap(parse_word("x0 x0 x1^-1 x0^-1"));
    EXPECT_EQ(a, pts({{q(0), q(0)}, {q(1, 4), q(1, 8)}, {q(3, 8), q(1, 4)}, {q(1, 2), q(1, 2)}, {q(1), q(1)}}));
    PLMap b = word_to_plmap(parse_word("x0 x1 x1 x2^-1 x1^-1 x0^-1"));
    EXPECT_EQ(b, pts({{q(0), q(0)},
                      {q(1, 4), q(1, 4)},
                      {q(3, 8), q(5, 16)},
                      {q(7, 16), q(3, 8)},
                      {q(1, 2), q(1, 2)},
                      {q(1), q(1)}}));
}

TEST(Presentation, RelationsHoldForSmallIndices)
{
    for (int n = 1; n <= 8; ++n)
        for (int k = 0; k < n; ++k) {
            PLMap lhs = word_to_plmap(Word({{k, -1}, {n, 1}, {k, 1}}));
            ASSERT_EQ(lhs, generator_map(n + 1)) << k << " " << n;
        }
    EXPECT_EQ(word_to_plmap(parse_word("x1 x0")), word_to_plmap(parse_word("x0 x2")));
}

TEST(NormalForm, Examples)
{
    EXPECT_TRUE(normal_form(parse_word("x0 x0^-1")).empty());
    EXPECT_EQ(to_string(normal_form(parse_word("x0^-1 x1 x0"))), "x2");
    EXPECT_EQ(to_string(normal_form(parse_word("x1 x0"))), "x0 x2");
    EXPECT_EQ(to_string(normal_form(parse_word("x0 x2 x0^-1"))), "x1");
    EXPECT_EQ(to_string(normal_form(parse_word("x0 x1 x0^-1"))), "x0 x1 x0^-1");
    EXPECT_EQ(to_string(normal_form(parse_word("x3^-1 x1"))), "x1 x4^-1");
}

TEST(NormalForm, RandomWordsAgreeWithMaps)
{
    std::mt19937_64 rng(2024);
    for (int trial = 0; trial < 2000; ++trial) {
        Word w = random_word(rng, 1 + trial % 64, 5);
        Word nf = normal_form(w);
        ASSERT_TRUE(is_normal_form(nf)) << to_string(w) << " -> " << to_string(nf);
        ASSERT_EQ(word_to_plmap(nf), word_to_plmap(w)) << to_string(w) << " -> " << to_string(nf);
        ASSERT_EQ(normal_form(Word(nf.letters)), nf);
        ASSERT_TRUE(normal_form(w * inverse(w)).empty());
    }
}

TEST(NormalForm, EqualElementsHaveEqualForms)
{
    std::mt19937_64 rng(7);
    for (int trial = 0; trial < 300; ++trial) {
        Word w = random_word(rng, 12, 4);
        Word g = random_word(rng, 6, 4);
        Word v = g * w * inverse(g) * g * inverse(g);
        ASSERT_EQ(normal_form(g * w * inverse(g)), normal_form(v));
        ASSERT_EQ(normal_form(w), word_from_plmap(word_to_plmap(w)));
    }
}

TEST(TreePair, IdentityAndX0)
{
    TreePair id = tree_pair_from_plmap(PLMap());
    EXPECT_EQ(id.domain.leaves(), 1u);
    EXPECT_EQ(id.range.leaves(), 1u);
    TreePair t = tree_pair_from_plmap(generator_map(0));
    EXPECT_EQ(t.domain.carets(), 2u);
    EXPECT_EQ(t.range.carets(), 2u);
    EXPECT_EQ(t.domain.str(), "(.(..");
    EXPECT_EQ(t.range.str(), "((...");
    EXPECT_EQ(to_string(word_from_tree_pair(t)), "x0");
    EXPECT_EQ(to_string(word_from_plmap(generator_map(1))), "x1");
    EXPECT_EQ(to_string(word_from_plmap(generator_map(3, -1))), "x3^-1");
}

TEST(TreePair, RoundTripsAndReduction)
{
    std::mt19937_64 rng(5);
    for (int trial = 0; trial < 300; ++trial) {
        Word w = random_word(rng, 1 + trial % 30, 5);
        PLMap f = word_to_plmap(w);
        TreePair t = tree_pair_from_plmap(f);
        ASSERT_EQ(plmap_from_tree_pair(t), f);
        ASSERT_EQ(reduce_tree_pair(t), t);
        TreePair e = t;
        for (int k = 0; k < 4; ++k) {
            std::uniform_int_distribution<std::size_t> leaf(0, e.domain.leaves() - 1);
            e = expand(e, leaf(rng));
        }
        ASSERT_EQ(plmap_from_tree_pair(e), f);
        ASSERT_EQ(reduce_tree_pair(e), t);
        ASSERT_EQ(reduce_tree_pair(reduce_tree_pair(e)), t);
        ASSERT_EQ(word_from_tree_pair(t), normal_form(w));
    }
}

TEST(BinaryTree, Validity)
{
    EXPECT_TRUE(BinaryTree::valid({1, 2, 2}));
    EXPECT_FALSE(BinaryTree::valid({1, 2}));
    EXPECT_FALSE(BinaryTree::valid({2, 1, 2}));
    EXPECT_THROW(BinaryTree({1, 1, 1}), std::invalid_argument);
}

TEST(MapPartition, Examples)
{
    EXPECT_TRUE(map_partition({q(0), q(1)}, {q(0), q(1)}).is_identity());
    PLMap g = map_partition({q(0), q(1, 2), q(1)}, {q(0), q(1, 4), q(1)});
    EXPECT_EQ(g(q(1, 2)), q(1, 4));
    EXPECT_TRUE(g.in_F());
    PLMap h = map_partition({q(0), q(1, 4), q(3, 8), q(1)}, {q(0), q(1, 2), q(3, 4), q(1)});
    EXPECT_TRUE(h.in_F());
    EXPECT_EQ(h(q(1, 4)), q(1, 2));
    EXPECT_EQ(h(q(3, 8)), q(3, 4));
    EXPECT_THROW(map_partition({q(0), q(1, 3), q(1)}, {q(0), q(1, 2), q(1)}), std::invalid_argument);
    EXPECT_THROW(map_partition({q(0), q(1, 2), q(1)}, {q(0), q(1), q(1, 2)}), std::invalid_argument);
}

TEST(MapPartition, RandomTuples)
{
    std::mt19937_64 rng(9);
    for (int trial = 0; trial < 200; ++trial) {
        std::set<Rational> a, b;
        int k = 1 + trial % 6;
        while (static_cast<int>(a.size()) < k)
            a.insert(random_dyadic(rng, 10));
        while (static_cast<int>(b.size()) < k)
            b.insert(random_dyadic(rng, 7));
        std::vector<Rational> src{q(0)}, dst{q(0)};
        src.insert(src.end(), a.begin(), a.end());
        dst.insert(dst.end(), b.begin(), b.end());
        src.push_back(q(1));
        dst.push_back(q(1));
        PLMap g = map_partition(src, dst);
        ASSERT_TRUE(g.in_F());
        for (std::size_t i = 0; i < src.size(); ++i)
            ASSERT_EQ(g(src[i]), dst[i]);
    }
}

TEST(Word, ParseErrors)
{
    EXPECT_THROW(parse_word("y0"), std::invalid_argument);
    EXPECT_THROW(parse_word("x"), std::invalid_argument);
    EXPECT_THROW(parse_word("x1^2"), std::invalid_argument);
    EXPECT_TRUE(parse_word("   ").empty());
    EXPECT_EQ(to_string(parse_word("x12^-1  x3")), "x12^-1 x3");
}

TEST(Json, PLMapRoundTrip)
{
    PLMap x0 = generator_map(0);
    json j = plmap_to_json(x0);
    EXPECT_EQ(j.dump(),
              R"({"breakpoints":[[{"exp":0,"num":"0"},{"exp":1,"num":"1"},{"exp":2,"num":"3"},{"exp":0,"num":"1"}],)"
              R"([{"exp":0,"num":"0"},{"exp":2,"num":"1"},{"exp":1,"num":"1"},{"exp":0,"num":"1"}]],)"
              R"("domain":[{"exp":0,"num":"0"},{"exp":0,"num":"1"}]})");
    EXPECT_EQ(plmap_from_json(j), x0);
    EXPECT_EQ(rational_from_json(rational_to_json(q(2, 3))), q(2, 3));
    EXPECT_THROW(plmap_from_json(json::parse(R"({"breakpoints":[[0,1],[1,0]]})")), std::invalid_argument);
}
