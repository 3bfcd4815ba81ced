#pragma once

#include "tree_pair.hpp"
#include "word.hpp"

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

namespace thompson {

enum class VType : std::uint8_t { Source, Sink, Split, Merge, Dead };

/*
 * Ports.  split: 0 in, 1 left out, 2 right out.  merge: 0 left in, 1 right in, 2 out.
 * source: 0 out.  sink: 0 in.
 */
struct SVertex {
    VType type = VType::Dead;
    std::int32_t port[3] = {-1, -1, -1};
};

struct SEdge {
    std::int32_t tail = -1, tport = -1, head = -1, hport = -1;
    // seam crossings along the edge, annular diagrams only
    std::int32_t rfirst = -1, rlast = -1, rcount = 0;
    bool alive = false;
};

/* crossing of the seam by an edge or by a free loop */
struct SeamRecord {
    std::int32_t prev = -1, next = -1; // seam order
    std::int32_t along = -1;           // next crossing of the same edge
    std::int32_t loop = -1;
    bool alive = false;
};

struct Crossings {
    std::int32_t first = -1, last = -1, count = 0;
};

class StrandDiagram {
public:
    std::vector<SVertex> v;
    std::vector<SEdge> e;
    std::int32_t source = -1, sink = -1;
    bool annular = false;

    /* seam records form a list ordered from the outer boundary (left) to the inner one */
    std::vector<SeamRecord> recs;
    std::int32_t rec_first = -1;
    std::vector<std::int32_t> loop_rec; // free loop -> record, -1 once absorbed

    std::int32_t add_vertex(VType t)
    {
        v.push_back(SVertex{t, {-1, -1, -1}});
        return static_cast<std::int32_t>(v.size() - 1);
    }

    std::int32_t add_edge(std::int32_t t, std::int32_t tp, std::int32_t h, std::int32_t hp)
    {
        SEdge x;
        x.tail = t;
        x.tport = tp;
        x.head = h;
        x.hport = hp;
        x.alive = true;
        e.push_back(x);
        auto id = static_cast<std::int32_t>(e.size() - 1);
        v[t].port[tp] = id;
        v[h].port[hp] = id;
        return id;
    }

    std::size_t vertex_count() const
    {
        std::size_t n = 0;
        for (auto& x : v)
            if (x.type != VType::Dead)
                ++n;
        return n;
    }

    std::size_t count(VType t) const
    {
        std::size_t n = 0;
        for (auto& x : v)
            if (x.type == t)
                ++n;
        return n;
    }

    std::size_t free_loops() const
    {
        std::size_t n = 0;
        for (auto r : loop_rec)
            if (r >= 0)
                ++n;
        return n;
    }

    /* records in seam order */
    std::vector<std::int32_t> record_order() const
    {
        std::vector<std::int32_t> out;
        for (std::int32_t r = rec_first; r >= 0; r = recs[r].next)
            out.push_back(r);
        return out;
    }

    // record list

    std::int32_t new_record_after(std::int32_t after)
    {
        SeamRecord r;
        r.alive = true;
        recs.push_back(r);
        auto id = static_cast<std::int32_t>(recs.size() - 1);
        if (after < 0) {
            recs[id].next = rec_first;
            if (rec_first >= 0)
                recs[rec_first].prev = id;
            rec_first = id;
        } else {
            std::int32_t n = recs[after].next;
            recs[id].prev = after;
            recs[id].next = n;
            recs[after].next = id;
            if (n >= 0)
                recs[n].prev = id;
        }
        return id;
    }

    bool is_loop_record(std::int32_t r) const { return r >= 0 && recs[r].loop >= 0; }

    void remove_record(std::int32_t r)
    {
        std::int32_t p = recs[r].prev, n = recs[r].next;
        if (p >= 0)
            recs[p].next = n;
        else
            rec_first = n;
        if (n >= 0)
            recs[n].prev = p;
        recs[r].alive = false;
        if (recs[r].loop >= 0)
            loop_rec[recs[r].loop] = -1;
        merge_free_loops(p, n);
    }

    /* two concentric free loops with nothing between them become one */
    void merge_free_loops(std::int32_t p, std::int32_t n)
    {
        if (is_loop_record(p) && is_loop_record(n))
            remove_record(n);
    }

    Crossings take(std::int32_t x)
    {
        Crossings c{e[x].rfirst, e[x].rlast, e[x].rcount};
        e[x].rfirst = e[x].rlast = -1;
        e[x].rcount = 0;
        return c;
    }

    void give(std::int32_t x, const Crossings& c)
    {
        e[x].rfirst = c.first;
        e[x].rlast = c.last;
        e[x].rcount = c.count;
    }

    void append(Crossings& a, const Crossings& b)
    {
        if (b.count == 0)
            return;
        if (a.count == 0) {
            a = b;
            return;
        }
        recs[a.last].along = b.first;
        a.last = b.last;
        a.count += b.count;
    }

    std::vector<std::int32_t> crossings_of(std::int32_t x) const
    {
        std::vector<std::int32_t> out;
        for (std::int32_t r = e[x].rfirst; r >= 0 && static_cast<std::int32_t>(out.size()) < e[x].rcount;
             r = recs[r].along)
            out.push_back(r);
        return out;
    }

    /* owning edge of every record, -1 for free loops */
    std::vector<std::int32_t> record_owners() const
    {
        std::vector<std::int32_t> own(recs.size(), -1);
        for (std::size_t i = 0; i < e.size(); ++i)
            if (e[i].alive)
                for (auto r : crossings_of(static_cast<std::int32_t>(i)))
                    own[r] = static_cast<std::int32_t>(i);
        return own;
    }

    std::int32_t make_free_loop(std::int32_t r)
    {
        loop_rec.push_back(r);
        auto id = static_cast<std::int32_t>(loop_rec.size() - 1);
        recs[r].loop = id;
        recs[r].along = -1;
        if (is_loop_record(recs[r].prev))
            remove_record(r);
        else if (is_loop_record(recs[r].next))
            remove_record(r);
        return id;
    }
};

class StrandReducer {
public:
    explicit StrandReducer(StrandDiagram& d, std::mt19937_64* rng = nullptr) : d_(d), rng_(rng)
    {
        queued_.assign(d_.v.size(), 0);
    }

    void push(std::int32_t x)
    {
        if (x < 0 || d_.v[x].type == VType::Dead)
            return;
        if (static_cast<std::size_t>(x) >= queued_.size())
            queued_.resize(d_.v.size(), 0);
        if (!queued_[x]) {
            queued_[x] = 1;
            work_.push_back(x);
        }
    }

    void push_all()
    {
        for (std::size_t i = 0; i < d_.v.size(); ++i)
            if (d_.v[i].type == VType::Split || d_.v[i].type == VType::Merge)
                push(static_cast<std::int32_t>(i));
    }

    std::size_t run()
    {
        std::size_t moves = 0;
        while (!work_.empty()) {
            std::int32_t x;
            if (rng_) {
                std::uniform_int_distribution<std::size_t> pick(0, work_.size() - 1);
                std::size_t i = pick(*rng_);
                x = work_[i];
                work_[i] = work_.back();
                work_.pop_back();
            } else {
                x = work_.back();
                work_.pop_back();
            }
            queued_[x] = 0;
            if (try_reduce(x))
                ++moves;
        }
        return moves;
    }

    /* a reduction at x, if one applies */
    bool try_reduce(std::int32_t x)
    {
        const SVertex& vx = d_.v[x];
        if (vx.type == VType::Split) {
            std::int32_t m = find_type1_from_split(x);
            if (m >= 0) {
                type1(x, m);
                return true;
            }
            const SEdge& in = d_.e[vx.port[0]];
            if (d_.v[in.tail].type == VType::Merge && in.tport == 2) {
                type2(in.tail, x);
                return true;
            }
        } else if (vx.type == VType::Merge) {
            const SEdge& a = d_.e[vx.port[0]];
            const SEdge& b = d_.e[vx.port[1]];
            if (a.tail == b.tail && d_.v[a.tail].type == VType::Split && a.tport == 1 && b.tport == 2) {
                type1(a.tail, x);
                return true;
            }
            const SEdge& out = d_.e[vx.port[2]];
            if (d_.v[out.head].type == VType::Split && out.hport == 0) {
                type2(x, out.head);
                return true;
            }
        }
        return false;
    }

    bool applicable(std::int32_t x)
    {
        const SVertex& vx = d_.v[x];
        if (vx.type == VType::Split) {
            if (find_type1_from_split(x) >= 0)
                return true;
            const SEdge& in = d_.e[vx.port[0]];
            return d_.v[in.tail].type == VType::Merge && in.tport == 2;
        }
        return false;
    }

    struct Link {
        std::int32_t from, to; // from's head and to's tail are being deleted
        Crossings junction; // crossings at the junction
    };

    /* join edges through deleted vertices; cycles become free loops */
    void splice(std::vector<Link> links)
    {
        std::vector<bool> used(links.size(), false);
        auto link_from = [&](std::int32_t x) -> int {
            for (std::size_t i = 0; i < links.size(); ++i)
                if (!used[i] && links[i].from == x)
                    return static_cast<int>(i);
            return -1;
        };
        auto is_target = [&](std::int32_t x) {
            for (std::size_t i = 0; i < links.size(); ++i)
                if (!used[i] && links[i].to == x)
                    return true;
            return false;
        };
        while (true) {
            int start = -1;
            for (std::size_t i = 0; i < links.size(); ++i)
                if (!used[i] && !is_target(links[i].from)) {
                    start = static_cast<int>(i);
                    break;
                }
            bool cycle = false;
            if (start < 0) {
                for (std::size_t i = 0; i < links.size(); ++i)
                    if (!used[i]) {
                        start = static_cast<int>(i);
                        cycle = true;
                        break;
                    }
            }
            if (start < 0)
                break;
            std::int32_t first = links[start].from;
            std::vector<std::int32_t> chain{first};
            Crossings records = d_.take(first);
            int li = start;
            while (li >= 0) {
                used[li] = true;
                d_.append(records, links[li].junction);
                std::int32_t nx = links[li].to;
                if (nx == first)
                    break;
                chain.push_back(nx);
                d_.append(records, d_.take(nx));
                li = link_from(nx);
            }
            if (cycle) {
                for (auto x : chain)
                    kill_edge(x);
                if (records.count != 1)
                    throw std::logic_error("free loop with " + std::to_string(records.count) + " seam crossings");
                d_.make_free_loop(records.first);
                continue;
            }
            std::int32_t last = chain.back();
            SEdge& f = d_.e[first];
            f.head = d_.e[last].head;
            f.hport = d_.e[last].hport;
            for (std::size_t i = 1; i < chain.size(); ++i)
                kill_edge(chain[i]);
            d_.v[f.head].port[f.hport] = first;
            d_.give(first, records);
            push(f.tail);
            push(f.head);
        }
    }

private:
    std::int32_t find_type1_from_split(std::int32_t s)
    {
        const SVertex& vs = d_.v[s];
        const SEdge& l = d_.e[vs.port[1]];
        const SEdge& r = d_.e[vs.port[2]];
        if (l.head == r.head && d_.v[l.head].type == VType::Merge && l.hport == 0 && r.hport == 1)
            return l.head;
        return -1;
    }

    void kill_edge(std::int32_t x)
    {
        d_.e[x].alive = false;
    }

    void kill_vertex(std::int32_t x) { d_.v[x].type = VType::Dead; }

    void type1(std::int32_t s, std::int32_t m)
    {
        std::int32_t in = d_.v[s].port[0], l = d_.v[s].port[1], r = d_.v[s].port[2], out = d_.v[m].port[2];
        if (d_.e[l].rcount != d_.e[r].rcount)
            throw std::logic_error("type I move across the seam");
        auto rr = d_.crossings_of(r);
        d_.take(r);
        for (auto x : rr)
            d_.remove_record(x);
        Crossings junction = d_.take(l);
        kill_edge(l);
        kill_edge(r);
        kill_vertex(s);
        kill_vertex(m);
        splice({Link{in, out, junction}});
    }

    void type2(std::int32_t m, std::int32_t s)
    {
        std::int32_t a = d_.v[m].port[0], b = d_.v[m].port[1], ed = d_.v[m].port[2];
        std::int32_t c = d_.v[s].port[1], dd = d_.v[s].port[2];
        Crossings j2;
        for (auto x : d_.crossings_of(ed)) {
            std::int32_t y = d_.new_record_after(x);
            d_.append(j2, Crossings{y, y, 1});
        }
        Crossings j1 = d_.take(ed);
        kill_edge(ed);
        kill_vertex(m);
        kill_vertex(s);
        splice({Link{a, c, j1}, Link{b, dd, j2}});
    }

    StrandDiagram& d_;
    std::mt19937_64* rng_;
    std::vector<std::int32_t> work_;
    std::vector<char> queued_;
};

// construction

namespace detail {

/* Append the diagram of t below the open tail endpoint (tv, tp); returns the new open endpoint. */
inline std::pair<std::int32_t, std::int32_t> append_tree_pair(StrandDiagram& d, const TreePair& t, std::int32_t tv,
                                                              std::int32_t tp)
{
    const auto& dom = t.domain.depths();
    const auto& rng = t.range.depths();
    if (dom.size() != rng.size())
        throw std::invalid_argument("tree pair with different leaf counts");
    if (dom.size() == 1)
        return {tv, tp};
    // range tree: merges, root output left open
    struct Slot {
        int depth;
        std::int32_t vert, port;
    };
    std::vector<std::pair<std::int32_t, std::int32_t>> leaf_head(rng.size());
    std::int32_t root = d.add_vertex(VType::Merge);
    {
        std::vector<Slot> open{{1, root, 1}, {1, root, 0}};
        for (std::size_t i = 0; i < rng.size(); ++i) {
            Slot s = open.back();
            open.pop_back();
            while (s.depth < rng[i]) {
                std::int32_t mg = d.add_vertex(VType::Merge);
                d.add_edge(mg, 2, s.vert, s.port);
                open.push_back({s.depth + 1, mg, 1});
                s = {s.depth + 1, mg, 0};
            }
            leaf_head[i] = {s.vert, s.port};
        }
    }
    // domain tree: splits from the open endpoint
    {
        std::int32_t sp = d.add_vertex(VType::Split);
        d.add_edge(tv, tp, sp, 0);
        std::vector<Slot> open{{1, sp, 2}, {1, sp, 1}};
        for (std::size_t i = 0; i < dom.size(); ++i) {
            Slot s = open.back();
            open.pop_back();
            while (s.depth < dom[i]) {
                std::int32_t x = d.add_vertex(VType::Split);
                d.add_edge(s.vert, s.port, x, 0);
                open.push_back({s.depth + 1, x, 2});
                s = {s.depth + 1, x, 1};
            }
            d.add_edge(s.vert, s.port, leaf_head[i].first, leaf_head[i].second);
        }
    }
    return {root, 2};
}

inline const TreePair& generator_tree_pair(std::int64_t k)
{
    static std::vector<TreePair> cache;
    while (static_cast<std::int64_t>(cache.size()) <= k) {
        int n = static_cast<int>(cache.size());
        std::vector<int> dom, rng;
        for (int i = 1; i <= n; ++i) {
            dom.push_back(i);
            rng.push_back(i);
        }
        dom.insert(dom.end(), {n + 1, n + 2, n + 2});
        rng.insert(rng.end(), {n + 2, n + 2, n + 1});
        cache.push_back(TreePair{BinaryTree(dom), BinaryTree(rng)});
    }
    return cache[static_cast<std::size_t>(k)];
}

} // namespace detail

inline StrandDiagram strand_from_tree_pair(const TreePair& t)
{
    StrandDiagram d;
    d.source = d.add_vertex(VType::Source);
    d.sink = d.add_vertex(VType::Sink);
    auto [ov, op] = detail::append_tree_pair(d, t, d.source, 0);
    d.add_edge(ov, op, d.sink, 0);
    return d;
}

/* unreduced diagram of a word: the last letter on top */
inline StrandDiagram strand_from_word(const Word& w)
{
    StrandDiagram d;
    d.source = d.add_vertex(VType::Source);
    d.sink = d.add_vertex(VType::Sink);
    std::int32_t ov = d.source, op = 0;
    for (auto it = w.letters.rbegin(); it != w.letters.rend(); ++it) {
        const TreePair& g = detail::generator_tree_pair(it->index);
        auto r = detail::append_tree_pair(d, it->sign > 0 ? g : inverse(g), ov, op);
        ov = r.first;
        op = r.second;
    }
    d.add_edge(ov, op, d.sink, 0);
    return d;
}

/* drop dead vertices and edges */
inline StrandDiagram compact(const StrandDiagram& d)
{
    StrandDiagram out;
    out.annular = d.annular;
    std::vector<std::int32_t> vmap(d.v.size(), -1), emap(d.e.size(), -1);
    for (std::size_t i = 0; i < d.v.size(); ++i)
        if (d.v[i].type != VType::Dead)
            vmap[i] = out.add_vertex(d.v[i].type);
    for (std::size_t i = 0; i < d.e.size(); ++i)
        if (d.e[i].alive) {
            const SEdge& x = d.e[i];
            emap[i] = out.add_edge(vmap[x.tail], x.tport, vmap[x.head], x.hport);
        }
    out.source = d.source >= 0 ? vmap[d.source] : -1;
    out.sink = d.sink >= 0 ? vmap[d.sink] : -1;
    std::vector<std::int32_t> rmap(d.recs.size(), -1);
    std::int32_t prev = -1;
    for (std::int32_t r : d.record_order()) {
        std::int32_t nr = out.new_record_after(prev);
        rmap[r] = nr;
        prev = nr;
        if (d.recs[r].loop >= 0) {
            out.loop_rec.push_back(nr);
            out.recs[nr].loop = static_cast<std::int32_t>(out.loop_rec.size() - 1);
        }
    }
    for (std::size_t i = 0; i < d.e.size(); ++i)
        if (d.e[i].alive) {
            Crossings c;
            for (auto r : d.crossings_of(static_cast<std::int32_t>(i)))
                out.append(c, Crossings{rmap[r], rmap[r], 1});
            out.give(emap[i], c);
        }
    return out;
}

inline StrandDiagram reduce_strand(StrandDiagram d, std::mt19937_64* rng = nullptr)
{
    StrandReducer r(d, rng);
    r.push_all();
    r.run();
    return compact(d);
}

inline bool is_reduced(StrandDiagram d)
{
    StrandReducer r(d);
    for (std::size_t i = 0; i < d.v.size(); ++i)
        if (d.v[i].type == VType::Split && r.applicable(static_cast<std::int32_t>(i)))
            return false;
    return true;
}

/* the diagram of a·b: b stacked on top of a */
inline StrandDiagram concatenate(const StrandDiagram& a, const StrandDiagram& b)
{
    if (a.annular || b.annular)
        throw std::invalid_argument("concatenate needs (1,1) diagrams");
    StrandDiagram d = b;
    auto voff = static_cast<std::int32_t>(d.v.size());
    auto eoff = static_cast<std::int32_t>(d.e.size());
    for (const auto& x : a.v) {
        SVertex y = x;
        for (auto& p : y.port)
            if (p >= 0)
                p += eoff;
        d.v.push_back(y);
    }
    for (const auto& x : a.e) {
        SEdge y = x;
        y.tail += voff;
        y.head += voff;
        d.e.push_back(y);
    }
    std::int32_t bsink = d.sink, asource = a.source + voff;
    std::int32_t x = d.v[bsink].port[0], y = d.v[asource].port[0];
    d.v[bsink].type = VType::Dead;
    d.v[asource].type = VType::Dead;
    d.sink = a.sink + voff;
    StrandReducer r(d);
    r.splice({StrandReducer::Link{x, y, Crossings{}}});
    return compact(d);
}

/* upside-down diagram */
inline StrandDiagram inverse(const StrandDiagram& d)
{
    if (d.annular)
        throw std::invalid_argument("inverse needs a (1,1) diagram");
    StrandDiagram r;
    r.v.resize(d.v.size());
    r.e.resize(d.e.size());
    static const int split_to_merge[3] = {2, 0, 1};
    static const int merge_to_split[3] = {1, 2, 0};
    auto port_map = [&](VType t, int p) {
        if (t == VType::Split)
            return split_to_merge[p];
        if (t == VType::Merge)
            return merge_to_split[p];
        return p;
    };
    for (std::size_t i = 0; i < d.v.size(); ++i) {
        VType t = d.v[i].type;
        VType nt = t == VType::Split ? VType::Merge
                   : t == VType::Merge ? VType::Split
                   : t == VType::Source ? VType::Sink
                   : t == VType::Sink ? VType::Source
                                       : VType::Dead;
        r.v[i].type = nt;
        for (int p = 0; p < 3; ++p)
            if (d.v[i].port[p] >= 0)
                r.v[i].port[port_map(t, p)] = d.v[i].port[p];
    }
    for (std::size_t i = 0; i < d.e.size(); ++i) {
        const SEdge& x = d.e[i];
        SEdge y;
        y.alive = x.alive;
        if (x.alive) {
            y.tail = x.head;
            y.tport = port_map(d.v[x.head].type, x.hport);
            y.head = x.tail;
            y.hport = port_map(d.v[x.tail].type, x.tport);
        }
        r.e[i] = y;
    }
    r.source = d.sink;
    r.sink = d.source;
    return r;
}

/* structural code of a (1,1) diagram, numbering vertices in breadth-first order from the source */
inline std::vector<std::int64_t> encode(const StrandDiagram& d)
{
    std::vector<std::int32_t> id(d.v.size(), -1);
    std::vector<std::int32_t> order{d.source};
    id[d.source] = 0;
    for (std::size_t i = 0; i < order.size(); ++i) {
        const SVertex& x = d.v[order[i]];
        for (int p = 0; p < 3; ++p) {
            std::int32_t ed = x.port[p];
            if (ed < 0)
                continue;
            std::int32_t w = d.e[ed].tail == order[i] && d.e[ed].tport == p ? d.e[ed].head : d.e[ed].tail;
            if (id[w] < 0) {
                id[w] = static_cast<std::int32_t>(order.size());
                order.push_back(w);
            }
        }
    }
    std::vector<std::int64_t> code{static_cast<std::int64_t>(order.size())};
    for (auto x : order) {
        code.push_back(static_cast<std::int64_t>(d.v[x].type));
        for (int p = 0; p < 3; ++p) {
            std::int32_t ed = d.v[x].port[p];
            if (ed < 0) {
                code.push_back(-1);
                continue;
            }
            const SEdge& y = d.e[ed];
            bool out = y.tail == x && y.tport == p;
            code.push_back(id[out ? y.head : y.tail] * 4 + (out ? y.hport : y.tport));
        }
    }
    return code;
}

inline StrandDiagram reduced_strand(const Word& w) { return reduce_strand(strand_from_word(w)); }

struct NeedMoreBits {};

/* Run a signal through a (1,1) diagram.  Returns nullopt when a split finds no bit left. */
inline std::optional<std::string> evaluate_bits(const StrandDiagram& d, const std::string& prefix)
{
    std::string bits(prefix.rbegin(), prefix.rend()); // back is the first bit
    std::int32_t ed = d.v[d.source].port[0];
    while (true) {
        const SEdge& x = d.e[ed];
        const SVertex& h = d.v[x.head];
        if (h.type == VType::Sink)
            break;
        if (h.type == VType::Split) {
            if (bits.empty())
                return std::nullopt;
            char b = bits.back();
            bits.pop_back();
            ed = h.port[b == '0' ? 1 : 2];
        } else {
            bits.push_back(x.hport == 0 ? '0' : '1');
            ed = h.port[2];
        }
    }
    return std::string(bits.rbegin(), bits.rend());
}

// annular diagrams

/* identify top and bottom, delete the glued vertex and reduce with Types I, II and III */
inline StrandDiagram close_and_reduce(const StrandDiagram& in, std::mt19937_64* rng = nullptr)
{
    if (in.annular)
        throw std::invalid_argument("close_and_reduce needs a (1,1) diagram");
    StrandDiagram d = in;
    {
        StrandReducer r(d, rng);
        r.push_all();
        r.run();
    }
    std::int32_t x = d.v[d.sink].port[0], y = d.v[d.source].port[0];
    d.v[d.sink].type = VType::Dead;
    d.v[d.source].type = VType::Dead;
    d.source = d.sink = -1;
    d.annular = true;
    std::int32_t r0 = d.new_record_after(-1);
    StrandReducer r(d, rng);
    r.splice({StrandReducer::Link{x, y, Crossings{r0, r0, 1}}});
    r.run();
    return compact(d);
}

struct CanonicalForm {
    std::vector<std::vector<std::int64_t>> components; // outermost first; a free loop is {-1}

    friend bool operator==(const CanonicalForm& a, const CanonicalForm& b) { return a.components == b.components; }
    friend bool operator!=(const CanonicalForm& a, const CanonicalForm& b) { return !(a == b); }
};

namespace detail {

inline std::uint64_t mix(std::uint64_t h, std::uint64_t x)
{
    h ^= x + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
    h *= 0xff51afd7ed558ccdULL;
    return h ^ (h >> 33);
}

inline std::int32_t other_end(const StrandDiagram& d, std::int32_t x, int p, int* other_port)
{
    const SEdge& y = d.e[d.v[x].port[p]];
    bool out = y.tail == x && y.tport == p;
    if (other_port)
        *other_port = out ? y.hport : y.tport;
    return out ? y.head : y.tail;
}

/* breadth-first code from a start vertex, with the seam cochain gauge-fixed along the search tree */
inline std::vector<std::int64_t> component_code(const StrandDiagram& d, const std::vector<std::int32_t>& comp,
                                                std::int32_t start, std::vector<std::int32_t>& id,
                                                std::vector<std::int64_t>& phi)
{
    for (auto x : comp)
        id[x] = -1;
    std::vector<std::int32_t> order{start};
    id[start] = 0;
    phi[start] = 0;
    for (std::size_t i = 0; i < order.size(); ++i) {
        std::int32_t x = order[i];
        for (int p = 0; p < 3; ++p) {
            const SEdge& y = d.e[d.v[x].port[p]];
            bool out = y.tail == x && y.tport == p;
            std::int32_t w = out ? y.head : y.tail;
            if (id[w] < 0) {
                id[w] = static_cast<std::int32_t>(order.size());
                order.push_back(w);
                std::int64_t c = y.rcount;
                phi[w] = out ? phi[x] + c : phi[x] - c;
            }
        }
    }
    std::vector<std::int64_t> code;
    code.reserve(order.size() * 7 + 1);
    code.push_back(static_cast<std::int64_t>(order.size()));
    for (auto x : order) {
        code.push_back(static_cast<std::int64_t>(d.v[x].type));
        for (int p = 0; p < 3; ++p) {
            const SEdge& y = d.e[d.v[x].port[p]];
            bool out = y.tail == x && y.tport == p;
            std::int32_t w = out ? y.head : y.tail;
            code.push_back(static_cast<std::int64_t>(id[w]) * 4 + (out ? y.hport : y.tport));
            std::int64_t c = y.rcount + phi[y.tail] - phi[y.head];
            code.push_back(c);
        }
    }
    return code;
}

} // namespace detail

inline CanonicalForm canonical_form(const StrandDiagram& d)
{
    if (!d.annular)
        throw std::invalid_argument("canonical_form needs an annular diagram");
    std::size_t n = d.v.size();
    // connected components
    std::vector<std::int32_t> comp_of(n, -1);
    std::vector<std::vector<std::int32_t>> comps;
    for (std::size_t s = 0; s < n; ++s) {
        if (d.v[s].type == VType::Dead || comp_of[s] >= 0)
            continue;
        auto c = static_cast<std::int32_t>(comps.size());
        comps.emplace_back();
        std::vector<std::int32_t> stack{static_cast<std::int32_t>(s)};
        comp_of[s] = c;
        while (!stack.empty()) {
            std::int32_t x = stack.back();
            stack.pop_back();
            comps[c].push_back(x);
            for (int p = 0; p < 3; ++p) {
                std::int32_t w = detail::other_end(d, x, p, nullptr);
                if (comp_of[w] < 0) {
                    comp_of[w] = c;
                    stack.push_back(w);
                }
            }
        }
    }
    // radial order from the outermost record of each component
    std::vector<std::pair<std::int32_t, std::int32_t>> items; // (kind, index): 0 component, 1 free loop
    std::vector<bool> seen(comps.size(), false);
    auto owner = d.record_owners();
    for (std::int32_t r : d.record_order()) {
        if (d.recs[r].loop >= 0) {
            items.push_back({1, d.recs[r].loop});
            continue;
        }
        std::int32_t c = comp_of[d.e[owner[r]].tail];
        if (!seen[c]) {
            seen[c] = true;
            items.push_back({0, c});
        }
    }
    for (std::size_t c = 0; c < comps.size(); ++c)
        if (!seen[c])
            throw std::logic_error("component without seam crossing");

    CanonicalForm cf;
    std::vector<std::uint64_t> col(n, 0), nxt(n, 0);
    std::vector<std::int32_t> id(n, -1);
    std::vector<std::int64_t> phi(n, 0);
    for (auto [kind, idx] : items) {
        if (kind == 1) {
            cf.components.push_back({-1});
            continue;
        }
        const auto& comp = comps[idx];
        for (auto x : comp)
            col[x] = static_cast<std::uint64_t>(d.v[x].type) + 1;
        std::size_t classes = 0;
        for (int round = 0; round < 32; ++round) {
            for (auto x : comp) {
                std::uint64_t h = col[x];
                for (int p = 0; p < 3; ++p) {
                    int op;
                    std::int32_t w = detail::other_end(d, x, p, &op);
                    h = detail::mix(h, col[w] * 4 + static_cast<std::uint64_t>(op));
                }
                nxt[x] = h;
            }
            std::unordered_map<std::uint64_t, int> cnt;
            for (auto x : comp) {
                col[x] = nxt[x];
                cnt[col[x]]++;
            }
            if (cnt.size() == classes || cnt.size() == comp.size())
                break;
            classes = cnt.size();
        }
        std::map<std::uint64_t, std::size_t> sizes;
        for (auto x : comp)
            sizes[col[x]]++;
        std::uint64_t best_col = 0;
        std::size_t best_size = SIZE_MAX;
        for (auto& [c, s] : sizes)
            if (s < best_size || (s == best_size && c < best_col)) {
                best_size = s;
                best_col = c;
            }
        std::vector<std::int64_t> best;
        for (auto x : comp) {
            if (col[x] != best_col)
                continue;
            auto code = detail::component_code(d, comp, x, id, phi);
            if (best.empty() || code < best)
                best = std::move(code);
        }
        cf.components.push_back(std::move(best));
    }
    return cf;
}

inline CanonicalForm conjugacy_invariant(const Word& w) { return canonical_form(close_and_reduce(strand_from_word(w))); }

inline bool conjugate_strand(const Word& u, const Word& v) { return conjugacy_invariant(u) == conjugacy_invariant(v); }

// dynamics readout

enum class LoopKind { Interval, Attractor, Repeller };

struct LoopReport {
    LoopKind kind;
    long slope_exp = 0; // slope is 2^slope_exp
    std::string tail;   // bits of the periodic tail of the fixed point
};

inline std::vector<LoopReport> fixed_point_report(const StrandDiagram& d)
{
    if (!d.annular)
        throw std::invalid_argument("fixed_point_report needs an annular diagram");
    if (!is_reduced(d))
        throw std::invalid_argument("fixed_point_report needs a reduced diagram");
    std::vector<std::int32_t> pos(d.recs.size(), -1);
    {
        std::int32_t k = 0;
        for (std::int32_t r : d.record_order())
            pos[r] = k++;
    }
    std::vector<std::pair<std::int32_t, LoopReport>> found;
    for (std::int32_t r : d.record_order())
        if (d.recs[r].loop >= 0)
            found.push_back({pos[r], LoopReport{LoopKind::Interval, 0, ""}});

    std::size_t n = d.v.size();
    std::vector<char> state(n, 0);
    // merge loops: follow the output of each merge
    for (std::size_t s = 0; s < n; ++s) {
        if (d.v[s].type != VType::Merge || state[s])
            continue;
        std::vector<std::int32_t> path;
        std::int32_t x = static_cast<std::int32_t>(s);
        while (d.v[x].type == VType::Merge && state[x] == 0) {
            state[x] = 1;
            path.push_back(x);
            const SEdge& out = d.e[d.v[x].port[2]];
            x = out.head;
        }
        if (d.v[x].type == VType::Merge && state[x] == 1) {
            // cycle starting at x
            std::vector<std::int32_t> cyc;
            auto it = std::find(path.begin(), path.end(), x);
            cyc.assign(it, path.end());
            // loop edges: out edge of each cycle vertex; find the one crossing the seam
            std::size_t k0 = cyc.size();
            std::int32_t total = 0;
            for (std::size_t i = 0; i < cyc.size(); ++i) {
                total += d.e[d.v[cyc[i]].port[2]].rcount;
                if (d.e[d.v[cyc[i]].port[2]].rcount > 0)
                    k0 = i;
            }
            if (total != 1)
                throw std::logic_error("merge loop does not wind once");
            std::string bits;
            std::int32_t rec = d.e[d.v[cyc[k0]].port[2]].rfirst;
            for (std::size_t i = 1; i <= cyc.size(); ++i) {
                std::int32_t ed = d.v[cyc[(k0 + i - 1) % cyc.size()]].port[2];
                bits.push_back(d.e[ed].hport == 0 ? '0' : '1');
            }
            std::reverse(bits.begin(), bits.end());
            found.push_back({pos[rec], LoopReport{LoopKind::Attractor, -static_cast<long>(cyc.size()), bits}});
        }
        for (auto y : path)
            state[y] = 2;
    }
    // split loops: follow the input of each split backwards
    std::fill(state.begin(), state.end(), 0);
    for (std::size_t s = 0; s < n; ++s) {
        if (d.v[s].type != VType::Split || state[s])
            continue;
        std::vector<std::int32_t> path;
        std::int32_t x = static_cast<std::int32_t>(s);
        while (d.v[x].type == VType::Split && state[x] == 0) {
            state[x] = 1;
            path.push_back(x);
            x = d.e[d.v[x].port[0]].tail;
        }
        if (d.v[x].type == VType::Split && state[x] == 1) {
            std::vector<std::int32_t> cyc;
            auto it = std::find(path.begin(), path.end(), x);
            cyc.assign(it, path.end());
            std::reverse(cyc.begin(), cyc.end()); // forward direction
            std::size_t k0 = cyc.size();
            std::int32_t total = 0;
            for (std::size_t i = 0; i < cyc.size(); ++i) {
                total += d.e[d.v[cyc[i]].port[0]].rcount;
                if (d.e[d.v[cyc[i]].port[0]].rcount > 0)
                    k0 = i;
            }
            if (total != 1)
                throw std::logic_error("split loop does not wind once");
            std::int32_t rec = d.e[d.v[cyc[k0]].port[0]].rfirst;
            std::string bits;
            for (std::size_t i = 0; i < cyc.size(); ++i) {
                const SEdge& in = d.e[d.v[cyc[(k0 + i) % cyc.size()]].port[0]];
                bits.push_back(in.tport == 1 ? '0' : '1');
            }
            found.push_back({pos[rec], LoopReport{LoopKind::Repeller, static_cast<long>(cyc.size()), bits}});
        }
        for (auto y : path)
            state[y] = 2;
    }
    std::sort(found.begin(), found.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
    std::vector<LoopReport> out;
    for (auto& f : found)
        out.push_back(f.second);
    return out;
}

// export

inline std::string to_dot(const StrandDiagram& d)
{
    std::string s = "digraph strand {\n  node [shape=point];\n";
    for (std::size_t i = 0; i < d.v.size(); ++i) {
        VType t = d.v[i].type;
        if (t == VType::Dead)
            continue;
        const char* label = t == VType::Split ? "split" : t == VType::Merge ? "merge" : t == VType::Source ? "source" : "sink";
        s += "  v" + std::to_string(i) + " [xlabel=\"" + label + "\"];\n";
    }
    auto port_name = [](VType t, int p, bool out) -> std::string {
        if (t == VType::Split)
            return p == 0 ? "n" : p == 1 ? "sw" : "se";
        if (t == VType::Merge)
            return p == 2 ? "s" : p == 0 ? "nw" : "ne";
        return out ? "s" : "n";
    };
    for (const auto& x : d.e) {
        if (!x.alive)
            continue;
        s += "  v" + std::to_string(x.tail) + ":" + port_name(d.v[x.tail].type, x.tport, true) + " -> v" +
             std::to_string(x.head) + ":" + port_name(d.v[x.head].type, x.hport, false);
        if (x.rcount > 0)
            s += " [style=bold]";
        s += ";\n";
    }
    for (std::size_t i = 0; i < d.free_loops(); ++i)
        s += "  loop" + std::to_string(i) + " [shape=circle, label=\"\"];\n";
    return s + "}\n";
}

} // namespace thompson
