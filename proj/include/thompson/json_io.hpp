#pragma once

#include "circle.hpp"
#include "crypto.hpp"
#include "plmap.hpp"
#include "strand.hpp"
#include "tree_pair.hpp"
#include "word.hpp"

#include <json.hpp>

#include <stdexcept>
#include <string>

namespace thompson {

using json = nlohmann::json;

/* dyadics as {"num": "...", "exp": k}; anything else as {"num": "...", "den": "..."} */
inline json rational_to_json(const Rational& q)
{
    if (is_dyadic(q)) {
        Dyadic d(q);
        return json{{"num", d.numerator().get_str()}, {"exp", d.exponent()}};
    }
    return json{{"num", q.get_num().get_str()}, {"den", q.get_den().get_str()}};
}

inline Rational rational_from_json(const json& j)
{
    if (j.is_string())
        return parse_rational(j.get<std::string>());
    if (j.is_number_integer())
        return Rational(j.get<long>());
    if (!j.is_object() || !j.contains("num"))
        throw std::invalid_argument("number must be an object with \"num\"");
    Integer num;
    const json& n = j.at("num");
    if (n.is_string()) {
        if (num.set_str(n.get<std::string>(), 10) != 0)
            throw std::invalid_argument("bad numerator");
    } else {
        num = n.get<long>();
    }
    if (j.contains("exp"))
        return Dyadic(num, j.at("exp").get<long>()).value();
    if (j.contains("den")) {
        Integer den;
        const json& d = j.at("den");
        if (d.is_string()) {
            if (den.set_str(d.get<std::string>(), 10) != 0)
                throw std::invalid_argument("bad denominator");
        } else {
            den = d.get<long>();
        }
        if (den == 0)
            throw std::invalid_argument("zero denominator");
        Rational r(num, den);
        r.canonicalize();
        return r;
    }
    return Rational(num);
}

inline json plmap_to_json(const PLMap& f)
{
    json xs = json::array(), ys = json::array();
    for (std::size_t i = 0; i < f.xs().size(); ++i) {
        xs.push_back(rational_to_json(f.xs()[i]));
        ys.push_back(rational_to_json(f.ys()[i]));
    }
    return json{{"domain", json::array({rational_to_json(f.dom_lo()), rational_to_json(f.dom_hi())})},
                {"breakpoints", json::array({xs, ys})}};
}

inline PLMap plmap_from_json(const json& j)
{
    const json& bp = j.at("breakpoints");
    if (!bp.is_array() || bp.size() != 2)
        throw std::invalid_argument("breakpoints must be [[x...],[y...]]");
    std::vector<Rational> xs, ys;
    for (const auto& v : bp[0])
        xs.push_back(rational_from_json(v));
    for (const auto& v : bp[1])
        ys.push_back(rational_from_json(v));
    PLMap f = PLMap::from_points(std::move(xs), std::move(ys));
    if (j.contains("domain")) {
        const json& d = j.at("domain");
        if (rational_from_json(d.at(0)) != f.dom_lo() || rational_from_json(d.at(1)) != f.dom_hi())
            throw std::invalid_argument("domain does not match breakpoints");
    }
    return f;
}

inline json tree_pair_to_json(const TreePair& t)
{
    return json{{"domain", t.domain.str()}, {"range", t.range.str()}};
}

/* vertices with their type, edges with (tail, port) -> (head, port) */
inline json strand_to_json(const StrandDiagram& d)
{
    auto type_name = [](VType t) {
        return t == VType::Split ? "split" : t == VType::Merge ? "merge" : t == VType::Source ? "source" : "sink";
    };
    json vs = json::array(), es = json::array();
    for (std::size_t i = 0; i < d.v.size(); ++i) {
        if (d.v[i].type == VType::Dead)
            continue;
        json ports = json::array();
        int np = d.v[i].type == VType::Source || d.v[i].type == VType::Sink ? 1 : 3;
        for (int p = 0; p < np; ++p)
            ports.push_back(d.v[i].port[p]);
        vs.push_back(json{{"id", i}, {"type", type_name(d.v[i].type)}, {"ports", ports}});
    }
    for (std::size_t i = 0; i < d.e.size(); ++i) {
        const SEdge& x = d.e[i];
        if (!x.alive)
            continue;
        es.push_back(json{{"id", i}, {"tail", x.tail}, {"tail_port", x.tport}, {"head", x.head},
                          {"head_port", x.hport}, {"seam_crossings", x.rcount}});
    }
    return json{{"annular", d.annular}, {"vertices", vs}, {"edges", es}, {"free_loops", d.free_loops()}};
}

/* a circle map is its lift on [0,1] with "wrap": true */
inline json circle_map_to_json(const CircleMap& f)
{
    json j = plmap_to_json(f.lift());
    j["wrap"] = true;
    return j;
}

inline CircleMap circle_map_from_json(const json& j)
{
    if (!j.contains("wrap") || !j.at("wrap").is_boolean() || !j.at("wrap").get<bool>())
        throw std::invalid_argument("circle map needs \"wrap\": true");
    return CircleMap(plmap_from_json(j));
}

inline json transcript_to_json(const Transcript& t)
{
    return json{{"s", t.s},
                {"variant", t.variant == Variant::ShpilrainUshakov ? "su" : "kolee"},
                {"w", to_string(t.w)},
                {"u1", to_string(t.u1)},
                {"u2", to_string(t.u2)}};
}

inline Transcript transcript_from_json(const json& j)
{
    Transcript t;
    t.s = j.at("s").get<long>();
    std::string v = j.at("variant").get<std::string>();
    if (v == "su")
        t.variant = Variant::ShpilrainUshakov;
    else if (v == "kolee")
        t.variant = Variant::KoLee;
    else
        throw std::invalid_argument("unknown protocol variant " + v);
    t.w = parse_word(j.at("w").get<std::string>());
    t.u1 = parse_word(j.at("u1").get<std::string>());
    t.u2 = parse_word(j.at("u2").get<std::string>());
    return t;
}

} // namespace thompson
