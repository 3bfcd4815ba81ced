#include <thompson/circle.hpp>
#include <thompson/crypto.hpp>
#include <thompson/dynamics.hpp>
#include <thompson/growth.hpp>
#include <thompson/json_io.hpp>
#include <thompson/mather.hpp>
#include <thompson/normal_form.hpp>
#include <thompson/strand.hpp>
#include <thompson/tree_pair.hpp>

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

using namespace thompson;

namespace {

enum Exit { Yes = 0, No = 1, Usage = 2, Internal = 3 };

/* malformed input; reported with exit code 2 */
struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/* a printed witness failed its exact re-check */
struct VerificationError : std::logic_error {
    using std::logic_error::logic_error;
};

bool g_json = false;

Word read_word(const std::string& s)
{
    if (s == "1")
        return Word{};
    try {
        return parse_word(s);
    } catch (const std::invalid_argument& e) {
        throw UsageError(std::string("malformed word: ") + e.what());
    }
}

std::string show(const Word& w) { return w.empty() ? "1" : to_string(w); }

json read_json_file(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        throw UsageError("cannot open " + path);
    try {
        return json::parse(in);
    } catch (const json::exception& e) {
        throw UsageError(path + ": " + e.what());
    }
}

void write_json_file(const std::string& path, const json& j)
{
    std::ofstream out(path);
    if (!out)
        throw UsageError("cannot write " + path);
    out << j.dump(2) << '\n';
}

void emit(const json& j, const std::string& text)
{
    if (g_json)
        std::cout << j.dump(2) << '\n';
    else
        std::cout << text;
}

void check(bool ok, const std::string& what)
{
    if (!ok)
        throw VerificationError("re-verification failed: " + what);
}

std::string describe(const PLMap& f) { return f.str(); }

// nf, eval

int cmd_nf(const std::string& w)
{
    Word in = read_word(w);
    Word nf = normal_form(in);
    check(word_to_plmap(nf) == word_to_plmap(in), "normal form changes the element");
    emit(json{{"input", to_string(in)}, {"normal_form", to_string(nf)}, {"length", nf.size()}}, show(nf) + "\n");
    return Yes;
}

int cmd_eval(const std::string& w, const std::string& at)
{
    Word in = read_word(w);
    PLMap f = word_to_plmap(in);
    if (!at.empty()) {
        Rational t;
        try {
            t = parse_rational(at);
        } catch (const std::invalid_argument& e) {
            throw UsageError(e.what());
        }
        if (t < 0 || t > 1)
            throw UsageError("point outside [0,1]");
        Rational v = f(t);
        check(evaluate(in, t) == v, "letterwise evaluation differs from the composed map");
        emit(json{{"word", to_string(in)}, {"at", rational_to_json(t)}, {"value", rational_to_json(v)}},
             v.get_str() + "\n");
        return Yes;
    }
    std::ostringstream text;
    for (std::size_t i = 0; i < f.xs().size(); ++i)
        text << f.xs()[i].get_str() << " -> " << f.ys()[i].get_str() << '\n';
    emit(json{{"word", to_string(in)}, {"map", plmap_to_json(f)}, {"tree_pair", tree_pair_to_json(tree_pair_from_plmap(f))}},
         text.str());
    return Yes;
}

// conjugacy

/* g with g^-1 y g = z, re-checked on words */
Word verified_conjugator(const Word& y, const Word& z)
{
    auto g = conjugate_pl(word_to_plmap(y), word_to_plmap(z));
    if (!g)
        throw VerificationError("decision was yes but no conjugator was found");
    Word gw = word_from_plmap(*g);
    check(word_equal(inverse(gw) * y * gw, z), "g^-1 y g != z");
    return gw;
}

int cmd_conj(const std::string& s1, const std::string& s2, const std::string& engine)
{
    Word y = read_word(s1), z = read_word(s2);
    PLMap fy = word_to_plmap(y), fz = word_to_plmap(z);
    bool yes = false;
    if (engine == "strand") {
        yes = conjugate_strand(y, z);
    } else if (engine == "stair") {
        yes = conjugate_pl(fy, fz).has_value();
    } else {
        try {
            yes = mather_conjugate(fy, fz);
        } catch (const std::invalid_argument& e) {
            throw UsageError(e.what());
        }
    }
    json j{{"engine", engine}, {"y", to_string(y)}, {"z", to_string(z)}, {"conjugate", yes}};
    std::string text = std::string("conjugate: ") + (yes ? "yes" : "no") + "\n";
    if (yes) {
        Word g = verified_conjugator(y, z);
        j["witness"] = to_string(g);
        j["witness_map"] = plmap_to_json(word_to_plmap(g));
        text += "witness: " + show(g) + "\n";
    }
    emit(j, text);
    return yes ? Yes : No;
}

int cmd_simconj(const std::vector<std::string>& xs, const std::vector<std::string>& ys)
{
    if (xs.size() != ys.size())
        throw UsageError("-x and -y need the same number of words");
    std::vector<Word> xw, yw;
    std::vector<PLMap> xf, yf;
    for (const auto& s : xs) {
        xw.push_back(read_word(s));
        xf.push_back(word_to_plmap(xw.back()));
    }
    for (const auto& s : ys) {
        yw.push_back(read_word(s));
        yf.push_back(word_to_plmap(yw.back()));
    }
    auto g = simultaneous_conjugate(xf, yf);
    json j{{"conjugate", g.has_value()}};
    if (!g) {
        emit(j, "conjugate: no\n");
        return No;
    }
    Word gw = word_from_plmap(*g);
    for (std::size_t i = 0; i < xw.size(); ++i)
        check(word_equal(inverse(gw) * xw[i] * gw, yw[i]), "g^-1 x_" + std::to_string(i + 1) + " g != y_" + std::to_string(i + 1));
    j["witness"] = to_string(gw);
    emit(j, "conjugate: yes\nwitness: " + show(gw) + "\n");
    return Yes;
}

int cmd_root(const std::string& s, long n)
{
    if (n < 1)
        throw UsageError("-n must be positive");
    Word w = read_word(s);
    PLMap f = word_to_plmap(w);
    auto h = nth_root(f, n);
    json j{{"word", to_string(w)}, {"n", n}, {"exists", h.has_value()}};
    if (!h) {
        emit(j, "root: none\n");
        return No;
    }
    Word hw = word_from_plmap(*h);
    check(word_equal(power(hw, n), w), "h^n != f");
    j["root"] = to_string(hw);
    emit(j, "root: " + show(hw) + "\n");
    return Yes;
}

int cmd_centralizer(const std::string& s)
{
    Word w = read_word(s);
    PLMap f = word_to_plmap(w);
    CentralizerDescription c = centralizer(f);
    json parts = json::array();
    std::string text;
    for (const auto& p : c.parts) {
        PLMap fr = f.restrict(p.lo, p.hi);
        check(compose(fr, p.generator) == compose(p.generator, fr), "generator does not commute");
        std::string kind = p.kind == CentralizerKind::Full ? "full" : p.kind == CentralizerKind::Cyclic ? "cyclic" : "trivial";
        json part{{"lo", rational_to_json(p.lo)}, {"hi", rational_to_json(p.hi)}, {"kind", kind}};
        text += "[" + p.lo.get_str() + ", " + p.hi.get_str() + "] " + kind;
        if (p.kind == CentralizerKind::Cyclic) {
            part["generator"] = plmap_to_json(p.generator);
            text += " generated by " + describe(p.generator);
        }
        parts.push_back(part);
        text += "\n";
    }
    emit(json{{"word", to_string(w)}, {"parts", parts}}, text);
    return Yes;
}

// crypto

Variant parse_variant(const std::string& v) { return v == "kolee" ? Variant::KoLee : Variant::ShpilrainUshakov; }

int cmd_crypto_run(long s, long M, std::uint64_t seed, const std::string& variant, bool unrestricted, const std::string& out)
{
    ProtocolParams p;
    p.s = s;
    p.M = M;
    p.seed = seed;
    p.variant = parse_variant(variant);
    p.published_regime = !unrestricted;
    try {
        p.validate();
    } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
    }
    ProtocolRun run = run_protocol(p);
    json t = transcript_to_json(run.transcript);
    if (!out.empty())
        write_json_file(out, t);
    std::string text = "w  = " + show(run.transcript.w) + "\nu1 = " + show(run.transcript.u1) +
                       "\nu2 = " + show(run.transcript.u2) + "\nK  = " + show(run.K) + "\n";
    emit(json{{"transcript", t}, {"key", to_string(run.K)}}, text);
    return Yes;
}

int cmd_crypto_attack(const std::string& path, const std::string& variant)
{
    json j = read_json_file(path);
    if (j.contains("transcript"))
        j = j.at("transcript");
    Transcript t;
    try {
        t = transcript_from_json(j);
    } catch (const std::exception& e) {
        throw UsageError(path + ": " + e.what());
    }
    bool wants_kolee = variant == "kolee";
    if (wants_kolee != (t.variant == Variant::KoLee))
        throw UsageError("--variant " + variant + " does not match the transcript's protocol");
    RecoveredKey r;
    try {
        r = variant == "su" ? attack(t) : variant == "transitivity" ? attack_transitivity(t) : attack_kolee(t);
    } catch (const std::logic_error& e) {
        emit(json{{"recovered", false}, {"reason", e.what()}}, std::string("attack failed: ") + e.what() + "\n");
        return No;
    }
    check(recovered_pair_valid(t, r), "recovered pair does not reproduce the public word");
    std::string party = r.party == Party::Alice ? "alice" : "bob";
    emit(json{{"recovered", true}, {"party", party}, {"a", to_string(r.a)}, {"b", to_string(r.b)}, {"key", to_string(r.K)}},
         "party: " + party + "\nK = " + show(r.K) + "\n");
    return Yes;
}

// growth

int cmd_growth_sphere(long n, const std::string& method)
{
    std::uint64_t v;
    try {
        v = method == "bfs" ? bfs_sphere(n) : sphere_count_recursive(n).back();
    } catch (const std::out_of_range& e) {
        throw UsageError(e.what());
    }
    emit(json{{"n", n}, {"method", method}, {"sphere", v}}, std::to_string(v) + "\n");
    return Yes;
}

int cmd_growth_length(const std::string& s)
{
    Word w = read_word(s);
    long len = length(expand_to_x0x1(w));
    emit(json{{"word", to_string(w)}, {"length", len}}, std::to_string(len) + "\n");
    return Yes;
}

// circle

int cmd_rot(const std::string& path, long q_max)
{
    if (q_max < 1)
        throw UsageError("--qmax must be positive");
    CircleMap f;
    try {
        f = circle_map_from_json(read_json_file(path));
    } catch (const std::invalid_argument& e) {
        throw UsageError(path + ": " + e.what());
    }
    RotationResult r = rotation_number(f, q_max);
    if (r.exact) {
        check(power(f, r.q)(r.point) == r.point + r.p, "periodic point certificate");
        emit(json{{"exact", true},
                  {"rotation", rational_to_json(r.value)},
                  {"certificate", {{"point", rational_to_json(r.point)}, {"p", r.p}, {"q", r.q}}}},
             "rotation number: " + r.value.get_str() + "\ncertificate: L^" + std::to_string(r.q) + "(" + r.point.get_str() +
                 ") = " + r.point.get_str() + " + " + std::to_string(r.p) + "\n");
    } else {
        emit(json{{"exact", false}, {"lo", rational_to_json(r.lo)}, {"hi", rational_to_json(r.hi)}, {"q_max", q_max}},
             "no periodic orbit of period <= " + std::to_string(q_max) + "\ntranslation number in [" + r.lo.get_str() +
                 ", " + r.hi.get_str() + "]\n");
    }
    return Yes;
}

long factorial(long n) { return n <= 1 ? 1 : n * factorial(n - 1); }

int cmd_torsion_build(long n, bool qz, const std::string& out)
{
    if (n < 1 || (qz && n > 6) || (!qz && n > 64))
        throw UsageError(qz ? "-n must lie in 1..6 with --qz" : "-n must lie in 1..64");
    CircleMap f = qz ? qz_generator(n) : construct_torsion(n);
    long order = qz ? factorial(n) : n;
    auto q = is_torsion(f, order);
    check(q && *q == order, "order of the constructed map");
    Rational rot = order == 1 ? Rational(0) : rotation_number(f, order).value;
    check(rot == (order == 1 ? Rational(0) : Rational(1) / order), "rotation number 1/order");
    json m = circle_map_to_json(f);
    if (!out.empty())
        write_json_file(out, m);
    emit(json{{"n", n}, {"order", order}, {"rotation", rational_to_json(rot)}, {"map", m}},
         "order: " + std::to_string(order) + "\nrotation number: " + rot.get_str() + "\nlift: " + describe(f.lift()) + "\n");
    return Yes;
}

// export

int cmd_export(const std::string& s, const std::string& format, bool closed)
{
    Word w = read_word(s);
    StrandDiagram d = closed ? close_and_reduce(strand_from_word(w)) : reduced_strand(w);
    if (format == "dot")
        std::cout << to_dot(d);
    else
        std::cout << strand_to_json(d).dump(2) << '\n';
    return Yes;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Thompson's group F: normal forms, conjugacy, dynamics, growth and circle maps"};
    app.require_subcommand(1);
    app.add_flag("--json", g_json, "Print JSON instead of text");
    app.fallthrough();

    std::string w1, w2, at, engine = "strand", format = "dot", variant = "su", out, path, method = "bfs";
    std::vector<std::string> xs, ys;
    long n = 0, s = 3, M = 256, qmax = 64;
    std::uint64_t seed = 0;
    bool unrestricted = false, qz = false, closed = false;
    int rc = Yes;

    auto* nf = app.add_subcommand("nf", "Normal form of a word");
    nf->add_option("word", w1, "Word such as \"x0 x1^-1\"")->required();
    nf->callback([&] { rc = cmd_nf(w1); });

    auto* ev = app.add_subcommand("eval", "Breakpoints of a word as a map of [0,1]");
    ev->add_option("word", w1)->required();
    ev->add_option("--at", at, "Evaluate at a rational point");
    ev->callback([&] { rc = cmd_eval(w1, at); });

    auto* cj = app.add_subcommand("conj", "Decide conjugacy; prints g with g^-1 y g = z");
    cj->add_option("y", w1)->required();
    cj->add_option("z", w2)->required();
    cj->add_option("--engine", engine)->check(CLI::IsMember({"strand", "stair", "mather"}));
    cj->callback([&] { rc = cmd_conj(w1, w2, engine); });

    auto* sc = app.add_subcommand("simconj", "Simultaneous conjugacy of two tuples");
    sc->add_option("-x", xs, "First tuple")->required();
    sc->add_option("-y", ys, "Second tuple")->required();
    sc->callback([&] { rc = cmd_simconj(xs, ys); });

    auto* rt = app.add_subcommand("root", "An n-th root of a word");
    rt->add_option("word", w1)->required();
    rt->add_option("-n", n)->required();
    rt->callback([&] { rc = cmd_root(w1, n); });

    auto* ce = app.add_subcommand("centralizer", "Centralizer of a word, interval by interval");
    ce->add_option("word", w1)->required();
    ce->callback([&] { rc = cmd_centralizer(w1); });

    auto* cr = app.add_subcommand("crypto", "Key exchange over F and attacks on it");
    cr->require_subcommand(1);
    auto* crun = cr->add_subcommand("run", "Run the protocol and print the transcript");
    crun->add_option("--s", s)->capture_default_str();
    crun->add_option("--M", M)->capture_default_str();
    crun->add_option("--seed", seed)->required();
    crun->add_option("--variant", variant)->check(CLI::IsMember({"su", "kolee"}))->capture_default_str();
    crun->add_flag("--unrestricted", unrestricted, "Allow s and M outside 3..8 and 256..320");
    crun->add_option("--out", out, "Write the transcript JSON to a file");
    crun->callback([&] { rc = cmd_crypto_run(s, M, seed, variant, unrestricted, out); });
    auto* catk = cr->add_subcommand("attack", "Recover the shared key from a transcript");
    catk->add_option("transcript", path)->required()->check(CLI::ExistingFile);
    catk->add_option("--variant", variant)->check(CLI::IsMember({"su", "transitivity", "kolee"}))->capture_default_str();
    catk->callback([&] { rc = cmd_crypto_attack(path, variant); });

    auto* gr = app.add_subcommand("growth", "Word length and sphere sizes for {x0, x1}");
    gr->require_subcommand(1);
    auto* gsp = gr->add_subcommand("sphere", "Number of elements of length exactly n");
    gsp->add_option("-n", n)->required();
    gsp->add_option("--method", method)->check(CLI::IsMember({"bfs", "recurrence"}))->capture_default_str();
    gsp->callback([&] { rc = cmd_growth_sphere(n, method); });
    auto* gln = gr->add_subcommand("length", "Word length with respect to {x0, x1}");
    gln->add_option("word", w1)->required();
    gln->callback([&] { rc = cmd_growth_length(w1); });

    auto* ro = app.add_subcommand("rot", "Rotation number of a PL circle map");
    ro->add_option("map", path, "Circle map JSON")->required()->check(CLI::ExistingFile);
    ro->add_option("--qmax", qmax)->capture_default_str();
    ro->callback([&] { rc = cmd_rot(path, qmax); });

    auto* to = app.add_subcommand("torsion", "Finite-order circle maps");
    to->require_subcommand(1);
    auto* tb = to->add_subcommand("build", "Circle map of order n with rotation number 1/n");
    tb->add_option("-n", n)->required();
    tb->add_flag("--qz", qz, "Build X_n of order n! instead");
    tb->add_option("--out", out, "Write the circle map JSON to a file");
    tb->callback([&] { rc = cmd_torsion_build(n, qz, out); });

    auto* ex = app.add_subcommand("export", "Reduced strand diagram of a word");
    ex->add_option("word", w1)->required();
    ex->add_option("--format", format)->check(CLI::IsMember({"dot", "json"}))->capture_default_str();
    ex->add_flag("--closed", closed, "Close the diagram into an annulus first");
    ex->callback([&] { rc = cmd_export(w1, format, closed); });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? Yes : Usage;
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return Usage;
    } catch (const VerificationError& e) {
        std::cerr << "internal error: " << e.what() << '\n';
        return Internal;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << '\n';
        return Internal;
    }
    return rc;
}
