// billiard: command-line front end for the polygonal billiard engine.
//
// Exit codes: 0 success, 2 usage / malformed input, 3 polygon file error,
// 4 numeric or domain failure.

#include <CLI11.hpp>
#include <json.hpp>

#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "billiard/billiard.hpp"

using nlohmann::json;
using namespace billiard;

namespace {

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct FileError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Options {
    std::string backend = "exact";
    double tol = 1e-9;
    long seed = 12345;
    std::string json_path, svg_path;

    std::string polygon_path;
    std::string pos, dir;
    std::size_t links = 100, copies = 4, max_links = 4, max_word = 8;
    std::size_t side = 0, samples = 100, grid = 10, budget = 1000000, k = 1;
    double eps = 0.3, theta = 1.0, delta = 0.05, window_delta = -1;
    bool surface = false;
    std::string command;
};

// ---------------------------------------------------------------------------
// input parsing

template <class S>
Point<S> parse_position(const std::string& text) {
    auto comma = text.find(',');
    if (comma == std::string::npos || comma == 0 || comma + 1 == text.size())
        throw UsageError("position must be \"x,y\": " + text);
    try {
        return {parse_scalar<S>(text.substr(0, comma)),
                parse_scalar<S>(text.substr(comma + 1))};
    } catch (const GeometryError& e) {
        throw UsageError(e.what());
    }
}

// "dx:dy" exact pair, "p/q pi" rational angle, or (float backend) raw radians.
template <class S>
Dir<S> parse_direction(const std::string& text) {
    try {
        if (auto colon = text.find(':'); colon != std::string::npos) {
            if (colon == 0 || colon + 1 == text.size())
                throw UsageError("direction must be \"dx:dy\": " + text);
            return Dir<S>{parse_scalar<S>(text.substr(0, colon)),
                          parse_scalar<S>(text.substr(colon + 1))};
        }
        if (auto pi = text.find("pi"); pi != std::string::npos) {
            std::string frac = text.substr(0, pi);
            while (!frac.empty() && frac.back() == ' ') frac.pop_back();
            long num = 0, den = 1;
            auto slash = frac.find('/');
            num = std::stol(slash == std::string::npos ? frac : frac.substr(0, slash));
            if (slash != std::string::npos) den = std::stol(frac.substr(slash + 1));
            Fraction f{num, den};
            if constexpr (ScalarTraits<S>::exact) {
                // exact directions exist only where tan is rational: quarter turns
                // and odd multiples of pi/4
                long q = f.den;
                if (q == 1) {
                    bool even = f.num % 2 == 0;
                    return even ? Dir<S>{S(1), S(0)} : Dir<S>{S(-1), S(0)};
                }
                if (q == 2) {
                    long r = ((f.num % 4) + 4) % 4;  // odd num: 1 or 3
                    return r == 1 ? Dir<S>{S(0), S(1)} : Dir<S>{S(0), S(-1)};
                }
                if (q == 4) {
                    long r = ((f.num % 8) + 8) % 8;  // odd multiples of pi/4
                    S one = ScalarTraits<S>::from_int(1);
                    if (r == 1) return Dir<S>{one, one};
                    if (r == 3) return Dir<S>{-one, one};
                    if (r == 5) return Dir<S>{-one, -one};
                    return Dir<S>{one, -one};
                }
                throw UsageError("angle " + frac +
                                 " pi has no exact rational direction; use dx:dy or "
                                 "the float backend");
            } else {
                return dir_from_angle<S>(M_PI * f.value());
            }
        }
        if constexpr (!ScalarTraits<S>::exact) {
            return dir_from_angle<S>(parse_scalar<double>(text));
        }
        throw UsageError("exact backend needs dx:dy or \"p/q pi\": " + text);
    } catch (const GeometryError& e) {
        throw UsageError(e.what());
    } catch (const std::invalid_argument&) {
        throw UsageError("malformed direction: " + text);
    } catch (const std::out_of_range&) {
        throw UsageError("malformed direction: " + text);
    }
}

template <class S>
Polygon<S> load(const Options& o) {
    if (o.polygon_path.empty()) throw UsageError("--polygon is required");
    try {
        return load_polygon<S>(o.polygon_path);
    } catch (const GeometryError& e) {
        throw FileError(e.what());
    }
}

// ---------------------------------------------------------------------------
// json helpers: exact-origin scalars carry the fraction string and a float

template <class S>
json jscalar(const S& v) {
    if constexpr (ScalarTraits<S>::exact)
        return {{"exact", format_scalar<S>(v)}, {"value", to_double(v)}};
    else
        return {{"exact", nullptr}, {"value", v}};
}

template <class S>
json jpoint(const Point<S>& p) {
    return {{"x", jscalar(p.x)}, {"y", jscalar(p.y)}};
}

template <class S>
json jdir(const Dir<S>& d) {
    return {{"dx", jscalar(d.v.x)}, {"dy", jscalar(d.v.y)}, {"angle", d.angle()}};
}

template <class S>
json jsegment(const Segment<S>& s) {
    return {{"a", jpoint(s.a)}, {"b", jpoint(s.b)}};
}

template <class S>
json jorbit(const Orbit<S>& o) {
    json links = json::array(), events = json::array();
    for (const auto& l : o.links) links.push_back(jsegment(l));
    for (const auto& e : o.events) {
        json ev = {{"hit", jpoint(e.hit)},
                   {"side", e.side_index},
                   {"singular", e.singular},
                   {"word", e.reflected_sides}};
        if (e.vertex_index) ev["vertex"] = *e.vertex_index;
        events.push_back(std::move(ev));
    }
    json out = {{"start", jpoint(o.start.q)},
                {"direction", jdir(o.start.v)},
                {"links", std::move(links)},
                {"events", std::move(events)},
                {"geometric_length", o.geometric_length},
                {"periodic", nullptr}};
    if (o.periodic)
        out["periodic"] = {{"links", o.periodic->first}, {"length", o.periodic->second}};
    return out;
}

template <class S>
json jcylinder(const Cylinder<S>& c) {
    return {{"word", c.word},
            {"direction", jdir(c.direction)},
            {"translation", {{"x", jscalar(c.translation.x)}, {"y", jscalar(c.translation.y)}}},
            {"width", c.width},
            {"period_links", c.period_links},
            {"period_length", c.period_length},
            {"representative", jpoint(c.representative.q)}};
}

// ---------------------------------------------------------------------------
// svg helpers

template <class S>
void svg_polygon(SvgScene& scene, const Polygon<S>& p) {
    std::vector<std::pair<double, double>> pts;
    for (std::size_t i = 0; i < p.size(); ++i)
        pts.emplace_back(to_double(p.vertex(i).x), to_double(p.vertex(i).y));
    scene.add_polygon(pts);
}

template <class S>
void svg_orbit(SvgScene& scene, const Orbit<S>& o) {
    std::vector<std::pair<double, double>> pts;
    if (!o.links.empty())
        pts.emplace_back(to_double(o.links.front().a.x), to_double(o.links.front().a.y));
    for (const auto& l : o.links) pts.emplace_back(to_double(l.b.x), to_double(l.b.y));
    scene.add_polyline(pts);
    for (const auto& e : o.events)
        if (e.singular) scene.add_cross(to_double(e.hit.x), to_double(e.hit.y));
}

struct Emitter {
    const Options& opt;
    SvgScene scene;
    bool drew = false;

    void finish(json report) {
        report["backend"] = opt.backend;
        report["seed"] = opt.seed;
        std::string text = report.dump(2);
        if (!opt.json_path.empty()) {
            std::ofstream f(opt.json_path);
            if (!f) throw FileError("cannot write JSON file: " + opt.json_path);
            f << text << "\n";
        } else {
            std::cout << text << "\n";
        }
        if (!opt.svg_path.empty() && drew) scene.save(opt.svg_path);
    }
};

// ---------------------------------------------------------------------------
// commands

template <class S>
void cmd_simulate(const Options& opt, Emitter& em) {
    auto p = load<S>(opt);
    auto pos = parse_position<S>(opt.pos);
    auto dir = parse_direction<S>(opt.dir);
    auto o = trace(p, PhasePoint<S>{pos, dir, {}}, opt.links);
    svg_polygon(em.scene, p);
    svg_orbit(em.scene, o);
    em.drew = true;
    em.finish({{"command", "simulate"}, {"orbit", jorbit(o)}});
}

template <class S>
void cmd_unfold(const Options& opt, Emitter& em) {
    auto p = load<S>(opt);
    auto pos = parse_position<S>(opt.pos);
    auto dir = parse_direction<S>(opt.dir);
    auto uf = unfold(p, PhasePoint<S>{pos, dir, {}}, opt.copies);

    double residual = 0;
    if (uf.unfolded_links.size() > 1) {
        Vec2<S> d = uf.unfolded_links.back().b - uf.unfolded_links.front().a;
        double n = norm(d);
        for (const auto& s : uf.unfolded_links)
            residual = std::max(
                residual,
                std::fabs(to_double(cross(d, s.b - uf.unfolded_links.front().a))) / n);
    }

    for (std::size_t i = 0; i < uf.corridor.copies.size(); ++i) {
        const auto& m = uf.corridor.copies[i];
        std::vector<std::pair<double, double>> pts;
        double cx = 0, cy = 0;
        for (std::size_t v = 0; v < p.size(); ++v) {
            auto q = m.apply(p.vertex(v));
            pts.emplace_back(to_double(q.x), to_double(q.y));
            cx += to_double(q.x);
            cy += to_double(q.y);
        }
        em.scene.add_polygon(pts);
        em.scene.add_label(cx / p.size(), cy / p.size(), std::to_string(i));
    }
    if (!uf.unfolded_links.empty()) {
        const auto& a = uf.unfolded_links.front().a;
        const auto& b = uf.unfolded_links.back().b;
        em.scene.add_line(to_double(a.x), to_double(a.y), to_double(b.x), to_double(b.y),
                          "#c62828", 0.9);
    }
    em.drew = true;
    em.finish({{"command", "unfold"},
               {"copies", uf.corridor.copies.size()},
               {"word", uf.corridor.word},
               {"residual", residual}});
}

template <class S>
void cmd_diagonals(const Options& opt, Emitter& em) {
    auto p = load<S>(opt);
    svg_polygon(em.scene, p);
    json rows = json::array();
    if (opt.max_links > 0) {
        for (const auto& g : enumerate_generalized_diagonals(p, opt.max_links)) {
            rows.push_back({{"links", g.link_count},
                            {"word", g.word},
                            {"direction", jdir(g.direction)},
                            {"start_vertex", g.start_vertex},
                            {"end_vertex", g.end_vertex}});
            if (auto run = trace_between_vertices(p, g.start_vertex, g.direction,
                                                  g.link_count))
                for (const auto& s : run->segments)
                    em.scene.add_line(to_double(s.a.x), to_double(s.a.y),
                                      to_double(s.b.x), to_double(s.b.y), "#6a1b9a", 0.5);
        }
    }
    em.drew = true;
    em.finish({{"command", "diagonals"}, {"count", rows.size()}, {"diagonals", rows}});
}

template <class S>
void cmd_periodic(const Options& opt, Emitter& em) {
    auto p = load<S>(opt);
    WordSearchOptions<S> wopt;
    wopt.max_word = opt.max_word;
    wopt.node_budget = opt.budget;
    if (opt.window_delta > 0) wopt.window = std::make_pair(opt.theta, opt.window_delta);
    WordSearchStats<S> stats;
    auto cyls = word_search(p, wopt, &stats);
    svg_polygon(em.scene, p);
    json rows = json::array();
    for (const auto& c : cyls) {
        rows.push_back(jcylinder(c));
        auto o = trace(p, c.representative, c.period_links + 1);
        svg_orbit(em.scene, o);
    }
    em.drew = true;
    em.finish({{"command", "periodic"},
               {"cylinders", rows},
               {"nodes_expanded", stats.nodes_expanded},
               {"budget_exhausted", stats.budget_exhausted}});
}

template <class S>
void cmd_perp(const Options& opt, Emitter& em) {
    auto p = load<S>(opt);
    if (opt.side >= p.size()) throw UsageError("side index out of range");
    auto res = perp_scan(p, opt.side, opt.max_links, opt.samples);
    json samples = json::array();
    std::size_t periodic = 0, singular = 0;
    for (const auto& [u, kind] : res.samples) {
        const char* k = kind == PerpOutcome<S>::Kind::Periodic   ? "periodic"
                        : kind == PerpOutcome<S>::Kind::Singular ? "singular"
                                                                 : "undecided";
        if (kind == PerpOutcome<S>::Kind::Periodic) ++periodic;
        if (kind == PerpOutcome<S>::Kind::Singular) ++singular;
        samples.push_back({{"t", jscalar(u)}, {"kind", k}});
    }
    json feet = json::array();
    svg_polygon(em.scene, p);
    for (const auto& f : res.singular_feet) {
        feet.push_back(jpoint(f));
        em.scene.add_cross(to_double(f.x), to_double(f.y));
    }
    json intervals = json::array();
    for (const auto& [a, b] : res.periodic_intervals)
        intervals.push_back({{"from", jscalar(a)}, {"to", jscalar(b)}});
    em.drew = true;
    em.finish({{"command", "perp"},
               {"side", opt.side},
               {"periodic", periodic},
               {"singular", singular},
               {"undecided", res.undecided},
               {"samples", samples},
               {"periodic_intervals", intervals},
               {"singular_feet", feet}});
}

template <class S>
Orbit<S> traced_orbit(const Options& opt, const Polygon<S>& p) {
    auto pos = parse_position<S>(opt.pos);
    auto dir = parse_direction<S>(opt.dir);
    return trace(p, PhasePoint<S>{pos, dir, {}}, opt.links);
}

template <class S>
void cmd_welldist(const Options& opt, Emitter& em) {
    auto p = load<S>(opt);
    auto o = traced_orbit(opt, p);
    auto rep = discrepancy(p, o, opt.eps);
    json regions = json::array();
    for (const auto& st : rep.per_region)
        regions.push_back({{"center",
                            {{"x", st.region.cx.num}, {"qx", st.region.cx.den},
                             {"y", st.region.cy.num}, {"qy", st.region.cy.den}}},
                           {"diameter", st.region.diameter.value()},
                           {"length_fraction", st.length_fraction},
                           {"area_fraction", st.area_fraction},
                           {"discrepancy", st.discrepancy}});
    svg_polygon(em.scene, p);
    svg_orbit(em.scene, o);
    for (const auto& st : rep.per_region)
        em.scene.add_circle(to_double(st.region.center.x), to_double(st.region.center.y),
                            to_double(st.region.radius));
    em.drew = true;
    em.finish({{"command", "welldist"},
               {"epsilon", rep.epsilon},
               {"sup_discrepancy", rep.sup_discrepancy},
               {"well_distributed", rep.well_distributed},
               {"regions", regions}});
}

template <class S>
void cmd_density(const Options& opt, Emitter& em) {
    auto p = load<S>(opt);
    auto o = traced_orbit(opt, p);
    auto rep = epsilon_dense(p, o, opt.eps, opt.surface);
    json out = {{"command", "density"},
                {"epsilon", rep.epsilon},
                {"grid_spacing", rep.grid_spacing},
                {"dense", rep.dense},
                {"uncovered_witness", nullptr}};
    svg_polygon(em.scene, p);
    svg_orbit(em.scene, o);
    if (rep.uncovered_witness) {
        out["uncovered_witness"] = jpoint(*rep.uncovered_witness);
        if (rep.witness_floor) out["witness_floor"] = *rep.witness_floor;
        em.scene.add_circle(to_double(rep.uncovered_witness->x),
                            to_double(rep.uncovered_witness->y), opt.eps, "#c62828");
    }
    em.drew = true;
    em.finish(std::move(out));
}

template <class S>
void cmd_lshape(const Options& opt, Emitter& em) {
    auto [p, o] = lshape_orbit<S>(opt.k);
    bool avoids = true;
    S one = ScalarTraits<S>::from_int(1);
    for (const auto& l : o.links)
        if (ScalarTraits<S>::sign(l.a.x - one) > 0 || ScalarTraits<S>::sign(l.b.x - one) > 0)
            avoids = false;
    svg_polygon(em.scene, p);
    svg_orbit(em.scene, o);
    em.drew = true;
    em.finish({{"command", "lshape"},
               {"k", opt.k},
               {"links", o.periodic ? o.periodic->first : 0},
               {"periodic", o.periodic.has_value()},
               {"avoids_right_square", avoids},
               {"orbit", jorbit(o)}});
}

template <class S>
void cmd_scan(const Options& opt, Emitter& em) {
    auto p = load<S>(opt);
    auto rep = scan_A_set(p, opt.theta, opt.delta, opt.eps, opt.grid, opt.budget);
    json pts = json::array();
    svg_polygon(em.scene, p);
    for (const auto& [q, covered] : rep.points) {
        pts.push_back({{"point", jpoint(q)}, {"covered", covered}});
        if (!covered) em.scene.add_cross(to_double(q.x), to_double(q.y));
    }
    json strips = json::array();
    for (const auto& c : rep.strips) strips.push_back(jcylinder(c));
    em.drew = true;
    em.finish({{"command", "scan"},
               {"coverage_fraction", rep.coverage_fraction},
               {"points", pts},
               {"strips", strips},
               {"nodes_expanded", rep.search_stats.nodes_expanded},
               {"budget_exhausted", rep.search_stats.budget_exhausted}});
}

template <class S>
int dispatch(const Options& opt) {
    Emitter em{opt};
    if (opt.command == "simulate") cmd_simulate<S>(opt, em);
    else if (opt.command == "unfold") cmd_unfold<S>(opt, em);
    else if (opt.command == "diagonals") cmd_diagonals<S>(opt, em);
    else if (opt.command == "periodic") cmd_periodic<S>(opt, em);
    else if (opt.command == "perp") cmd_perp<S>(opt, em);
    else if (opt.command == "welldist") cmd_welldist<S>(opt, em);
    else if (opt.command == "density") cmd_density<S>(opt, em);
    else if (opt.command == "lshape") cmd_lshape<S>(opt, em);
    else if (opt.command == "scan") cmd_scan<S>(opt, em);
    else throw UsageError("unknown command");
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    Options opt;
    CLI::App app{"polygonal billiard dynamics engine"};
    app.fallthrough();  // global options may appear after the subcommand
    app.require_subcommand(1);
    app.add_option("--backend", opt.backend, "scalar backend")
        ->check(CLI::IsMember({"exact", "float"}))
        ->capture_default_str();
    app.add_option("--tol", opt.tol, "float backend tolerance")->capture_default_str();
    app.add_option("--seed", opt.seed, "seed for sampled scans")->capture_default_str();
    app.add_option("--json", opt.json_path, "write the JSON report here");
    app.add_option("--svg", opt.svg_path, "write an SVG rendering here");

    auto add_polygon = [&](CLI::App* c) {
        c->add_option("--polygon", opt.polygon_path, "polygon file")->required();
    };
    auto add_orbit = [&](CLI::App* c) {
        c->add_option("--pos", opt.pos, "start position x,y")->required();
        c->add_option("--dir", opt.dir, "direction dx:dy | \"p/q pi\" | radians (float)")
            ->required();
        c->add_option("--links", opt.links, "maximum links to trace")
            ->capture_default_str();
    };

    auto* sim = app.add_subcommand("simulate", "trace a billiard orbit");
    add_polygon(sim);
    add_orbit(sim);

    auto* unf = app.add_subcommand("unfold", "unfold a trajectory corridor");
    add_polygon(unf);
    add_orbit(unf);
    unf->add_option("--copies", opt.copies, "number of copies")->capture_default_str();

    auto* dia = app.add_subcommand("diagonals", "enumerate generalized diagonals");
    add_polygon(dia);
    dia->add_option("--max-links", opt.max_links, "maximum diagonal length")
        ->capture_default_str();

    auto* per = app.add_subcommand("periodic", "search for periodic cylinders");
    add_polygon(per);
    per->add_option("--max-word", opt.max_word, "maximum side-word length")
        ->capture_default_str();
    per->add_option("--theta", opt.theta, "window center angle (radians)")
        ->capture_default_str();
    per->add_option("--window", opt.window_delta, "half-width of the direction window");
    per->add_option("--budget", opt.budget, "corridor node budget")->capture_default_str();

    auto* pp = app.add_subcommand("perp", "perpendicular-foot scan of one side");
    add_polygon(pp);
    pp->add_option("--side", opt.side, "side index")->required();
    pp->add_option("--samples", opt.samples, "sampled feet")->capture_default_str();
    pp->add_option("--max-links", opt.max_links, "links before undecided")
        ->capture_default_str();

    auto* wd = app.add_subcommand("welldist", "Eq.(1) discrepancy report");
    add_polygon(wd);
    add_orbit(wd);
    wd->add_option("--eps", opt.eps, "epsilon")->capture_default_str();

    auto* de = app.add_subcommand("density", "epsilon-density check");
    add_polygon(de);
    add_orbit(de);
    de->add_option("--eps", opt.eps, "epsilon")->capture_default_str();
    de->add_flag("--surface", opt.surface, "require per-floor coverage");

    auto* ls = app.add_subcommand("lshape", "periodic orbit family in the L-shape");
    ls->add_option("--k", opt.k, "family index (2k+2 links)")->required();

    auto* sc = app.add_subcommand("scan", "A-set coverage scan");
    add_polygon(sc);
    sc->add_option("--theta", opt.theta, "window center angle (radians)")->required();
    sc->add_option("--delta", opt.delta, "window half-width")->required();
    sc->add_option("--eps", opt.eps, "epsilon")->capture_default_str();
    sc->add_option("--grid", opt.grid, "grid resolution")->capture_default_str();
    sc->add_option("--budget", opt.budget, "corridor node budget")->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 2;
    }
    opt.command = app.get_subcommands().front()->get_name();

    auto fail = [](const char* kind, const std::string& what, int code) {
        json err = {{"error", kind}, {"message", what}};
        std::cerr << err.dump() << "\n";
        return code;
    };
    try {
        if (opt.backend == "float") {
            set_float_tolerance(opt.tol);
            return dispatch<double>(opt);
        }
        return dispatch<Rat>(opt);
    } catch (const UsageError& e) {
        return fail("usage", e.what(), 2);
    } catch (const FileError& e) {
        return fail("input", e.what(), 3);
    } catch (const NumericError& e) {
        return fail("numeric", e.what(), 4);
    } catch (const GeometryError& e) {
        return fail("domain", e.what(), 4);
    }
}
