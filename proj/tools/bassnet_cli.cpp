// bassnet: command-line front end for network generation, exact solving,
// closed-form evaluation, Monte Carlo simulation, graph analysis, and the
// claim-verification harness.
//
// Exit codes: 0 success, 2 usage, 3 validation, 4 budget, 5 check failure.

#include <chrono>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "bassnet/bassnet.hpp"

namespace {

using namespace bassnet;

std::uint64_t fnv1a64(const std::string& bytes) {
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    require(bool(in), Errc::io_error, "cannot read '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::string hex64(std::uint64_t v) {
    char b[17];
    std::snprintf(b, sizeof b, "%016llx", static_cast<unsigned long long>(v));
    return b;
}

// Collects everything the run manifest records; emit() writes the data file
// plus "<out>.manifest.json" (data to stdout and the manifest to stderr when
// out is "-").
struct RunContext {
    std::string command;
    nlohmann::json inputs = nlohmann::json::object();
    std::vector<std::uint64_t> seeds;
    std::chrono::steady_clock::time_point t0 =
        std::chrono::steady_clock::now();

    std::string input(const std::string& path) {
        const std::string bytes = read_file(path);
        inputs[path] = "fnv1a64:" + hex64(fnv1a64(bytes));
        return bytes;
    }

    nlohmann::json manifest() const {
        const auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                            std::chrono::steady_clock::now() - t0)
                            .count();
        nlohmann::json m;
        m["command"] = command;
        m["inputs"] = inputs;
        m["seeds"] = seeds;
        m["version"] = BASSNET_VERSION;
        m["wall_ms"] = ms;
        return m;
    }

    void emit(const std::string& out, const std::string& content) const {
        if (out == "-") {
            std::cout << content;
            std::cerr << manifest().dump() << "\n";
        } else {
            write_text_file(out, content);
            write_text_file(out + ".manifest.json", manifest().dump(2) + "\n");
        }
    }
};

std::string join_args(int argc, char** argv) {
    std::string s;
    for (int i = 0; i < argc; ++i) {
        if (i) s += ' ';
        s += argv[i];
    }
    return s;
}

std::vector<int> parse_int_list(const std::string& s, const char* what) {
    std::vector<int> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            std::size_t pos = 0;
            const int v = std::stoi(item, &pos);
            require(pos == item.size(), Errc::bad_format,
                    std::string(what) + ": bad integer '" + item + "'");
            out.push_back(v);
        } catch (const Error&) {
            throw;
        } catch (const std::exception&) {
            fail(Errc::bad_format,
                 std::string(what) + ": bad integer '" + item + "'");
        }
    }
    require(!out.empty(), Errc::bad_format,
            std::string(what) + ": empty list");
    return out;
}

SimScheme parse_scheme(const std::string& s) {
    if (s == "event") return SimScheme::event();
    if (s.rfind("dt:", 0) == 0) {
        try {
            std::size_t pos = 0;
            const double dt = std::stod(s.substr(3), &pos);
            require(pos == s.size() - 3, Errc::bad_format,
                    "--scheme: bad dt value in '" + s + "'");
            return SimScheme::discrete(dt);
        } catch (const Error&) {
            throw;
        } catch (const std::exception&) {
            fail(Errc::bad_format, "--scheme: bad dt value in '" + s + "'");
        }
    }
    fail(Errc::bad_format,
         "--scheme must be 'event' or 'dt:<step>', got '" + s + "'");
}

Target parse_target(const std::string& s) {
    if (s == "level") return Target::level();
    if (s.rfind("node:", 0) == 0)
        return Target::node(parse_int_list(s.substr(5), "--target node")[0]);
    if (s.rfind("omega:", 0) == 0)
        return Target::omega(parse_int_list(s.substr(6), "--target omega"));
    if (s.rfind("pair:", 0) == 0) {
        const auto v = parse_int_list(s.substr(5), "--target pair");
        require(v.size() == 2, Errc::bad_format,
                "--target pair needs exactly two nodes");
        return Target::pair(v[0], v[1]);
    }
    fail(Errc::bad_format,
         "--target must be level|node:J|omega:LIST|pair:I,J, got '" + s + "'");
}

std::vector<double> linear_grid(double tmax, int steps) {
    require(tmax > 0.0 && std::isfinite(tmax), Errc::bad_grid,
            "--tmax must be positive and finite");
    require(steps >= 1, Errc::bad_grid, "--steps must be >= 1");
    std::vector<double> t(std::size_t(steps) + 1);
    for (int i = 0; i <= steps; ++i) t[std::size_t(i)] = tmax * i / steps;
    return t;
}

Network load_net(RunContext& ctx, const std::string& path) {
    return network_from_json_string(ctx.input(path));
}

} // namespace

int main(int argc, char** argv) {
    using namespace bassnet;
    CLI::App app{"bassnet: Bass diffusion on weighted directed networks"};
    app.set_version_flag("--version", BASSNET_VERSION);
    app.require_subcommand(1);
    int rc = 0;
    RunContext ctx;
    ctx.command = join_args(argc, argv);

    const int default_jobs =
        std::max(1u, std::thread::hardware_concurrency());

    // ---- gen ----
    auto* gen = app.add_subcommand("gen", "Generate a network JSON file");
    gen->require_subcommand(1);
    struct {
        int M = 8, D = 2, M1 = 4, N = 2, L = 4;
        double p = 0.1, q = 0.4, qR = -1.0, qL = -1.0, qt = 0.2;
        std::string sided = "one", out;
    } g;
    auto add_gen_out = [&](CLI::App* sub) {
        sub->add_option("--out", g.out, "Output path ('-' for stdout)")
            ->required();
    };
    auto* gen_circle = gen->add_subcommand("circle", "Circle topology");
    gen_circle->add_option("--M", g.M, "Number of nodes")->required();
    gen_circle->add_option("--p", g.p, "Spontaneous rate")->required();
    gen_circle->add_option("--q", g.q, "Edge rate (one-sided)");
    gen_circle->add_option("--qR", g.qR, "Rate from the right neighbor (two-sided)");
    gen_circle->add_option("--qL", g.qL, "Rate from the left neighbor (two-sided)");
    add_gen_out(gen_circle);
    gen_circle->callback([&] {
        const bool one = gen_circle->count("--q") > 0;
        const bool two =
            gen_circle->count("--qR") > 0 || gen_circle->count("--qL") > 0;
        require(!(one && two), Errc::bad_format,
                "--q cannot be combined with --qR/--qL");
        require(one || two, Errc::bad_format,
                "give --q (one-sided) or both --qR and --qL (two-sided)");
        require(!two || (gen_circle->count("--qR") > 0 &&
                         gen_circle->count("--qL") > 0),
                Errc::bad_format, "two-sided circles need both --qR and --qL");
        const Network net = two ? gen_circle_two_sided(g.M, g.p, g.qR, g.qL)
                                : bassnet::gen_circle(g.M, g.p, g.q);
        ctx.emit(g.out, network_to_json(net).dump(2) + "\n");
    });
    auto* gen_line = gen->add_subcommand("line", "Line topology");
    gen_line->add_option("--M", g.M, "Number of nodes")->required();
    gen_line->add_option("--p", g.p, "Spontaneous rate")->required();
    gen_line->add_option("--q", g.q, "Edge rate (one-sided)");
    gen_line->add_option("--qR", g.qR, "Rate from the right neighbor (two-sided)");
    gen_line->add_option("--qL", g.qL, "Rate from the left neighbor (two-sided)");
    add_gen_out(gen_line);
    gen_line->callback([&] {
        const bool one = gen_line->count("--q") > 0;
        const bool two =
            gen_line->count("--qR") > 0 || gen_line->count("--qL") > 0;
        require(!(one && two), Errc::bad_format,
                "--q cannot be combined with --qR/--qL");
        require(one || two, Errc::bad_format,
                "give --q (one-sided) or both --qR and --qL (two-sided)");
        require(!two || (gen_line->count("--qR") > 0 &&
                         gen_line->count("--qL") > 0),
                Errc::bad_format, "two-sided lines need both --qR and --qL");
        const Network net = two ? gen_line_two_sided(g.M, g.p, g.qL, g.qR)
                                : bassnet::gen_line(g.M, g.p, g.q);
        ctx.emit(g.out, network_to_json(net).dump(2) + "\n");
    });
    auto* gen_torus = gen->add_subcommand("torus", "D-dimensional torus");
    gen_torus->add_option("--D", g.D, "Dimension")->required();
    gen_torus->add_option("--M1", g.M1, "Side length")->required();
    gen_torus->add_option("--p", g.p, "Spontaneous rate")->required();
    gen_torus->add_option("--q", g.q, "Total incoming edge rate")->required();
    gen_torus->add_option("--sided", g.sided, "one|two")
        ->check(CLI::IsMember({"one", "two"}));
    add_gen_out(gen_torus);
    gen_torus->callback([&] {
        const Network net = bassnet::gen_torus(
            g.D, g.M1, g.p, g.q, g.sided == "one" ? Sided::one : Sided::two);
        ctx.emit(g.out, network_to_json(net).dump(2) + "\n");
    });
    auto* gen_ray = gen->add_subcommand("raystar", "N rays feeding one hub");
    gen_ray->add_option("--N", g.N, "Number of rays")->required();
    gen_ray->add_option("--L", g.L, "Nodes per ray")->required();
    gen_ray->add_option("--p", g.p, "Spontaneous rate")->required();
    gen_ray->add_option("--qt", g.qt, "Edge rate along each ray")->required();
    add_gen_out(gen_ray);
    gen_ray->callback([&] {
        const Network net = bassnet::gen_ray_star(g.N, g.L, g.p, g.qt);
        ctx.emit(g.out, network_to_json(net).dump(2) + "\n");
    });

    // ---- solve ----
    auto* solve_cmd = app.add_subcommand(
        "solve", "Exact master-equation curves (CSV t,value)");
    struct {
        std::string net, omega, pair, out = "-";
        int node = 0, steps = 50, cap = 16;
        bool level = false;
        double tmax = 5.0;
    } sv;
    solve_cmd->add_option("--net", sv.net, "Network JSON file")->required();
    solve_cmd->add_option("--omega", sv.omega,
                          "Joint survival of this node set (e.g. 1,2)");
    solve_cmd->add_option("--node", sv.node, "Adoption probability of a node");
    solve_cmd->add_flag("--level", sv.level, "Expected adoption level");
    solve_cmd->add_option("--pair", sv.pair, "Joint survival of a pair I,J");
    solve_cmd->add_option("--tmax", sv.tmax, "End time (default 5)");
    solve_cmd->add_option("--steps", sv.steps, "Grid steps (default 50)");
    solve_cmd->add_option("--cap", sv.cap, "State-space cap (nodes)")
        ->envname("BASSNET_STATE_CAP");
    solve_cmd->add_option("--out", sv.out, "Output path ('-' for stdout)");
    solve_cmd->callback([&] {
        const Network net = load_net(ctx, sv.net);
        const std::vector<double> times = linear_grid(sv.tmax, sv.steps);
        SolveOptions opt;
        opt.state_cap = sv.cap;
        const int picked = int(!sv.omega.empty()) + int(sv.node > 0) +
                           int(sv.level) + int(!sv.pair.empty());
        require(picked <= 1, Errc::bad_format,
                "pick at most one of --omega/--node/--level/--pair");
        Curve curve;
        if (!sv.omega.empty()) {
            curve = survival(net, parse_int_list(sv.omega, "--omega"), times,
                             opt);
        } else if (sv.node > 0) {
            curve = f_node(net, sv.node, times, opt);
        } else if (!sv.pair.empty()) {
            const auto ij = parse_int_list(sv.pair, "--pair");
            require(ij.size() == 2, Errc::bad_format,
                    "--pair needs exactly two nodes");
            curve = s_pair(net, ij[0], ij[1], times, opt);
        } else {
            curve = f_level(net, times, opt);
        }
        ctx.emit(sv.out, curve_csv(curve.times, curve.values));
    });

    // ---- formula ----
    auto* formula = app.add_subcommand(
        "formula", "Closed-form curves (CSV t,value)");
    formula->require_subcommand(1);
    struct {
        double p = 0.1, q = 0.4, qL = 0.2, qR = 0.2, tmax = 5.0;
        int M = 8, j = 1, steps = 50, cap = 16;
        std::string fallback = "on", out = "-";
    } fm;
    auto add_formula_common = [&](CLI::App* sub, bool with_fallback) {
        sub->add_option("--tmax", fm.tmax, "End time (default 5)");
        sub->add_option("--steps", fm.steps, "Grid steps (default 50)");
        sub->add_option("--out", fm.out, "Output path ('-' for stdout)");
        if (with_fallback) {
            sub->add_option("--singular-fallback", fm.fallback,
                            "on|off: exact fallback at singular parameters")
                ->check(CLI::IsMember({"on", "off"}));
            sub->add_option("--cap", fm.cap, "State-space cap for fallback")
                ->envname("BASSNET_STATE_CAP");
        }
    };
    auto fm_opt = [&] {
        FormulaOptions o;
        o.singular_fallback = fm.fallback == "on";
        o.state_cap = fm.cap;
        return o;
    };
    auto emit_formula = [&](auto&& eval) {
        const std::vector<double> times = linear_grid(fm.tmax, fm.steps);
        std::vector<double> values;
        values.reserve(times.size());
        for (double t : times) values.push_back(eval(t));
        ctx.emit(fm.out, curve_csv(times, values));
    };
    auto* fm_circle = formula->add_subcommand(
        "circle", "f_circle(t; p, q, M): adoption of a circle node");
    fm_circle->add_option("--p", fm.p)->required();
    fm_circle->add_option("--q", fm.q)->required();
    fm_circle->add_option("--M", fm.M)->required();
    add_formula_common(fm_circle, true);
    fm_circle->callback([&] {
        const std::vector<double> times = linear_grid(fm.tmax, fm.steps);
        ctx.emit(fm.out, curve_csv(times, f_circle_grid(times, fm.p, fm.q,
                                                        fm.M, fm_opt())));
    });
    auto* fm_f1d = formula->add_subcommand(
        "f1d", "f_1d(t; p, q): adoption on the infinite one-sided line");
    fm_f1d->add_option("--p", fm.p)->required();
    fm_f1d->add_option("--q", fm.q)->required();
    add_formula_common(fm_f1d, false);
    fm_f1d->callback(
        [&] { emit_formula([&](double t) { return f_1d(t, fm.p, fm.q); }); });
    auto* fm_l1 = formula->add_subcommand(
        "line1s", "Adoption of node j on the one-sided line");
    fm_l1->add_option("--p", fm.p)->required();
    fm_l1->add_option("--q", fm.q)->required();
    fm_l1->add_option("--j", fm.j)->required();
    add_formula_common(fm_l1, true);
    fm_l1->callback([&] {
        emit_formula([&](double t) {
            return f_line_one_sided(t, fm.p, fm.q, fm.j, fm_opt());
        });
    });
    auto* fm_l2 = formula->add_subcommand(
        "line2s", "Adoption of node j on the two-sided line of M nodes");
    fm_l2->add_option("--p", fm.p)->required();
    fm_l2->add_option("--qL", fm.qL)->required();
    fm_l2->add_option("--qR", fm.qR)->required();
    fm_l2->add_option("--j", fm.j)->required();
    fm_l2->add_option("--M", fm.M)->required();
    add_formula_common(fm_l2, true);
    fm_l2->callback([&] {
        emit_formula([&](double t) {
            return f_line_two_sided(t, fm.p, fm.qL, fm.qR, fm.j, fm.M,
                                    fm_opt());
        });
    });

    // ---- simulate ----
    auto* sim = app.add_subcommand(
        "simulate", "Monte Carlo estimates (CSV t,mean,stderr)");
    struct {
        std::string net, scheme = "event", target = "level", out = "-";
        long runs = 100000;
        std::uint64_t seed = 0;
        double tmax = 5.0;
        int steps = 50, jobs = 0;
    } sm;
    sm.jobs = default_jobs;
    sim->add_option("--net", sm.net, "Network JSON file")->required();
    sim->add_option("--runs", sm.runs, "Number of replicates");
    sim->add_option("--seed", sm.seed, "RNG seed")->required();
    sim->add_option("--scheme", sm.scheme, "event | dt:<step>");
    sim->add_option("--target", sm.target,
                    "level | node:J | omega:LIST | pair:I,J");
    sim->add_option("--tmax", sm.tmax, "End time (default 5)");
    sim->add_option("--steps", sm.steps, "Grid steps (default 50)");
    sim->add_option("--jobs", sm.jobs, "Worker threads");
    sim->add_option("--out", sm.out, "Output path ('-' for stdout)");
    sim->callback([&] {
        const Network net = load_net(ctx, sm.net);
        ctx.seeds.push_back(sm.seed);
        const Estimate est =
            estimate(net, {parse_target(sm.target)},
                     linear_grid(sm.tmax, sm.steps), sm.runs, sm.seed,
                     parse_scheme(sm.scheme), sm.jobs)[0];
        ctx.emit(sm.out, estimate_csv(est.times, est.mean, est.stderr_));
    });

    // ---- analyze ----
    auto* an = app.add_subcommand("analyze", "Graph-structure analyses");
    an->require_subcommand(1);
    struct {
        std::string net, netA, netB, omega, A, B, out = "-";
        int j = 0;
    } az;
    auto* an_inf = an->add_subcommand(
        "influential", "Influential nodes and edges for a target set");
    an_inf->add_option("--net", az.net)->required();
    an_inf->add_option("--omega", az.omega, "Target node set")->required();
    an_inf->add_option("--out", az.out);
    an_inf->callback([&] {
        const Network net = load_net(ctx, az.net);
        const std::vector<int> omega = parse_int_list(az.omega, "--omega");
        nlohmann::json out;
        out["omega"] = omega;
        auto nodes = nlohmann::json::array();
        for (int m = 1; m <= net.M(); ++m)
            if (is_influential_node(net, m, omega)) nodes.push_back(m);
        out["influential_nodes"] = std::move(nodes);
        const std::vector<char> flags = influential_edge_flags(net, omega);
        auto edges = nlohmann::json::array();
        for (std::size_t e = 0; e < net.edges().size(); ++e) {
            const Edge& ed = net.edges()[e];
            edges.push_back({{"from", ed.from},
                             {"to", ed.to},
                             {"rate", ed.rate},
                             {"influential", bool(flags[e])}});
        }
        out["influential_edges"] = std::move(edges);
        ctx.emit(az.out, out.dump(2) + "\n");
    });
    auto add_partition_opts = [&](CLI::App* sub) {
        sub->add_option("--net", az.net)->required();
        sub->add_option("--A", az.A, "Side A nodes")->required();
        sub->add_option("--B", az.B, "Side B nodes")->required();
        sub->add_option("--j", az.j, "Focal node")->required();
        sub->add_option("--out", az.out);
    };
    auto* an_funnel =
        an->add_subcommand("funnel", "Is the focal node a funnel node?");
    add_partition_opts(an_funnel);
    an_funnel->callback([&] {
        const Network net = load_net(ctx, az.net);
        const Partition part{parse_int_list(az.A, "--A"),
                             parse_int_list(az.B, "--B"), az.j};
        nlohmann::json out;
        out["funnel_node"] = is_funnel_node(net, part);
        out["vertex_cut"] = is_vertex_cut(net, part);
        ctx.emit(az.out, out.dump(2) + "\n");
    });
    auto* an_cut =
        an->add_subcommand("cut", "Does the focal node separate A from B?");
    add_partition_opts(an_cut);
    an_cut->callback([&] {
        const Network net = load_net(ctx, az.net);
        const Partition part{parse_int_list(az.A, "--A"),
                             parse_int_list(az.B, "--B"), az.j};
        nlohmann::json out;
        out["vertex_cut"] = is_vertex_cut(net, part);
        ctx.emit(az.out, out.dump(2) + "\n");
    });
    auto* an_red = an->add_subcommand(
        "reduce", "Drop edges non-influential to the target set");
    an_red->add_option("--net", az.net)->required();
    an_red->add_option("--omega", az.omega, "Target node set")->required();
    an_red->add_option("--out", az.out);
    an_red->callback([&] {
        const Network net = load_net(ctx, az.net);
        const Network red =
            indifference_reduce(net, parse_int_list(az.omega, "--omega"));
        ctx.emit(az.out, network_to_json(red).dump(2) + "\n");
    });
    auto* an_dom = an->add_subcommand(
        "dominate", "Compare rate vectors of two networks");
    an_dom->add_option("--netA", az.netA)->required();
    an_dom->add_option("--netB", az.netB)->required();
    an_dom->add_option("--j", az.j,
                       "Also evaluate the strict-slowdown prediction at j");
    an_dom->add_option("--out", az.out);
    an_dom->callback([&] {
        const Network netA = load_net(ctx, az.netA);
        const Network netB = load_net(ctx, az.netB);
        const DominanceResult res = dominance_compare(netA, netB);
        nlohmann::json out;
        out["relation"] = to_string(res.relation);
        auto ws = nlohmann::json::array();
        for (const DominanceWitness& w : res.witnesses) {
            if (w.kind == DominanceWitness::Kind::P)
                ws.push_back({{"kind", "p"}, {"node", w.node}});
            else
                ws.push_back({{"kind", "q"}, {"from", w.from}, {"to", w.to}});
        }
        out["witnesses"] = std::move(ws);
        if (az.j > 0) {
            if (res.relation == DominanceRelation::StrictlyDominated)
                out["strict_node_prediction"] =
                    strict_dominance_predicts_node(netA, netB, az.j);
            else
                out["strict_node_prediction"] = nullptr;
        }
        ctx.emit(az.out, out.dump(2) + "\n");
    });

    // ---- verify ----
    auto* ver = app.add_subcommand(
        "verify", "Machine-verify the library's structural claims");
    struct {
        std::string family, fixtures, out = "-";
        long runs = 100000;
        std::uint64_t seed = 12345;
        int cap = 16;
    } vf;
    ver->add_option("family", vf.family,
                    "all|pair|funnel|circle|line|dimension|chebyshev")
        ->required()
        ->check(CLI::IsMember({"all", "pair", "funnel", "circle", "line",
                               "dimension", "chebyshev"}));
    ver->add_option("--fixtures", vf.fixtures,
                    "JSON fixtures file (replaces the built-in battery)");
    ver->add_option("--runs", vf.runs, "Monte Carlo replicates");
    ver->add_option("--seed", vf.seed, "Monte Carlo seed");
    ver->add_option("--cap", vf.cap, "State-space cap (nodes)")
        ->envname("BASSNET_STATE_CAP");
    ver->add_option("--out", vf.out, "Report path ('-' for stdout)");
    ver->callback([&] {
        VerifyOptions opt;
        opt.state_cap = vf.cap;
        opt.mc_runs = vf.runs;
        opt.seed = vf.seed;
        ctx.seeds.push_back(vf.seed);
        std::vector<CheckReport> reports;
        if (!vf.fixtures.empty()) {
            const nlohmann::json doc =
                nlohmann::json::parse(ctx.input(vf.fixtures), nullptr, false);
            require(!doc.is_discarded(), Errc::bad_format,
                    "cannot parse fixtures file '" + vf.fixtures + "'");
            reports = verify_fixtures_json(doc, vf.family, opt);
        } else if (vf.family == "all") {
            reports = verify_all(opt);
        } else {
            reports = verify_family(vf.family, opt);
        }
        bool all_pass = true;
        for (const CheckReport& r : reports) {
            all_pass = all_pass && r.pass;
            std::cerr << (r.pass ? "[PASS] " : "[FAIL] ") << r.id << " ("
                      << r.method << ", min margin "
                      << format_double(r.min_margin) << ")\n";
        }
        ctx.emit(vf.out, reports_to_json(reports).dump(2) + "\n");
        if (!all_pass) rc = 5;
    });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return e.code() == Errc::budget_exceeded ? 4 : 3;
    }
    return rc;
}
