// Command-line front end: exact moves on lattice polytopes, explicit
// constructions, box-graph exploration, uniform sampling and the
// verification suites.
//
// Exit codes: 0 success, 1 failed verification check, 2 usage or input error.
#include <cstdio>
#include <iostream>
#include <set>
#include <sstream>

#include <CLI11.hpp>

#include "latmove/constructions.hpp"
#include "latmove/json_io.hpp"
#include "latmove/verify.hpp"

using namespace latmove;

namespace {

VertexFilter parse_filter(const std::string& arg) {
    if (arg.empty()) return std::nullopt;
    std::set<int> out;
    std::stringstream ss(arg);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (!item.empty()) out.insert(std::stoi(item));
    }
    if (out.empty()) return std::nullopt;
    return out;
}

std::string points_json(const std::set<Vec>& pts) {
    std::string out = "[";
    bool first = true;
    for (const Vec& p : pts) {
        if (!first) out += ',';
        first = false;
        out += point_to_json(p);
    }
    return out + "]";
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"exact elementary moves on lattice polytopes"};
    app.require_subcommand(1);

    // ---- hull ----
    std::string hull_input;
    bool hull_canonicalize = false;
    auto* hull_cmd = app.add_subcommand("hull", "canonical hull of a lattice point set");
    hull_cmd->add_option("--input", hull_input, "JSON file {\"dim\":d,\"points\":[[..],..]}")
        ->required();
    hull_cmd->add_flag("--canonicalize", hull_canonicalize,
                       "accept unsorted/non-extreme vertex lists");

    // ---- moves ----
    std::string moves_input;
    long long moves_box = 0;
    bool list_insertable = false, list_deletable = false, cells2d = false, moves_canon = false;
    auto* moves_cmd = app.add_subcommand("moves", "insertion/deletion queries for one polytope");
    moves_cmd->add_option("--input", moves_input, "polytope JSON file")->required();
    moves_cmd->add_option("--box", moves_box, "box size k for --list-insertable");
    moves_cmd->add_flag("--list-insertable", list_insertable, "insertable lattice points of [0,k]^d");
    moves_cmd->add_flag("--list-deletable", list_deletable, "deletable vertices");
    moves_cmd->add_flag("--cells2d", cells2d, "insertable cells of a polygon");
    moves_cmd->add_flag("--canonicalize", moves_canon, "canonicalize the input first");

    // ---- construct ----
    auto* construct = app.add_subcommand("construct", "explicit polytope families");
    construct->require_subcommand(1);
    int c_dim = 0, c_n = 0, c_k = 0;
    long long c_box = 1;
    auto* corner_cmd = construct->add_subcommand("corner", "corner simplex of [0,k]^d");
    corner_cmd->add_option("--dim", c_dim)->required();
    corner_cmd->add_option("--box", c_box);
    auto* pn_cmd = construct->add_subcommand("pn", "staircase polygon with n vertices");
    pn_cmd->add_option("--n", c_n)->required();
    auto* es_cmd = construct->add_subcommand("empty-simplex", "empty simplex in [0,k]^{k+1}");
    es_cmd->add_option("--k", c_k)->required();
    auto* sat_cmd = construct->add_subcommand("saturating", "product of empty simplices");
    sat_cmd->add_option("--dim", c_dim)->required();
    sat_cmd->add_option("--k", c_k)->required();
    std::vector<std::string> product_files;
    auto* prod_cmd = construct->add_subcommand("product", "cartesian product of two polytopes");
    prod_cmd->add_option("files", product_files, "two polytope JSON files")->expected(2);

    // ---- path ----
    auto* path = app.add_subcommand("path", "constructive move traces");
    path->require_subcommand(1);
    std::string path_input;
    long long path_box = 1;
    auto* stc_cmd = path->add_subcommand("simplex-to-corner", "trace to the corner simplex");
    stc_cmd->add_option("input", path_input, "simplex JSON file")->required();
    stc_cmd->add_option("--box", path_box, "box size k")->required();
    std::string pent_input;
    auto* pent_cmd = path->add_subcommand("pentagon-pipeline",
                                          "flatten, strengthen and shear a pentagon");
    pent_cmd->add_option("input", pent_input, "pentagon JSON file")->required();

    // ---- explore ----
    int e_dim = 0;
    long long e_box = 1;
    std::string e_filter, e_out, e_dot;
    std::vector<std::string> e_dist;
    bool e_components = false;
    auto* explore = app.add_subcommand("explore", "materialize a box move graph");
    explore->add_option("--dim", e_dim)->required();
    explore->add_option("--box", e_box)->required();
    explore->add_option("--vertices", e_filter, "vertex-count filter, e.g. 3,4");
    explore->add_option("--out", e_out, "write the graph as JSONL");
    explore->add_option("--dot", e_dot, "write the graph in DOT format");
    explore->add_flag("--components", e_components, "print the component summary");
    explore->add_option("--distance", e_dist, "two polytope JSON files")->expected(2);

    // ---- sample ----
    int s_dim = 0;
    long long s_box = 1;
    std::uint64_t s_steps = 0, s_burnin = 0, s_seed = 0;
    std::string s_report;
    auto* sample = app.add_subcommand("sample", "uniform Markov chain over box polytopes");
    sample->add_option("--dim", s_dim)->required();
    sample->add_option("--box", s_box)->required();
    sample->add_option("--steps", s_steps)->required();
    sample->add_option("--burnin", s_burnin);
    sample->add_option("--seed", s_seed)->required();
    sample->add_option("--report", s_report, "histogram CSV output file");

    // ---- verify ----
    std::string v_suite, v_cache;
    auto* verify = app.add_subcommand("verify", "run a verification suite");
    verify->add_option("suite", v_suite, "one of the named suites")->required();
    verify->add_option("--cache", v_cache, "directory for resumable graph caches");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;  // help exits 0, any usage problem exits 2
    }

    try {
        if (*hull_cmd) {
            int d = 0;
            auto pts = parse_points_json(read_file(hull_input), d);
            (void)hull_canonicalize;  // hull always canonicalizes a point set
            std::cout << polytope_to_json(convex_hull(pts, d)) << "\n";
        } else if (*moves_cmd) {
            Polytope p = parse_polytope_json(read_file(moves_input), moves_canon);
            if (list_insertable) {
                if (moves_box < 1) {
                    std::cerr << "error: --list-insertable needs --box\n";
                    return 2;
                }
                std::cout << points_json(insertable_points(p, moves_box)) << "\n";
            }
            if (list_deletable) std::cout << points_json(deletable_vertices(p)) << "\n";
            if (cells2d) {
                std::string out = "[";
                auto cells = insertable_cells_2d(p);
                for (std::size_t i = 0; i < cells.size(); ++i) {
                    const auto& c = cells[i];
                    if (i) out += ',';
                    out += "{\"edge\":[" + point_to_json(c.edge_a) + "," + point_to_json(c.edge_b) +
                           "],\"kind\":\"";
                    out += c.kind == Cell2D::Kind::Triangle ? "triangle"
                           : c.kind == Cell2D::Kind::Strip  ? "strip"
                                                            : "wedge";
                    out += "\",\"bounded\":";
                    out += c.bounded ? "true" : "false";
                    out += ",\"lattice_free\":";
                    out += cell_has_lattice_point(c) ? "false" : "true";
                    out += "}";
                }
                std::cout << out << "]\n";
            }
        } else if (*corner_cmd) {
            std::cout << polytope_to_json(corner_simplex(c_dim, c_box)) << "\n";
        } else if (*pn_cmd) {
            std::cout << polytope_to_json(pn_polygon(c_n)) << "\n";
        } else if (*es_cmd) {
            std::cout << polytope_to_json(empty_simplex(c_k)) << "\n";
        } else if (*sat_cmd) {
            std::cout << polytope_to_json(saturating_polytope(c_dim, c_k)) << "\n";
        } else if (*prod_cmd) {
            Polytope a = parse_polytope_json(read_file(product_files[0]));
            Polytope b = parse_polytope_json(read_file(product_files[1]));
            std::cout << polytope_to_json(cartesian_product(a, b)) << "\n";
        } else if (*stc_cmd) {
            Polytope s = parse_polytope_json(read_file(path_input));
            std::cout << trace_to_json(simplex_to_corner_path(s, path_box)) << "\n";
        } else if (*pent_cmd) {
            Polytope p = parse_polytope_json(read_file(pent_input));
            MoveTrace t = flatten_pentagon(p);
            Polytope flat = replay_trace(t);
            MoveTrace t2 = make_strongly_flat(flat);
            Polytope strong = replay_trace(t2);
            MoveTrace t3 = shear_to_oblique(strong);
            t.moves.insert(t.moves.end(), t2.moves.begin(), t2.moves.end());
            t.moves.insert(t.moves.end(), t3.moves.begin(), t3.moves.end());
            std::cout << trace_to_json(t) << "\n";
        } else if (*explore) {
            VertexFilter filter = parse_filter(e_filter);
            MoveGraph g = bfs_closure(corner_simplex(e_dim, e_box), e_box, filter);
            if (!e_out.empty()) write_file(e_out, export_jsonl(g));
            if (!e_dot.empty()) write_file(e_dot, export_dot(g));
            if (e_components) {
                auto comps = connected_components(g);
                std::cout << comps.size() << (comps.size() == 1 ? " component, " : " components, ")
                          << g.node_count() << " nodes\n";
            }
            if (e_dist.size() == 2) {
                Polytope a = parse_polytope_json(read_file(e_dist[0]));
                Polytope b = parse_polytope_json(read_file(e_dist[1]));
                auto dist = bfs_distance(g, canonical_key(a), canonical_key(b));
                if (dist) std::cout << *dist << "\n";
                else std::cout << "unreachable\n";
            }
        } else if (*sample) {
            Histogram h = run_chain(s_dim, s_box, s_steps, s_burnin, s_seed);
            std::string csv = histogram_to_csv(h);
            if (!s_report.empty()) write_file(s_report, csv);
            else std::cout << csv;
        } else if (*verify) {
            if (!is_verify_suite(v_suite)) {
                std::cerr << "error: unknown suite '" << v_suite << "'. Available:";
                for (const auto& n : verify_suite_names()) std::cerr << " " << n;
                std::cerr << "\n";
                return 2;
            }
            std::cerr << "running suite " << v_suite << "...\n";
            VerifyReport r = run_suite(v_suite, v_cache);
            std::cout << report_table(r);
            std::cout << report_json(r) << "\n";
            return r.passed() ? 0 : 1;
        }
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
