#include <CLI11.hpp>
#include <atomic>
#include <chrono>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <json.hpp>

#include "diskrig/errors.hpp"
#include "diskrig/generators.hpp"
#include "diskrig/io.hpp"
#include "diskrig/jamming.hpp"
#include "diskrig/manifold.hpp"
#include "diskrig/packing.hpp"
#include "diskrig/rigidity.hpp"
#include "diskrig/sparsity.hpp"
#include "diskrig/svg.hpp"

namespace {

constexpr const char* kVersion = "0.1.0";

using namespace diskrig;

struct GlobalOptions {
    std::uint64_t seed = 0;
    double tol_contact = 1e-9;
    double tol_rank = 1e-8;
    int jobs = 1;
    std::string out;

    Tolerances tolerances() const { return Tolerances{tol_contact, tol_rank}; }
};

void add_global_flags(CLI::App* cmd, GlobalOptions& opts) {
    cmd->set_help_flag("--help", "print this help");
    cmd->add_option("--seed", opts.seed, "RNG seed");
    cmd->add_option("--tol-contact", opts.tol_contact, "relative contact tolerance");
    cmd->add_option("--tol-rank", opts.tol_rank, "relative SVD rank tolerance");
    cmd->add_option("--jobs", opts.jobs, "parallel workers for batch inputs");
    cmd->add_option("--out", opts.out, "output path");
}

std::string json_escape(const std::string& s) {
    std::string out;
    out.reserve(s.size() + 2);
    for (char c : s) {
        switch (c) {
            case '"': out += "\\\""; break;
            case '\\': out += "\\\\"; break;
            case '\n': out += "\\n"; break;
            case '\t': out += "\\t"; break;
            default:
                if (static_cast<unsigned char>(c) < 0x20) {
                    char buf[8];
                    std::snprintf(buf, sizeof(buf), "\\u%04x", c);
                    out += buf;
                } else {
                    out += c;
                }
        }
    }
    return out;
}

void write_text_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(msg("cannot open ", path, " for writing"));
    out << text;
}

using Flags = std::vector<std::pair<std::string, std::string>>;

void write_manifest(const std::string& subcommand, const Flags& flags, std::uint64_t seed,
                    const std::vector<std::string>& inputs, const std::string& output,
                    std::chrono::steady_clock::time_point start) {
    const auto elapsed = std::chrono::steady_clock::now() - start;
    const auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(elapsed).count();

    std::ostringstream out;
    out << "{\n  \"subcommand\": \"" << json_escape(subcommand) << "\",\n";
    out << "  \"version\": \"" << kVersion << "\",\n";
    out << "  \"seed\": " << seed << ",\n";
    out << "  \"flags\": {";
    for (size_t k = 0; k < flags.size(); ++k) {
        if (k > 0) out << ", ";
        out << "\"" << json_escape(flags[k].first) << "\": \"" << json_escape(flags[k].second)
            << "\"";
    }
    out << "},\n  \"input\": [";
    for (size_t k = 0; k < inputs.size(); ++k) {
        if (k > 0) out << ", ";
        out << "\"" << json_escape(inputs[k]) << "\"";
    }
    out << "],\n  \"output\": ";
    if (output.empty()) {
        out << "null";
    } else {
        out << "\"" << json_escape(output) << "\"";
    }
    out << ",\n  \"duration_ms\": " << ms << "\n}\n";

    const std::string path = output.empty() ? ("diskrig-" + subcommand + ".manifest.json")
                                            : (output + ".manifest.json");
    write_text_file(path, out.str());
}

std::string replace_extension(const std::string& path, const std::string& ext) {
    const size_t slash = path.find_last_of('/');
    const size_t dot = path.find_last_of('.');
    if (dot == std::string::npos || (slash != std::string::npos && dot < slash)) {
        return path + ext;
    }
    return path.substr(0, dot) + ext;
}

// ---------------------------------------------------------------- generate

struct GenerateOptions {
    GlobalOptions global;
    std::string kind;
    int n = 10;
    int rings = 1;
    int interior = 1;
};

int cmd_generate(const GenerateOptions& opts) {
    const auto start = std::chrono::steady_clock::now();
    const Tolerances tol = opts.global.tolerances();
    generators::GeneratorConfig config;
    config.seed = opts.global.seed;
    config.n = opts.n;

    DiskPacking packing;
    std::optional<std::array<int, 3>> boundary;
    if (opts.kind == "sequential") {
        packing = generators::sequential_packing(config, tol).packing;
    } else if (opts.kind == "hex") {
        packing = generators::hexagonal_patch(opts.rings, 1.0);
    } else if (opts.kind == "chain") {
        if (opts.n < 2) throw Error("chain needs --n >= 2");
        for (int i = 0; i < opts.n; ++i) {
            packing.centers.emplace_back(2.0 * i, 0.0);
            packing.radii.push_back(1.0);
        }
    } else if (opts.kind == "tricusp") {
        const TriCuspPacking tp = generators::tri_cusp_packing(config, opts.interior, tol);
        packing = tp.packing;
        boundary = tp.boundary;
    } else if (opts.kind == "fig5a") {
        const TriCuspPacking tp = generators::fig5a_packing(config, tol);
        packing = tp.packing;
        boundary = tp.boundary;
    } else if (opts.kind == "fig5b") {
        const TriCuspPacking tp = generators::fig5b_packing(config, tol);
        packing = tp.packing;
        boundary = tp.boundary;
    } else {
        throw CLI::ValidationError("--kind", "unknown kind " + opts.kind);
    }

    const ContactGraph graph = contact_graph(packing, tol);
    const std::string out = opts.global.out.empty() ? (opts.kind + ".json") : opts.global.out;
    save_packing(out, packing, boundary);
    std::cout << "{\"path\": \"" << json_escape(out) << "\", \"n\": " << packing.size()
              << ", \"m\": " << graph.edge_count() << "}\n";

    Flags flags{{"kind", opts.kind},
                {"n", std::to_string(opts.n)},
                {"rings", std::to_string(opts.rings)},
                {"interior", std::to_string(opts.interior)},
                {"tol-contact", format_double(opts.global.tol_contact)},
                {"tol-rank", format_double(opts.global.tol_rank)}};
    write_manifest("generate", flags, opts.global.seed, {}, out, start);
    return 0;
}

// ----------------------------------------------------------------- analyze

struct AnalyzeOptions {
    GlobalOptions global;
    std::vector<std::string> inputs;
    bool dump_matrix = false;
};

std::string analyze_one(const std::string& path, const AnalyzeOptions& opts) {
    const Tolerances tol = opts.global.tolerances();
    const PackingFile file = load_packing(path);
    const DiskPacking& packing = file.packing;
    const int n = packing.size();

    const ContactGraph graph = contact_graph(packing, tol);
    const int m = graph.edge_count();
    const auto sparsity = combinatorics::pebble_game_2_3(graph);
    const bool planar = combinatorics::embedding_is_planar(packing, graph);

    const rigidity::ConstraintJacobian jac = rigidity::build_jacobian(packing, graph, tol);
    Eigen::VectorXd sv;
    if (m > 0) {
        sv = jac.M.jacobiSvd().singularValues();
    }
    const int rank_m = (m > 0) ? rigidity::svd_rank(sv, tol.rank) : 0;
    const rigidity::FlexSpace space = rigidity::flex_space(packing, graph, tol);
    const int fiber = space.kernel_dim;

    std::string verdict;
    if (m > 2 * n - 3 || fiber != 2 * n - m) {
        verdict = "non-generic-suspect";
    } else if (space.nontrivial_dim == 0) {
        verdict = "rigid";
    } else {
        verdict = "flexible";
    }

    if (opts.dump_matrix) {
        std::ostringstream csv;
        for (int r = 0; r < jac.m; ++r) {
            for (int c = 0; c < 3 * jac.n; ++c) {
                if (c > 0) csv << ",";
                csv << format_double(jac.M(r, c));
            }
            csv << "\n";
        }
        write_text_file(replace_extension(path, ".matrix.csv"), csv.str());
    }

    std::ostringstream out;
    out << "{\"input\": \"" << json_escape(path) << "\", \"n\": " << n << ", \"m\": " << m
        << ", \"laman_sparse\": " << (sparsity.is_laman_sparse ? "true" : "false")
        << ", \"laman_graph\": " << (sparsity.is_laman_graph ? "true" : "false")
        << ", \"planar_embedding\": " << (planar ? "true" : "false") << ", \"rank_M\": " << rank_m
        << ", \"flex_dim_nontrivial\": " << space.nontrivial_dim << ", \"fiber_dim\": " << fiber
        << ", \"verdict\": \"" << verdict << "\"}";
    return out.str();
}

int cmd_analyze(const AnalyzeOptions& opts) {
    const auto start = std::chrono::steady_clock::now();
    if (!opts.global.out.empty() && opts.inputs.size() != 1) {
        throw CLI::ValidationError("--out", "needs exactly one input");
    }

    std::vector<std::string> results(opts.inputs.size());
    std::vector<std::exception_ptr> errors(opts.inputs.size());
    const int jobs = std::max(1, std::min<int>(opts.global.jobs,
                                               static_cast<int>(opts.inputs.size())));
    if (jobs <= 1) {
        for (size_t k = 0; k < opts.inputs.size(); ++k) {
            results[k] = analyze_one(opts.inputs[k], opts);
        }
    } else {
        std::atomic<size_t> next{0};
        std::vector<std::thread> pool;
        for (int w = 0; w < jobs; ++w) {
            pool.emplace_back([&]() {
                for (;;) {
                    const size_t k = next.fetch_add(1);
                    if (k >= opts.inputs.size()) return;
                    try {
                        results[k] = analyze_one(opts.inputs[k], opts);
                    } catch (...) {
                        errors[k] = std::current_exception();
                    }
                }
            });
        }
        for (auto& t : pool) t.join();
        for (const auto& e : errors) {
            if (e) std::rethrow_exception(e);
        }
    }

    std::ostringstream joined;
    for (const auto& line : results) joined << line << "\n";
    if (opts.global.out.empty()) {
        std::cout << joined.str();
    } else {
        write_text_file(opts.global.out, joined.str());
    }

    Flags flags{{"jobs", std::to_string(opts.global.jobs)},
                {"dump-matrix", opts.dump_matrix ? "true" : "false"},
                {"tol-contact", format_double(opts.global.tol_contact)},
                {"tol-rank", format_double(opts.global.tol_rank)}};
    write_manifest("analyze", flags, opts.global.seed, opts.inputs, opts.global.out, start);
    return 0;
}

// -------------------------------------------------------------------- flex

struct FlexOptions {
    GlobalOptions global;
    std::string input;
    int steps = 100;
    double h = 1e-3;
};

int cmd_flex(const FlexOptions& opts) {
    const auto start = std::chrono::steady_clock::now();
    const Tolerances tol = opts.global.tolerances();
    const PackingFile file = load_packing(opts.input);
    const ContactGraph graph = contact_graph(file.packing, tol);

    const Flags flags{{"steps", std::to_string(opts.steps)},
                      {"h", format_double(opts.h)},
                      {"tol-contact", format_double(opts.global.tol_contact)},
                      {"tol-rank", format_double(opts.global.tol_rank)}};
    const auto finish = [&](const std::string& text, int code) {
        if (opts.global.out.empty()) {
            std::cout << text;
        } else {
            write_text_file(opts.global.out, text);
        }
        write_manifest("flex", flags, opts.global.seed, {opts.input}, opts.global.out, start);
        return code;
    };

    manifold::FlexTrajectory traj;
    try {
        traj = manifold::follow_flex(file.packing, graph, opts.steps, opts.h, tol);
    } catch (const manifold::TrajectoryAbortError& e) {
        const char* event = "corrector-divergence";
        if (dynamic_cast<const manifold::NewContactError*>(&e) != nullptr) {
            event = "new-contact";
        } else if (dynamic_cast<const manifold::ContactBrokenError*>(&e) != nullptr) {
            event = "contact-broken";
        }
        std::ostringstream out;
        out << "{\"event\": \"" << event << "\", \"step\": " << e.step << ", \"i\": " << e.i
            << ", \"j\": " << e.j << ", \"what\": \"" << json_escape(e.what()) << "\"}\n";
        return finish(out.str(), 4);
    }

    std::ostringstream out;
    for (size_t k = 0; k < traj.states.size(); ++k) {
        const DiskPacking& state = traj.states[k];
        out << "{\"step\": " << k << ", \"residual\": " << format_double(traj.residuals[k])
            << ", \"radii\": [";
        for (int i = 0; i < state.size(); ++i) {
            if (i > 0) out << ", ";
            out << format_double(state.radii[static_cast<size_t>(i)]);
        }
        out << "], \"centers\": [";
        for (int i = 0; i < state.size(); ++i) {
            if (i > 0) out << ", ";
            out << "[" << format_double(state.centers[static_cast<size_t>(i)].x()) << ", "
                << format_double(state.centers[static_cast<size_t>(i)].y()) << "]";
        }
        out << "]}\n";
    }
    return finish(out.str(), 0);
}

// --------------------------------------------------------------------- jam

struct JamOptions {
    GlobalOptions global;
    std::string input;
};

int cmd_jam(const JamOptions& opts) {
    const auto start = std::chrono::steady_clock::now();
    const Tolerances tol = opts.global.tolerances();
    const PackingFile file = load_packing(opts.input);
    TriCuspPacking tp{file.packing, file.boundary.value_or(std::array<int, 3>{0, 1, 2})};
    const ContactGraph graph = contact_graph(tp.packing, tol);

    const jamming::TensegrityVerdict verdict = jamming::tensegrity_flex_lp(tp, graph, tol);
    const jamming::IsostaticReport counts = jamming::isostatic_count_check(tp, graph);
    const jamming::SpineDecomposition spine = jamming::spine_decomposition(tp, graph, tol);

    std::ostringstream out;
    out << "{\"jammed\": " << (verdict.jammed ? "true" : "false") << ", \"m\": " << counts.m
        << ", \"bound\": " << counts.bound << ", \"max_slack\": "
        << format_double(verdict.max_slack) << ", \"witness\": ";
    if (verdict.witness.has_value()) {
        out << "[";
        for (int i = 0; i < tp.packing.size(); ++i) {
            if (i > 0) out << ", ";
            out << "[" << format_double(verdict.witness->p_prime(2 * i)) << ", "
                << format_double(verdict.witness->p_prime(2 * i + 1)) << "]";
        }
        out << "], \"witness_nontrivial_norm\": " << format_double(verdict.witness_nontrivial_norm);
    } else {
        out << "null";
    }
    out << ", \"spine\": [";
    for (size_t k = 0; k < spine.spine.size(); ++k) {
        if (k > 0) out << ", ";
        out << spine.spine[k];
    }
    out << "], \"rattlers\": [";
    for (size_t k = 0; k < spine.rattlers.size(); ++k) {
        if (k > 0) out << ", ";
        out << spine.rattlers[k];
    }
    out << "]}\n";

    if (opts.global.out.empty()) {
        std::cout << out.str();
    } else {
        write_text_file(opts.global.out, out.str());
    }
    const Flags flags{{"tol-contact", format_double(opts.global.tol_contact)},
                      {"tol-rank", format_double(opts.global.tol_rank)}};
    write_manifest("jam", flags, opts.global.seed, {opts.input}, opts.global.out, start);
    return verdict.jammed ? 0 : 4;
}

// ------------------------------------------------------------------ render

struct RenderOptions {
    GlobalOptions global;
    std::string input;
    std::string arrows_path;
    double arrow_scale = 1.0;
    bool no_contacts = false;
    bool no_centers = false;
};

int cmd_render(const RenderOptions& opts) {
    const auto start = std::chrono::steady_clock::now();
    const Tolerances tol = opts.global.tolerances();
    const PackingFile file = load_packing(opts.input);
    const ContactGraph graph = contact_graph(file.packing, tol);

    svg::RenderOptions render;
    render.draw_contacts = !opts.no_contacts;
    render.draw_centers = !opts.no_centers;
    render.arrow_scale = opts.arrow_scale;
    if (!opts.arrows_path.empty()) {
        std::ifstream in(opts.arrows_path, std::ios::binary);
        if (!in) throw ParseError(msg("cannot open ", opts.arrows_path));
        nlohmann::json doc = nlohmann::json::parse(in, nullptr, false);
        if (doc.is_discarded() || !doc.is_array() ||
            static_cast<int>(doc.size()) != 2 * file.packing.size()) {
            throw ParseError(msg(opts.arrows_path, ": expected an array of ",
                                 2 * file.packing.size(), " numbers"));
        }
        render.flex_arrows.resize(doc.size());
        for (size_t k = 0; k < doc.size(); ++k) {
            if (!doc[k].is_number()) throw ParseError("arrow entries must be numbers");
            render.flex_arrows(static_cast<Eigen::Index>(k)) = doc[k].get<double>();
        }
    }

    const std::string out =
        opts.global.out.empty() ? replace_extension(opts.input, ".svg") : opts.global.out;
    write_text_file(out, svg::render_svg(file.packing, graph, render));
    std::cout << "{\"path\": \"" << json_escape(out) << "\"}\n";

    const Flags flags{{"arrows", opts.arrows_path},
                      {"arrow-scale", format_double(opts.arrow_scale)},
                      {"no-contacts", opts.no_contacts ? "true" : "false"},
                      {"no-centers", opts.no_centers ? "true" : "false"}};
    write_manifest("render", flags, opts.global.seed, {opts.input}, out, start);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"planar disk packing rigidity and jamming toolkit"};
    app.require_subcommand(1);

    GenerateOptions gen;
    CLI::App* generate = app.add_subcommand("generate", "construct a packing and write it as JSON");
    add_global_flags(generate, gen.global);
    generate->add_option("--kind", gen.kind, "sequential | hex | chain | tricusp | fig5a | fig5b")
        ->required()
        ->check(CLI::IsMember({"sequential", "hex", "chain", "tricusp", "fig5a", "fig5b"}));
    generate->add_option("--n", gen.n, "disk count (sequential, chain)");
    generate->add_option("--rings", gen.rings, "hex patch rings");
    generate->add_option("--interior", gen.interior, "tri-cusp interior disk count");

    AnalyzeOptions ana;
    CLI::App* analyze = app.add_subcommand("analyze", "contact graph and rigidity report");
    add_global_flags(analyze, ana.global);
    analyze->add_option("inputs", ana.inputs, "packing JSON files")->required();
    analyze->add_flag("--dump-matrix", ana.dump_matrix, "write the constraint Jacobian as CSV");

    FlexOptions flx;
    CLI::App* flex = app.add_subcommand("flex", "follow a nontrivial flex at fixed radii");
    add_global_flags(flex, flx.global);
    flex->add_option("input", flx.input, "packing JSON file")->required();
    flex->add_option("--steps", flx.steps, "continuation steps");
    flex->add_option("--h", flx.h, "predictor step size");

    JamOptions jam;
    CLI::App* jam_cmd = app.add_subcommand("jam", "tri-cusp jamming verdict");
    add_global_flags(jam_cmd, jam.global);
    jam_cmd->add_option("input", jam.input, "packing JSON file with boundary")->required();

    RenderOptions ren;
    CLI::App* render = app.add_subcommand("render", "write an SVG drawing");
    add_global_flags(render, ren.global);
    render->add_option("input", ren.input, "packing JSON file")->required();
    render->add_option("--arrows", ren.arrows_path, "JSON array of 2n flex components");
    render->add_option("--arrow-scale", ren.arrow_scale, "arrow length multiplier");
    render->add_flag("--no-contacts", ren.no_contacts, "skip contact segments");
    render->add_flag("--no-centers", ren.no_centers, "skip center dots");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    }

    try {
        if (generate->parsed()) return cmd_generate(gen);
        if (analyze->parsed()) return cmd_analyze(ana);
        if (flex->parsed()) return cmd_flex(flx);
        if (jam_cmd->parsed()) return cmd_jam(jam);
        if (render->parsed()) return cmd_render(ren);
    } catch (const CLI::ValidationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const PlacementFailureError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
    return 1;
}
