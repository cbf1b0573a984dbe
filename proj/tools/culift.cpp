#include "culift/json_io.hpp"
#include "culift/spectral.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <iostream>

using namespace culift;
using io::json;

namespace {

struct Options {
    std::string format = "text";
    unsigned long long seed = 1;
    int resolution = -1;
    std::string out;
};

int default_resolution(const Options& opt) {
    if (opt.resolution >= 0) return opt.resolution;
    if (const char* env = std::getenv("CULIFT_MAX_RESOLUTION")) {
        int v = std::atoi(env);
        if (v >= 0 && v <= 6) return v;
    }
    return 3;
}

void emit(const Options& opt, const json& j, const std::string& text) {
    if (!opt.out.empty()) io::save_file(opt.out, j);
    if (opt.format == "json") std::cout << j.dump(2) << "\n";
    else std::cout << text << "\n";
}

std::string report_text(const Report& r) {
    std::string s = r.title + "\n";
    for (const auto& c : r.checks)
        s += std::string(c.pass ? "  PASS  " : "  FAIL  ") + c.name + " [claimed: " + c.claimed +
             "; computed: " + c.computed + "]\n";
    s += r.all_pass() ? "all checks pass" : "SOME CHECKS FAILED";
    return s;
}

io::AnyValuation load_valuation(const std::string& path) {
    auto v = io::valuation_from_json(io::load_file(path));
    std::visit(
        [](auto& a) {
            if constexpr (requires { a.validate(); }) a.validate();
        },
        v.v);
    return v;
}

// either a diagonal unitary or a field
struct AnyUnitary {
    bool is_field = false;
    DiagonalUnitary diag;
    UnitaryField field;
};

AnyUnitary load_unitary(const std::string& path) {
    json j = io::load_file(path);
    AnyUnitary u;
    std::string schema = j.value("schema", "");
    if (schema == "unitary-field" || j.contains("tracks")) {
        u.is_field = true;
        u.field = io::field_from_json(j);
    } else {
        u.diag = io::unitary_from_json(j);
    }
    return u;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"culift: Cuntz-semigroup lifting and determinant toolkit"};
    app.require_subcommand(1);
    app.fallthrough();
    Options opt;
    app.add_option("--format", opt.format, "output format: text or json")
        ->check(CLI::IsMember({"text", "json"}));
    app.add_option("--seed", opt.seed, "seed for randomized property trials");

    // validate
    std::string in_path;
    auto* validate = app.add_subcommand("validate", "validate a JSON document");
    validate->add_option("--input", in_path, "document to validate")->required();

    // lift
    auto* lift = app.add_subcommand("lift", "existence constructions");
    lift->require_subcommand(1);
    std::string morphism_path;
    auto* lift_fd = lift->add_subcommand("fd", "finite-dimensional fill-up lift");
    lift_fd->add_option("--morphism", morphism_path, "arc valuation (findim)")->required();
    lift_fd->add_option("--out", opt.out, "output path");
    auto* lift_graph_cmd = lift->add_subcommand("graph", "lift over a metric graph");
    lift_graph_cmd->add_option("--morphism", morphism_path, "arc valuation (graph)")->required();
    lift_graph_cmd->add_option("--resolution", opt.resolution, "lattice resolution n");
    lift_graph_cmd->add_option("--out", opt.out, "output path");

    // cu
    auto* cu = app.add_subcommand("cu", "Cuntz-semigroup computations");
    cu->require_subcommand(1);
    std::string a_path, b_path;
    bool discrete = false;
    auto* cu_of = cu->add_subcommand("of-unitary", "spectral counting valuation");
    cu_of->add_option("--unitary", a_path, "diagonal unitary or field")->required();
    cu_of->add_option("--resolution", opt.resolution, "arc resolution n");
    cu_of->add_option("--out", opt.out, "output path");
    auto* cu_dist = cu->add_subcommand("distance", "Cu metric between valuations");
    cu_dist->add_option("--a", a_path)->required();
    cu_dist->add_option("--b", b_path)->required();
    cu_dist->add_flag("--discrete", discrete, "discrete semimetric dd instead of d");
    auto* cu_cmp = cu->add_subcommand("compare", "compare on Lambda_n");
    cu_cmp->add_option("--a", a_path)->required();
    cu_cmp->add_option("--b", b_path)->required();
    cu_cmp->add_option("--resolution", opt.resolution, "lattice resolution n");
    auto* cu_match = cu->add_subcommand("du-match", "bottleneck matching distance");
    cu_match->add_option("--a", a_path)->required();
    cu_match->add_option("--b", b_path)->required();

    // cauchy
    auto* cauchy = app.add_subcommand("cauchy", "Cauchy sequences of valuations");
    cauchy->require_subcommand(1);
    std::string seq_path, c_str = "4";
    auto* cauchy_check_cmd = cauchy->add_subcommand("check", "geometric consecutive-distance test");
    cauchy_check_cmd->add_option("--sequence", seq_path, "JSON array of findim valuations")
        ->required();
    cauchy_check_cmd->add_option("--c", c_str, "constant C");
    auto* cauchy_limit_cmd = cauchy->add_subcommand("limit", "stabilized limit");
    cauchy_limit_cmd->add_option("--sequence", seq_path)->required();
    cauchy_limit_cmd->add_option("--c", c_str, "constant C");
    cauchy_limit_cmd->add_option("--out", opt.out, "output path");

    // dhs
    auto* dhs_cmd = app.add_subcommand("dhs", "de la Harpe-Skandalis determinant");
    dhs_cmd->require_subcommand(1);
    auto* dhs_det = dhs_cmd->add_subcommand("det", "winding class of a field");
    dhs_det->add_option("--unitary", a_path, "unitary field")->required();
    dhs_det->add_option("--out", opt.out, "output path");
    auto* dhs_cert = dhs_cmd->add_subcommand("certify", "aue obstruction certificate");
    dhs_cert->add_option("--a", a_path)->required();
    dhs_cert->add_option("--b", b_path)->required();
    dhs_cert->add_option("--out", opt.out, "output path");

    // demo
    auto* demo = app.add_subcommand("demo", "worked example reproductions");
    demo->require_subcommand(1);
    int level = 2, kk = 1, ll = 2;
    auto* demo_obs = demo->add_subcommand("obstruction", "truncation-level obstruction");
    demo_obs->add_option("--level", level, "truncation level n")->required();
    demo_obs->add_option("--out", opt.out, "output path");
    auto* demo_js = demo->add_subcommand("jiang-su", "Jiang-Su determinant example");
    demo_js->add_option("--k", kk)->required();
    demo_js->add_option("--l", ll)->required();
    demo_js->add_option("--out", opt.out, "output path");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*validate) {
            json j = io::load_file(in_path);
            std::string schema = j.value("schema", "");
            if (schema == "arc-valuation" || j.contains("codomain")) {
                load_valuation(in_path);
            } else if (schema == "unitary-field" || j.contains("tracks")) {
                io::field_from_json(j);
            } else if (schema == "diagonal-unitary" || j.contains("blocks")) {
                io::unitary_from_json(j);
            } else if (schema == "metric-graph" || j.contains("edges")) {
                io::graph_from_json(j);
            } else if (schema == "step-lsc") {
                io::step_from_json(j);
            } else {
                throw validation_error("unrecognized document schema");
            }
            emit(opt, {{"valid", true}}, "valid");
        } else if (*lift_fd) {
            auto any = load_valuation(morphism_path);
            auto* fd = std::get_if<FinDimValuation>(&any.v);
            if (!fd) throw validation_error("lift fd needs a findim valuation");
            DiagonalUnitary u = fill_up(*fd);
            emit(opt, io::to_json(u), "lift written (" + std::to_string(u.block_count()) + " blocks)");
        } else if (*lift_graph_cmd) {
            auto any = load_valuation(morphism_path);
            auto* gv = std::get_if<GraphValuation>(&any.v);
            if (!gv) throw validation_error("lift graph needs a graph valuation");
            int n = opt.resolution >= 0 ? opt.resolution : gv->resolution();
            LiftResult res = lift_graph(*gv, n);
            emit(opt, io::to_json(res.field),
                 "lift certified on Lambda_" + std::to_string(std::max(0, n - 2)) + " with " +
                     std::to_string(res.cover.pieces.size()) + " pieces");
        } else if (*cu_of) {
            AnyUnitary u = load_unitary(a_path);
            int n = default_resolution(opt);
            if (u.is_field) {
                GraphValuation a = cu_of_unitary(u.field, n);
                emit(opt, io::to_json(a), "graph valuation at resolution " + std::to_string(n));
            } else {
                FinDimValuation a = cu_of_unitary(u.diag, n);
                emit(opt, io::to_json(a), "findim valuation at resolution " + std::to_string(n));
            }
        } else if (*cu_dist) {
            auto any_a = load_valuation(a_path);
            auto any_b = load_valuation(b_path);
            DistanceResult r;
            if (auto* fa = std::get_if<FinDimValuation>(&any_a.v)) {
                auto* fb = std::get_if<FinDimValuation>(&any_b.v);
                if (!fb) throw validation_error("valuations have different codomain kinds");
                r = discrete ? dd_cu(*fa, *fb) : d_cu(*fa, *fb);
            } else if (auto* ga = std::get_if<GraphValuation>(&any_a.v)) {
                auto* gb = std::get_if<GraphValuation>(&any_b.v);
                if (!gb) throw validation_error("valuations have different codomain kinds");
                r = discrete ? dd_cu(*ga, *gb) : d_cu(*ga, *gb);
            } else {
                auto* za = std::get_if<CuZValuation>(&any_a.v);
                auto* zb = std::get_if<CuZValuation>(&any_b.v);
                if (!za || !zb) throw validation_error("valuations have different codomain kinds");
                if (!discrete)
                    throw validation_error("only the discrete semimetric is computed for CuZ");
                r = dd_cu(*za, *zb);
            }
            json j = {{"schema", "distance"},
                      {"metric", discrete ? "dd_cu" : "d_cu"},
                      {"value", r.infinite ? json("inf") : json(r.value.str())},
                      {"exact_agreement", r.exact_agreement},
                      {"at_resolution_cap", r.at_resolution_cap}};
            emit(opt, j, r.str());
        } else if (*cu_cmp) {
            auto any_a = load_valuation(a_path);
            auto any_b = load_valuation(b_path);
            int n = default_resolution(opt);
            bool res;
            if (auto* fa = std::get_if<FinDimValuation>(&any_a.v)) {
                auto* fb = std::get_if<FinDimValuation>(&any_b.v);
                if (!fb) throw validation_error("valuations have different codomain kinds");
                res = compare_on_lambda(*fa, *fb, n);
            } else if (auto* ga = std::get_if<GraphValuation>(&any_a.v)) {
                auto* gb = std::get_if<GraphValuation>(&any_b.v);
                if (!gb) throw validation_error("valuations have different codomain kinds");
                res = compare_on_lambda(*ga, *gb, n);
            } else {
                auto* za = std::get_if<CuZValuation>(&any_a.v);
                auto* zb = std::get_if<CuZValuation>(&any_b.v);
                if (!za || !zb) throw validation_error("valuations have different codomain kinds");
                res = compare_on_lambda(*za, *zb, n);
            }
            emit(opt, {{"compare", res}, {"resolution", n}}, res ? "true" : "false");
        } else if (*cu_match) {
            AnyUnitary ua = load_unitary(a_path);
            AnyUnitary ub = load_unitary(b_path);
            if (ua.is_field || ub.is_field)
                throw validation_error("du-match takes diagonal unitaries");
            Rat r = matching_distance(ua.diag, ub.diag);
            emit(opt, {{"schema", "distance"}, {"metric", "du_match"}, {"value", r.str()}},
                 r.str());
        } else if (*cauchy_check_cmd || *cauchy_limit_cmd) {
            json arr = io::load_file(seq_path);
            if (!arr.is_array()) throw validation_error("sequence file must be a JSON array");
            std::vector<FinDimValuation> seq;
            for (const auto& j : arr) {
                auto any = io::valuation_from_json(j);
                auto* fd = std::get_if<FinDimValuation>(&any.v);
                if (!fd) throw validation_error("cauchy sequences take findim valuations");
                fd->validate();
                seq.push_back(std::move(*fd));
            }
            Rat C = Rat::parse(c_str);
            if (*cauchy_check_cmd) {
                bool ok = cauchy_check(seq, C);
                emit(opt, {{"cauchy", ok}, {"C", C.str()}}, ok ? "true" : "false");
            } else {
                FinDimValuation lim = cauchy_limit(seq, C);
                emit(opt, io::to_json(lim),
                     "limit at resolution " + std::to_string(lim.resolution()));
            }
        } else if (*dhs_det) {
            AnyUnitary u = load_unitary(a_path);
            if (!u.is_field) throw validation_error("dhs det takes a unitary field");
            WindingClass w = dhs(u.field);
            emit(opt, io::to_json(w), "winding class with modulus " + std::to_string(w.modulus));
        } else if (*dhs_cert) {
            AnyUnitary ua = load_unitary(a_path);
            AnyUnitary ub = load_unitary(b_path);
            if (!ua.is_field || !ub.is_field)
                throw validation_error("dhs certify takes unitary fields");
            auto cert = aue_obstruction(ua.field, ub.field);
            emit(opt, io::to_json(cert), cert.str());
        } else if (*demo_obs) {
            Report r = obstruction_demo(level);
            emit(opt, io::to_json(r), report_text(r));
            if (!r.all_pass()) return 1;
        } else if (*demo_js) {
            Report r = jiang_su_demo(kk, ll);
            emit(opt, io::to_json(r), report_text(r));
            if (!r.all_pass()) return 1;
        }
    } catch (const internal_error& e) {
        std::cerr << "internal invariant violation: " << e.what() << "\n";
        return 2;
    } catch (const validation_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
