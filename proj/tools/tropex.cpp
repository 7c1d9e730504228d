#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "tropex/json_io.hpp"
#include "tropex/parallel.hpp"

using namespace tropex;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInternal = 1;
constexpr int kExitInvalid = 2;
constexpr int kExitUsage = 64;

json read_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::ParseError, "cannot open " + path);
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw Error(ErrorCode::ParseError, path + ": " + e.what());
    }
    return j;
}

void write_json(const std::string& path, const json& j) {
    if (path.empty()) return;
    std::ofstream out(path);
    if (!out) throw Error(ErrorCode::ParseError, "cannot open " + path + " for writing");
    out << j.dump(2) << "\n";
}

bool is_validation_error(ErrorCode c) {
    switch (c) {
        case ErrorCode::InternalError:
            return false;
        default:
            return true;
    }
}

struct Options {
    std::string fan, graph, curve, poly, a, b, family, in, out;
    std::string ray_name;
    int ray = -1;
    int d = 1;
    int threads = 1;
    size_t budget = 10000;
    bool barycentric = false;
};

int run_refine(const Options& opt) {
    ConeComplex fa = complex_from_json(read_json(opt.a));
    ConeComplex fb = complex_from_json(read_json(opt.b));
    ConeComplex r = common_refinement(fa, fb);
    write_json(opt.out, to_json(r));
    std::cout << "refine: " << maximal_cone_indices(r).size() << " maximal cones, "
              << complex_rays(r).size() << " rays\n";
    return kExitOk;
}

int run_star(const Options& opt) {
    ConeComplex fan = complex_from_json(read_json(opt.fan));
    ConeComplex star = opt.ray_name.empty()
                           ? star_of_ray(fan, opt.ray)
                           : star_of_ray(fan, fan.ray_names.at(opt.ray_name));
    write_json(opt.out, to_json(star));
    std::cout << "star: ambient " << star.ambient_dim << ", "
              << maximal_cone_indices(star).size() << " maximal cones\n";
    return kExitOk;
}

int run_minimize(const Options& opt) {
    ConeComplex fan = complex_from_json(read_json(opt.fan));
    EmbeddedOneComplex e = embedded_from_json(read_json(opt.graph));
    EmbeddedOneComplex m = minimal_structure(e, fan);
    write_json(opt.out, to_json(m));
    std::cout << "minimize: " << m.positions.size() << " vertices, " << m.type.edges.size()
              << " edges, " << m.type.rays.size() << " rays\n";
    return kExitOk;
}

int run_conify(const Options& opt) {
    ConeComplex fan = complex_from_json(read_json(opt.fan));
    EmbeddedOneComplex e = embedded_from_json(read_json(opt.graph));
    ConeComplex c = cone_over(e, fan);
    write_json(opt.out, to_json(c));
    std::cout << "conify: " << c.cones.size() << " cones in ambient " << c.ambient_dim << "\n";
    return kExitOk;
}

int run_dilation(const Options& opt) {
    ConeComplex fan = complex_from_json(read_json(opt.fan));
    EmbeddedOneComplex e = embedded_from_json(read_json(opt.graph));
    Int b = minimal_dilation(e, fan);
    json out;
    out["$schema"] = "tropex/dilation.schema.json";
    out["b"] = to_json(b);
    write_json(opt.out, out);
    std::cout << "dilation: b = " << b.get_str() << "\n";
    return kExitOk;
}

int run_tropicalize(const Options& opt) {
    ConeComplex fan = complex_from_json(read_json(opt.fan));
    TropicalPolynomial p = poly_from_json(read_json(opt.poly));
    WeightedOneComplex w = tropicalize_hypersurface(p, fan);
    write_json(opt.out, to_json(w));
    std::cout << "tropicalize: " << w.base.positions.size() << " vertices, "
              << w.base.type.edges.size() << " edges, " << w.base.type.rays.size() << " rays\n";
    return kExitOk;
}

int run_balance(const Options& opt) {
    WeightedOneComplex w = weighted_from_json(read_json(opt.curve));
    BalanceReport rep = check_balancing(w);
    json out;
    out["$schema"] = "tropex/balance.schema.json";
    out["balanced"] = rep.balanced();
    json defects = json::array();
    for (const auto& d : rep.defects) {
        json jd;
        jd["vertex"] = d.vertex;
        jd["defect"] = to_json(d.defect);
        defects.push_back(jd);
    }
    out["defects"] = defects;
    write_json(opt.out, out);
    std::cout << "balance: " << (rep.balanced() ? "balanced" : "defective") << ", "
              << rep.defects.size() << " defect vertices\n";
    return kExitOk;
}

int run_limit(const Options& opt) {
    ConeComplex fan = complex_from_json(read_json(opt.fan));
    EmbeddedOneComplex e = embedded_from_json(read_json(opt.graph));
    LimitResult lr = limit_expansion(e, fan);
    write_json(opt.out, to_json(lr));
    std::cout << "limit: b = " << lr.base_change_order.get_str() << ", "
              << lr.expansion.components.size() << " components, "
              << lr.expansion.double_divisors.size() << " double divisors, "
              << lr.expansion.relative_divisors.size() << " relative divisors\n";
    return kExitOk;
}

int run_expand(const Options& opt) {
    ConeComplex fan = complex_from_json(read_json(opt.fan));
    EmbeddedOneComplex e = embedded_from_json(read_json(opt.graph));
    ExpansionDualComplex dc = dual_complex(cone_over(e, fan), fan);
    write_json(opt.out, to_json(dc));
    std::cout << "expand: " << dc.components.size() << " components, "
              << dc.double_divisors.size() << " double divisors, "
              << dc.relative_divisors.size() << " relative divisors\n";
    return kExitOk;
}

int run_xg(const Options& opt) {
    ConeComplex fan = complex_from_json(read_json(opt.fan));
    EmbeddedOneComplex e = embedded_from_json(read_json(opt.graph));
    XGCone x = build_xg(e.type, fan);
    write_json(opt.out, to_json(x));
    std::cout << "xg: dim " << x.dim << ", " << x.cone.rays.size() << " rays\n";
    return kExitOk;
}

int run_surjections(const Options& opt) {
    ConeComplex fan = complex_from_json(read_json(opt.fan));
    EmbeddedOneComplex e = embedded_from_json(read_json(opt.graph));
    XGCone x = build_xg(e.type, fan);
    SurjectionEnumeration en = enumerate_surjections(e.type, x, fan, opt.budget);
    write_json(opt.out, to_json(en));
    std::cout << "surjections: " << en.types.size() << " types over " << en.cells
              << " cells\n";
    return kExitOk;
}

int run_modspace(const Options& opt) {
    ConeComplex fan = complex_from_json(read_json(opt.fan));
    json fam = read_json(opt.family);
    std::vector<FragmentInput> inputs;
    for (size_t i = 0; i < fam.at("graphs").size(); ++i) {
        FragmentInput in;
        in.graph = embedded_from_json(fam.at("graphs").at(i)).type;
        if (fam.contains("subdivisions") && !fam.at("subdivisions").at(i).is_null())
            in.subdivision = complex_from_json(fam.at("subdivisions").at(i));
        inputs.push_back(std::move(in));
    }
    ConeSpaceFragment frag = assemble_fragment(inputs, fan, opt.barycentric, opt.budget);
    write_json(opt.out, to_json(frag));
    std::cout << "modspace: " << frag.types.size() << " types, " << frag.cones.size()
              << " cones, " << frag.arrows.size() << " arrows\n";
    return kExitOk;
}

int run_secondary(const Options& opt) {
    SecondaryFanReport rep = enumerate_secondary_fan(opt.d, opt.budget, opt.threads);
    write_json(opt.out, to_json(rep, opt.d));
    std::cout << "secondary: d = " << opt.d << ", " << rep.count << " maximal cones"
              << (rep.covers ? ", covers" : ", gap") << (rep.pairwise_faces ? ", fan" : ", not a fan")
              << "\n";
    return kExitOk;
}

int run_validate(const Options& opt) {
    json j = read_json(opt.in);
    std::string schema = j.value("$schema", "");
    auto fan_arg = [&]() {
        if (opt.fan.empty())
            throw Error(ErrorCode::ParseError, "this input needs --fan for validation");
        return complex_from_json(read_json(opt.fan));
    };
    if (schema == "tropex/fan.schema.json") {
        complex_from_json(j);
        std::cout << "validate: fan ok\n";
    } else if (schema == "tropex/graph.schema.json" || schema == "tropex/curve.schema.json") {
        EmbeddedOneComplex e = embedded_from_json(j);
        if (e.positions.empty() && !e.type.vertices.empty()) {
            validate_combinatorial(e.type, fan_arg());
            std::cout << "validate: combinatorial graph ok\n";
        } else {
            auto rep = validate_embedded(e, fan_arg());
            if (!rep.ok()) {
                for (const auto& v : rep.violations)
                    std::cout << "violation[" << v.kind << "]: " << v.detail << "\n";
                return kExitInvalid;
            }
            if (schema == "tropex/curve.schema.json") weighted_from_json(j);
            std::cout << "validate: graph ok\n";
        }
    } else if (schema == "tropex/poly.schema.json") {
        poly_from_json(j);
        std::cout << "validate: polynomial ok\n";
    } else if (schema == "tropex/expansion.schema.json") {
        ExpansionDualComplex e = expansion_from_json(j);
        auto rep = validate_expansion(e, fan_arg());
        if (!rep.ok()) {
            for (const auto& v : rep.violations)
                std::cout << "violation[" << v.kind << "]: " << v.detail << "\n";
            return kExitInvalid;
        }
        std::cout << "validate: expansion ok\n";
    } else if (schema == "tropex/limit.schema.json") {
        embedded_from_json(j.at("minimal_complex"));
        complex_from_json(j.at("cone"));
        expansion_from_json(j.at("expansion"));
        int_from_json(j.at("base_change_order"));
        std::cout << "validate: limit ok\n";
    } else if (schema == "tropex/subdivision.schema.json") {
        RegularSubdivision s;
        s.d = j.at("d").get<int>();
        s.points = simplex_points(s.d);
        for (const auto& c : j.at("cells")) s.cells.push_back(c.get<std::vector<int>>());
        s.witness_heights = qvec_from_json(j.at("heights"));
        secondary_cone(s);
        std::cout << "validate: subdivision ok\n";
    } else if (schema == "tropex/secondary.schema.json" ||
               schema == "tropex/surjections.schema.json" ||
               schema == "tropex/fragment.schema.json" ||
               schema == "tropex/balance.schema.json" ||
               schema == "tropex/dilation.schema.json" || schema == "tropex/xg.schema.json") {
        std::cout << "validate: report ok\n";  // structural reports parse-check only
    } else {
        throw Error(ErrorCode::ParseError, "unknown $schema: " + schema);
    }
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"tropex: exact polyhedral computations for tropical expansions"};
    app.require_subcommand(1);
    Options opt;
    app.add_option("--threads", opt.threads, "worker thread bound for enumeration commands");

    auto add_out = [&](CLI::App* cmd) { cmd->add_option("--out", opt.out, "output JSON path"); };

    auto* refine = app.add_subcommand("refine", "common refinement of two fans");
    refine->add_option("--a", opt.a)->required();
    refine->add_option("--b", opt.b)->required();
    add_out(refine);

    auto* star = app.add_subcommand("star", "star of a ray, as a quotient fan");
    star->add_option("--fan", opt.fan)->required();
    star->add_option("--ray", opt.ray);
    star->add_option("--ray-name", opt.ray_name);
    add_out(star);

    auto* minimize = app.add_subcommand("minimize", "minimal polyhedral structure of a graph");
    minimize->add_option("--graph", opt.graph)->required();
    minimize->add_option("--fan", opt.fan)->required();
    add_out(minimize);

    auto* conify = app.add_subcommand("conify", "cone over an embedded 1-complex");
    conify->add_option("--graph", opt.graph)->required();
    conify->add_option("--fan", opt.fan)->required();
    add_out(conify);

    auto* dilation = app.add_subcommand("dilation", "minimal integral dilation");
    dilation->add_option("--graph", opt.graph)->required();
    dilation->add_option("--fan", opt.fan)->required();
    add_out(dilation);

    auto* trop = app.add_subcommand("tropicalize", "tropical plane curve of a polynomial");
    trop->add_option("--poly", opt.poly)->required();
    trop->add_option("--fan", opt.fan)->required();
    add_out(trop);

    auto* balance = app.add_subcommand("balance", "per-vertex balancing defects");
    balance->add_option("--curve", opt.curve)->required();
    add_out(balance);

    auto* limit = app.add_subcommand("limit", "canonical flat-limit data of a graph");
    limit->add_option("--graph", opt.graph)->required();
    limit->add_option("--fan", opt.fan)->required();
    add_out(limit);

    auto* expand = app.add_subcommand("expand", "expansion dual complex of a graph");
    expand->add_option("--graph", opt.graph)->required();
    expand->add_option("--fan", opt.fan)->required();
    add_out(expand);

    auto* xg = app.add_subcommand("xg", "realization cone of a combinatorial type");
    xg->add_option("--graph", opt.graph)->required();
    xg->add_option("--fan", opt.fan)->required();
    add_out(xg);

    auto* surj = app.add_subcommand("surjections", "surjection types of a combinatorial type");
    surj->add_option("--graph", opt.graph)->required();
    surj->add_option("--fan", opt.fan)->required();
    surj->add_option("--budget", opt.budget);
    add_out(surj);

    auto* mod = app.add_subcommand("modspace", "assemble a cone-space fragment");
    mod->add_option("--family", opt.family)->required();
    mod->add_option("--fan", opt.fan)->required();
    mod->add_flag("--barycentric", opt.barycentric);
    mod->add_option("--budget", opt.budget);
    add_out(mod);

    auto* secondary = app.add_subcommand("secondary", "secondary fan of the dilated simplex");
    secondary->add_option("--d", opt.d)->required();
    secondary->add_option("--budget", opt.budget);
    add_out(secondary);
    secondary->add_option("--report", opt.out, "alias for --out");

    auto* validate = app.add_subcommand("validate", "validate a tropex JSON file");
    validate->add_option("--in", opt.in)->required();
    validate->add_option("--fan", opt.fan);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (refine->parsed()) return run_refine(opt);
        if (star->parsed()) return run_star(opt);
        if (minimize->parsed()) return run_minimize(opt);
        if (conify->parsed()) return run_conify(opt);
        if (dilation->parsed()) return run_dilation(opt);
        if (trop->parsed()) return run_tropicalize(opt);
        if (balance->parsed()) return run_balance(opt);
        if (limit->parsed()) return run_limit(opt);
        if (expand->parsed()) return run_expand(opt);
        if (xg->parsed()) return run_xg(opt);
        if (surj->parsed()) return run_surjections(opt);
        if (mod->parsed()) return run_modspace(opt);
        if (secondary->parsed()) return run_secondary(opt);
        if (validate->parsed()) return run_validate(opt);
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return is_validation_error(e.code()) ? kExitInvalid : kExitInternal;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return kExitInternal;
    }
    return kExitUsage;
}
