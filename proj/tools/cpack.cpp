#include "cpack/arithmetic.hpp"
#include "cpack/json_io.hpp"
#include "cpack/render.hpp"
#include "cpack/symmetry.hpp"

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#ifndef CPACK_VERSION
#define CPACK_VERSION "0.0.0"
#endif

using namespace cpack;
using nlohmann::json;

namespace {

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw UsageError("cannot read " + path);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

void write_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << text;
    if (!out) throw std::runtime_error("write failed for " + path);
}

void emit(const std::string& path, const std::string& text) {
    if (path.empty() || path == "-")
        std::cout << text;
    else
        write_file(path, text);
}

Window parse_window(const std::string& s) {
    std::vector<Scalar> v;
    std::stringstream in(s);
    std::string part;
    while (std::getline(in, part, ',')) {
        try {
            v.push_back(Scalar::parse(part));
        } catch (const std::exception& e) {
            throw UsageError("--window: " + std::string(e.what()));
        }
    }
    if (v.size() != 4) throw UsageError("--window expects x0,y0,x1,y1");
    Window w{v[0], v[2], v[1], v[3]};
    if (!w.valid()) throw UsageError("--window is empty");
    return w;
}

Scalar parse_scalar(const std::string& flag, const std::string& s) {
    try {
        return Scalar::parse(s);
    } catch (const std::exception& e) {
        throw UsageError(flag + ": " + e.what());
    }
}

struct Common {
    std::string config = "square";
    std::string window = "-8,-8,8,8";
    std::string out;
    std::string manifest;
    std::string scale;
    int threads = 1;
    bool use_float = false;
};

Configuration load_config(const Common& c) {
    Configuration cfg;
    if (std::filesystem::exists(c.config)) {
        try {
            cfg = config_from_json(read_file(c.config));
        } catch (const std::invalid_argument& e) {
            throw UsageError(c.config + ": " + e.what());
        }
    } else {
        try {
            cfg = make_config(c.config);
        } catch (const std::invalid_argument& e) {
            throw UsageError("--config: " + std::string(e.what()));
        }
    }
    if (!c.scale.empty()) {
        Scalar s = parse_scalar("--scale", c.scale);
        if (s.sign() <= 0) throw UsageError("--scale must be positive");
        cfg = scale_config(cfg, Scalar(1) / s);
    }
    if (c.use_float) cfg = cfg.to_float();
    return cfg;
}

struct Run {
    std::string subcommand;
    json parameters = json::object();
    json inputs = json::array();
    json outputs = json::array();
    json summary = json::object();
    std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();

    void write_manifest(const Common& c) const {
        std::string path = c.manifest;
        if (path.empty()) path = (c.out.empty() || c.out == "-") ? subcommand + ".manifest.json" : c.out + ".manifest.json";
        double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        json m{{"subcommand", subcommand}, {"parameters", parameters}, {"inputs", inputs},
               {"outputs", outputs},       {"version", CPACK_VERSION}, {"wall_time_s", secs},
               {"summary", summary}};
        write_file(path, m.dump(2) + "\n");
    }
};

json report_json(const ValidationReport& r) {
    json checks = json::array();
    for (const auto& c : r.checks)
        checks.push_back({{"name", c.name}, {"pass", c.pass}, {"witnesses", c.witnesses}, {"detail", c.detail}});
    return checks;
}

Limits make_limits(const Common& c, int max_height, const std::string& min_radius) {
    Limits l;
    l.max_height = max_height;
    l.min_radius = parse_scalar("--min-radius", min_radius);
    l.window = parse_window(c.window);
    if (c.use_float) {
        l.min_radius = l.min_radius.to_float();
        l.window = {l.window.xmin.to_float(), l.window.xmax.to_float(), l.window.ymin.to_float(), l.window.ymax.to_float()};
    }
    return l;
}

int cmd_generate(const Common& c, const std::string& mode_name, int max_height, const std::string& min_radius,
                 bool skip_validate) {
    Run run{"generate"};
    Configuration cfg = load_config(c);
    Mode mode;
    try {
        mode = mode_from_string(mode_name);
    } catch (const std::invalid_argument& e) {
        throw UsageError("--mode: " + std::string(e.what()));
    }
    Limits lim = make_limits(c, max_height, min_radius);
    run.parameters = {{"config", c.config}, {"mode", mode_name}, {"max_height", max_height},
                      {"min_radius", min_radius}, {"window", c.window}, {"scale", c.scale},
                      {"float", c.use_float}, {"threads", c.threads}, {"validate", !skip_validate}};
    if (!skip_validate) {
        ValidationReport v = validate_base_dual(cfg, lim.window);
        run.summary["validation"] = report_json(v);
        if (!v.pass()) {
            std::cerr << "configuration " << cfg.name << " fails validation on " << lim.window.str() << "\n";
            for (const auto& ch : v.checks)
                if (!ch.pass) std::cerr << "  " << ch.name << ": " << (ch.witnesses.empty() ? "" : ch.witnesses[0]) << "\n";
            run.summary["pass"] = false;
            run.write_manifest(c);
            return 1;
        }
    }
    Packing p = generate(cfg, mode, lim, c.threads);
    emit(c.out, to_json(p));
    run.outputs.push_back(c.out.empty() ? "-" : c.out);
    std::map<int, size_t> by_height;
    for (const auto& pc : p.circles) ++by_height[pc.height];
    json hist = json::object();
    for (auto [h, n] : by_height) hist[std::to_string(h)] = n;
    run.summary["circles"] = p.circles.size();
    run.summary["by_height"] = hist;
    run.summary["pass"] = true;
    run.write_manifest(c);
    std::cerr << "generated " << p.circles.size() << " circles\n";
    return 0;
}

int cmd_validate(const Common& c) {
    Run run{"validate"};
    Configuration cfg = load_config(c);
    Window w = parse_window(c.window);
    run.parameters = {{"config", c.config}, {"window", c.window}, {"scale", c.scale}, {"float", c.use_float}};
    ValidationReport a = validate_base_dual(cfg, w);
    ValidationReport b = check_duality(cfg, w);
    bool pass = a.pass() && b.pass();
    json report{{"config", cfg.name},
                {"window", window_to_json(w)},
                {"kleinian_class", to_string(kleinian_class(cfg))},
                {"base_dual", report_json(a)},
                {"duality", report_json(b)},
                {"pass", pass}};
    emit(c.out, report.dump(2) + "\n");
    run.outputs.push_back(c.out.empty() ? "-" : c.out);
    run.summary["pass"] = pass;
    run.write_manifest(c);
    for (const auto* r : {&a, &b})
        for (const auto& ch : r->checks)
            std::cerr << (ch.pass ? "pass " : "FAIL ") << ch.name
                      << (ch.pass || ch.witnesses.empty() ? "" : "  witness: " + ch.witnesses[0]) << "\n";
    return pass ? 0 : 1;
}

struct CheckFlags {
    std::string packing;
    std::string mode = "packing";
    int max_height = 4;
    std::string min_radius = "1/100";
    std::string relations;
    std::string relation_file;
    int word_length = 4;
    std::string relation_window = "-6,-6,6,6";
    bool integrality = false;
    bool superintegrality = false;
    bool lattice = false;
};

json integrality_json(const IntegralityReport& r) {
    return {{"total", r.total},
            {"integral", r.integral},
            {"non_integral", r.non_integral},
            {"coordinate_integral", r.coordinate_integral},
            {"lattice_tallies", r.lattice_tallies},
            {"witnesses", r.witnesses}};
}

int cmd_check(const Common& c, const CheckFlags& f) {
    Run run{"check"};
    run.parameters = {{"config", c.config},
                      {"packing", f.packing},
                      {"mode", f.mode},
                      {"max_height", f.max_height},
                      {"min_radius", f.min_radius},
                      {"window", c.window},
                      {"scale", c.scale},
                      {"relations", f.relations},
                      {"relation_file", f.relation_file},
                      {"word_length", f.word_length},
                      {"relation_window", f.relation_window},
                      {"integrality", f.integrality},
                      {"superintegrality", f.superintegrality},
                      {"lattice", f.lattice},
                      {"float", c.use_float},
                      {"threads", c.threads}};
    if (!f.integrality && !f.superintegrality && !f.lattice && f.relations.empty() && f.relation_file.empty())
        throw UsageError("check needs --integrality, --superintegrality, --lattice or --relations");
    json report = json::object();
    bool pass = true;

    auto packing_for = [&](Mode mode) {
        if (!f.packing.empty()) {
            run.inputs.push_back(f.packing);
            try {
                Packing p = packing_from_json(read_file(f.packing));
                if (p.mode != mode && mode == Mode::super)
                    throw UsageError("--superintegrality needs a superpacking, got mode " + to_string(p.mode));
                return p;
            } catch (const std::invalid_argument& e) {
                throw UsageError(f.packing + ": " + e.what());
            }
        }
        Mode m = mode;
        if (mode != Mode::super) {
            try {
                m = mode_from_string(f.mode);
            } catch (const std::invalid_argument& e) {
                throw UsageError("--mode: " + std::string(e.what()));
            }
        }
        return generate(load_config(c), m, make_limits(c, f.max_height, f.min_radius), c.threads);
    };
    auto require_exact = [](const Packing& p) {
        for (const auto& pc : p.circles)
            if (!pc.circle.exact()) throw std::invalid_argument("integrality checks need an exact packing; rerun without --float");
    };

    if (f.integrality || f.lattice) {
        Packing p = packing_for(Mode::packing);
        require_exact(p);
        IntegralityReport r = integrality_report(p);
        if (f.integrality) {
            report["integrality"] = integrality_json(r);
            pass = pass && r.pass();
            std::cerr << (r.pass() ? "pass " : "FAIL ") << "integrality: " << r.integral << "/" << r.total
                      << " integral curvatures\n";
        }
        if (f.lattice) {
            size_t members = 0, considered = 0;
            std::vector<std::string> bad;
            for (const auto& pc : p.circles) {
                if (pc.kind == "super") continue;
                ++considered;
                LatticeKind k = pc.kind == "dual" ? LatticeKind::triangular_dual : LatticeKind::triangular_base;
                if (lattice_membership(k, pc.circle))
                    ++members;
                else if (bad.size() < 10)
                    bad.push_back(pc.circle.str());
            }
            bool ok = members == considered;
            report["lattice"] = {{"considered", considered}, {"members", members}, {"witnesses", bad}};
            pass = pass && ok;
            std::cerr << (ok ? "pass " : "FAIL ") << "lattice membership: " << members << "/" << considered << "\n";
        }
    }
    if (f.superintegrality) {
        Packing p = packing_for(Mode::super);
        require_exact(p);
        IntegralityReport r = integrality_report(p);
        report["superintegrality"] = integrality_json(r);
        bool ok = r.pass();
        pass = pass && ok;
        std::cerr << (ok ? "pass " : "FAIL ") << "superintegrality: " << r.integral << "/" << r.total
                  << " integral curvatures, " << r.coordinate_integral << " with integral coordinates\n";
    }

    std::vector<CurvatureRelation> rels;
    if (!f.relations.empty()) {
        if (f.relations == "all") {
            rels = builtin_relations();
        } else {
            std::stringstream in(f.relations);
            std::string name;
            while (std::getline(in, name, ',')) {
                try {
                    rels.push_back(builtin_relation(name));
                } catch (const std::invalid_argument& e) {
                    throw UsageError("--relations: " + std::string(e.what()));
                }
            }
        }
    }
    if (!f.relation_file.empty()) {
        run.inputs.push_back(f.relation_file);
        try {
            rels.push_back(relation_from_json(read_file(f.relation_file)));
        } catch (const std::invalid_argument& e) {
            throw UsageError(f.relation_file + ": " + e.what());
        }
    }
    if (!rels.empty()) {
        Window rw = parse_window(f.relation_window);
        json list = json::array();
        for (const auto& rel : rels) {
            if (rel.instance.empty()) throw UsageError(rel.name + ": relation has no instance circles");
            Common rc = c;
            rc.use_float = false;
            if (!rel.config.empty()) rc.config = rel.config;
            Configuration cfg = load_config(rc);
            std::vector<Circle> inst = rel.instance;
            if (!c.scale.empty()) {
                Scalar s = parse_scalar("--scale", c.scale);
                Configuration one;
                one.base = inst;
                inst = scale_config(one, Scalar(1) / s).base;
            }
            RelationReport r = verify_relation_all_words(cfg, rel, inst, f.word_length, rw, c.threads);
            json wit = json::array();
            for (const auto& w : r.witnesses) {
                json b = json::array();
                for (const auto& x : w.curvatures) b.push_back(x.str());
                wit.push_back({{"word", w.word}, {"curvatures", b}, {"residual", w.residual.str()}});
            }
            list.push_back({{"relation", rel.name},
                            {"config", cfg.name},
                            {"words_checked", r.words_checked},
                            {"max_residual", r.max_residual.str()},
                            {"pass", r.pass()},
                            {"witnesses", wit}});
            pass = pass && r.pass();
            std::cerr << (r.pass() ? "pass " : "FAIL ") << rel.name << ": " << r.words_checked
                      << " words, max residual " << r.max_residual.str() << "\n";
        }
        report["relations"] = list;
    }
    report["pass"] = pass;
    emit(c.out, report.dump(2) + "\n");
    run.outputs.push_back(c.out.empty() ? "-" : c.out);
    run.summary["pass"] = pass;
    run.write_manifest(c);
    return pass ? 0 : 1;
}

int cmd_symmetry(const Common& c) {
    Run run{"symmetry"};
    run.parameters = {{"config", c.config}, {"scale", c.scale}};
    Configuration cfg = load_config(c);
    Classification cl = classify_wallpaper(cfg);
    Discovery d = discover_symmetries(cfg);
    std::string shown = cl.group == "finite" ? "finite (not wallpaper)" : cl.group;
    bool agrees = !cl.group.empty() && cl.group == cfg.declared_group && cl.failures.empty() && d.undeclared.empty();
    json undeclared = json::array();
    for (const auto& g : d.undeclared) undeclared.push_back(g.str());
    json report{{"config", cfg.name},
                {"group", cl.group},
                {"declared_group", cfg.declared_group},
                {"signature", cl.group == "finite" ? "" : cl.signature.str()},
                {"point_group_order", cl.point_group_order},
                {"failures", cl.failures},
                {"discovered", d.found.size()},
                {"undeclared", undeclared},
                {"pass", agrees}};
    std::cout << (shown.empty() ? "unverified" : shown) << "\n";
    if (!c.out.empty()) {
        write_file(c.out, report.dump(2) + "\n");
        run.outputs.push_back(c.out);
    }
    for (const auto& f : cl.failures) std::cerr << "failure: " << f << "\n";
    for (const auto& g : d.undeclared) std::cerr << "undeclared symmetry: " << g.str() << "\n";
    run.summary = report;
    run.write_manifest(c);
    return agrees ? 0 : 1;
}

struct RenderFlags {
    std::string packing;
    std::string fill = "none";
    double stroke_width = 0.02;
    int width_px = 800, height_px = 800;
    std::string clip;
};

int cmd_render(const Common& c, const RenderFlags& f) {
    Run run{"render"};
    run.parameters = {{"packing", f.packing}, {"config", c.config},     {"window", c.window},
                      {"fill", f.fill},       {"stroke_width", f.stroke_width}, {"width", f.width_px},
                      {"height", f.height_px}, {"clip", f.clip}};
    RenderStyle st;
    try {
        st.fill = fill_mode_from_string(f.fill);
    } catch (const std::invalid_argument& e) {
        throw UsageError("--fill: " + std::string(e.what()));
    }
    if (f.stroke_width <= 0 || f.width_px <= 0 || f.height_px <= 0)
        throw UsageError("stroke width and pixel sizes must be positive");
    st.stroke_width = f.stroke_width;
    st.width_px = f.width_px;
    st.height_px = f.height_px;
    if (!f.clip.empty()) st.clip = parse_window(f.clip);
    std::string svg;
    if (!f.packing.empty()) {
        run.inputs.push_back(f.packing);
        Packing p;
        try {
            p = packing_from_json(read_file(f.packing));
        } catch (const std::invalid_argument& e) {
            throw UsageError(f.packing + ": " + e.what());
        }
        svg = to_svg(p, st);
        run.summary["circles"] = p.circles.size();
    } else {
        svg = to_svg(load_config(c), parse_window(c.window), st);
    }
    emit(c.out, svg);
    run.outputs.push_back(c.out.empty() ? "-" : c.out);
    run.write_manifest(c);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Circle packings from base and dual configurations"};
    app.set_version_flag("--version", std::string(CPACK_VERSION));
    app.require_subcommand(1);

    Common common;
    auto add_common = [&](CLI::App* sub, bool with_window) {
        sub->add_option("--config", common.config, "configuration name or JSON file")->capture_default_str();
        if (with_window) sub->add_option("--window", common.window, "x0,y0,x1,y1")->capture_default_str();
        sub->add_option("--out", common.out, "output path (stdout when omitted)");
        sub->add_option("--manifest", common.manifest, "run manifest path");
        sub->add_option("--scale", common.scale, "multiply all curvatures by this factor");
        sub->add_option("--threads", common.threads, "worker threads")->check(CLI::Range(1, 256))->capture_default_str();
    };

    auto* gen = app.add_subcommand("generate", "enumerate a packing, dual packing or superpacking");
    add_common(gen, true);
    std::string mode = "packing", min_radius = "1/100";
    int max_height = 4;
    bool skip_validate = false, exact_flag = false;
    gen->add_option("--mode", mode, "packing, dual or super")->capture_default_str();
    gen->add_option("--max-height", max_height, "largest word length")->check(CLI::NonNegativeNumber)->capture_default_str();
    gen->add_option("--min-radius", min_radius, "smallest radius kept")->capture_default_str();
    gen->add_flag("--no-validate", skip_validate, "skip the configuration checks");
    auto* fl = gen->add_flag("--float", common.use_float, "floating point arithmetic");
    gen->add_flag("--exact", exact_flag, "exact arithmetic (default)")->excludes(fl);

    auto* val = app.add_subcommand("validate", "check the base/dual configuration axioms on a window");
    add_common(val, true);
    val->add_flag("--float", common.use_float, "floating point arithmetic");

    auto* chk = app.add_subcommand("check", "integrality, lattice membership and curvature relations");
    add_common(chk, true);
    CheckFlags cf;
    chk->add_option("--packing", cf.packing, "packing JSON file instead of --config");
    chk->add_option("--mode", cf.mode, "mode for generated packings")->capture_default_str();
    chk->add_option("--max-height", cf.max_height)->check(CLI::NonNegativeNumber)->capture_default_str();
    chk->add_option("--min-radius", cf.min_radius)->capture_default_str();
    chk->add_option("--relations", cf.relations, "all or a comma separated list of relation names");
    chk->add_option("--relation-file", cf.relation_file, "relation definition in JSON");
    chk->add_option("--word-length", cf.word_length, "longest reduced word")->check(CLI::Range(0, 8))->capture_default_str();
    chk->add_option("--relation-window", cf.relation_window, "window selecting the dual generators")->capture_default_str();
    chk->add_flag("--integrality", cf.integrality, "packing curvatures are integers");
    chk->add_flag("--superintegrality", cf.superintegrality, "superpacking curvatures are integers");
    chk->add_flag("--lattice", cf.lattice, "triangular lattice membership of every circle");
    chk->add_flag("--float", common.use_float, "floating point arithmetic (integrality checks refuse it)");

    auto* sym = app.add_subcommand("symmetry", "verify and classify the configuration symmetry group");
    add_common(sym, false);

    auto* ren = app.add_subcommand("render", "draw a packing or configuration as SVG");
    add_common(ren, true);
    RenderFlags rf;
    ren->add_option("--packing", rf.packing, "packing JSON file; draws --config when omitted");
    ren->add_option("--fill", rf.fill, "none, by-height or by-kind")->capture_default_str();
    ren->add_option("--stroke-width", rf.stroke_width)->capture_default_str();
    ren->add_option("--width", rf.width_px)->capture_default_str();
    ren->add_option("--height", rf.height_px)->capture_default_str();
    ren->add_option("--clip", rf.clip, "x0,y0,x1,y1 drawing window");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (gen->parsed()) return cmd_generate(common, mode, max_height, min_radius, skip_validate);
        if (val->parsed()) return cmd_validate(common);
        if (chk->parsed()) return cmd_check(common, cf);
        if (sym->parsed()) return cmd_symmetry(common);
        if (ren->parsed()) return cmd_render(common, rf);
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 2;
}
