// Command-line front end: analyze order files, run the census, emit deep-hole
// tables, decompose matrices into triangular factors, render the planar
// fundamental-domain figures, and verify census output against the golden
// reference tables.
//
// Exit codes: 0 success, 1 mathematical anomaly or verification mismatch,
// 2 usage error.

#include <CLI11.hpp>

#include <qorder/io.hpp>
#include <qorder/render.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>

namespace fs = std::filesystem;
using namespace qorder;

namespace {

fs::path default_out_dir() {
    if (const char* env = std::getenv("QORDER_OUT")) return env;
    return ".";
}

int run_analyze(const std::string& order_path, const std::string& out_path) {
    OrderLattice O = parse_order_file(order_path);
    auto cls = classify_order(O);
    auto prof = successive_minima(euclidean_target_lattice(O));
    ordered_json rep;
    rep["order"] = order_to_json(O);
    rep["classification"] = order_class_name(cls.cls);
    rep["mu_sq"] = rat_str(cls.holes.covering_radius_sq);
    ordered_json lam = ordered_json::array();
    for (auto& l : prof.lambdas_sq) lam.push_back(rat_str(l));
    rep["minima_sq"] = lam;
    rep["reduced_discriminant"] = reduced_discriminant(O).get_str();
    rep["maximal"] = is_maximal(O);
    rep["unit_count"] = unit_group(O).elements.size();
    if (cls.holes.covering_radius_sq == 1) {
        ordered_json holes = ordered_json::array();
        for (auto& h : cls.holes_norm1) {
            ordered_json hv = ordered_json::array();
            for (auto& x : h) hv.push_back(rat_str(x));
            holes.push_back(hv);
        }
        rep["deep_holes"] = holes;
    }
    rep["anomaly"] = cls.anomaly;
    if (cls.anomaly) rep["anomaly_detail"] = cls.anomaly_detail;
    std::string text = rep.dump(2) + "\n";
    if (out_path.empty()) {
        std::cout << text;
    } else {
        std::ofstream(out_path) << text;
    }
    return cls.anomaly ? 1 : 0;
}

struct CensusArgs {
    int dim = 5;
    std::string out_dir;
    std::string format = "csv";
    int workers = 1;
    bool use_store = false;
    long max_disc = 0;
};

std::vector<CensusRecord> run_census_with(const CensusArgs& args) {
    SearchBounds bounds = SearchBounds::defaults(args.dim);
    if (args.max_disc > 0) bounds.max_disc_H = args.max_disc;
    bounds.workers = args.workers;
    std::unique_ptr<DirectoryStore> store;
    if (args.use_store) {
        fs::path dir = fs::path(args.out_dir) / "store";
        store = std::make_unique<DirectoryStore>(dir);
    }
    return run_census(bounds, store.get());
}

int run_census_cmd(const CensusArgs& args) {
    auto recs = run_census_with(args);
    fs::create_directories(args.out_dir);
    fs::path base = fs::path(args.out_dir) / ("census-dim" + std::to_string(args.dim));
    if (args.format == "csv") {
        write_census_csv(recs, (base.string() + ".csv"));
    } else {
        ordered_json arr = ordered_json::array();
        for (auto& r : recs) arr.push_back(record_to_json(r));
        std::ofstream(base.string() + ".json") << arr.dump(2) << "\n";
    }
    int anomalies = 0;
    for (auto& r : recs)
        if (r.anomaly) {
            ++anomalies;
            std::cerr << "anomaly: " << r.anomaly_detail << "\n";
        }
    std::cout << "census dim " << args.dim << ": " << recs.size() << " orders -> " << base.string()
              << "." << args.format << "\n";
    return anomalies ? 1 : 0;
}

int run_holes_cmd(const CensusArgs& args) {
    auto recs = run_census_with(args);
    auto rows = deep_hole_table(recs);
    fs::create_directories(args.out_dir);
    fs::path path = fs::path(args.out_dir) / ("holes-dim" + std::to_string(args.dim) + ".csv");
    write_holes_csv(rows, path.string());
    std::cout << "deep holes dim " << args.dim << ": " << rows.size() << " orders -> "
              << path.string() << "\n";
    return 0;
}

int run_decompose(const std::string& order_path, const std::string& matrix_path, bool to_sl,
                  const std::string& out_path) {
    OrderLattice O = parse_order_file(order_path);
    std::ifstream min(matrix_path);
    if (!min) throw parse_error("cannot open matrix file: " + matrix_path);
    ordered_json jm;
    min >> jm;
    Mat2 M = mat2_from_json(O.alg, jm);
    try {
        DecompositionCertificate cert = decompose(M, O);
        if (to_sl) cert = to_sl_factors(cert, O);
        if (!verify_certificate(M, cert, O)) {
            std::cerr << "internal error: certificate failed verification\n";
            return 1;
        }
        std::string text = certificate_to_json(cert).dump(2) + "\n";
        if (out_path.empty()) std::cout << text;
        else std::ofstream(out_path) << text;
        return 0;
    } catch (const not_semi_euclidean_witness& w) {
        ordered_json err;
        err["error"] = "not-semi-euclidean-witness";
        err["rho"] = elt_to_json(w.rho);
        err["dist_sq"] = rat_str(w.dist_sq);
        std::cerr << err.dump(2) << "\n";
        return 1;
    } catch (const membership_error& e) {
        ordered_json err;
        err["error"] = "membership";
        err["detail"] = e.what();
        std::cerr << err.dump(2) << "\n";
        return 1;
    }
}

int run_render(const std::string& order_path, const std::string& out_path) {
    OrderLattice O = parse_order_file(order_path);
    RenderResult res = render_figures(O);
    std::ofstream(out_path) << res.svg;
    std::cout << "rendered " << out_path << "; uncovered-area-interval=["
              << rat_str(res.uncovered_area_lo) << "," << rat_str(res.uncovered_area_hi) << "]\n";
    return 0;
}

int run_verify(const CensusArgs& args, const std::string& golden_dir) {
    auto recs = run_census_with(args);
    fs::path gdir = golden_dir;
    std::string table = args.dim == 3 ? "table1.csv" : args.dim == 5 ? "table3.csv" : "table2.csv";
    TableDiff diff = verify_tables(recs, load_golden_table((gdir / table).string()));
    bool ok = diff.ok();
    auto dump = [](const char* label, const std::vector<std::string>& items) {
        for (auto& s : items) std::cout << label << ": " << s << "\n";
    };
    dump("missing", diff.missing);
    dump("extra", diff.extra);
    dump("mismatch", diff.mismatched);
    // hole tables exist for dims 4 and 5
    if (args.dim != 3) {
        std::string hole_table = args.dim == 5 ? "table4.csv" : "table5.csv";
        TableDiff hd = verify_hole_tables(recs, load_golden_holes((gdir / hole_table).string()));
        dump("holes-missing", hd.missing);
        dump("holes-extra", hd.extra);
        dump("holes-mismatch", hd.mismatched);
        dump("note", hd.notes);
        ok = ok && hd.ok();
    }
    std::cout << "verify-tables dim " << args.dim << ": " << (ok ? "MATCH" : "MISMATCH") << "\n";
    return ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"exact census and decomposition tool for quaternionic and quadratic orders"};
    app.require_subcommand(1);

    std::string order_path, matrix_path, out_path, golden_dir = "data/golden";
    CensusArgs cargs;
    cargs.out_dir = default_out_dir().string();
    bool to_sl = false;

    auto* analyze = app.add_subcommand("analyze", "classify an order and report its invariants");
    analyze->add_option("order", order_path, "order description file (JSON)")->required();
    analyze->add_option("-o,--out", out_path, "write the JSON report here instead of stdout");

    auto add_census_opts = [&](CLI::App* cmd) {
        cmd->add_option("--dim", cargs.dim, "dimension: 3, 4 or 5")->required();
        cmd->add_option("--out", cargs.out_dir, "output directory");
        cmd->add_option("--format", cargs.format, "csv or json")
            ->check(CLI::IsMember({"csv", "json"}));
        cmd->add_option("--workers", cargs.workers, "worker thread count");
        cmd->add_flag("--store", cargs.use_store, "reuse and update the on-disk record store");
        cmd->add_option("--max-disc", cargs.max_disc, "override the discriminant bound");
    };
    auto* census = app.add_subcommand("census", "enumerate and classify orders");
    add_census_opts(census);
    auto* holes = app.add_subcommand("holes", "emit the deep-hole table");
    add_census_opts(holes);

    auto* decomp = app.add_subcommand("decompose", "factor a matrix into triangular matrices");
    decomp->add_option("--order", order_path, "order description file")->required();
    decomp->add_option("--matrix", matrix_path, "matrix file (JSON)")->required();
    decomp->add_flag("--sl", to_sl, "normalize factors into the twisted special linear group");
    decomp->add_option("-o,--out", out_path, "write the certificate here instead of stdout");

    auto* render = app.add_subcommand("render", "render the planar fundamental-domain figure");
    render->add_option("--order", order_path, "order description file (dim 3)")->required();
    render->add_option("--out", out_path, "output SVG path")->required();

    auto* verify = app.add_subcommand("verify-tables", "compare census output with golden tables");
    add_census_opts(verify);
    verify->add_option("--golden", golden_dir, "directory of golden tables");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (app.got_subcommand(analyze)) return run_analyze(order_path, out_path);
        if (app.got_subcommand(census)) return run_census_cmd(cargs);
        if (app.got_subcommand(holes)) return run_holes_cmd(cargs);
        if (app.got_subcommand(decomp)) return run_decompose(order_path, matrix_path, to_sl, out_path);
        if (app.got_subcommand(render)) return run_render(order_path, out_path);
        if (app.got_subcommand(verify)) return run_verify(cargs, golden_dir);
    } catch (const parse_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const order_error& e) {
        std::cerr << "validation error [" << e.kind << "]: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        ordered_json err;
        err["error"] = "anomaly";
        err["detail"] = e.what();
        std::cerr << err.dump(2) << "\n";
        return 1;
    }
    return 2;
}
