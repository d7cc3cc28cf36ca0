// Command-line front end: builds the equivariant profile curves, runs the
// reduced spectral pipeline and emits JSON reports / CSV curves.

#include "eqvidx/index_reports.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>

namespace {

using namespace eqvidx;

int write_or_print(const std::string& text, const std::string& path) {
    if (path.empty()) {
        std::cout << text << "\n";
        return 0;
    }
    std::ofstream out(path);
    if (!out) {
        std::cerr << "cannot open " << path << "\n";
        return 3;
    }
    out << text << "\n";
    return 0;
}

void print_curve_summary(const ProfileCurve& c) {
    std::cout << "model: " << (c.model() == Model::Sphere4 ? "sphere4" : "ball4") << "\n"
              << "length: " << c.length() << "\n"
              << "crossings: " << c.crossings().size()
              << "  theta criticals: " << c.theta_criticals().size() << "\n"
              << "left foot: " << c.left().foot << "  right kind: "
              << (c.right().kind == EndKind::Free ? "free" : "edge") << "\n";
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"equivariant minimal hypersurfaces: profiles, spectra, index reports"};
    app.require_subcommand(1);
    app.fallthrough(); // common flags may follow the subcommand

    Config cfg;
    std::string config_path, json_path, csv_path;
    double tol = cfg.tol;
    int mesh = cfg.mesh;
    bool no_cache = false;

    app.add_option("--tol", tol, "profile integrator tolerance");
    app.add_option("--mesh", mesh, "base finite-element resolution");
    app.add_option("--json", json_path, "write the JSON report here");
    app.add_option("--csv", csv_path, "write the curve CSV here");
    app.add_flag("--no-cache", no_cache, "bypass the curve cache");
    app.add_option("--config", config_path, "flat key=value config file");

    int m = 2, ell = 1;
    auto* hsiang = app.add_subcommand("hsiang", "Hsiang hypersurfaces H_m in S^4");
    auto* hsolve = hsiang->add_subcommand("solve", "shoot for the profile curve");
    auto* hindex = hsiang->add_subcommand("index", "full spectral index report");
    hsiang->require_subcommand(1);
    hsolve->add_option("--m", m, "number of football crossings")->required();
    hindex->add_option("--m", m, "number of football crossings")->required();

    auto* fbms = app.add_subcommand("fbms", "free boundary solid tori A_ell in B^4");
    auto* fsolve = fbms->add_subcommand("solve", "Alencar profile, truncated and rescaled");
    auto* findex = fbms->add_subcommand("index", "full spectral index report");
    fbms->require_subcommand(1);
    fsolve->add_option("--ell", ell, "truncation index")->required();
    findex->add_option("--ell", ell, "truncation index")->required();

    auto* partition = app.add_subcommand("partition", "eigenvalue-count partition bounds");
    auto* demo = partition->add_subcommand("demo", "closed-form partition example");
    partition->require_subcommand(1);
    (void)demo;

    bool quick = false;
    auto* verify = app.add_subcommand("verify", "run the acceptance criteria");
    verify->add_flag("--quick", quick, "restricted smoke suite");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 4;
    }

    try {
        if (!config_path.empty()) cfg = apply_config_file(cfg, config_path);
        if (app.count("--tol")) cfg.tol = tol;
        if (app.count("--mesh")) cfg.mesh = mesh;
        if (no_cache) cfg.no_cache = true;
        if (quick) cfg.quick = true;

        if (hsolve->parsed()) {
            CurveStore store(cfg);
            const ProfileCurve& c = store.hsiang(m);
            print_curve_summary(c);
            if (!csv_path.empty()) c.write_csv(csv_path, false);
            return 0;
        }
        if (hindex->parsed()) {
            const IndexReport rep = hsiang_report(m, cfg);
            const int rc = write_or_print(rep.to_json(true), json_path);
            if (rc) return rc;
            return rep.pass ? 0 : 2;
        }
        if (fsolve->parsed()) {
            CurveStore store(cfg);
            const ProfileCurve aell = truncate_rescale(store.alencar(std::max(8, ell + 2)), ell);
            print_curve_summary(aell);
            if (!csv_path.empty()) aell.write_csv(csv_path, false);
            return 0;
        }
        if (findex->parsed()) {
            const IndexReport rep = fbms_report(ell, cfg);
            const int rc = write_or_print(rep.to_json(true), json_path);
            if (rc) return rc;
            return rep.pass ? 0 : 2;
        }
        if (partition->parsed()) return partition_demo(std::cout) ? 0 : 2;
        if (verify->parsed()) {
            const VerifySummary sum = verify_suite(cfg, std::cout);
            return sum.all_pass ? 0 : 2;
        }
    } catch (const BudgetError& e) {
        std::cerr << "numerical budget failure: " << e.what() << "\n";
        return 3;
    } catch (const SingularityError& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return 3;
    } catch (const NotFoundError& e) {
        std::cerr << "not found: " << e.what() << "\nscan trace:\n" << e.trace;
        return 3;
    } catch (const std::invalid_argument& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return 4;
    } catch (const std::domain_error& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return 4;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
    return 4;
}
