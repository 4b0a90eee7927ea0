#include <cmath>
#include <cstdint>
#include <filesystem>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "wedgefill/baselines.hpp"
#include "wedgefill/io.hpp"
#include "wedgefill/metrics.hpp"
#include "wedgefill/phantoms.hpp"
#include "wedgefill/projector.hpp"
#include "wedgefill/runner.hpp"
#include "wedgefill/solvers.hpp"

namespace wf = wedgefill;

namespace {

struct CommonOpts {
    std::string config;
    std::string out;
    int size = 0;
    int iters = 0;
    std::uint64_t seed = 0;
    bool seed_set = false;
    bool dry_run = false;
};

void add_common(CLI::App* cmd, CommonOpts& o) {
    cmd->add_option("--config", o.config, "experiment config file (key=value with [sections])");
    cmd->add_option("--out", o.out, "output directory");
    cmd->add_option("--size", o.size, "phantom side length override");
    cmd->add_option("--iters", o.iters, "outer iteration override");
    cmd->add_option("--seed", o.seed, "noise seed override")->each([&](const std::string&) { o.seed_set = true; });
    cmd->add_flag("--dry-run", o.dry_run, "print the resolved configuration and exit");
}

wf::ExperimentConfig resolve(const CommonOpts& o) {
    wf::Config cfg;
    if (!o.config.empty()) cfg = wf::Config::parse_file(o.config);
    wf::ExperimentConfig e = wf::resolve_experiment(cfg);
    if (!o.out.empty()) e.out_dir = o.out;
    if (o.size > 0) e.size = o.size;
    if (o.iters > 0) e.joint.iters = o.iters;
    if (o.seed_set) e.seed = o.seed;
    e.validate();
    return e;
}

void print_resolved(const wf::ExperimentConfig& e) {
    std::cout.precision(17);
    std::cout << "phantom.kind=" << e.phantom << "\nphantom.size=" << e.size
              << "\ngeometry.angles=" << e.n_angles << "\ngeometry.start=" << e.angle_start
              << "\ngeometry.step=" << e.angle_step << "\ngeometry.detector_count=" << e.detector_count
              << "\ngeometry.detector_spacing=" << e.detector_spacing
              << "\ngeometry.wedge_start=" << e.wedge_start_deg
              << "\ngeometry.wedge_width=" << e.wedge_width_deg << "\nnoise.level=" << e.noise_level
              << "\nnoise.seed=" << e.seed << "\njoint.alpha1=" << e.joint.alpha1
              << "\njoint.alpha2=" << e.joint.alpha2 << "\njoint.alpha3=" << e.joint.alpha3
              << "\njoint.beta1=" << e.joint.beta1 << "\njoint.beta2=" << e.joint.beta2
              << "\njoint.beta3=" << e.joint.beta3 << "\njoint.rho=" << e.joint.rho
              << "\njoint.sigma=" << e.joint.sigma << "\njoint.tau_x=" << e.joint.tau_x
              << "\njoint.tau_y=" << e.joint.tau_y << "\njoint.iters=" << e.joint.iters
              << "\njoint.inner_iters=" << e.joint.inner_iters << "\njoint.inner_tol=" << e.joint.inner_tol
              << "\ninit.tv_lambda=" << e.tv_lambda << "\ninit.tv_iters=" << e.tv_iters
              << "\nbaselines.sirt_iters=" << e.sirt_iters << "\noutput.dir=" << e.out_dir << "\n";
}

int cmd_phantom(const CommonOpts& o) {
    wf::ExperimentConfig e = resolve(o);
    if (o.dry_run) {
        print_resolved(e);
        return 0;
    }
    wf::Dataset ds = wf::synthesize(e);
    std::filesystem::create_directories(e.out_dir);
    wf::write_binary(e.out_dir + "/phantom.bin", ds.phantom.values);
    wf::write_csv(e.out_dir + "/phantom.csv", ds.phantom.values);
    wf::write_pgm(e.out_dir + "/phantom.pgm", ds.phantom.values);
    std::cout << "wrote phantom (" << e.size << "x" << e.size << ") to " << e.out_dir << "\n";
    return 0;
}

int cmd_project(const CommonOpts& o) {
    wf::ExperimentConfig e = resolve(o);
    if (o.dry_run) {
        print_resolved(e);
        return 0;
    }
    wf::Dataset ds = wf::synthesize(e);
    std::filesystem::create_directories(e.out_dir);
    wf::write_binary(e.out_dir + "/sino_clean.bin", ds.clean.values);
    wf::write_binary(e.out_dir + "/sino_data.bin", ds.data.values);
    wf::write_mask_csv(e.out_dir + "/mask.csv", ds.mask);
    wf::write_pgm(e.out_dir + "/sino_data.pgm", ds.data.values);
    std::cout << "wrote sinograms (" << ds.geometry.angle_count() << " views x "
              << ds.geometry.detector_count << " bins) to " << e.out_dir << "\n";
    return 0;
}

int cmd_reconstruct(const CommonOpts& o, const std::string& method) {
    wf::ExperimentConfig e = resolve(o);
    if (o.dry_run) {
        print_resolved(e);
        return 0;
    }
    wf::Dataset ds = wf::synthesize(e);
    wf::Image rec;
    if (method == "fbp") {
        rec = wf::fbp(ds.data, ds.mask, e.size, e.size);
    } else if (method == "sirt") {
        rec = wf::sirt(ds.data, ds.mask, e.size, e.size, e.sirt_iters);
    } else if (method == "tv") {
        wf::TvReconOptions opt;
        opt.iters = e.tv_iters;
        rec = wf::tv_reconstruct(ds.data, ds.mask, e.size, e.size, e.tv_lambda, opt);
    } else {
        throw wf::ConfigError("reconstruct: unknown method '" + method + "'");
    }
    std::filesystem::create_directories(e.out_dir);
    wf::write_binary(e.out_dir + "/recon_" + method + ".bin", rec.values);
    wf::write_pgm(e.out_dir + "/recon_" + method + ".pgm", rec.values);
    std::cout << method << " psnr_db=" << wf::psnr(rec.values, ds.phantom.values)
              << " ssim=" << wf::ssim(rec.values, ds.phantom.values) << "\n";
    return 0;
}

int cmd_joint(const CommonOpts& o) {
    wf::ExperimentConfig e = resolve(o);
    if (o.dry_run) {
        print_resolved(e);
        return 0;
    }
    auto metrics = wf::run_experiment(e);
    for (const auto& [k, v] : metrics) std::cout << k << "=" << v << "\n";
    return 0;
}

int cmd_compare(const CommonOpts& o) {
    wf::ExperimentConfig e = resolve(o);
    if (o.dry_run) {
        print_resolved(e);
        return 0;
    }
    wf::CompareTable t = wf::compare_methods(e);
    std::cout << "method,psnr_db,ssim\n";
    for (const auto& r : t.rows) std::cout << r.name << ',' << r.psnr_db << ',' << r.ssim_val << "\n";
    return 0;
}

int cmd_slope_check(const CommonOpts& o) {
    if (o.dry_run) return 0;
    auto neg_norm = [](const std::vector<double>& x) {
        double s = 0.0;
        for (double a : x) s += a * a;
        return -std::sqrt(s);
    };
    auto norm_sq = [](const std::vector<double>& x) {
        double s = 0.0;
        for (double a : x) s += a * a;
        return s;
    };
    auto norm1 = [](const std::vector<double>& x) {
        double s = 0.0;
        for (double a : x) s += a * a;
        return std::sqrt(s);
    };
    const std::vector<double> zero(3, 0.0);
    std::cout << "slope(-|x|, 0) = " << wf::slope(neg_norm, zero) << "\n"
              << "slope(|x|^2, 0) = " << wf::slope(norm_sq, zero) << "\n"
              << "slope(|x|, 0) = " << wf::slope(norm1, zero) << "\n";
    auto toy = [](const std::vector<double>& p) { return wf::toy_energy(p[0], p[1]); };
    std::cout << "slope(toy, (0,0)) = " << wf::slope(toy, {0.0, 0.0}) << "\n"
              << "slope(toy, (-0.5,-0.5)) = " << wf::slope(toy, {-0.5, -0.5}) << "\n";
    return 0;
}

int cmd_toy(const CommonOpts& o, double x0, double y0, double tau) {
    if (o.dry_run) return 0;
    const int iters = o.iters > 0 ? o.iters : 200;
    wf::ToyState st = wf::run_toy_2axis(x0, y0, tau, tau, iters);
    std::cout.precision(12);
    std::cout << "start=(" << x0 << "," << y0 << ") iters=" << iters << "\n"
              << "final=(" << st.x << "," << st.y << ") energy=" << wf::toy_energy(st.x, st.y) << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"limited-angle tomography: sinogram inpainting with directional regularization"};
    app.require_subcommand(1);

    CommonOpts o;
    std::string method = "tv";
    double x0 = 0.0, y0 = 0.0, tau = 1.0;

    CLI::App* phantom = app.add_subcommand("phantom", "synthesize and write the phantom");
    CLI::App* project = app.add_subcommand("project", "simulate the acquisition (sinogram + mask)");
    CLI::App* reconstruct = app.add_subcommand("reconstruct", "baseline reconstruction (fbp|sirt|tv)");
    reconstruct->add_option("--method", method, "fbp, sirt or tv");
    CLI::App* joint = app.add_subcommand("joint", "full joint reconstruction-inpainting experiment");
    CLI::App* compare = app.add_subcommand("compare", "run all four methods and tabulate metrics");
    CLI::App* slope_check = app.add_subcommand("slope-check", "calibrate the descent-slope estimator");
    CLI::App* toy = app.add_subcommand("toy", "two-axis alternating minimization test energy");
    toy->add_option("--x0", x0, "starting x");
    toy->add_option("--y0", y0, "starting y");
    toy->add_option("--tau", tau, "prox weight");

    for (CLI::App* c : {phantom, project, reconstruct, joint, compare, slope_check, toy}) add_common(c, o);

    try {
        app.parse(argc, argv);
        if (phantom->parsed()) return cmd_phantom(o);
        if (project->parsed()) return cmd_project(o);
        if (reconstruct->parsed()) return cmd_reconstruct(o, method);
        if (joint->parsed()) return cmd_joint(o);
        if (compare->parsed()) return cmd_compare(o);
        if (slope_check->parsed()) return cmd_slope_check(o);
        if (toy->parsed()) return cmd_toy(o, x0, y0, tau);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    } catch (const wf::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const wf::SolverError& e) {
        std::cerr << "solver error: " << e.what() << "\n";
        return 3;
    }
    return 0;
}
