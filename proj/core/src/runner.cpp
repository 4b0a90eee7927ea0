#include "wedgefill/runner.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <set>

#include "wedgefill/baselines.hpp"
#include "wedgefill/io.hpp"
#include "wedgefill/metrics.hpp"
#include "wedgefill/phantoms.hpp"
#include "wedgefill/projector.hpp"
#include "wedgefill/solvers.hpp"

namespace wedgefill {

void ExperimentConfig::validate() const {
    if (phantom != "rings" && phantom != "shepp" && phantom != "particle")
        throw ConfigError("experiment: unknown phantom '" + phantom + "'");
    if (size < 8) throw ConfigError("experiment: size must be >= 8");
    if (n_angles < 1) throw ConfigError("experiment: angles must be >= 1");
    if (angle_step <= 0.0) throw ConfigError("experiment: angle step must be > 0");
    if (detector_count < 0) throw ConfigError("experiment: detector_count must be >= 0");
    if (detector_spacing <= 0.0) throw ConfigError("experiment: detector_spacing must be > 0");
    if (wedge_width_deg < 0.0) throw ConfigError("experiment: wedge_width must be >= 0");
    if (noise_level < 0.0) throw ConfigError("experiment: noise level must be >= 0");
    if (tv_lambda < 0.0) throw ConfigError("experiment: tv_lambda must be >= 0");
    if (tv_iters < 1 || sirt_iters < 1) throw ConfigError("experiment: baseline iteration counts must be >= 1");
    if (ring_radii.size() != ring_intensities.size())
        throw ConfigError("experiment: ring radii and intensities must pair up");
    joint.validate();
}

ExperimentConfig resolve_experiment(const Config& cfg) {
    static const std::set<std::string> known = {
        "phantom.kind",        "phantom.size",          "phantom.radii",       "phantom.intensities",
        "geometry.angles",     "geometry.start",        "geometry.step",       "geometry.detector_count",
        "geometry.detector_spacing", "geometry.wedge_start", "geometry.wedge_width",
        "noise.level",         "noise.seed",
        "joint.alpha1",        "joint.alpha2",          "joint.alpha3",        "joint.beta1",
        "joint.beta2",         "joint.beta3",           "joint.rho",           "joint.sigma",
        "joint.tau_x",         "joint.tau_y",           "joint.iters",         "joint.inner_iters",
        "joint.inner_tol",
        "init.tv_lambda",      "init.tv_iters",
        "baselines.sirt_iters",
        "output.dir",
    };
    for (const auto& [key, value] : cfg.entries()) {
        (void)value;
        if (!known.count(key)) throw ConfigError("config: unknown key '" + key + "'");
    }

    ExperimentConfig e;
    e.phantom = cfg.get_str("phantom.kind", e.phantom);
    e.size = cfg.get_int("phantom.size", e.size);
    e.ring_radii = cfg.get_list("phantom.radii");
    e.ring_intensities = cfg.get_list("phantom.intensities");
    e.n_angles = cfg.get_int("geometry.angles", e.n_angles);
    e.angle_start = cfg.get_num("geometry.start", e.angle_start);
    e.angle_step = cfg.get_num("geometry.step", e.angle_step);
    e.detector_count = cfg.get_int("geometry.detector_count", e.detector_count);
    e.detector_spacing = cfg.get_num("geometry.detector_spacing", e.detector_spacing);
    e.wedge_start_deg = cfg.get_num("geometry.wedge_start", e.wedge_start_deg);
    e.wedge_width_deg = cfg.get_num("geometry.wedge_width", e.wedge_width_deg);
    e.noise_level = cfg.get_num("noise.level", e.noise_level);
    e.seed = cfg.get_u64("noise.seed", e.seed);
    e.joint.alpha1 = cfg.get_num("joint.alpha1", e.joint.alpha1);
    e.joint.alpha2 = cfg.get_num("joint.alpha2", e.joint.alpha2);
    e.joint.alpha3 = cfg.get_num("joint.alpha3", e.joint.alpha3);
    e.joint.beta1 = cfg.get_num("joint.beta1", e.joint.beta1);
    e.joint.beta2 = cfg.get_num("joint.beta2", e.joint.beta2);
    e.joint.beta3 = cfg.get_num("joint.beta3", e.joint.beta3);
    e.joint.rho = cfg.get_num("joint.rho", e.joint.rho);
    e.joint.sigma = cfg.get_num("joint.sigma", e.joint.sigma);
    e.joint.tau_x = cfg.get_num("joint.tau_x", e.joint.tau_x);
    e.joint.tau_y = cfg.get_num("joint.tau_y", e.joint.tau_y);
    e.joint.iters = cfg.get_int("joint.iters", e.joint.iters);
    e.joint.inner_iters = cfg.get_int("joint.inner_iters", e.joint.inner_iters);
    e.joint.inner_tol = cfg.get_num("joint.inner_tol", e.joint.inner_tol);
    e.tv_lambda = cfg.get_num("init.tv_lambda", e.tv_lambda);
    e.tv_iters = cfg.get_int("init.tv_iters", e.tv_iters);
    e.sirt_iters = cfg.get_int("baselines.sirt_iters", e.sirt_iters);
    e.out_dir = cfg.get_str("output.dir", e.out_dir);
    e.validate();
    return e;
}

namespace {

Image make_phantom(const ExperimentConfig& e) {
    if (e.phantom == "shepp") return shepp_logan_modified(e.size, e.size);
    if (e.phantom == "particle") return faceted_particle(e.size, e.size);
    std::vector<double> radii = e.ring_radii, vals = e.ring_intensities;
    if (radii.empty()) {
        const double h = 0.5 * e.size;
        radii = {0.9 * h, 0.7 * h, 0.5 * h, 0.3 * h, 0.1 * h};
        vals = {1.0, 0.25, 1.0, 0.25, 1.0};
    }
    return concentric_rings(e.size, e.size, radii, vals);
}

SampleMask wedge_mask(const ExperimentConfig& e, const ProjectionGeometry& g) {
    if (e.wedge_width_deg <= 0.0) return full_mask(g);
    std::vector<int> kept;
    for (int a = 0; a < g.angle_count(); ++a) {
        const double th = g.angles_deg[a];
        if (!(th >= e.wedge_start_deg && th < e.wedge_start_deg + e.wedge_width_deg)) kept.push_back(a);
    }
    if (static_cast<int>(kept.size()) == g.angle_count()) return full_mask(g);
    if (kept.empty()) throw ConfigError("experiment: wedge removes every view");
    return make_limited_angle_mask(g, kept);
}

void render(const std::string& dir, const std::string& name, const Array2& a, std::ofstream& ranges) {
    double lo = 0.0, hi = 0.0;
    write_pgm(dir + "/" + name + ".pgm", a, &lo, &hi);
    ranges << name << ".min=" << lo << "\n" << name << ".max=" << hi << "\n";
}

void write_metrics(const std::string& path, const std::map<std::string, double>& m) {
    std::ofstream f(path);
    if (!f) throw ConfigError("cannot open metrics file: " + path);
    f.precision(17);
    for (const auto& [k, v] : m) f << k << "=" << v << "\n";
}

}  // namespace

Dataset synthesize(const ExperimentConfig& cfg) {
    cfg.validate();
    Dataset ds;
    ds.phantom = make_phantom(cfg);
    const int det = cfg.detector_count > 0 ? cfg.detector_count : default_detector_count(cfg.size, cfg.size);
    ds.geometry = uniform_geometry(cfg.n_angles, cfg.angle_start, cfg.angle_step, det, cfg.detector_spacing);
    ds.mask = wedge_mask(cfg, ds.geometry);
    ds.clean = forward_project(ds.phantom, ds.geometry);
    Sinogram noisy = cfg.noise_level > 0.0 ? add_gaussian_noise(ds.clean, cfg.noise_level, cfg.seed) : ds.clean;
    ds.data = apply_mask(ds.mask, noisy);
    return ds;
}

std::map<std::string, double> run_experiment(const ExperimentConfig& cfg) {
    std::filesystem::create_directories(cfg.out_dir);
    const std::string& d = cfg.out_dir;
    Dataset ds = synthesize(cfg);

    std::ofstream ranges(d + "/render_ranges.txt");
    write_binary(d + "/phantom.bin", ds.phantom.values);
    write_binary(d + "/sino_clean.bin", ds.clean.values);
    write_binary(d + "/sino_data.bin", ds.data.values);
    write_mask_csv(d + "/mask.csv", ds.mask);
    render(d, "phantom", ds.phantom.values, ranges);
    render(d, "sino_data", ds.data.values, ranges);

    std::map<std::string, double> metrics;
    try {
        TvReconOptions tvopt;
        tvopt.iters = cfg.tv_iters;
        Image u0 = tv_reconstruct(ds.data, ds.mask, cfg.size, cfg.size, cfg.tv_lambda, tvopt);
        Sinogram v0 = forward_project(u0, ds.geometry);
        write_binary(d + "/u0.bin", u0.values);
        write_binary(d + "/v0.bin", v0.values);
        render(d, "u0", u0.values, ranges);
        metrics["psnr_u0"] = psnr(u0.values, ds.phantom.values);
        metrics["ssim_u0"] = ssim(u0.values, ds.phantom.values);

        JointRunOptions opt;
        opt.trace_csv = d + "/trace.csv";
        opt.checkpoint_dir = d;
        opt.checkpoint_every = std::max(1, cfg.joint.iters / 4);
        JointState st = run_joint(u0, v0, ds.data, ds.mask, cfg.joint, opt);

        write_binary(d + "/u_final.bin", st.u.values);
        write_binary(d + "/v_final.bin", st.v.values);
        render(d, "u_final", st.u.values, ranges);
        render(d, "v_final", st.v.values, ranges);
        metrics["psnr_joint"] = psnr(st.u.values, ds.phantom.values);
        metrics["ssim_joint"] = ssim(st.u.values, ds.phantom.values);
        metrics["energy_initial"] = st.energy_trace.front().total();
        metrics["energy_final"] = st.energy_trace.back().total();
        metrics["iterations"] = st.iteration;
    } catch (const SolverError& e) {
        write_metrics(d + "/metrics.txt", metrics);
        std::ofstream err(d + "/error.txt");
        err << "stage=joint\nmessage=" << e.what() << "\n";
        throw;
    }
    write_metrics(d + "/metrics.txt", metrics);
    return metrics;
}

Array2 threshold_midpoint(const Array2& img) {
    // 1D two-means on intensities; output takes the two center values.
    double c1 = min_val(img), c2 = max_val(img);
    if (c1 == c2) return img;
    // Already two-level: keep the exact values so the map is idempotent.
    bool two_level = true;
    for (double x : img.v)
        if (x != c1 && x != c2) {
            two_level = false;
            break;
        }
    if (two_level) return img;
    for (int it = 0; it < 64; ++it) {
        double s1 = 0.0, s2 = 0.0;
        int n1 = 0, n2 = 0;
        const double mid = 0.5 * (c1 + c2);
        for (double x : img.v) {
            if (x <= mid) {
                s1 += x;
                ++n1;
            } else {
                s2 += x;
                ++n2;
            }
        }
        const double nc1 = n1 ? s1 / n1 : c1, nc2 = n2 ? s2 / n2 : c2;
        if (nc1 == c1 && nc2 == c2) break;
        c1 = nc1;
        c2 = nc2;
    }
    Array2 out(img.rows, img.cols);
    const double mid = 0.5 * (c1 + c2);
    for (size_t i = 0; i < img.size(); ++i) out.v[i] = img.v[i] <= mid ? c1 : c2;
    return out;
}

CompareTable compare_methods(const ExperimentConfig& cfg) {
    std::filesystem::create_directories(cfg.out_dir);
    const std::string& d = cfg.out_dir;
    Dataset ds = synthesize(cfg);
    std::ofstream ranges(d + "/render_ranges.txt");
    write_binary(d + "/phantom.bin", ds.phantom.values);

    TvReconOptions tvopt;
    tvopt.iters = cfg.tv_iters;
    Image tv_img = tv_reconstruct(ds.data, ds.mask, cfg.size, cfg.size, cfg.tv_lambda, tvopt);

    std::vector<std::pair<std::string, Image>> recons;
    recons.emplace_back("fbp", fbp(ds.data, ds.mask, cfg.size, cfg.size));
    recons.emplace_back("sirt", sirt(ds.data, ds.mask, cfg.size, cfg.size, cfg.sirt_iters));
    recons.emplace_back("tv", tv_img);
    Sinogram v0 = forward_project(tv_img, ds.geometry);
    JointState st = run_joint(tv_img, v0, ds.data, ds.mask, cfg.joint);
    recons.emplace_back("joint", st.u);

    CompareTable table;
    std::ofstream tab(d + "/compare.csv");
    tab.precision(17);
    tab << "method,psnr_db,ssim\n";
    for (const auto& [name, img] : recons) {
        MethodResult r;
        r.name = name;
        r.psnr_db = psnr(img.values, ds.phantom.values);
        r.ssim_val = ssim(img.values, ds.phantom.values);
        table.rows.push_back(r);
        tab << name << ',' << r.psnr_db << ',' << r.ssim_val << '\n';
        write_binary(d + "/recon_" + name + ".bin", img.values);
        render(d, "recon_" + name, img.values, ranges);
        const Array2 th = threshold_midpoint(img.values);
        write_binary(d + "/recon_" + name + "_thresh.bin", th);
        render(d, "recon_" + name + "_thresh", th, ranges);
    }
    return table;
}

}  // namespace wedgefill
